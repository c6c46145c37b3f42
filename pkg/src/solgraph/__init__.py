"""Connectivity of Boolean satisfiability."""
