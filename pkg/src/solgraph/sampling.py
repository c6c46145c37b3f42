"""Seeded random instances for property tests and the acceptance harness."""

from __future__ import annotations

import random
from functools import lru_cache

from .formulas import Formula
from .relations import (Relation, closed_under, componentwise_flags,
                        or_nand_free)


def all_relations(arity: int) -> list[Relation]:
    return [Relation(f"R{arity}_{m}", arity, m) for m in range(1, 1 << (1 << arity))]


def _has(rel: Relation, prop: str) -> bool:
    if prop in ("maj3", "and2", "or2", "xor3", "ihsb_minus3", "ihsb_plus3"):
        return closed_under(rel, prop)
    if prop == "componentwise_bijunctive":
        return componentwise_flags(rel).bijunctive
    if prop == "or_free":
        return or_nand_free(rel).or_free
    if prop == "nand_free":
        return or_nand_free(rel).nand_free
    if prop == "cw_ihsb_minus":
        return closed_under(rel, "and2") and componentwise_flags(rel).ihsb_minus
    if prop == "cw_ihsb_plus":
        return closed_under(rel, "or2") and componentwise_flags(rel).ihsb_plus
    raise ValueError(prop)


@lru_cache(maxsize=None)
def pool(prop: str, max_arity: int = 3, nontrivial: bool = True) -> tuple[Relation, ...]:
    """Relations of arity 2..max_arity with property ``prop``.

    ``nontrivial`` drops full cubes, which constrain nothing.
    """
    out = []
    for k in range(2, max_arity + 1):
        full = (1 << (1 << k)) - 1
        for r in all_relations(k):
            if nontrivial and r.mask == full:
                continue
            if _has(r, prop):
                out.append(r)
    return tuple(out)


def random_formula(rng: random.Random, n: int, rels, m: int, const_prob: float = 0.1,
                   distinct: bool = False) -> Formula:
    items = []
    for _ in range(m):
        rel = rng.choice(rels)
        k = rel.arity
        if distinct and k <= n:
            vs = rng.sample(range(1, n + 1), k)
        else:
            vs = [rng.randint(1, n) for _ in range(k)]
        args = [rng.choice("01") if rng.random() < const_prob else v for v in vs]
        if all(isinstance(a, str) for a in args):
            args[0] = vs[0]
        items.append((rel, args))
    return Formula.build(n, items)
