import random

import pytest
from hypothesis import given, settings, strategies as st

from solgraph.errors import CapExceeded, NotASolution
from solgraph.formulas import Formula, cnf_formula, evaluate, to_bits
from solgraph.hardness import gen_long_path
from solgraph.oracle import (build_graph, enumerate_solutions, is_simple_path,
                             oracle_diameter, oracle_st_conn, to_dot)
from solgraph.relations import EQ, M, OR, R13
from solgraph.sampling import all_relations, pool, random_formula


def single(rel, *args):
    return Formula.build(rel.arity, [(rel, args)])


def bits(sols, n):
    return [to_bits(a, n) for a in sols]


def test_enumerate_examples():
    assert bits(enumerate_solutions(single(M, 1, 2, 3)), 3) == ["001", "010", "011", "100", "110"]
    assert bits(enumerate_solutions(Formula.build(2, [])), 2) == ["00", "01", "10", "11"]
    assert enumerate_solutions(Formula.build(1, [(OR, (1, 1))])) == [1]


def test_cap(monkeypatch):
    f = Formula.build(5, [])
    with pytest.raises(CapExceeded):
        enumerate_solutions(f, cap=4)
    monkeypatch.setenv("SOLGRAPH_ORACLE_CAP", "3")
    with pytest.raises(CapExceeded):
        build_graph(f)
    assert len(enumerate_solutions(f, strategy="search")) == 32


def test_component_counts():
    assert build_graph(single(M, 1, 2, 3)).component_count == 1
    assert build_graph(single(R13, 1, 2, 3)).component_count == 3
    assert build_graph(single(EQ, 1, 2)).component_count == 2


def test_st_conn_examples():
    g = build_graph(single(M, 1, 2, 3))
    r = oracle_st_conn(g, "100", "001")
    assert r.connected and len(r.path) - 1 == 4
    g = build_graph(single(R13, 1, 2, 3))
    assert not oracle_st_conn(g, "100", "010").connected
    assert oracle_st_conn(g, "100", "100").path == [0b100]
    with pytest.raises(NotASolution):
        oracle_st_conn(g, "000", "100")


def test_diameter_examples():
    assert oracle_diameter(build_graph(single(M, 1, 2, 3))) == 4
    for n in range(1, 6):
        assert oracle_diameter(build_graph(Formula.build(n, []))) == n
    assert oracle_diameter(build_graph(gen_long_path(2))) == 2


def test_simple_path_examples():
    assert is_simple_path(build_graph(gen_long_path(2)))
    assert not is_simple_path(build_graph(Formula.build(2, [])))
    assert is_simple_path(build_graph(single(M, 1, 2, 3)))


def test_dot_export():
    text = to_dot(build_graph(single(M, 1, 2, 3)))
    assert text.count("--") == 4 and text.startswith("graph G {")


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 100_000))
def test_enumeration_is_exact(seed):
    rng = random.Random(seed)
    rels = pool("maj3") + pool("or_free") + pool("xor3")
    f = random_formula(rng, rng.randint(1, 10), rels, rng.randint(0, 10), const_prob=0.15)
    sols = enumerate_solutions(f)
    assert sols == [a for a in range(1 << f.n) if evaluate(f, a)]
    assert enumerate_solutions(f, strategy="search") == sols


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000))
def test_diameter_matches_all_pairs(seed):
    rng = random.Random(seed)
    rels = all_relations(3)
    f = random_formula(rng, rng.randint(2, 10), rels, rng.randint(1, 6))
    g = build_graph(f)
    if len(g):
        assert oracle_diameter(g) == oracle_diameter(g, exact_all_pairs=True)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000))
def test_components_match_networkx(seed):
    import networkx as nx

    rng = random.Random(seed)
    rels = all_relations(3)
    f = random_formula(rng, rng.randint(2, 9), rels, rng.randint(1, 5))
    g = build_graph(f)
    h = nx.Graph()
    h.add_nodes_from(g.solutions)
    for a in g.solutions:
        for b in range(f.n):
            if a ^ (1 << b) in g.index:
                h.add_edge(a, a ^ (1 << b))
    assert g.component_count == nx.number_connected_components(h)
    for comp in nx.connected_components(h):
        assert len({g.component_of(a) for a in comp}) == 1


def test_long_path_cnf_is_a_path_for_small_n():
    for n in (2, 4, 6, 8):
        g = build_graph(gen_long_path(n))
        assert is_simple_path(g) and len(g) == 2 ** (n // 2 + 1) - 1


def test_clause_only_formula():
    f = cnf_formula(3, [(1, 2), (-2, 3)])
    assert len(build_graph(f)) == sum(evaluate(f, a) for a in range(8))
