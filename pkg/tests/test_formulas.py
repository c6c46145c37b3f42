import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from solgraph.errors import ArityMismatch, EmptyResult, NotAffine, ParseError, UnknownRelation
from solgraph.formulas import (Builder, Formula, NotExpressible, affine_system,
                               clausal_form, clause_relation, cnf_clause,
                               cnf_formula, cnf_solutions, complement,
                               complement_formula, evaluate, evaluate_many,
                               horn_sat, parse_formula, serialize_formula,
                               two_sat, unit_propagate)
from solgraph.relations import EQ, M, NAE, NAND, OR, R13, Relation, clause_relation as d
from solgraph.sampling import all_relations, pool, random_formula


def single(rel, *args):
    return Formula.build(max(a for a in args if isinstance(a, int)), [(rel, args)])


def test_parse_simple():
    f = parse_formula("vars 3\nrelation NAE 3 : 001 010 011 100 101 110\nclause NAE x1 x2 x3")
    assert f.n == 3 and len(f.clauses) == 1


def test_parse_errors():
    head = "vars 3\nrelation NAE 3 : 001 010 011 100 101 110\n"
    with pytest.raises(ArityMismatch):
        parse_formula(head + "clause NAE x1 x2")
    with pytest.raises(UnknownRelation):
        parse_formula(head + "clause OR x1 x2")
    with pytest.raises(ParseError, match="line 3"):
        parse_formula(head + "clause NAE x1 x2 x9")
    with pytest.raises(ParseError):
        parse_formula("clause NAE x1 x2 x3")


def test_parse_use(tmp_path):
    (tmp_path / "r.rels").write_text("relation R13 3 : 100 010 001\n")
    f = parse_formula("vars 3\nuse r.rels\nclause R13 x1 x2 x3 # one of three\n", base_dir=str(tmp_path))
    assert f.relations[0].same_tuples(R13)


def test_round_trip_step4_gadget():
    from solgraph.expressibility import d0_gadget
    f = d0_gadget().formula
    text = serialize_formula(f, ["gadget"])
    assert serialize_formula(parse_formula(text), ["gadget"]) == text


def test_evaluate_examples():
    f = single(M, 1, 2, 3)
    assert evaluate(f, "100") and not evaluate(f, "000")
    assert evaluate(Formula.build(3, []), "101")


def test_effective_relations():
    assert clause_relation(Formula.build(2, [(NAE, (1, 1, 2))]), 0).tuples() == ["01", "10"]
    assert clause_relation(Formula.build(1, [(OR, (1, "1"))]), 0).tuples() == ["0", "1"]
    assert clause_relation(Formula.build(1, [(OR, (1, "0"))]), 0).tuples() == ["1"]


def test_clausal_form_examples():
    assert clausal_form(M, "two_cnf") is NotExpressible
    assert clausal_form(d(3, 0), "two_cnf") is NotExpressible
    assert clausal_form(NAND, "horn") == [(-1, -2)]
    assert clausal_form(OR, "two_cnf") == [(1, 2)]
    assert clausal_form(EQ, "two_cnf") == [(1, -2), (-1, 2)]


@pytest.mark.parametrize("shape,op", [("two_cnf", "maj3"), ("horn", "and2"),
                                      ("ihsb_minus", "ihsb_minus3"), ("ihsb_plus", "ihsb_plus3")])
def test_clausal_form_matches_closure(shape, op):
    from solgraph.relations import closed_under
    for k in (1, 2, 3):
        for r in all_relations(k):
            form = clausal_form(r, shape)
            assert (form is not NotExpressible) == closed_under(r, op), r
            if form is not NotExpressible:
                assert np.array_equal(cnf_solutions(form, k), r.table)


def test_affine_examples():
    s = affine_system(single(EQ, 1, 2))
    assert s.rank == 1 and s.support == {1, 2}
    s = affine_system(single(Relation.full(2), 1, 2))
    assert s.rank == 0 and s.support == frozenset()
    with pytest.raises(NotAffine):
        affine_system(single(R13, 1, 2, 3))


def test_affine_solutions_match_enumeration():
    rng = random.Random(3)
    rels = pool("xor3")
    for _ in range(100):
        f = random_formula(rng, rng.randint(1, 8), rels, rng.randint(1, 6))
        want = [a for a in range(1 << f.n) if evaluate(f, a)]
        try:
            s = affine_system(f)
        except EmptyResult:
            assert want == []
            continue
        assert (s.solutions() if s.consistent else []) == want


def test_horn_sat_examples():
    assert horn_sat([(1,), (-1, 2)], 2) == 0b11
    assert horn_sat([(1,), (-1,)], 1) is None
    assert horn_sat([(-1, -2)], 2, {1: 1, 2: 1}) is None


def test_horn_sat_minimal_model():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 7)
        clauses = []
        for _ in range(rng.randint(1, 8)):
            vs = rng.sample(range(1, n + 1), rng.randint(1, min(3, n)))
            head = rng.choice(vs + [None])
            clauses.append(tuple(v if v == head else -v for v in vs))
        ok = cnf_solutions(clauses, n)
        sols = np.nonzero(ok)[0]
        got = horn_sat(clauses, n)
        if not len(sols):
            assert got is None
            continue
        assert ok[got]
        assert all((got & int(s)) == got for s in sols)


def test_two_sat_agrees_with_brute_force():
    rng = random.Random(9)
    for _ in range(200):
        n = rng.randint(1, 7)
        clauses = [tuple(rng.choice((1, -1)) * v for v in rng.sample(range(1, n + 1), min(n, rng.randint(1, 2))))
                   for _ in range(rng.randint(1, 10))]
        ok = cnf_solutions(clauses, n)
        got = two_sat(clauses, n)
        assert (got is None) == (not ok.any())
        if got is not None:
            assert ok[got]


def test_unit_propagate():
    assert unit_propagate([(1,), (-1, 2), (-2, -3)]) == {1: 1, 2: 1, 3: 0}
    assert unit_propagate([(1,), (-1,)]) is None


def test_complement_formula():
    f = single(M, 1, 2, 3)
    g = complement_formula(f)
    for a in range(8):
        assert evaluate(f, a) == evaluate(g, complement(a, 3))


def test_cnf_helpers():
    rel, args = cnf_clause([3, -1, 2])
    assert rel.name == "D1" and args == (1, 3, 2)
    f = cnf_formula(2, [(-1, 2)])
    assert [a for a in range(4) if evaluate(f, a)] == [0b00, 0b01, 0b11]


def test_builder():
    b = Builder()
    x, y = b.var("x"), b.var("y")
    assert b.var("x") == x
    b.clause([x, y])
    assert b.formula().n == 2


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000))
def test_vectorised_evaluate_matches_scalar(seed):
    rng = random.Random(seed)
    f = random_formula(rng, rng.randint(1, 8), pool("maj3") + pool("or_free"), rng.randint(0, 8), const_prob=0.2)
    arr = np.arange(1 << f.n, dtype=np.int64)
    assert evaluate_many(f, arr).tolist() == [evaluate(f, int(a)) for a in arr]
