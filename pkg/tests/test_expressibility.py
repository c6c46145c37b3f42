import random

import pytest

from solgraph.errors import AlreadyBijunctive, MissingGadget, NotNonTight
from solgraph.expressibility import (FaithfulExpression, base_two_clauses, compose,
                                     d0_gadget, express_s3, expanding_pairs,
                                     identity_expression, kcnf_reduce, lift,
                                     m_relation, nae_clause_gadgets,
                                     parse_expression, serialize_expression,
                                     split_clause, step1_expand, step2_isolate,
                                     verify_faithful, witness_names,
                                     witness_table)
from solgraph.formulas import Formula, cnf_formula, evaluate, hamming
from solgraph.oracle import build_graph, is_simple_path, oracle_st_conn
from solgraph.relations import (IMP, M, NAE, NAND, OR, R13, clause_relation,
                                componentwise_flags, substitute)
from solgraph.sampling import all_relations


@pytest.fixture(scope="module")
def nae_pipeline():
    return express_s3([NAE])


def test_figure_gadgets():
    good, bad = nae_clause_gadgets()
    assert verify_faithful(good).ok
    r = verify_faithful(bad)
    assert not r.ok and r.condition in (2, 3)


def test_identity_is_faithful():
    for rel in (NAE, R13, M):
        assert verify_faithful(identity_expression(rel)).ok


def test_condition_one_detected():
    # claims OR but the formula is NAND
    e = FaithfulExpression(OR, Formula.build(2, [(NAND, (1, 2))]), (1, 2), ())
    r = verify_faithful(e)
    assert not r.ok and r.condition == 1


def test_base_two_clauses_from_nae():
    two = base_two_clauses([NAE])
    assert set(two) == {"OR", "NAND", "IMP"}
    assert two["OR"].formula.items()[0][1] == (1, 2, "0")
    assert substitute(NAE, {3: 0}).same_tuples(OR)
    assert two["NAND"].formula.items()[0][1] == (1, 2, "1")
    assert two["IMP"].target.same_tuples(IMP)
    for e in two.values():
        assert verify_faithful(e).ok
    with pytest.raises(NotNonTight):
        base_two_clauses([R13])


def test_step1_on_nae():
    s = step1_expand(NAE)
    assert s.Q.n == 3
    d = oracle_st_conn(build_graph(s.Q), s.a, s.b)
    assert d.connected and len(d.path) - 1 > hamming(s.a, s.b)


def test_step1_with_an_explicit_triple():
    s = step1_expand(NAE, triple=("100", "001", "010"))
    assert (s.a, s.b) == (0b100, 0b001)
    rels = [(rel.name, args) for rel, args in s.Q.items()]
    assert rels[0] == ("NAE", (1, 2, 3))
    # the added 2-clause is (not x1 or not x3)
    q = {a for a in range(8) if evaluate(s.Q, a)}
    assert q == {a for a in NAE.members if not (a & 0b100 and a & 0b001)}


def test_step1_rejects_componentwise_bijunctive():
    with pytest.raises(AlreadyBijunctive):
        step1_expand(R13)
    # M is a single component that is not closed under majority, so it expands
    s = step1_expand(M)
    assert s.Q.n == 3


def test_step2_on_nae():
    s1 = step1_expand(NAE)
    s2 = step2_isolate(s1.Q, s1.a, s1.b)
    assert s2.r == 2
    g = build_graph(s2.T)
    assert is_simple_path(g) and len(g) == s2.r + 3
    path = oracle_st_conn(g, s2.a, s2.b).path
    assert hamming(s2.a, s2.b) == s2.r and len(path) - 1 == s2.r + 2


def test_step3_outputs(nae_pipeline):
    s3 = nae_pipeline.step3
    assert sorted(s3.gadgets) == list(range(8))
    for p, e in s3.gadgets.items():
        assert e.target.same_tuples(m_relation(p))
        assert verify_faithful(e).ok
    assert verify_faithful(s3.P).ok
    assert m_relation(0).same_tuples(M)


def test_d0_witness_table():
    table = witness_table(d0_gadget())
    fmt = {format(x, "03b"): [format(y, "05b") for y in ws] for x, ws in table.items()}
    assert fmt["100"] == ["10000"]
    assert fmt["010"] == ["01001"]
    assert fmt["001"] == ["00011", "00100", "00110", "00111"]
    assert "000" not in fmt


def test_all_gadgets_verify(nae_pipeline):
    names = set(nae_pipeline.gadgets)
    assert {"OR", "NAND", "IMP", "D0", "D1", "D2", "D3"} <= names
    assert {"M", "M001", "M010", "M011", "M100", "M101", "M110", "M111"} <= names
    for name, e in nae_pipeline.gadgets.items():
        assert verify_faithful(e).ok, name


def test_flattened_gadgets_use_only_the_input(nae_pipeline):
    for name, e in nae_pipeline.three_clauses.items():
        flat = nae_pipeline.flatten(e)
        assert {r.name for r in flat.formula.relations} == {"NAE"}
        assert verify_faithful(flat).ok, name


def test_compose_single_clause_is_the_gadget():
    e = d0_gadget()
    psi = Formula.build(3, [(clause_relation(3, 0), (1, 2, 3))])
    f = compose(psi, {"D0": e}, keep=[])
    assert f.n == e.formula.n
    assert [(r.name, a) for r, a in f.items()] == [(r.name, a) for r, a in e.formula.items()]
    assert witness_names(psi, {"D0": e})[3:] == [f"y1_{k}" for k in range(1, 6)]


def test_compose_missing_gadget():
    psi = Formula.build(3, [(NAE, (1, 2, 3))])
    with pytest.raises(MissingGadget):
        compose(psi, {})


def test_composition_preserves_components(nae_pipeline):
    rng = random.Random(11)
    gadgets = nae_pipeline.three_clauses
    keep = []
    done = 0
    while done < 12:
        n = rng.randint(3, 6)
        m = rng.randint(1, 2)
        items = [(clause_relation(3, rng.randint(0, 3)), rng.sample(range(1, n + 1), 3)) for _ in range(m)]
        psi = Formula.build(n, items)
        f = compose(psi, gadgets, keep)
        if f.n > 20:
            continue
        done += 1
        g0, g1 = build_graph(psi), build_graph(f)
        assert g0.component_count == g1.component_count
        proj = sorted({a >> (f.n - n) for a in g1.solutions})
        assert proj == g0.solutions


def test_distance_is_not_contracted():
    e = d0_gadget()
    g_x = build_graph(Formula.build(3, [(clause_relation(3, 0), (1, 2, 3))]))
    g = build_graph(e.formula)
    for s in g.solutions[:10]:
        for t in g.solutions[-10:]:
            d = oracle_st_conn(g, s, t)
            dx = oracle_st_conn(g_x, s >> 5, t >> 5)
            assert len(dx.path) <= len(d.path)


def test_expanding_pairs():
    assert expanding_pairs(R13) == []
    pairs = expanding_pairs(M)
    assert pairs == [(0b001, 0b100, 4)]


def test_non_tight_sample_pipeline():
    rng = random.Random(2)
    from solgraph.relations import classify_set
    candidates = [r for r in all_relations(3) if classify_set([r]).verdict == "non_tight"]
    for rel in rng.sample(candidates, 6):
        p = express_s3([rel])
        for name, e in p.gadgets.items():
            assert verify_faithful(e).ok, (rel, name)


def test_split_clause_and_kcnf_reduce():
    counter = iter(range(5, 100))
    parts = split_clause([1, 2, 3, 4], lambda: next(counter))
    assert parts == [[1, 2, 5], [-5, 3, 4]]
    f = cnf_formula(5, [(1, 2, 3, 4, -5), (1, -2)])
    g = kcnf_reduce(f)
    assert max(r.arity for r in g.relations) == 3
    assert kcnf_reduce(cnf_formula(3, [(1, 2, 3)])).n == 3
    assert build_graph(f).component_count == build_graph(g).component_count


def test_expression_round_trip():
    e = d0_gadget()
    back = parse_expression(serialize_expression(e))
    assert back.x_vars == e.x_vars and back.y_vars == e.y_vars
    assert back.target.same_tuples(e.target)
    assert verify_faithful(back).ok


def test_lift_keeps_projection():
    e = d0_gadget()
    two = base_two_clauses([NAE])
    lifted = lift(e, two, keep=["M", "M010"])
    assert verify_faithful(lifted).ok
    assert not componentwise_flags(NAE).bijunctive
