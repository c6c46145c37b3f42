import pytest
from hypothesis import given, settings, strategies as st

from solgraph.errors import ArityCapExceeded, EmptyResult, ParseError
from solgraph.relations import (EQ, M, NAE, NAND, OR, R13, Relation, classify_set,
                                clause_relation, closed_under, closure_violation,
                                components, componentwise_flags, or_nand_free,
                                parse_relations, project, relation_flags,
                                schaefer_flags, serialize_relations, substitute)
from solgraph.sampling import all_relations

D0 = clause_relation(3, 0)


def rel(*tuples):
    return Relation.from_tuples("R", len(tuples[0]), tuples)


def test_encoding_puts_first_coordinate_high():
    r = rel("100")
    assert r.members == (4,)
    assert "100" in r and "001" not in r
    assert r.tuples() == ["100"]


def test_arity_cap():
    with pytest.raises(ArityCapExceeded):
        Relation.full(17)


def test_majority_violation_on_one_in_three():
    assert not closed_under(R13, "maj3")
    a, b, c, img = closure_violation(R13, "maj3")
    assert {a, b, c} == {0b100, 0b010, 0b001} and img == 0


def test_full_cube_closed_under_everything():
    full = Relation.full(2)
    for op in ("maj3", "and2", "or2", "xor3", "ihsb_minus3", "ihsb_plus3"):
        assert closed_under(full, op)


def test_nae_not_affine():
    assert not closed_under(NAE, "xor3")


def test_or_flags():
    f = schaefer_flags(OR)
    assert f.bijunctive and f.dual_horn and not f.horn


def test_equality_has_every_flag():
    f = schaefer_flags(EQ)
    assert all(vars(f).values())


def test_m_is_not_bijunctive():
    # maj(100, 010, 001) = 000 falls outside M
    f = schaefer_flags(M)
    assert not f.bijunctive and not f.horn
    assert closure_violation(M, "maj3")[-1] == 0


def test_substitute_examples():
    assert substitute(NAE, {3: 0}).same_tuples(OR)
    assert substitute(NAE, {3: 1}).same_tuples(NAND)
    assert substitute(R13, {1: 1}).tuples() == ["00"]
    with pytest.raises(EmptyResult):
        substitute(OR, {1: 0, 2: 0})


def test_substitute_identifies_labels():
    r = substitute(NAE, {1: "a", 2: "a"})
    assert r.tuples() == ["01", "10"]


def test_or_nand_free_examples():
    fr = or_nand_free(D0)
    assert not fr.or_free and fr.nand_free
    assert fr.or_witness.positions == (1, 2) and dict(fr.or_witness.constants) == {3: 0}
    fr = or_nand_free(R13)
    assert fr.or_free and fr.nand_free
    fr = or_nand_free(EQ)
    assert fr.or_free and fr.nand_free
    assert not or_nand_free(NAE).or_free and not or_nand_free(NAE).nand_free


def test_components():
    assert len(components(R13)) == 3
    assert len(components(M)) == 1
    assert len(components(Relation.full(3))) == 1
    assert [c.tuples() for c in components(EQ)] == [["00"], ["11"]]


def test_componentwise_flags():
    assert componentwise_flags(R13).bijunctive
    assert not componentwise_flags(NAE).bijunctive
    assert not componentwise_flags(M).bijunctive


def test_project():
    assert project(M, {1, 3}).tuples() == ["00", "01", "10"]
    assert project(M, {1, 2, 3}).same_tuples(M)
    assert project(EQ, {1}).tuples() == ["0", "1"]


def test_classification_examples():
    r = classify_set([R13])
    assert r.verdict == "tight_non_schaefer"
    assert r.tight_branches == ("componentwise_bijunctive", "or_free", "nand_free")
    assert r.complexity.conn == "coNP-complete" and r.complexity.stconn == "P"
    r = classify_set([NAE])
    assert r.verdict == "non_tight"
    assert r.summary() == ("non-tight; Sat NP-complete; st-Conn PSPACE-complete; "
                           "Conn PSPACE-complete; diameter 2^Ω(√n)")
    r = classify_set([OR])
    assert r.verdict == "schaefer" and set(r.schaefer_branches) == {"bijunctive", "dual_horn"}
    assert r.conn_method == "bijunctive"


def test_classification_of_m_is_non_tight():
    assert classify_set([M]).verdict == "non_tight"


def test_clause_relations():
    assert D0.tuples() == [format(i, "03b") for i in range(1, 8)]
    d3 = clause_relation(3, 3)
    assert "111" not in d3 and len(d3) == 7
    assert clause_relation(4, 1).name == "D1_4"


@pytest.mark.parametrize("arity", [1, 2, 3])
def test_containments_hold_exhaustively(arity):
    for r in all_relations(arity):
        f = relation_flags(r)
        if f.bijunctive:
            assert f.componentwise_bijunctive, r
        if f.horn:
            assert f.or_free, r
        if f.dual_horn:
            assert f.nand_free, r
        if f.affine:
            assert f.componentwise_bijunctive and f.or_free and f.nand_free, r


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 255))
def test_components_partition_and_are_connected(mask):
    r = Relation("R", 3, mask)
    parts = components(r)
    assert sorted(t for c in parts for t in c.members) == list(r.members)
    for c in parts:
        assert len(components(c)) == 1


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 255), st.integers(0, 7))
def test_negation_preserves_closure_type(mask, pattern):
    # flipping coordinates preserves bijunctivity and affineness
    r = Relation("R", 3, mask)
    n = r.negated(pattern)
    assert closed_under(r, "maj3") == closed_under(n, "maj3")
    assert closed_under(r, "xor3") == closed_under(n, "xor3")
    assert len(components(r)) == len(components(n))


def test_rels_round_trip():
    text = serialize_relations([NAE, OR])
    back = parse_relations(text)
    assert back["NAE"].same_tuples(NAE) and back["OR"].same_tuples(OR)


@pytest.mark.parametrize("text", [
    "relation R 2 : 01 1",
    "relation R 2 :",
    "relation R 2 : 01\nrelation R 2 : 10",
    "rel R 2 : 01",
])
def test_rels_parse_errors(text):
    with pytest.raises(ParseError):
        parse_relations(text)
