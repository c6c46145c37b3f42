"""Faithful expressions and the gadget pipeline from a non-tight set to 3-clauses.

A faithful expression of a relation R is a formula phi(x, y) with
R = {a : exists y phi(a, y)} such that every witness space G(phi(a, y)) is
connected and neighbouring members of R share a witness.  Gadgets are built
level by level: 2-clauses over the input set, one path relation of length 4
over the input set plus 2-clauses, the remaining path relations over that
one, and finally the 3-clauses over the path relations.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (AlreadyBijunctive, MissingGadget, NoExpansion, NotAPath,
                     NotClausal, NotNonTight)
from .formulas import (Clause, Formula, cnf_clause, effective_clause, hamming,
                       is_const, serialize_formula, parse_formula, to_bits,
                       var_bit)
from .oracle import (enumerate_solutions, graph_from_solutions,
                     is_simple_path, oracle_st_conn)
from .relations import (IMP, M, NAE, NAND, OR, Relation, classify_set,
                        clause_relation, components, componentwise_flags,
                        coordinate, int_to_bits, or_nand_free, project)

TWO_CLAUSES = (OR, NAND, IMP)


@dataclass(frozen=True)
class FaithfulExpression:
    target: Relation
    formula: Formula
    x_vars: tuple[int, ...]
    y_vars: tuple[int, ...]

    def __post_init__(self):
        if len(self.x_vars) != self.target.arity:
            raise ValueError("x_vars must match the target arity")
        if sorted(self.x_vars + self.y_vars) != list(range(1, self.formula.n + 1)):
            raise ValueError("x_vars and y_vars must partition the formula variables")

    @property
    def base(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.formula.relations)


def identity_expression(rel: Relation) -> FaithfulExpression:
    """R expressed by a single clause R(x1..xk): no witnesses, always faithful."""
    k = rel.arity
    return FaithfulExpression(rel, Formula.build(k, [(rel, range(1, k + 1))]), tuple(range(1, k + 1)), ())


@dataclass(frozen=True)
class FaithfulReport:
    ok: bool
    condition: int | None = None  # 1, 2 or 3 when violated
    offending: tuple = ()
    detail: str = ""

    def __bool__(self):
        return self.ok


def _extract(sols: np.ndarray, vars_: Sequence[int], n: int) -> np.ndarray:
    out = np.zeros(sols.shape, dtype=np.int64)
    for v in vars_:
        out = (out << 1) | ((sols >> (n - v)) & 1)
    return out


def witness_table(e: FaithfulExpression, cap: int | None = None) -> dict[int, list[int]]:
    """Member of the projection -> sorted witnesses (over y_vars in order)."""
    f = e.formula
    sols = np.asarray(enumerate_solutions(f, cap), dtype=np.int64)
    xs = _extract(sols, e.x_vars, f.n)
    ys = _extract(sols, e.y_vars, f.n)
    table: dict[int, list[int]] = {}
    for x, y in zip(xs.tolist(), ys.tolist()):
        table.setdefault(x, []).append(y)
    return {x: sorted(ws) for x, ws in sorted(table.items())}


def verify_faithful(e: FaithfulExpression, cap: int | None = None) -> FaithfulReport:
    k, m = e.target.arity, len(e.y_vars)
    table = witness_table(e, cap)
    got = set(table)
    want = set(e.target.members)
    if got != want:
        bad = min(got ^ want)
        side = "missing from" if bad in want else "extra in"
        return FaithfulReport(False, 1, (bad,), f"{int_to_bits(bad, k)} {side} the projection")
    for a in e.target.members:
        if m and graph_from_solutions(m, table[a]).component_count != 1:
            return FaithfulReport(False, 2, (a,), f"witnesses of {int_to_bits(a, k)} are disconnected")
    for a in e.target.members:
        for p in range(k):
            b = a ^ (1 << p)
            if b > a and b in want and not set(table[a]) & set(table[b]):
                return FaithfulReport(
                    False, 3, (a, b),
                    f"{int_to_bits(a, k)} and {int_to_bits(b, k)} share no witness")
    return FaithfulReport(True)


# Composition


def compose(psi: Formula, gadgets: Mapping[str, FaithfulExpression], keep: Iterable[str] = ()) -> Formula:
    """Replace every clause by its gadget, with a fresh witness block per clause.

    Relations named in ``keep`` pass through unchanged.  Witnesses of clause
    ``c`` get the ids following those of earlier clauses, in gadget order.
    """
    return _compose(psi, gadgets, keep)[0]


def _compose(psi, gadgets, keep=()):
    keep = set(keep)
    items = []
    n = psi.n
    blocks = []
    for ci, c in enumerate(psi.clauses):
        rel = psi.relations[c.rel]
        if rel.name in keep:
            items.append((rel, c.args))
            blocks.append(())
            continue
        e = gadgets.get(rel.name)
        if e is None:
            raise MissingGadget(rel.name)
        if e.target.arity != rel.arity or e.target.mask != rel.mask:
            raise ValueError(f"gadget for {rel.name} expresses a different relation")
        ren: dict[int, object] = {}
        for x, a in zip(e.x_vars, c.args):
            ren[x] = a
        block = []
        for y in e.y_vars:
            n += 1
            ren[y] = n
            block.append(n)
        blocks.append(tuple(block))
        for grel, gargs in e.formula.items():
            items.append((grel, tuple(a if is_const(a) else ren[a] for a in gargs)))
    return Formula.build(n, items), blocks


def lift(e: FaithfulExpression, gadgets: Mapping[str, FaithfulExpression], keep: Iterable[str] = ()) -> FaithfulExpression:
    """Push an expression down one level by composing its clauses with gadgets."""
    f, blocks = _compose(e.formula, gadgets, keep)
    extra = tuple(v for b in blocks for v in b)
    return FaithfulExpression(e.target, f, e.x_vars, e.y_vars + extra)


def witness_names(psi: Formula, gadgets: Mapping[str, FaithfulExpression], keep: Iterable[str] = ()) -> list[str]:
    """Names x<i> / y<clause>_<k> for the variables of compose(psi, gadgets)."""
    _, blocks = _compose(psi, gadgets, keep)
    names = [f"x{i}" for i in range(1, psi.n + 1)]
    for ci, b in enumerate(blocks, 1):
        names.extend(f"y{ci}_{k}" for k in range(1, len(b) + 1))
    return names


# 2-clauses


def two_clause(l1: int, l2: int) -> tuple[Relation, tuple]:
    """The 2-clause (l1 or l2) as OR / NAND / IMP applied to variables."""
    if l1 > 0 and l2 > 0:
        return OR, (l1, l2)
    if l1 < 0 and l2 < 0:
        return NAND, (-l1, -l2)
    if l1 > 0:
        return IMP, (l1, -l2)
    return IMP, (l2, -l1)


def pair_clause(i: int, ai: int, j: int, aj: int) -> tuple[Relation, tuple]:
    """Clause restricting (x_i, x_j) to {ai aj, ~ai aj, ~ai ~aj}.

    The excluded value is (ai, ~aj).
    """
    li = -i if ai else i
    lj = j if aj else -j
    return two_clause(li, lj)


def _substitution_expression(rel: Relation, witness, target: Relation) -> FaithfulExpression:
    i, j = witness.positions
    args = []
    for p in range(1, rel.arity + 1):
        if p == i:
            args.append(1)
        elif p == j:
            args.append(2)
        else:
            args.append(str(witness.constants[p]))
    return FaithfulExpression(target, Formula.build(2, [(rel, args)]), (1, 2), ())


def base_two_clauses(rels: Sequence[Relation]) -> dict[str, FaithfulExpression]:
    """OR and NAND by fixing constants, IMP = exists y OR(x1, y) and NAND(y, x2)."""
    rels = list(rels)
    if classify_set(rels).verdict != "non_tight":
        raise NotNonTight("the relation set is tight")
    or_src = next((r, w) for r in rels if (w := or_nand_free(r).or_witness) is not None)
    nand_src = next((r, w) for r in rels if (w := or_nand_free(r).nand_witness) is not None)
    e_or = _substitution_expression(*or_src, OR)
    e_nand = _substitution_expression(*nand_src, NAND)
    # IMP(x1, x2) = (x1 or not x2), witness y = variable 3
    imp = Formula.build(3, [(OR, (1, 3)), (NAND, (3, 2))])
    e_imp = lift(FaithfulExpression(IMP, imp, (1, 2), (3,)), {"OR": e_or, "NAND": e_nand})
    return {"OR": e_or, "NAND": e_nand, "IMP": e_imp}


# Step 1: a relation in which some distance expands


def _distances(rel: Relation) -> tuple[dict[int, int], np.ndarray]:
    from scipy.sparse import csgraph

    g = graph_from_solutions(rel.arity, list(rel.members))
    d = csgraph.shortest_path(g.adjacency, directed=False, unweighted=True)
    return g.index, d


def expanding_pairs(rel_or_members, arity: int | None = None) -> list[tuple[int, int, int]]:
    """All (a, b, d) with a < b connected and d(a, b) > |a - b|, sorted by (d, a, b)."""
    if isinstance(rel_or_members, Relation):
        members, k = list(rel_or_members.members), rel_or_members.arity
    else:
        members, k = sorted(rel_or_members), arity
    g = graph_from_solutions(k, members)
    from scipy.sparse import csgraph

    d = csgraph.shortest_path(g.adjacency, directed=False, unweighted=True)
    out = []
    for i, a in enumerate(g.solutions):
        for j in range(i + 1, len(g.solutions)):
            b = g.solutions[j]
            if np.isfinite(d[i, j]) and d[i, j] > hamming(a, b):
                out.append((int(d[i, j]), a, b))
    out.sort()
    return [(a, b, dist) for dist, a, b in out]


def _maj(a, b, c):
    return (a & b) | (a & c) | (b & c)


@dataclass(frozen=True)
class Step1Result:
    Q: Formula
    a: int
    b: int
    c: int | None
    U: frozenset = frozenset()
    V: frozenset = frozenset()
    W: frozenset = frozenset()


def _diff(a: int, b: int, k: int) -> frozenset[int]:
    return frozenset(p for p in range(1, k + 1) if coordinate(a ^ b, p, k))


def step1_expand(rel: Relation, triple: tuple | None = None) -> Step1Result:
    """Add 2-clauses to ``rel`` until some distance expands.

    ``triple`` overrides the (a, b, c) choice; by default the triple with
    minimum pairwise distance sum, ties broken lexicographically.
    """
    k = rel.arity
    if componentwise_flags(rel).bijunctive:
        raise AlreadyBijunctive(f"{rel.name} is componentwise bijunctive")
    base = Formula.build(k, [(rel, range(1, k + 1))])
    pairs = expanding_pairs(rel)
    if pairs and triple is None:
        a, b = min((a, b) for a, b, _ in pairs)
        return Step1Result(base, a, b, None)
    index, dist = _distances(rel)
    comp_of = {}
    for ci, comp in enumerate(components(rel)):
        for t in comp.members:
            comp_of[t] = ci
    if triple is None:
        best = None
        mem = rel.members
        for a, b, c in itertools.product(mem, repeat=3):
            if not comp_of[a] == comp_of[b] == comp_of[c]:
                continue
            mj = _maj(a, b, c)
            if comp_of.get(mj) == comp_of[a]:
                continue
            cost = dist[index[a], index[b]] + dist[index[b], index[c]] + dist[index[c], index[a]]
            key = (cost, a, b, c)
            if best is None or key < best:
                best = key
        _, a, b, c = best
    else:
        a, b, c = (int(t, 2) if isinstance(t, str) else t for t in triple)
        if not comp_of.get(a) == comp_of.get(b) == comp_of.get(c) or comp_of.get(_maj(a, b, c)) == comp_of.get(a):
            raise ValueError("triple must lie in one component with majority outside it")
    U, V, W = _diff(a, b, k), _diff(b, c, k), _diff(c, a, k)
    # structural facts about U, V, W
    for i in U | V | W:
        assert (i in U) + (i in V) + (i in W) == 2
    assert U & V and V & W and W & U
    items = []
    for i in sorted(U & W):
        assert a ^ var_bit(i, k) not in rel
        for j in sorted(U & V):
            items.append(pair_clause(i, coordinate(a, i, k), j, coordinate(a, j, k)))
    Q = base.with_clauses(items)
    g = graph_from_solutions(k, enumerate_solutions(Q))
    st = oracle_st_conn(g, a, b)
    assert st.connected and len(st.path) - 1 > hamming(a, b)
    return Step1Result(Q, a, b, c, U, V, W)


# Step 2: isolate a single expanding pair


@dataclass(frozen=True)
class Step2Result:
    T: Formula
    r: int
    a: int  # endpoints in the renumbered variables
    b: int
    order: tuple[int, ...]  # old variable ids of new vars 1..r, then the extra one
    path: tuple[int, ...]  # the fixed shortest path, old numbering


def _lex_bfs_path(members: set[int], k: int, a: int, b: int) -> list[int]:
    pred = {a: None}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        if u == b:
            break
        for w in sorted(u ^ (1 << p) for p in range(k)):
            if w in members and w not in pred:
                pred[w] = u
                queue.append(w)
    path = [b]
    while pred[path[-1]] is not None:
        path.append(pred[path[-1]])
    return path[::-1]


def step2_isolate(Q: Formula, a=None, b=None) -> Step2Result:
    k = Q.n
    sols = enumerate_solutions(Q)
    pairs = expanding_pairs(sols, k)
    if not pairs:
        raise NoExpansion("no distance expands in Q")
    # re-minimise: the expanding pair with the smallest graph distance
    a, b, d = min(pairs, key=lambda t: (t[2], t[0], t[1]))
    path = _lex_bfs_path(set(sols), k, a, b)
    flips = [k - (u ^ w).bit_length() + 1 for u, w in zip(path, path[1:])]
    U = _diff(a, b, k)
    r = len(U)
    extra = flips[0]
    if (extra in U or flips[-1] != extra or sorted(flips[1:-1]) != sorted(U)
            or len(flips) != r + 2):
        raise NotAPath("shortest path does not have the detour shape")
    order = tuple(flips[1:-1]) + (extra,)
    new_of = {old: new for new, old in enumerate(order, 1)}
    items = []
    for rel, args in Q.items():
        out = []
        for x in args:
            if is_const(x):
                out.append(x)
            elif x in new_of:
                out.append(new_of[x])
            else:
                out.append(str(coordinate(a, x, k)))
        items.append((rel, out))

    def renum(t):
        v = 0
        for old in order:
            v = (v << 1) | coordinate(t, old, k)
        return v

    a2, b2 = renum(a), renum(b)
    n2 = r + 1
    for p in range(1, r + 1):
        for q in range(p + 1, r + 1):
            items.append(pair_clause(p, coordinate(a2, p, n2), q, coordinate(a2, q, n2)))
    T = Formula.build(n2, items)
    g = graph_from_solutions(n2, enumerate_solutions(T))
    if not is_simple_path(g) or len(g) != r + 3:
        raise NotAPath("isolated relation is not a path of length r+2")
    if oracle_st_conn(g, a2, b2).path is None or hamming(a2, b2) != r:
        raise NotAPath("endpoints do not match")
    return Step2Result(T, r, a2, b2, order, tuple(path))


# Step 3: the six paths of length 4


def m_name(pattern: int) -> str:
    return "M" if pattern == 0 else f"M{pattern:03b}"


def m_relation(pattern: int) -> Relation:
    return M.negated(pattern, name=m_name(pattern))


PATH_REPRESENTATIVES = (0b000, 0b100, 0b010, 0b110, 0b101, 0b111)


def _swap13(p: int) -> int:
    return ((p & 1) << 2) | (p & 0b010) | (p >> 2)


def _flip_move(p: int, which: int) -> tuple[int, FaithfulExpression]:
    """Express M_{p ^ flip} from one clause of M_p, 2-clauses and one witness y = x4."""
    l = [None] + [(-v if p & (1 << (3 - v)) else v) for v in (1, 2, 3)]
    src = m_relation(p)
    if which == 1:
        # M(~l1, l2, l3) = exists y (~l1 or ~lam) (l1 or ~l3) P(y, x2, x3)
        lam = -4 if l[1] < 0 else 4
        items = [two_clause(-l[1], -lam), two_clause(l[1], -l[3]), (src, (4, 2, 3))]
        target = p ^ 0b100
    else:
        # M(l1, ~l2, l3) = exists y (~lam or ~l2) P(x1, y, x3)
        lam = -4 if l[2] < 0 else 4
        items = [two_clause(-lam, -l[2]), (src, (1, 4, 3))]
        target = p ^ 0b010
    return target, FaithfulExpression(m_relation(target), Formula.build(4, items), (1, 2, 3), (4,))


@dataclass(frozen=True)
class Step3Result:
    P: FaithfulExpression  # over the input set and 2-clauses
    pattern: int  # P equals M negated by this pattern
    gadgets: dict  # pattern -> expression over {M_pattern, 2-clauses}
    derivation: dict  # pattern -> list of moves from the base pattern


def step3_path4(step2: Step2Result) -> Step3Result:
    r = step2.r
    T = step2.T
    x_vars = (1, r + 1, 2)
    y_vars = tuple(range(3, r + 1))
    proj = project(Relation.from_tuples("P", r + 1, enumerate_solutions(T)), list(x_vars))
    pattern = next((p for p in range(8) if m_relation(p).mask == proj.mask), None)
    if pattern is None:
        raise NotAPath(f"projection {proj.tuples()} is not a path of length 4")
    P = FaithfulExpression(m_relation(pattern), T, x_vars, y_vars)
    gadgets = {pattern: identity_expression(m_relation(pattern))}
    derivation = {pattern: []}
    queue = deque([pattern])
    keep = [r.name for r in TWO_CLAUSES] + [m_name(pattern)]
    while queue:
        p = queue.popleft()
        for move in ("flip1", "flip2", "swap13"):
            if move == "swap13":
                q = _swap13(p)
                if q in gadgets:
                    continue
                e = gadgets[p]
                x1, x2, x3 = e.x_vars
                gadgets[q] = FaithfulExpression(m_relation(q), e.formula, (x3, x2, x1), e.y_vars)
            else:
                q, step = _flip_move(p, 1 if move == "flip1" else 2)
                if q in gadgets:
                    continue
                gadgets[q] = lift(step, {m_name(p): gadgets[p]}, keep)
            derivation[q] = derivation[p] + [move]
            queue.append(q)
    return Step3Result(P, pattern, gadgets, derivation)


# Step 4: the 3-clauses


def d0_gadget() -> FaithfulExpression:
    """(x1 or x2 or x3) from M, M(., ~., .) and 2-clauses; y1..y5 are vars 4..8."""
    y = {i: 3 + i for i in range(1, 6)}
    items = [
        two_clause(1, -y[1]), two_clause(2, -y[2]), two_clause(3, -y[3]), two_clause(3, -y[4]),
        (m_relation(0), (y[1], y[5], y[3])),
        (m_relation(0b010), (y[2], y[5], y[4])),
    ]
    return FaithfulExpression(clause_relation(3, 0), Formula.build(8, items), (1, 2, 3), tuple(range(4, 9)))


def step4_three_clauses() -> dict[str, FaithfulExpression]:
    """D0..D3 over {M, M010} and 2-clauses.

    D_{i+1} = exists y (~x_{i+1} or ~y) and D_i(..., y at position i+1, ...).
    """
    out = {"D0": d0_gadget()}
    keep = [r.name for r in TWO_CLAUSES] + [m_name(0), m_name(0b010)]
    for i in range(3):
        src = clause_relation(3, i)
        args = [1, 2, 3]
        args[i] = 4
        step = FaithfulExpression(
            clause_relation(3, i + 1),
            Formula.build(4, [two_clause(-(i + 1), -4), (src, args)]),
            (1, 2, 3), (4,))
        out[f"D{i + 1}"] = lift(step, {src.name: out[src.name]}, keep)
    return out


# Wide clauses


def clause_literals(rel: Relation) -> list[int] | None:
    """Signed positions if ``rel`` is a single clause (cube minus one point)."""
    k = rel.arity
    full = (1 << (1 << k)) - 1
    missing = full & ~rel.mask
    if missing == 0 or missing & (missing - 1):
        return None
    z = missing.bit_length() - 1
    return [(-p if coordinate(z, p, k) else p) for p in range(1, k + 1)]


def split_clause(literals: Sequence[int], fresh) -> list[list[int]]:
    """(l1 or l2 or y) and (~y or l3 or ... or lw), recursively, until width 3."""
    lits = list(literals)
    out = []
    while len(lits) > 3:
        y = fresh()
        out.append([lits[0], lits[1], y])
        lits = [-y] + lits[2:]
    out.append(lits)
    return out


def kcnf_reduce(f: Formula) -> Formula:
    """Rewrite clauses wider than 3 with fresh witnesses appended after x_n."""
    counter = [f.n]

    def fresh():
        counter[0] += 1
        return counter[0]

    items = []
    for i, (rel, args) in enumerate(f.items()):
        lits = clause_literals(rel)
        if lits is None:
            raise NotClausal(f"clause {i} ({rel.name}) is not a single clause")
        if rel.arity <= 3:
            items.append((rel, args))
            continue
        vs, eff = effective_clause(f, i)
        if eff is None:
            continue
        elits = clause_literals(eff) if eff.mask != (1 << (1 << eff.arity)) - 1 else None
        if elits is None:
            continue  # satisfied by a constant or tautological
        mapped = [vs[abs(l) - 1] * (1 if l > 0 else -1) for l in elits]
        for part in split_clause(mapped, fresh):
            items.append(cnf_clause(part))
    return Formula.build(counter[0], items)


# The whole pipeline


@dataclass
class Pipeline:
    source: Relation
    two_clauses: dict
    step1: Step1Result
    step2: Step2Result
    step3: Step3Result
    three_clauses: dict
    gadgets: dict = field(default_factory=dict)  # name -> expression, each at its own level

    @property
    def base_names(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(r.name for e in self.two_clauses.values() for r in e.formula.relations
                                   if r.name not in ("OR", "NAND")))

    def lowering(self) -> dict[str, FaithfulExpression]:
        """One step down for every intermediate relation (identities left out)."""
        low = dict(self.two_clauses)
        for p, e in self.step3.gadgets.items():
            low[m_name(p)] = self.step3.P if p == self.step3.pattern else e
        low.update(self.three_clauses)
        return {k: v for k, v in low.items() if k not in self.base_names}

    def flatten(self, e: FaithfulExpression, max_rounds: int = 16) -> FaithfulExpression:
        """Lift ``e`` until it only uses relations of the input set."""
        low, base = self.lowering(), set(self.base_names)
        for _ in range(max_rounds):
            names = {r.name for r in e.formula.relations}
            if names <= base:
                return e
            e = lift(e, low, keep=[n for n in names if n in base or n not in low])
        raise RuntimeError("flattening did not terminate")

    def compose_to_base(self, psi: Formula) -> Formula:
        """Replace every 3-clause of ``psi`` by its gadget over the input set."""
        flat = {name: self.flatten(e) for name, e in self.three_clauses.items()}
        names = {r.name for r in psi.relations}
        return compose(psi, flat, keep=[n for n in names if n not in flat])


def express_s3(rels: Sequence[Relation], triple: tuple | None = None) -> Pipeline:
    rels = list(rels)
    two = base_two_clauses(rels)
    src = next(r for r in rels if not componentwise_flags(r).bijunctive)
    s1 = step1_expand(src, triple)
    s2 = step2_isolate(s1.Q, s1.a, s1.b)
    s3 = step3_path4(s2)
    s4 = step4_three_clauses()
    gadgets = dict(two)
    gadgets[m_name(s3.pattern) + "@base"] = s3.P
    for p, e in sorted(s3.gadgets.items()):
        gadgets[m_name(p)] = e
    gadgets.update(s4)
    return Pipeline(src, two, s1, s2, s3, s4, gadgets)


# Figure-style examples over NAE


def nae_clause_gadgets() -> tuple[FaithfulExpression, FaithfulExpression]:
    """Two expressions of (x1 or x2 or x3) via NAE: the first is faithful, the second is not."""
    good = Formula.build(5, [(NAE, (1, 2, 4)), (NAE, (2, 3, 5)), (NAE, (4, 5, "1"))])
    nae_neg1 = NAE.negated(0b100, name="NAE~100")
    bad = Formula.build(4, [(NAE, (1, 2, 4)), (nae_neg1, (4, 3, "0")), (NAE, (4, 2, "1"))])
    d0 = clause_relation(3, 0)
    return (FaithfulExpression(d0, good, (1, 2, 3), (4, 5)),
            FaithfulExpression(d0, bad, (1, 2, 3), (4,)))


# Text form: .csp with a header naming the target and the variable split


def serialize_expression(e: FaithfulExpression) -> str:
    header = [
        f"target {e.target.name} {e.target.arity} : {' '.join(e.target.tuples())}",
        "x_vars " + " ".join(f"x{v}" for v in e.x_vars),
        "y_vars " + " ".join(f"x{v}" for v in e.y_vars),
    ]
    return serialize_formula(e.formula, header)


def parse_expression(text: str) -> FaithfulExpression:
    target = None
    xs: tuple[int, ...] = ()
    ys: tuple[int, ...] = ()
    for line in text.splitlines():
        s = line.strip()
        if not s.startswith("#"):
            continue
        body = s[1:].strip()
        if body.startswith("target "):
            name, arity, _, *tuples = body.split()[1:]
            target = Relation.from_tuples(name, int(arity), tuples)
        elif body.startswith("x_vars"):
            xs = tuple(int(t[1:]) for t in body.split()[1:])
        elif body.startswith("y_vars"):
            ys = tuple(int(t[1:]) for t in body.split()[1:])
    if target is None:
        raise ValueError("missing '# target' header")
    return FaithfulExpression(target, parse_formula(text), xs, ys)
