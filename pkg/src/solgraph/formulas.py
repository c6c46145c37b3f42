"""CNF(S)-formulas: construction, text format, evaluation and normal forms.

Variables are numbered 1..n.  A clause applies a relation to a tuple of
arguments, each either a variable id (int) or one of the constant strings
``"0"`` / ``"1"``.  Assignments are ints with variable 1 as the most
significant bit, mirroring the tuple encoding of relations.
"""

from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from .errors import (ArityMismatch, EmptyResult, NotAffine, ParseError,
                     UnknownRelation)
from .relations import (Relation, bits_to_int, clause_relation as k_clause,
                        closed_under, coordinate, format_relation, int_to_bits,
                        parse_relations, rels_add, substitute)

CONSTANTS = ("0", "1")


def is_const(arg) -> bool:
    return isinstance(arg, str)


def as_assignment(a: int | str, n: int | None = None) -> int:
    if isinstance(a, str):
        if n is not None and len(a) != n:
            raise ValueError(f"assignment {a!r} does not have length {n}")
        return bits_to_int(a) if a else 0
    return int(a)


def to_bits(a: int, n: int) -> str:
    return int_to_bits(a, n)


def var_bit(v: int, n: int) -> int:
    return 1 << (n - v)


def hamming(a: int, b: int) -> int:
    return (a ^ b).bit_count()


@dataclass(frozen=True)
class Clause:
    rel: int
    args: tuple


@dataclass(frozen=True)
class Formula:
    n: int
    relations: tuple[Relation, ...]
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        names = [r.name for r in self.relations]
        if len(set(names)) != len(names):
            raise ValueError("relation names must be unique within a formula")
        for c in self.clauses:
            rel = self.relations[c.rel]
            if len(c.args) != rel.arity:
                raise ArityMismatch(f"{rel.name} has arity {rel.arity}, got {len(c.args)} args")
            for a in c.args:
                if is_const(a):
                    if a not in CONSTANTS:
                        raise ValueError(f"bad constant {a!r}")
                elif not 1 <= a <= self.n:
                    raise ValueError(f"variable x{a} outside 1..{self.n}")

    @classmethod
    def build(cls, n: int, items: Iterable[tuple[Relation, Sequence]]) -> "Formula":
        """Formula from ``(relation, args)`` pairs; relations deduplicated by name."""
        rels: list[Relation] = []
        index: dict[str, int] = {}
        clauses = []
        for rel, args in items:
            i = index.get(rel.name)
            if i is None:
                i = index[rel.name] = len(rels)
                rels.append(rel)
            elif rels[i].mask != rel.mask or rels[i].arity != rel.arity:
                raise ValueError(f"two different relations named {rel.name!r}")
            clauses.append(Clause(i, tuple(_norm_arg(a) for a in args)))
        return cls(n, tuple(rels), tuple(clauses))

    def items(self) -> list[tuple[Relation, tuple]]:
        return [(self.relations[c.rel], c.args) for c in self.clauses]

    def with_clauses(self, items: Iterable[tuple[Relation, Sequence]], n: int | None = None) -> "Formula":
        return Formula.build(self.n if n is None else n, list(self.items()) + list(items))

    @cached_property
    def compiled(self) -> list[tuple[int, int, tuple[tuple[int, int], ...]]]:
        # per clause: (relation mask, constant part of tuple index, (assignment shift, tuple shift)...)
        out = []
        for c in self.clauses:
            rel = self.relations[c.rel]
            k = rel.arity
            base, pieces = 0, []
            for p, a in enumerate(c.args, 1):
                if is_const(a):
                    base |= int(a) << (k - p)
                else:
                    pieces.append((self.n - a, k - p))
            out.append((rel.mask, base, tuple(pieces)))
        return out

    @cached_property
    def occurrences(self) -> dict[int, tuple[int, ...]]:
        occ: dict[int, list[int]] = {}
        for i, c in enumerate(self.clauses):
            for a in set(a for a in c.args if not is_const(a)):
                occ.setdefault(a, []).append(i)
        return {v: tuple(cs) for v, cs in occ.items()}

    @property
    def relation_names(self) -> list[str]:
        return [r.name for r in self.relations]


def _norm_arg(a):
    if isinstance(a, str):
        if a in CONSTANTS:
            return a
        m = re.fullmatch(r"x(\d+)", a)
        if m:
            return int(m.group(1))
        raise ValueError(f"bad argument {a!r}")
    if isinstance(a, bool):
        raise ValueError("use '0'/'1' strings for constants")
    return int(a)


def clause_ok(compiled_clause, a: int) -> bool:
    mask, idx, pieces = compiled_clause
    for s, t in pieces:
        idx |= ((a >> s) & 1) << t
    return bool((mask >> idx) & 1)


def evaluate(f: Formula, a: int | str) -> bool:
    a = as_assignment(a, f.n)
    return all(clause_ok(cc, a) for cc in f.compiled)


def evaluate_many(f: Formula, assignments: np.ndarray) -> np.ndarray:
    """Vectorised evaluate over an int64 array of assignments (n <= 62)."""
    a = np.asarray(assignments, dtype=np.int64)
    ok = np.ones(a.shape, dtype=bool)
    for c in f.clauses:
        rel = f.relations[c.rel]
        k = rel.arity
        idx = np.zeros(a.shape, dtype=np.int64)
        for p, arg in enumerate(c.args, 1):
            if is_const(arg):
                if arg == "1":
                    idx |= 1 << (k - p)
            else:
                idx |= ((a >> (f.n - arg)) & 1) << (k - p)
        ok &= rel.table[idx]
    return ok


def violated_clauses(f: Formula, a: int) -> list[int]:
    return [i for i, cc in enumerate(f.compiled) if not clause_ok(cc, a)]


def flip_ok(f: Formula, a: int, v: int) -> bool:
    """Does ``a`` with variable ``v`` flipped satisfy the clauses containing ``v``?

    Assumes ``a`` satisfies ``f``; other clauses are unaffected by the flip.
    """
    b = a ^ var_bit(v, f.n)
    comp = f.compiled
    return all(clause_ok(comp[i], b) for i in f.occurrences.get(v, ()))


# Effective clause relations


def effective_clause(f: Formula, index: int) -> tuple[tuple[int, ...], Relation | None]:
    """Distinct variables of a clause and its relation after constants and repeats.

    The relation is ``None`` when every argument is a constant and the clause
    holds; an unsatisfiable clause raises EmptyResult.
    """
    c = f.clauses[index]
    rel = f.relations[c.rel]
    vars_: list[int] = []
    for a in c.args:
        if not is_const(a) and a not in vars_:
            vars_.append(a)
    if not vars_:
        idx = 0
        for a in c.args:
            idx = (idx << 1) | int(a)
        if idx not in rel:
            raise EmptyResult(f"constant clause {index} of relation {rel.name} is false")
        return (), None
    if len(vars_) == rel.arity:
        return tuple(vars_), rel
    bindings = {p: (int(a) if is_const(a) else ("x", a)) for p, a in enumerate(c.args, 1)}
    return tuple(vars_), substitute(rel, bindings, name=f"{rel.name}@{index}")


def clause_relation(f: Formula, index: int) -> Relation | None:
    return effective_clause(f, index)[1]


def effective_clauses(f: Formula) -> list[tuple[tuple[int, ...], Relation]]:
    out = []
    for i in range(len(f.clauses)):
        vs, rel = effective_clause(f, i)
        if rel is not None:
            out.append((vs, rel))
    return out


# Clausal forms. Literals are signed 1-based positions (or variable ids).


class _NotExpressible:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __bool__(self):
        return False

    def __repr__(self):
        return "NotExpressible"


NotExpressible = _NotExpressible()

SHAPES = ("two_cnf", "horn", "ihsb_minus", "ihsb_plus")


def _candidates(k: int, shape: str):
    """All non-tautological clauses over positions 1..k of the given shape."""
    pos = range(1, k + 1)
    for p in pos:
        yield (p,)
        yield (-p,)
    if shape == "two_cnf":
        for i, j in itertools.combinations(pos, 2):
            for si, sj in itertools.product((1, -1), repeat=2):
                yield (si * i, sj * j)
        return
    if shape == "horn":
        for size in range(2, k + 1):
            for vs in itertools.combinations(pos, size):
                yield tuple(-v for v in vs)
                for head in vs:
                    yield tuple(v if v == head else -v for v in vs)
        return
    sign = -1 if shape == "ihsb_minus" else 1
    for i, j in itertools.combinations(pos, 2):
        yield (i, -j)
        yield (-i, j)
    for size in range(2, k + 1):
        for vs in itertools.combinations(pos, size):
            yield tuple(sign * v for v in vs)


def _falsifier(clause, k: int) -> tuple[int, int]:
    """(care mask, value) such that t falsifies clause iff t & care == value."""
    care = val = 0
    for lit in clause:
        b = 1 << (k - abs(lit))
        care |= b
        if lit < 0:
            val |= b
    return care, val


def clause_sort_key(clause):
    return tuple((abs(l), 0 if l > 0 else 1) for l in clause)


def cnf_solutions(clauses, k: int) -> np.ndarray:
    """Boolean table over {0,1}^k of assignments satisfying all clauses."""
    t = np.arange(1 << k, dtype=np.int64)
    ok = np.ones(1 << k, dtype=bool)
    for c in clauses:
        care, val = _falsifier(c, k)
        ok &= (t & care) != val
    return ok


def clausal_form(rel: Relation, shape: str):
    """Prime implied clauses of ``shape``, or NotExpressible.

    Literals are signed positions of ``rel``; the list is sorted.
    """
    if shape not in SHAPES:
        raise ValueError(f"unknown shape {shape!r}")
    k = rel.arity
    members = np.asarray(rel.members, dtype=np.int64)
    implied = []
    for c in _candidates(k, shape):
        care, val = _falsifier(c, k)
        if not np.any((members & care) == val):
            implied.append(c)
    sets = [frozenset(c) for c in implied]
    prime = [c for c, s in zip(implied, sets) if not any(o < s for o in sets)]
    prime = sorted((tuple(sorted(c, key=abs)) for c in prime), key=clause_sort_key)
    if np.array_equal(cnf_solutions(prime, k), rel.table):
        return prime
    return NotExpressible


def map_clause(clause, vars_: Sequence[int]):
    """Rename positions of a clause to formula variables."""
    return tuple(vars_[abs(l) - 1] * (1 if l > 0 else -1) for l in clause)


def formula_clauses(f: Formula, shape: str) -> list[tuple[int, ...]]:
    """Clausal form of the whole formula over its variables, raising NotExpressible as ValueError."""
    out = []
    for vs, rel in effective_clauses(f):
        form = clausal_form(rel, shape)
        if form is NotExpressible:
            raise ValueError(f"clause relation {rel.name} has no {shape} form")
        out.extend(map_clause(c, vs) for c in form)
    return out


# GF(2) linear systems


@dataclass(frozen=True)
class LinearSystem:
    n: int
    rows: tuple[tuple[int, int], ...]  # (coefficients, constant); var v at bit n - v
    pivots: tuple[int, ...]
    consistent: bool

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def support(self) -> frozenset[int]:
        acc = 0
        for coef, _ in self.rows:
            acc |= coef
        return frozenset(v for v in range(1, self.n + 1) if acc & var_bit(v, self.n))

    def satisfied_by(self, a: int) -> bool:
        return self.consistent and all(((coef & a).bit_count() & 1) == c for coef, c in self.rows)

    def solutions(self) -> list[int]:
        return [a for a in range(1 << self.n) if self.satisfied_by(a)]


def rref(rows: Iterable[tuple[int, int]], n: int) -> LinearSystem:
    """Row-reduce equations; pivots chosen by ascending variable id."""
    work = [(c, b) for c, b in rows]
    out: list[tuple[int, int]] = []
    pivots: list[int] = []
    consistent = True
    for v in range(1, n + 1):
        bit = var_bit(v, n)
        pick = next((i for i, (c, _) in enumerate(work) if c & bit), None)
        if pick is None:
            continue
        pr = work.pop(pick)
        work = [((c ^ pr[0], b ^ pr[1]) if c & bit else (c, b)) for c, b in work]
        out = [((c ^ pr[0], b ^ pr[1]) if c & bit else (c, b)) for c, b in out]
        out.append(pr)
        pivots.append(v)
    if any(c == 0 and b for c, b in work):
        consistent = False
    return LinearSystem(n, tuple(out), tuple(pivots), consistent)


def relation_equations(rel: Relation) -> list[tuple[int, int]]:
    """Equations (over positions, position 1 at the top bit) cutting out an affine relation."""
    if not closed_under(rel, "xor3"):
        raise NotAffine(f"{rel.name} is not closed under ternary xor")
    k = rel.arity
    t0 = rel.members[0]
    diffs = rref(((t ^ t0, 0) for t in rel.members), k)
    basis = [c for c, _ in diffs.rows]
    normals = [c for c in range(1, 1 << k) if all(((c & d).bit_count() & 1) == 0 for d in basis)]
    red = rref(((c, 0) for c in normals), k)
    return [(c, (c & t0).bit_count() & 1) for c, _ in red.rows]


def affine_system(f: Formula) -> LinearSystem:
    rows = []
    for vs, rel in effective_clauses(f):
        k = rel.arity
        for coef, const in relation_equations(rel):
            g = 0
            for p, v in enumerate(vs, 1):
                if coef & (1 << (k - p)):
                    g |= var_bit(v, f.n)
            rows.append((g, const))
    return rref(rows, f.n)


# Horn-SAT, 2-SAT, unit propagation. Clauses are tuples of signed var ids.


def horn_sat(clauses: Iterable[Sequence[int]], n: int, fixed: Mapping[int, int] | None = None) -> int | None:
    """Minimal model of a Horn CNF extending ``fixed`` (var -> 0/1), or None."""
    clauses = [tuple(c) for c in clauses]
    fixed = dict(fixed or {})
    for c in clauses:
        if sum(1 for l in c if l > 0) > 1:
            raise ValueError(f"clause {c} is not Horn")
    for v, b in fixed.items():
        if b == 1:
            clauses.append((v,))
        else:
            clauses.append((-v,))
    # counter-based propagation: a clause fires once all its negative vars are true
    need = [sum(1 for l in c if l < 0) for c in clauses]
    watch: dict[int, list[int]] = {}
    for i, c in enumerate(clauses):
        for l in c:
            if l < 0:
                watch.setdefault(-l, []).append(i)
    true = set()
    queue = [i for i, k in enumerate(need) if k == 0]
    while queue:
        i = queue.pop()
        head = next((l for l in clauses[i] if l > 0), None)
        if head is None:
            return None
        if head in true:
            continue
        true.add(head)
        for j in watch.get(head, ()):
            need[j] -= 1
            if need[j] == 0:
                queue.append(j)
    a = 0
    for v in true:
        a |= var_bit(v, n)
    return a


def implication_graph(clauses: Iterable[Sequence[int]], n: int) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(range(1, n + 1))
    g.add_nodes_from(range(-n, 0))
    for c in clauses:
        if len(c) == 1:
            g.add_edge(-c[0], c[0])
        elif len(c) == 2:
            a, b = c
            g.add_edge(-a, b)
            g.add_edge(-b, a)
        else:
            raise ValueError(f"clause {tuple(c)} is wider than 2")
    return g


def two_sat(clauses: Iterable[Sequence[int]], n: int, fixed: Mapping[int, int] | None = None) -> int | None:
    """A satisfying assignment of a 2-CNF (with optional fixed vars), or None."""
    clauses = [tuple(c) for c in clauses]
    for v, b in (fixed or {}).items():
        clauses.append((v,) if b else (-v,))
    g = implication_graph(clauses, n)
    cond = nx.condensation(g)
    comp = cond.graph["mapping"]
    for v in range(1, n + 1):
        if comp[v] == comp[-v]:
            return None
    order = {c: i for i, c in enumerate(nx.topological_sort(cond))}
    a = 0
    for v in range(1, n + 1):
        if order[comp[v]] > order[comp[-v]]:
            a |= var_bit(v, n)
    return a


def unit_propagate(clauses: Iterable[Sequence[int]], assigned: Mapping[int, int] | None = None) -> dict[int, int] | None:
    """Close a partial assignment under unit propagation; None on conflict."""
    clauses = [tuple(c) for c in clauses]
    val = dict(assigned or {})
    changed = True
    while changed:
        changed = False
        for c in clauses:
            open_, sat = [], False
            for l in c:
                v = abs(l)
                if v in val:
                    if val[v] == (l > 0):
                        sat = True
                        break
                else:
                    open_.append(l)
            if sat:
                continue
            if not open_:
                return None
            if len(open_) == 1:
                l = open_[0]
                val[abs(l)] = int(l > 0)
                changed = True
    return val


def complement_formula(f: Formula) -> Formula:
    """Formula whose solutions are the bitwise complements of those of ``f``."""
    rels = tuple(r.complemented(name=f"{r.name}~c") for r in f.relations)
    flip = {"0": "1", "1": "0"}
    clauses = tuple(Clause(c.rel, tuple(flip[a] if is_const(a) else a for a in c.args)) for c in f.clauses)
    return Formula(f.n, rels, clauses)


def complement(a: int, n: int) -> int:
    return a ^ ((1 << n) - 1)


def cnf_clause(literals: Sequence[int]) -> tuple[Relation, tuple]:
    """Express a disjunction of signed literals as a D_i clause, negated args first."""
    lits = list(dict.fromkeys(literals))
    if any(-l in lits for l in lits):
        raise ValueError("tautological clause")
    neg = [-l for l in lits if l < 0]
    posv = [l for l in lits if l > 0]
    rel = k_clause(len(lits), len(neg))
    return rel, tuple(neg + posv)


def cnf_formula(n: int, clauses: Iterable[Sequence[int]]) -> Formula:
    return Formula.build(n, (cnf_clause(c) for c in clauses))


class Builder:
    """Incremental construction with named variables."""

    def __init__(self):
        self.names: list[str] = []
        self.index: dict[str, int] = {}
        self.items: list[tuple[Relation, tuple]] = []

    def var(self, name: str) -> int:
        v = self.index.get(name)
        if v is None:
            self.names.append(name)
            v = self.index[name] = len(self.names)
        return v

    def add(self, rel: Relation, args: Sequence) -> None:
        self.items.append((rel, tuple(args)))

    def clause(self, literals: Sequence[int]) -> None:
        self.items.append(cnf_clause(literals))

    @property
    def n(self) -> int:
        return len(self.names)

    def formula(self) -> Formula:
        return Formula.build(self.n, self.items)


# .csp text format


def parse_formula(text: str, base_dir: str | None = None, relations: Mapping[str, Relation] | None = None) -> Formula:
    rels: dict[str, Relation] = dict(relations or {})
    n = None
    items = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "vars":
            if n is not None or len(rest) != 1 or not rest[0].isdigit():
                raise ParseError("expected a single 'vars <n>' line", lineno)
            n = int(rest[0])
        elif head == "use":
            if len(rest) != 1:
                raise ParseError("expected 'use <relsfile>'", lineno)
            path = rest[0] if base_dir is None else os.path.join(base_dir, rest[0])
            try:
                with open(path) as fh:
                    inc = parse_relations(fh.read())
            except OSError as exc:
                raise ParseError(f"cannot read {rest[0]}: {exc}", lineno) from exc
            for name, r in inc.items():
                if name in rels and not rels[name].same_tuples(r):
                    raise ParseError(f"conflicting definitions of {name!r}", lineno)
                rels[name] = r
        elif head == "relation":
            m = re.match(r"^relation\s+(\S+)\s+(\d+)\s*:\s*(.*)$", line)
            if not m:
                raise ParseError("malformed relation line", lineno)
            rels_add(rels, m.group(1), int(m.group(2)), m.group(3).split(), lineno)
        elif head == "clause":
            if n is None:
                raise ParseError("'clause' before 'vars'", lineno)
            if not rest:
                raise ParseError("clause needs a relation name", lineno)
            name, args = rest[0], rest[1:]
            if name not in rels:
                raise UnknownRelation(f"unknown relation {name!r}", lineno)
            rel = rels[name]
            if len(args) != rel.arity:
                raise ArityMismatch(f"{name} has arity {rel.arity}, got {len(args)} args", lineno)
            parsed = []
            for a in args:
                if a in CONSTANTS:
                    parsed.append(a)
                    continue
                m = re.fullmatch(r"x(\d+)", a)
                if not m or not 1 <= int(m.group(1)) <= n:
                    raise ParseError(f"bad argument {a!r}", lineno)
                parsed.append(int(m.group(1)))
            items.append((name, tuple(parsed)))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    if n is None:
        raise ParseError("missing 'vars <n>' line")
    order = list(rels)
    index = {name: i for i, name in enumerate(order)}
    return Formula(n, tuple(rels[x] for x in order), tuple(Clause(index[name], args) for name, args in items))


def format_arg(a) -> str:
    return a if is_const(a) else f"x{a}"


def serialize_formula(f: Formula, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" if h else "#" for h in header]
    lines.append(f"vars {f.n}")
    lines.extend(format_relation(r) for r in f.relations)
    for c in f.clauses:
        lines.append(" ".join(["clause", f.relations[c.rel].name] + [format_arg(a) for a in c.args]))
    return "\n".join(lines) + "\n"
