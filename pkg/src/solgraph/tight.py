"""Polynomial deciders for st-connectivity and connectivity on tight formulas."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any

import networkx as nx

from .errors import (EmptyResult, MethodInapplicable, NotAffine, NotASolution,
                     NotTight, Unsatisfiable)
from .formulas import (Formula, as_assignment, clausal_form, complement,
                       complement_formula, effective_clauses, evaluate,
                       flip_ok, horn_sat, map_clause,
                       NotExpressible, affine_system, two_sat, unit_propagate,
                       var_bit)
from .relations import Relation, closed_under, components, componentwise_flags, or_nand_free

BRANCHES = ("componentwise_bijunctive", "or_free", "nand_free")
METHODS = ("bijunctive", "affine", "ihsb_minus", "ihsb_plus")


@dataclass(frozen=True)
class Decision:
    answer: bool
    method: str
    path: list[int] | None = None
    certificate: Any = None


def _branch_holds(rel, branch: str) -> bool:
    return _holds(rel.arity, rel.mask, branch)


@lru_cache(maxsize=None)
def _holds(arity: int, mask: int, branch: str) -> bool:
    # flags depend only on the tuples, and formulas reuse the same few relations
    rel = Relation("_", arity, mask)
    if branch == "componentwise_bijunctive":
        return componentwise_flags(rel).bijunctive
    fr = or_nand_free(rel)
    return fr.or_free if branch == "or_free" else fr.nand_free


def _effective(f: Formula):
    try:
        return effective_clauses(f)
    except EmptyResult as exc:
        raise Unsatisfiable(str(exc)) from exc


def tight_branches(f: Formula) -> list[str]:
    """Tight branches satisfied by every effective clause relation of ``f``.

    Effective relations (constants substituted, repeated variables merged)
    are checked rather than the declared ones: identification can create
    an OR or NAND that the declared relation does not contain.
    """
    try:
        rels = [rel for _, rel in effective_clauses(f)]
    except EmptyResult:
        return list(BRANCHES)  # no solutions; every claim is vacuous
    return [b for b in BRANCHES if all(_branch_holds(r, b) for r in rels)]


def _require_branch(f: Formula, branch: str | None) -> str:
    ok = tight_branches(f)
    if branch is None:
        if not ok:
            raise NotTight("no tight branch applies to the clause relations")
        return ok[0]
    if branch not in BRANCHES:
        raise ValueError(f"unknown branch {branch!r}")
    if branch not in ok:
        raise NotTight(f"clause relations are not all {branch}")
    return branch


def _greedy(f: Formula, s: int, t: int) -> list[int] | None:
    n = f.n
    cur, path = s, [s]
    while cur != t:
        diff = cur ^ t
        for v in range(1, n + 1):
            if diff & var_bit(v, n) and flip_ok(f, cur, v):
                cur ^= var_bit(v, n)
                path.append(cur)
                break
        else:
            return None
    return path


def _monotone(f: Formula, a: int, down: bool) -> list[int]:
    """Flip 1->0 (or 0->1) lowest index first until locally extreme."""
    n = f.n
    cur, path = a, [a]
    moved = True
    while moved:
        moved = False
        for v in range(1, n + 1):
            bit = var_bit(v, n)
            if bool(cur & bit) == down and flip_ok(f, cur, v):
                cur ^= bit
                path.append(cur)
                moved = True
                break
    return path


def local_extreme(f: Formula, a, down: bool = True) -> int:
    return _monotone(f, as_assignment(a, f.n), down)[-1]


def stconn_tight(f: Formula, branch: str | None, s, t) -> Decision:
    branch = _require_branch(f, branch)
    s, t = as_assignment(s, f.n), as_assignment(t, f.n)
    for a in (s, t):
        if not evaluate(f, a):
            raise NotASolution(f"{format(a, f'0{f.n}b')} does not satisfy the formula")
    if branch == "componentwise_bijunctive":
        path = _greedy(f, s, t)
        if path is None:
            return Decision(False, "greedy", certificate=(s, t))
        return Decision(True, "greedy", path=path)
    down = branch == "or_free"
    ps, pt = _monotone(f, s, down), _monotone(f, t, down)
    method = "descent" if down else "ascent"
    if ps[-1] != pt[-1]:
        return Decision(False, method, certificate=(s, t))
    return Decision(True, method, path=ps + pt[-2::-1])


def certificate_check(f: Formula, branch: str | None, s, t) -> bool:
    """Is (s, t) a valid witness that G(f) is disconnected?"""
    branch = _require_branch(f, branch)
    s, t = as_assignment(s, f.n), as_assignment(t, f.n)
    if not (evaluate(f, s) and evaluate(f, t)):
        return False
    return not stconn_tight(f, branch, s, t).answer


# Connectivity


def conn_poly(f: Formula, method: str) -> Decision:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method == "ihsb_plus":
        # solve the complemented (Horn) formula; certificates come back flipped
        return _conn_ihsb_minus(complement_formula(f), "ihsb_plus")
    return {"bijunctive": _conn_bijunctive, "affine": _conn_affine,
            "ihsb_minus": _conn_ihsb_minus}[method](f)


def _conn_bijunctive(f: Formula) -> Decision:
    eff = _effective(f)
    for _, rel in eff:
        if not closed_under(rel, "maj3"):
            raise MethodInapplicable(f"clause relation {rel.name} is not bijunctive")
    clauses = [c for vs, rel in eff for c in (map_clause(x, vs) for x in clausal_form(rel, "two_cnf"))]
    n = f.n
    if two_sat(clauses, n) is None:
        raise Unsatisfiable("2-CNF has no solution")
    forced: dict[int, int] = {}
    used = {abs(l) for c in clauses for l in c}
    for v in sorted(used):
        can0 = two_sat(clauses, n, {v: 0}) is not None
        can1 = two_sat(clauses, n, {v: 1}) is not None
        if can0 != can1:
            forced[v] = int(can1)
    g = nx.DiGraph()
    for c in clauses:
        lits = [l for l in c if abs(l) not in forced]
        if any(abs(l) in forced and forced[abs(l)] == (l > 0) for l in c):
            continue
        if len(lits) == 2:
            a, b = lits
            g.add_edge(-a, b)
            g.add_edge(-b, a)
    try:
        cycle = nx.find_cycle(g)
    except nx.NetworkXNoCycle:
        return Decision(True, "bijunctive")
    lit = cycle[0][0]
    v = abs(lit)
    on = two_sat(clauses, n, {**forced, v: int(lit > 0)})
    off = two_sat(clauses, n, {**forced, v: int(lit < 0)})
    return Decision(False, "bijunctive", certificate=(on, off))


def _conn_affine(f: Formula) -> Decision:
    try:
        system = affine_system(f)
    except NotAffine as exc:
        raise MethodInapplicable(str(exc)) from exc
    except EmptyResult as exc:
        raise Unsatisfiable(str(exc)) from exc
    if not system.consistent:
        raise Unsatisfiable("linear system is inconsistent")
    n = f.n
    # particular solution: free variables 0, pivots read off the constants
    s = 0
    for (coef, const), p in zip(system.rows, system.pivots):
        if const:
            s |= var_bit(p, n)
    support = system.support
    if system.rank == len(support):
        return Decision(True, "affine")
    free = min(set(support) - set(system.pivots))
    kernel = var_bit(free, n)
    for (coef, _), p in zip(system.rows, system.pivots):
        if coef & var_bit(free, n):
            kernel |= var_bit(p, n)
    return Decision(False, "affine", certificate=(s, s ^ kernel))


def _conn_ihsb_minus(f: Formula, label: str = "ihsb_minus") -> Decision:
    eff = _effective(f)
    n = f.n
    for _, rel in eff:
        if not closed_under(rel, "and2"):
            raise MethodInapplicable(f"clause relation {rel.name} is not Horn")
    horn = [c for vs, rel in eff for c in (map_clause(x, vs) for x in clausal_form(rel, "horn"))]
    base = horn_sat(horn, n)
    if base is None:
        raise Unsatisfiable("Horn formula has no solution")
    flip = label == "ihsb_plus"

    def out(a):
        return complement(a, n) if flip else a

    ihsb: list[tuple[int, ...]] = []
    for vs, rel in eff:
        comps = components(rel)
        feasible = []
        for comp in comps:
            extra = [map_clause(x, vs) for x in clausal_form(comp, "horn")]
            model = horn_sat(horn + extra, n)
            if model is not None:
                feasible.append((comp, model))
        if len(feasible) > 1:
            return Decision(False, label, certificate=(out(feasible[0][1]), out(feasible[1][1])))
        comp = feasible[0][0]
        form = clausal_form(comp, "ihsb_minus")
        if form is NotExpressible:
            raise MethodInapplicable(f"a component of {rel.name} is not IHSB-")
        ihsb.extend(map_clause(x, vs) for x in form)
    fixed = unit_propagate(ihsb)
    if fixed is None:
        raise Unsatisfiable("unit propagation reached a conflict")
    g = nx.DiGraph()
    negsets: list[frozenset[int]] = []
    for c in ihsb:
        if any(abs(l) in fixed and fixed[abs(l)] == (l > 0) for l in c):
            continue
        lits = [l for l in c if abs(l) not in fixed]
        if all(l < 0 for l in lits):
            negsets.append(frozenset(-l for l in lits))
        elif len(lits) == 2:
            pos = next(l for l in lits if l > 0)
            neg = next(-l for l in lits if l < 0)
            g.add_edge(neg, pos)
    zero = 0
    for v, b in fixed.items():
        if b:
            zero |= var_bit(v, n)
    for i in sorted(g.nodes):
        reach = nx.descendants(g, i)
        if not any(g.has_edge(u, i) for u in reach | {i}):
            continue
        reach = reach | {i}
        if any(s <= reach for s in negsets):
            continue
        other = zero
        for v in reach:
            other |= var_bit(v, n)
        return Decision(False, label, certificate=(out(zero), out(other)))
    return Decision(True, label)
