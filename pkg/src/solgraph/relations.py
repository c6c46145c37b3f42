"""Finite Boolean relations and their closure-based classification.

A relation of arity ``k`` is a non-empty subset of ``{0,1}^k``.  Tuples are
encoded as integers with coordinate 1 as the most significant bit, so the
tuple ``100`` of a ternary relation is the integer 4.  Membership is kept as
an integer bitmask over the ``2^k`` encodings.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import ArityCapExceeded, EmptyResult, ParseError

ARITY_CAP = 16


def bits_to_int(bits: str) -> int:
    if not bits or any(ch not in "01" for ch in bits):
        raise ValueError(f"not a binary string: {bits!r}")
    return int(bits, 2)


def int_to_bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


def coordinate(t: int, position: int, arity: int) -> int:
    """Value of 1-based ``position`` in the encoded tuple ``t``."""
    return (t >> (arity - position)) & 1


@dataclass(frozen=True)
class Relation:
    name: str
    arity: int
    mask: int

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("relations have arity >= 1")
        if self.arity > ARITY_CAP:
            raise ArityCapExceeded(f"arity {self.arity} exceeds cap {ARITY_CAP}")
        if self.mask <= 0:
            raise EmptyResult(f"relation {self.name!r} would be empty")
        if self.mask >> (1 << self.arity):
            raise ValueError("membership mask has bits beyond 2^arity")

    @classmethod
    def from_tuples(cls, name: str, arity: int, tuples: Iterable[int | str]) -> "Relation":
        mask = 0
        for t in tuples:
            if isinstance(t, str):
                if len(t) != arity:
                    raise ValueError(f"tuple {t!r} does not have length {arity}")
                t = bits_to_int(t)
            if not 0 <= t < (1 << arity):
                raise ValueError(f"tuple {t} out of range for arity {arity}")
            mask |= 1 << t
        return cls(name, arity, mask)

    @classmethod
    def full(cls, arity: int, name: str | None = None) -> "Relation":
        return cls(name or f"TRUE{arity}", arity, (1 << (1 << arity)) - 1)

    @cached_property
    def members(self) -> tuple[int, ...]:
        m, out, i = self.mask, [], 0
        while m:
            if m & 1:
                out.append(i)
            m >>= 1
            i += 1
        return tuple(out)

    @cached_property
    def table(self) -> np.ndarray:
        tab = np.zeros(1 << self.arity, dtype=bool)
        tab[list(self.members)] = True
        return tab

    def __contains__(self, t: int | str) -> bool:
        if isinstance(t, str):
            t = bits_to_int(t)
        return bool((self.mask >> t) & 1)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def tuples(self) -> list[str]:
        return [int_to_bits(t, self.arity) for t in self.members]

    def same_tuples(self, other: "Relation") -> bool:
        return self.arity == other.arity and self.mask == other.mask

    def renamed(self, name: str) -> "Relation":
        return Relation(name, self.arity, self.mask)

    def negated(self, pattern: int, name: str | None = None) -> "Relation":
        """Flip the coordinates selected by the bit pattern ``pattern``."""
        return Relation.from_tuples(
            name or f"{self.name}~{int_to_bits(pattern, self.arity)}",
            self.arity,
            (t ^ pattern for t in self.members),
        )

    def permuted(self, order: list[int], name: str | None = None) -> "Relation":
        """New relation whose coordinate ``j`` is old coordinate ``order[j-1]``."""
        k = self.arity
        if sorted(order) != list(range(1, k + 1)):
            raise ValueError(f"{order} is not a permutation of 1..{k}")
        out = []
        for t in self.members:
            v = 0
            for p in order:
                v = (v << 1) | coordinate(t, p, k)
            out.append(v)
        return Relation.from_tuples(name or self.name, k, out)

    def complemented(self, name: str | None = None) -> "Relation":
        """Flip every coordinate (global complement, used for dual arguments)."""
        return self.negated((1 << self.arity) - 1, name or f"{self.name}^c")

    def __repr__(self) -> str:
        body = " ".join(self.tuples()) if len(self) <= 16 else f"{len(self)} tuples"
        return f"Relation({self.name!r}, {self.arity}: {body})"


# Standard relations used throughout.

def _rel(name: str, tuples: str) -> Relation:
    ts = tuples.split()
    return Relation.from_tuples(name, len(ts[0]), ts)


OR = _rel("OR", "01 10 11")
NAND = _rel("NAND", "00 01 10")
IMP = _rel("IMP", "00 10 11")  # (x1 or not x2)
EQ = _rel("EQ", "00 11")
R13 = _rel("R13", "100 010 001")
NAE = _rel("NAE", "001 010 011 100 101 110")
M = _rel("M", "100 110 010 011 001")


def clause_relation(k: int, i: int, name: str | None = None) -> Relation:
    """Solutions of the ``k``-clause whose first ``i`` literals are negated."""
    if not 0 <= i <= k:
        raise ValueError("need 0 <= i <= k")
    # the single falsifying tuple: negated literals are false at 1
    bad = ((1 << i) - 1) << (k - i)
    if name is None:
        name = f"D{i}" if k == 3 else f"D{i}_{k}"
    full = (1 << (1 << k)) - 1
    return Relation(name, k, full & ~(1 << bad))


D0, D1, D2, D3 = (clause_relation(3, i) for i in range(4))


# Closure operations on encoded tuples (bitwise on all coordinates at once).

OPERATIONS: dict[str, tuple[int, Callable]] = {
    "maj3": (3, lambda a, b, c: (a & b) | (a & c) | (b & c)),
    "and2": (2, lambda a, b: a & b),
    "or2": (2, lambda a, b: a | b),
    "xor3": (3, lambda a, b, c: a ^ b ^ c),
    "ihsb_minus3": (3, lambda a, b, c: a & (b | c)),
    "ihsb_plus3": (3, lambda a, b, c: a | (b & c)),
}


def closure_violation(rel: Relation, op_id: str) -> tuple[int, ...] | None:
    """First (lexicographic) argument tuple whose image escapes ``rel``.

    Returns ``(args..., image)`` or ``None`` when ``rel`` is closed.
    """
    arity, f = OPERATIONS[op_id]
    m = np.asarray(rel.members, dtype=np.int64)
    tab = rel.table
    if arity == 2:
        bad = ~tab[f(m[:, None], m[None, :])]
        if bad.any():
            i, j = np.unravel_index(np.argmax(bad), bad.shape)
            a, b = int(m[i]), int(m[j])
            return a, b, int(f(a, b))
        return None
    for a in m:
        bad = ~tab[f(a, m[:, None], m[None, :])]
        if bad.any():
            i, j = np.unravel_index(np.argmax(bad), bad.shape)
            b, c = int(m[i]), int(m[j])
            return int(a), b, c, int(f(int(a), b, c))
    return None


def closed_under(rel: Relation, op_id: str) -> bool:
    if op_id not in OPERATIONS:
        raise ValueError(f"unknown operation {op_id!r}")
    return closure_violation(rel, op_id) is None


@dataclass(frozen=True)
class SchaeferFlags:
    bijunctive: bool
    horn: bool
    dual_horn: bool
    affine: bool
    ihsb_minus: bool
    ihsb_plus: bool


def schaefer_flags(rel: Relation) -> SchaeferFlags:
    return SchaeferFlags(
        bijunctive=closed_under(rel, "maj3"),
        horn=closed_under(rel, "and2"),
        dual_horn=closed_under(rel, "or2"),
        affine=closed_under(rel, "xor3"),
        ihsb_minus=closed_under(rel, "ihsb_minus3"),
        ihsb_plus=closed_under(rel, "ihsb_plus3"),
    )


def substitute(rel: Relation, bindings: Mapping[int, object], name: str | None = None) -> Relation:
    """Fix coordinates to constants and identify coordinates sharing a label.

    ``bindings`` maps 1-based positions to ``0``/``1`` (constants) or to any
    other hashable label; positions with equal labels are identified.
    Unbound positions stay free.  Output coordinates follow the first
    occurrence of each label, left to right.
    """
    k = rel.arity
    consts: dict[int, int] = {}
    groups: dict[object, list[int]] = {}
    for p in range(1, k + 1):
        v = bindings.get(p, ("free", p))
        if isinstance(v, (int, np.integer)) and not isinstance(v, bool) and v in (0, 1):
            consts[p] = int(v)
        elif isinstance(v, bool):
            consts[p] = int(v)
        else:
            groups.setdefault(v, []).append(p)
    if not groups:
        t = sum(c << (k - p) for p, c in consts.items())
        if t not in rel.members:
            raise EmptyResult(f"{int_to_bits(t, k)} is not in {rel.name}")
        raise ValueError("substitute needs at least one free position")
    reps = list(groups.values())
    out = []
    for t in rel.members:
        if any(coordinate(t, p, k) != c for p, c in consts.items()):
            continue
        v, ok = 0, True
        for ps in reps:
            b = coordinate(t, ps[0], k)
            if any(coordinate(t, q, k) != b for q in ps[1:]):
                ok = False
                break
            v = (v << 1) | b
        if ok:
            out.append(v)
    if not out:
        raise EmptyResult(f"no tuple of {rel.name} survives {dict(bindings)}")
    return Relation.from_tuples(name or f"{rel.name}|sub", len(reps), out)


@dataclass(frozen=True)
class Substitution:
    """Two free positions plus constants for every other coordinate."""

    positions: tuple[int, int]
    constants: Mapping[int, int]

    def bindings(self) -> dict[int, object]:
        b: dict[int, object] = dict(self.constants)
        b[self.positions[0]] = "u"
        b[self.positions[1]] = "v"
        return b


@dataclass(frozen=True)
class Freeness:
    or_free: bool
    nand_free: bool
    or_witness: Substitution | None = None
    nand_witness: Substitution | None = None


_OR_PATTERN = 0b1110
_NAND_PATTERN = 0b0111


def or_nand_free(rel: Relation) -> Freeness:
    k = rel.arity
    witnesses: dict[int, Substitution] = {}
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            bi, bj = k - i, k - j
            clear = ~((1 << bi) | (1 << bj))
            sub: dict[int, int] = {}
            for t in rel.members:
                key = t & clear
                sub[key] = sub.get(key, 0) | (1 << (2 * ((t >> bi) & 1) + ((t >> bj) & 1)))
            for key in sorted(sub):
                pattern = sub[key]
                if pattern in (_OR_PATTERN, _NAND_PATTERN) and pattern not in witnesses:
                    consts = {p: coordinate(key, p, k) for p in range(1, k + 1) if p not in (i, j)}
                    witnesses[pattern] = Substitution((i, j), consts)
            if len(witnesses) == 2:
                break
        if len(witnesses) == 2:
            break
    return Freeness(
        or_free=_OR_PATTERN not in witnesses,
        nand_free=_NAND_PATTERN not in witnesses,
        or_witness=witnesses.get(_OR_PATTERN),
        nand_witness=witnesses.get(_NAND_PATTERN),
    )


def components(rel: Relation) -> list[Relation]:
    """Connected components of G(rel), ordered by their smallest tuple."""
    k = rel.arity
    seen: set[int] = set()
    out = []
    for start in rel.members:
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for b in range(k):
                w = u ^ (1 << b)
                if w not in seen and (rel.mask >> w) & 1:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        out.append(comp)
    return [Relation.from_tuples(f"{rel.name}[{n}]", k, c) for n, c in enumerate(out)]


@dataclass(frozen=True)
class ComponentwiseFlags:
    bijunctive: bool
    ihsb_minus: bool
    ihsb_plus: bool


def componentwise_flags(rel: Relation) -> ComponentwiseFlags:
    comps = components(rel)
    return ComponentwiseFlags(
        bijunctive=all(closed_under(c, "maj3") for c in comps),
        ihsb_minus=all(closed_under(c, "ihsb_minus3") for c in comps),
        ihsb_plus=all(closed_under(c, "ihsb_plus3") for c in comps),
    )


def project(rel: Relation, keep: Iterable[int], name: str | None = None) -> Relation:
    """Existential projection onto ``keep`` (1-based positions).

    Sets are taken in ascending order; sequences keep the order given.
    """
    if isinstance(keep, (set, frozenset)):
        keep = sorted(keep)
    keep = list(keep)
    if not keep:
        raise ValueError("projection needs at least one position")
    k = rel.arity
    out = set()
    for t in rel.members:
        v = 0
        for p in keep:
            v = (v << 1) | coordinate(t, p, k)
        out.add(v)
    return Relation.from_tuples(name or f"{rel.name}|proj", len(keep), out)


# Set-level classification.

@dataclass(frozen=True)
class RelationFlags:
    name: str
    bijunctive: bool
    horn: bool
    dual_horn: bool
    affine: bool
    ihsb_minus: bool
    ihsb_plus: bool
    or_free: bool
    nand_free: bool
    componentwise_bijunctive: bool
    componentwise_ihsb_minus: bool
    componentwise_ihsb_plus: bool


def relation_flags(rel: Relation) -> RelationFlags:
    s = schaefer_flags(rel)
    f = or_nand_free(rel)
    c = componentwise_flags(rel)
    return RelationFlags(
        rel.name, s.bijunctive, s.horn, s.dual_horn, s.affine, s.ihsb_minus, s.ihsb_plus,
        f.or_free, f.nand_free, c.bijunctive, c.ihsb_minus, c.ihsb_plus,
    )


SCHAEFER_CLASSES = ("bijunctive", "horn", "dual_horn", "affine")
TIGHT_CLASSES = ("componentwise_bijunctive", "or_free", "nand_free")


@dataclass(frozen=True)
class Complexity:
    sat: str
    stconn: str
    conn: str
    diameter: str


@dataclass(frozen=True)
class ClassificationReport:
    relations: tuple[RelationFlags, ...]
    verdict: str  # "schaefer" | "tight_non_schaefer" | "non_tight"
    schaefer_branches: tuple[str, ...]
    tight_branches: tuple[str, ...]
    complexity: Complexity
    conn_method: str | None = field(default=None)

    @property
    def tight(self) -> bool:
        return bool(self.tight_branches)

    def summary(self) -> str:
        label = {
            "schaefer": "Schaefer",
            "tight_non_schaefer": "tight, non-Schaefer",
            "non_tight": "non-tight",
        }[self.verdict]
        branches = self.schaefer_branches if self.verdict == "schaefer" else self.tight_branches
        if branches:
            label += f" ({', '.join(branches)})"
        c = self.complexity
        return (f"{label}; Sat {c.sat}; st-Conn {c.stconn}; Conn {c.conn}; "
                f"diameter {c.diameter}")


def _predict(verdict: str, schaefer: tuple[str, ...], flags: tuple[RelationFlags, ...]):
    if verdict == "non_tight":
        return Complexity("NP-complete", "PSPACE-complete", "PSPACE-complete", "2^Ω(√n)"), None
    if verdict == "tight_non_schaefer":
        return Complexity("NP-complete", "P", "coNP-complete", "O(n)"), None
    method = None
    if "bijunctive" in schaefer:
        method = "bijunctive"
    elif "affine" in schaefer:
        method = "affine"
    elif "horn" in schaefer and all(f.componentwise_ihsb_minus for f in flags):
        method = "ihsb-"
    elif "dual_horn" in schaefer and all(f.componentwise_ihsb_plus for f in flags):
        method = "ihsb+"
    conn = "P" if method else "coNP (P or coNP-complete: open)"
    return Complexity("P", "P", conn, "O(n)"), method


def classify_set(rels: Iterable[Relation]) -> ClassificationReport:
    rels = list(rels)
    if not rels:
        raise ValueError("classify_set needs at least one relation")
    flags = tuple(relation_flags(r) for r in rels)
    schaefer = tuple(c for c in SCHAEFER_CLASSES if all(getattr(f, c) for f in flags))
    tight = tuple(c for c in TIGHT_CLASSES if all(getattr(f, c) for f in flags))
    if schaefer:
        verdict = "schaefer"
    elif tight:
        verdict = "tight_non_schaefer"
    else:
        verdict = "non_tight"
    complexity, method = _predict(verdict, schaefer, flags)
    return ClassificationReport(flags, verdict, schaefer, tight, complexity, method)


# .rels text format

_REL_LINE = re.compile(r"^relation\s+(\S+)\s+(\d+)\s*:\s*(.*)$")


def parse_relations(text: str) -> dict[str, Relation]:
    rels: dict[str, Relation] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _REL_LINE.match(line)
        if not m:
            raise ParseError(f"expected 'relation <name> <arity> : <tuples>', got {line!r}", lineno)
        rels_add(rels, m.group(1), int(m.group(2)), m.group(3).split(), lineno)
    return rels


def rels_add(rels: dict[str, Relation], name: str, arity: int, tuples: list[str], lineno: int) -> None:
    if name in rels:
        raise ParseError(f"duplicate relation name {name!r}", lineno)
    if not tuples:
        raise ParseError(f"relation {name!r} has no tuples", lineno)
    for t in tuples:
        if len(t) != arity or any(ch not in "01" for ch in t):
            raise ParseError(f"bad tuple {t!r} for arity {arity}", lineno)
    try:
        rels[name] = Relation.from_tuples(name, arity, tuples)
    except (ValueError, ArityCapExceeded) as exc:
        raise ParseError(str(exc), lineno) from exc


def format_relation(rel: Relation) -> str:
    return f"relation {rel.name} {rel.arity} : {' '.join(rel.tuples())}"


def serialize_relations(rels: Iterable[Relation]) -> str:
    return "".join(format_relation(r) + "\n" for r in rels)
