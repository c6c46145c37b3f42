"""Brute-force ground truth on the solution graph G(f).

G(f) is the subgraph of the n-cube induced by the satisfying assignments of
``f``; two solutions are adjacent when they differ in exactly one variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse import csgraph

from .errors import CapExceeded, NotASolution
from .formulas import Formula, as_assignment, evaluate_many, is_const, to_bits

DEFAULT_CAP = 24
ALL_PAIRS_CAP = 1 << 16
_CHUNK = 1 << 20


def oracle_cap(cap: int | None = None) -> int:
    if cap is not None:
        return int(cap)
    env = os.environ.get("SOLGRAPH_ORACLE_CAP")
    return int(env) if env else DEFAULT_CAP


def _brute(f: Formula) -> list[int]:
    total = 1 << f.n
    out = []
    for lo in range(0, total, _CHUNK):
        block = np.arange(lo, min(total, lo + _CHUNK), dtype=np.int64)
        out.append(block[evaluate_many(f, block)])
    return [int(x) for x in np.concatenate(out)] if out else []


def _constraints(f: Formula):
    """Each clause as (distinct variables, allowed value tuples over them)."""
    out = []
    for c in f.clauses:
        rel = f.relations[c.rel]
        k = rel.arity
        vs = tuple(dict.fromkeys(a for a in c.args if not is_const(a)))
        allowed = set()
        for t in rel.members:
            bits = [(t >> (k - p)) & 1 for p in range(1, k + 1)]
            seen: dict[int, int] = {}
            ok = True
            for b, a in zip(bits, c.args):
                if is_const(a):
                    ok = b == int(a)
                else:
                    ok = seen.setdefault(a, b) == b
                if not ok:
                    break
            if ok:
                allowed.add(tuple(seen[v] for v in vs))
        out.append((vs, sorted(allowed)))
    return out


def _search(f: Formula) -> list[int]:
    """Depth-first enumeration with constraint propagation, variable 1 first.

    Trying 0 before 1 at every level yields solutions in ascending order.
    """
    n = f.n
    cons = _constraints(f)
    watch: list[list[int]] = [[] for _ in range(n + 1)]
    for ci, (vs, allowed) in enumerate(cons):
        if not allowed:
            return []
        for v in vs:
            watch[v].append(ci)
    val = [-1] * (n + 1)
    trail: list[int] = []

    def revise(ci: int, queue: list[int]) -> bool:
        vs, allowed = cons[ci]
        live = [t for t in allowed if all(val[u] < 0 or val[u] == b for u, b in zip(vs, t))]
        if not live:
            return False
        for k, u in enumerate(vs):
            if val[u] < 0:
                b = live[0][k]
                if all(t[k] == b for t in live):
                    val[u] = b
                    trail.append(u)
                    queue.append(u)
        return True

    def propagate(queue: list[int]) -> bool:
        while queue:
            v = queue.pop()
            for ci in watch[v]:
                if not revise(ci, queue):
                    return False
        return True

    queue: list[int] = []
    if not all(revise(ci, queue) for ci in range(len(cons))) or not propagate(queue):
        return []

    def first_free(v: int):
        while v <= n and val[v] >= 0:
            v += 1
        return v

    out = []
    stack = [(first_free(1), len(trail), 0)]
    while stack:
        v, mark, b = stack.pop()
        while len(trail) > mark:
            val[trail.pop()] = -1
        if v > n:
            a = 0
            for u in range(1, n + 1):
                a = (a << 1) | val[u]
            out.append(a)
            continue
        if b > 1:
            continue
        stack.append((v, mark, b + 1))
        val[v] = b
        trail.append(v)
        if propagate([v]):
            stack.append((first_free(v + 1), len(trail), 0))
    return out


def enumerate_solutions(f: Formula, cap: int | None = None, strategy: str = "brute") -> list[int]:
    """All satisfying assignments in ascending encoding order.

    ``brute`` tests every assignment and is capped at ``cap`` variables.
    ``search`` walks a pruned decision tree instead; it is meant for large
    formulas with few solutions and has no variable cap.
    """
    if strategy == "brute":
        limit = oracle_cap(cap)
        if f.n > limit:
            raise CapExceeded(f"{f.n} variables exceed the oracle cap {limit}")
        return _brute(f)
    if strategy == "search":
        return _search(f)
    raise ValueError(f"unknown strategy {strategy!r}")


@dataclass
class SolutionGraph:
    n: int
    solutions: list[int]
    component_id: np.ndarray
    component_count: int
    adjacency: csr_matrix

    @cached_property
    def index(self) -> dict[int, int]:
        return {a: i for i, a in enumerate(self.solutions)}

    def __len__(self) -> int:
        return len(self.solutions)

    def __contains__(self, a) -> bool:
        return as_assignment(a, self.n) in self.index

    def component_of(self, a) -> int:
        a = as_assignment(a, self.n)
        if a not in self.index:
            raise NotASolution(f"{to_bits(a, self.n)} is not a solution")
        return int(self.component_id[self.index[a]])

    def components(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.component_count)]
        for a, c in zip(self.solutions, self.component_id):
            out[c].append(a)
        return out

    def degrees(self) -> np.ndarray:
        return np.diff(self.adjacency.indptr)

    def neighbors(self, a) -> list[int]:
        i = self.index[as_assignment(a, self.n)]
        lo, hi = self.adjacency.indptr[i], self.adjacency.indptr[i + 1]
        return [self.solutions[j] for j in self.adjacency.indices[lo:hi]]

    def distance(self, a, b) -> int | None:
        r = oracle_st_conn(self, a, b)
        return len(r.path) - 1 if r.connected else None

    @property
    def connected(self) -> bool:
        return self.component_count == 1


def _edges(n: int, sols: list[int]) -> tuple[np.ndarray, np.ndarray]:
    if not sols:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    if n <= 62:
        arr = np.asarray(sols, dtype=np.int64)
        us, vs = [], []
        for b in range(n):
            nb = arr ^ (1 << b)
            up = nb > arr
            pos = np.searchsorted(arr, nb[up])
            pos_c = np.minimum(pos, len(arr) - 1)
            hit = arr[pos_c] == nb[up]
            src = np.nonzero(up)[0][hit]
            us.append(src)
            vs.append(pos_c[hit])
        return np.concatenate(us), np.concatenate(vs)
    index = {a: i for i, a in enumerate(sols)}
    us, vs = [], []
    for i, a in enumerate(sols):
        for b in range(n):
            w = a ^ (1 << b)
            if w > a and w in index:
                us.append(i)
                vs.append(index[w])
    return np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64)


def graph_from_solutions(n: int, sols: list[int]) -> SolutionGraph:
    sols = sorted(sols)
    m = len(sols)
    us, vs = _edges(n, sols)
    data = np.ones(2 * len(us), dtype=np.int8)
    adj = coo_matrix((data, (np.concatenate([us, vs]), np.concatenate([vs, us]))), shape=(m, m)).tocsr()
    if m == 0:
        return SolutionGraph(n, sols, np.zeros(0, dtype=np.int64), 0, adj)
    count, labels = csgraph.connected_components(adj, directed=False)
    # relabel so component ids follow the smallest member (solutions are sorted)
    _, first = np.unique(labels, return_index=True)
    order = np.argsort(first)
    remap = np.empty(count, dtype=np.int64)
    remap[order] = np.arange(count)
    return SolutionGraph(n, sols, remap[labels], int(count), adj)


def build_graph(f: Formula, cap: int | None = None, strategy: str = "brute") -> SolutionGraph:
    return graph_from_solutions(f.n, enumerate_solutions(f, cap, strategy))


@dataclass(frozen=True)
class StConn:
    connected: bool
    path: list[int] | None


def oracle_st_conn(g: SolutionGraph, s, t) -> StConn:
    s, t = as_assignment(s, g.n), as_assignment(t, g.n)
    for a in (s, t):
        if a not in g.index:
            raise NotASolution(f"{to_bits(a, g.n)} is not a solution")
    if s == t:
        return StConn(True, [s])
    i, j = g.index[s], g.index[t]
    if g.component_id[i] != g.component_id[j]:
        return StConn(False, None)
    _, pred = csgraph.breadth_first_order(g.adjacency, i, directed=False, return_predecessors=True)
    path = [j]
    while path[-1] != i:
        path.append(int(pred[path[-1]]))
    return StConn(True, [g.solutions[k] for k in reversed(path)])


def _bfs_dist(adj: csr_matrix, sources) -> np.ndarray:
    return csgraph.shortest_path(adj, directed=False, unweighted=True, indices=sources)


def _component_diameter(adj: csr_matrix) -> int:
    """Exact diameter of a connected unweighted graph (iFUB, double-sweep root)."""
    m = adj.shape[0]
    if m <= 2:
        return m - 1
    d0 = _bfs_dist(adj, [0])[0]
    a = int(np.argmax(d0))
    da = _bfs_dist(adj, [a])[0]
    b = int(np.argmax(da))
    lb = int(da[b])
    # root at the middle of the a-b path
    db = _bfs_dist(adj, [b])[0]
    half = lb // 2
    mids = np.nonzero((da == half) & (db == lb - half))[0]
    r = int(mids[0])
    dr = _bfs_dist(adj, [r])[0]
    i = int(dr.max())
    lb = max(lb, i)
    ub = 2 * i
    while ub > lb and i > 0:
        fringe = np.nonzero(dr == i)[0]
        best = 0
        for lo in range(0, len(fringe), 256):
            dist = _bfs_dist(adj, fringe[lo:lo + 256])
            best = max(best, int(dist.max()))
        lb = max(lb, best)
        if lb > 2 * (i - 1):
            return lb
        ub = 2 * (i - 1)
        i -= 1
    return lb


BITSET_CAP = 1 << 14


def _bitset_diameter(g: "SolutionGraph") -> int:
    """Largest eccentricity by growing every ball at once.

    Row i holds the set of solutions within distance d of solution i as packed
    bits; one round ORs in the rows of the hypercube neighbours.  Memory is
    m*m/8 bytes, so this is only used up to BITSET_CAP solutions.
    """
    m = len(g)
    sols = np.asarray(g.solutions, dtype=np.int64)
    words = (m + 63) // 64
    reach = np.zeros((m, words), dtype=np.uint64)
    ids = np.arange(m)
    reach[ids, ids // 64] = np.left_shift(np.uint64(1), (ids % 64).astype(np.uint64))
    moves = []
    for b in range(g.n):
        other = sols ^ (1 << b)
        j = np.minimum(np.searchsorted(sols, other), m - 1)
        ok = sols[j] == other
        if ok.any():
            moves.append((np.nonzero(ok)[0], j[ok]))
    rounds = 0
    while True:
        new = reach.copy()
        for src, dst in moves:
            new[src] |= reach[dst]
        if np.array_equal(new, reach):
            return rounds
        reach = new
        rounds += 1


def _all_pairs_diameter(adj: csr_matrix) -> int:
    m = adj.shape[0]
    best = 0
    for lo in range(0, m, 256):
        dist = _bfs_dist(adj, np.arange(lo, min(m, lo + 256)))
        finite = dist[np.isfinite(dist)]
        if finite.size:
            best = max(best, int(finite.max()))
    return best


def oracle_diameter(g: SolutionGraph, exact_all_pairs: bool = False) -> int:
    """Largest distance between two solutions in the same component."""
    if len(g) == 0:
        raise ValueError("diameter of an empty graph is undefined")
    if exact_all_pairs:
        if len(g) > ALL_PAIRS_CAP:
            raise CapExceeded(f"all-pairs diameter is capped at {ALL_PAIRS_CAP} solutions")
        return _all_pairs_diameter(g.adjacency)
    # a coordinate that flips freely everywhere splits off a K2 factor, and
    # diameters of Cartesian products add up
    sols = np.asarray(g.solutions, dtype=np.int64)
    free = 0
    for b in range(g.n):
        other = sols ^ (1 << b)
        j = np.minimum(np.searchsorted(sols, other), len(sols) - 1)
        if (sols[j] == other).all():
            free |= 1 << b
    if free:
        rest = np.unique(sols & ~free).tolist()
        return oracle_diameter(graph_from_solutions(g.n, rest)) + bin(free).count("1")
    if len(g) <= BITSET_CAP:
        return _bitset_diameter(g)
    sizes = np.bincount(g.component_id, minlength=g.component_count)
    best = int(sizes.max() > 1)
    order = np.argsort(g.component_id, kind="stable")
    bounds = np.concatenate([[0], np.cumsum(sizes)])
    for c in np.nonzero(sizes > 2)[0]:
        idx = order[bounds[c]:bounds[c + 1]]
        sub = g.adjacency[idx][:, idx]
        best = max(best, _component_diameter(sub))
    return best


def is_simple_path(g: SolutionGraph) -> bool:
    m = len(g)
    if m == 0 or g.component_count != 1:
        return False
    if m == 1:
        return True
    deg = g.degrees()
    return int((deg == 1).sum()) == 2 and int((deg == 2).sum()) == m - 2


def to_dot(g: SolutionGraph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for a, c in zip(g.solutions, g.component_id):
        lines.append(f'  "{to_bits(a, g.n)}" [component={int(c)}];')
    coo = g.adjacency.tocoo()
    for i, j in zip(coo.row, coo.col):
        if i < j:
            lines.append(f'  "{to_bits(g.solutions[i], g.n)}" -- "{to_bits(g.solutions[j], g.n)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
