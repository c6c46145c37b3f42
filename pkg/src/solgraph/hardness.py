"""Hard instances: exponentially long induced paths and a Turing machine reduction."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from itertools import combinations

from .errors import NotAConfiguration, NotASolution, OddN, ParseError, TooLarge
from .expressibility import split_clause
from .formulas import Builder, Formula, cnf_formula, evaluate, var_bit

# Long paths


def long_path_clauses(n: int) -> list[tuple[int, ...]]:
    if n < 2 or n % 2:
        raise OddN(f"n must be even and >= 2, got {n}")
    clauses: list[tuple[int, ...]] = [(-1, 2)]
    for m in range(4, n + 1, 2):
        a, b = m - 1, m
        clauses.append((-a, b))
        clauses.extend((a, -b, -i) for i in range(1, m - 3))
        clauses.extend((a, -b, i) for i in (m - 3, m - 2))
    return clauses


def gen_long_path(n: int) -> Formula:
    """3-CNF on n variables whose solution graph is a path with 2^(n/2+1)-1 vertices."""
    return cnf_formula(n, long_path_clauses(n))


def long_path_endpoints(n: int) -> tuple[int, int]:
    """The two ends of the path: all zeros and 0..011."""
    if n < 2 or n % 2:
        raise OddN(f"n must be even and >= 2, got {n}")
    return 0, 0b11


# Turing machines


@dataclass(frozen=True)
class TMachine:
    states: tuple[str, ...]  # q0, q_accept, q_reject, then the rest
    alphabet: tuple[str, ...]  # blank first
    delta: dict  # (q, a) -> (q', b, 'L' | 'R')

    def __post_init__(self):
        if len(self.states) < 3 or len(set(self.states)) != len(self.states):
            raise ValueError("need distinct states q0 qa qr ...")
        if not self.alphabet or len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("need a non-empty alphabet, blank first")
        for q in self.working:
            for a in self.alphabet:
                if (q, a) not in self.delta:
                    raise ValueError(f"delta undefined on ({q}, {a})")
        for (q, a), (q2, b, d) in self.delta.items():
            if q not in self.working or a not in self.alphabet:
                raise ValueError(f"delta defined on halting or unknown ({q}, {a})")
            if q2 not in self.states or b not in self.alphabet or d not in "LR":
                raise ValueError(f"bad transition ({q}, {a}) -> ({q2}, {b}, {d})")

    @property
    def q0(self):
        return self.states[0]

    @property
    def accept(self):
        return self.states[1]

    @property
    def reject(self):
        return self.states[2]

    @property
    def blank(self):
        return self.alphabet[0]

    @property
    def working(self) -> tuple[str, ...]:
        return (self.states[0],) + self.states[3:]


def parse_machine(text: str) -> TMachine:
    states = alphabet = None
    delta = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "states":
            states = tuple(rest)
        elif head == "alphabet":
            alphabet = tuple(rest)
        elif head == "delta":
            m = re.fullmatch(r"(\S+)\s+(\S+)\s*->\s*(\S+)\s+(\S+)\s+([LR])", " ".join(rest))
            if not m:
                raise ParseError("expected 'delta <q> <sym> -> <q'> <sym'> <L|R>'", lineno)
            q, a, q2, b, d = m.groups()
            if (q, a) in delta:
                raise ParseError(f"duplicate transition for ({q}, {a})", lineno)
            delta[(q, a)] = (q2, b, d)
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    if states is None or alphabet is None:
        raise ParseError("machine needs 'states' and 'alphabet' lines")
    try:
        return TMachine(states, alphabet, delta)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def serialize_machine(m: TMachine) -> str:
    lines = ["states " + " ".join(m.states), "alphabet " + " ".join(m.alphabet)]
    for (q, a), (q2, b, d) in m.delta.items():
        lines.append(f"delta {q} {a} -> {q2} {b} {d}")
    return "\n".join(lines) + "\n"


# The modified machine M'. Every state works on one tape.  A rule gives the
# symbol written, the direction, the next state, and the state taken instead
# when the move would leave the tape (the head then stays put).


@dataclass(frozen=True)
class Rule:
    write: str
    move: str
    next: str
    at_edge: str


@dataclass(frozen=True)
class ClockedMachine:
    source: TMachine
    cells: int
    clock_cells: int
    states: tuple[str, ...]
    tape_of: dict  # state -> "main" | "clock"
    rules: dict  # (state, symbol) -> Rule

    @property
    def initial_state(self) -> str:
        return f"inc:{self.source.q0}"

    @property
    def accept_state(self) -> str:
        return "acc:halt"

    def symbols(self, tape: str) -> tuple[str, ...]:
        return self.source.alphabet if tape == "main" else ("0", "1")

    def step(self, config: "Configuration") -> "Configuration":
        tape = self.tape_of[config.state]
        cells = list(config.tape if tape == "main" else config.clock)
        head = config.head if tape == "main" else config.clock_head
        rule = self.rules[(config.state, cells[head - 1])]
        cells[head - 1] = rule.write
        size = len(cells)
        nh = head + (1 if rule.move == "R" else -1)
        if 1 <= nh <= size:
            state = rule.next
        else:
            nh, state = head, rule.at_edge
        if tape == "main":
            return Configuration(state, nh, tuple(cells), config.clock_head, config.clock)
        return Configuration(state, config.head, config.tape, nh, tuple(cells))


def clock_cells_for(m: TMachine, n: int) -> int:
    return math.ceil(math.log2(n * len(m.states) * len(m.alphabet) ** n)) + 1


def clocked_machine(m: TMachine, n: int, clock_cells: int | None = None) -> ClockedMachine:
    nc = clock_cells if clock_cells is not None else clock_cells_for(m, n)
    if n < 1 or nc < 1:
        raise ValueError("tape lengths must be positive")
    tape_of: dict[str, str] = {}
    rules: dict[tuple[str, str], Rule] = {}
    blank = m.blank
    reset = "rej:m_right"

    def after(q2: str) -> str:
        if q2 == m.accept:
            return "acc:m_right"
        if q2 == m.reject:
            return reset
        return f"inc:{q2}"

    for q in m.working:
        inc, ret, main = f"inc:{q}", f"ret:{q}", f"main:{q}"
        tape_of.update({inc: "clock", ret: "clock", main: "main"})
        # binary increment, least significant bit in cell 1; carry out = overflow
        rules[(inc, "1")] = Rule("0", "R", inc, reset)
        rules[(inc, "0")] = Rule("1", "L", ret, main)
        for b in "01":
            rules[(ret, b)] = Rule(b, "L", ret, main)
        for a in m.alphabet:
            q2, b, d = m.delta[(q, a)]
            rules[(main, a)] = Rule(b, d, after(q2), reset)
    for kind, last in (("rej", f"inc:{m.q0}"), ("acc", "acc:halt")):
        tape_of.update({f"{kind}:m_right": "main", f"{kind}:m_erase": "main",
                        f"{kind}:c_right": "clock", f"{kind}:c_erase": "clock"})
        for a in m.alphabet:
            rules[(f"{kind}:m_right", a)] = Rule(a, "R", f"{kind}:m_right", f"{kind}:m_erase")
            rules[(f"{kind}:m_erase", a)] = Rule(blank, "L", f"{kind}:m_erase", f"{kind}:c_right")
        for b in "01":
            rules[(f"{kind}:c_right", b)] = Rule(b, "R", f"{kind}:c_right", f"{kind}:c_erase")
            rules[(f"{kind}:c_erase", b)] = Rule("0", "L", f"{kind}:c_erase", last)
    # the standard accepting configuration sits on a cycle of erase sweeps
    tape_of["acc:halt"] = "main"
    for a in m.alphabet:
        rules[("acc:halt", a)] = Rule(a, "L", "acc:m_right", "acc:m_right")
    states = tuple(tape_of)
    return ClockedMachine(m, n, nc, states, tape_of, rules)


@dataclass(frozen=True)
class Configuration:
    state: str
    head: int
    tape: tuple[str, ...]
    clock_head: int
    clock: tuple[str, ...]


@dataclass(frozen=True)
class Transition:
    tape: str
    pos: int
    state: str
    symbol: str
    off: tuple[int, ...]
    on: tuple[int, ...]
    guard: tuple[int, ...]
    var: int


@dataclass
class CompiledTM:
    formula: Formula
    s: int
    t: int
    machine: ClockedMachine
    names: list[str]
    var: dict  # name -> id
    transitions: list[Transition]
    chains: list = field(default_factory=list)  # (literals, witnesses) of split clauses

    def __iter__(self):
        return iter((self.formula, self.s, self.t))

    @property
    def n(self) -> int:
        return self.formula.n

    def transition_vars(self) -> list[int]:
        return [tr.var for tr in self.transitions]

    def layout(self) -> list[str]:
        return [f"x{i} = {name}" for i, name in enumerate(self.names, 1)]


DEFAULT_VARIABLE_CAP = 200_000


def compile_tm(m: TMachine, n: int, clock_cells: int | None = None,
               max_vars: int = DEFAULT_VARIABLE_CAP) -> CompiledTM:
    """3-CNF whose solution graph is connected iff ``m`` accepts the blank n-cell input.

    ``clock_cells`` overrides the counter width (testing at tiny scale).
    """
    cm = clocked_machine(m, n, clock_cells)
    nc = cm.clock_cells
    G = m.alphabet
    B = Builder()
    x = {(i, a): B.var(f"x({i},{a})") for i in range(1, n + 1) for a in G}
    y = {i: B.var(f"y({i})") for i in range(1, n + 1)}
    xc = {(j, b): B.var(f"xc({j},{b})") for j in range(1, nc + 1) for b in "01"}
    yc = {j: B.var(f"yc({j})") for j in range(1, nc + 1)}
    z = {q: B.var(f"z({q})") for q in cm.states}

    def cell(tape, i, a):
        return x[(i, a)] if tape == "main" else xc[(i, a)]

    def head(tape, i):
        return y[i] if tape == "main" else yc[i]

    transitions: list[Transition] = []
    for q in cm.states:
        tape = cm.tape_of[q]
        size = n if tape == "main" else nc
        for i in range(1, size + 1):
            for a in cm.symbols(tape):
                rule = cm.rules[(q, a)]
                ni = i + (1 if rule.move == "R" else -1)
                q2 = rule.next if 1 <= ni <= size else rule.at_edge
                if not 1 <= ni <= size:
                    ni = i
                off, on, guard = [], [], []
                for old, new in ((cell(tape, i, a), cell(tape, i, rule.write)),
                                 (head(tape, i), head(tape, ni)), (z[q], z[q2])):
                    if old == new:
                        guard.append(old)
                    else:
                        off.append(old)
                        on.append(new)
                tv = B.var(f"t({tape},{i},{q},{a})")
                transitions.append(Transition(tape, i, q, a, tuple(off), tuple(on), tuple(guard), tv))
    if B.n > max_vars:
        raise TooLarge(f"{B.n} variables before clause reduction exceed {max_vars}")

    # which transitions relax each exclusion pair
    relax: dict[frozenset, list[int]] = {}
    for tr in transitions:
        for u, w in zip(tr.off, tr.on):
            relax.setdefault(frozenset((u, w)), []).append(tr.var)

    wide: list[list[int]] = []
    # every cell holds a symbol, some head position, some state
    for i in range(1, n + 1):
        wide.append([x[(i, a)] for a in G])
    for j in range(1, nc + 1):
        wide.append([xc[(j, b)] for b in "01"])
    wide.append([y[i] for i in range(1, n + 1)])
    wide.append([yc[j] for j in range(1, nc + 1)])
    wide.append([z[q] for q in cm.states])
    # at most one of each group, relaxed by the transitions that swap the pair
    groups = [[x[(i, a)] for a in G] for i in range(1, n + 1)]
    groups += [[xc[(j, b)] for b in "01"] for j in range(1, nc + 1)]
    groups += [[y[i] for i in range(1, n + 1)], [yc[j] for j in range(1, nc + 1)], [z[q] for q in cm.states]]
    for grp in groups:
        for u, w in combinations(grp, 2):
            wide.append([-u, -w] + relax.get(frozenset((u, w)), []))
    tvars = [tr.var for tr in transitions]
    for u, w in combinations(tvars, 2):
        wide.append([-u, -w])
    # while t is set, the changed variables move along a single chain
    for tr in transitions:
        t = tr.var
        for g in tr.guard:
            wide.append([-t, g])
        for k in range(len(tr.on) - 1):
            wide.append([-t, -tr.on[k + 1], tr.on[k]])
        for k in range(len(tr.off) - 1):
            wide.append([-t, -tr.off[k], tr.off[k + 1]])
        wide.append([-t, tr.off[0], tr.on[-1]])

    chains = []
    final: list[list[int]] = []
    for lits in wide:
        if len(lits) <= 3:
            final.append(lits)
            continue
        start = B.n

        def fresh():
            return B.var(f"w{B.n - start + 1}@{len(chains)}")

        parts = split_clause(lits, fresh)
        chains.append((tuple(lits), tuple(range(start + 1, B.n + 1))))
        final.extend(parts)
        if B.n > max_vars:
            raise TooLarge(f"{B.n} variables exceed {max_vars}")
    f = cnf_formula(B.n, final)
    out = CompiledTM(f, 0, 0, cm, list(B.names), dict(B.index), transitions, chains)
    out.s = encode_configuration(out, initial_configuration(cm))
    out.t = encode_configuration(out, accepting_configuration(cm))
    return out


def initial_configuration(cm: ClockedMachine) -> Configuration:
    return Configuration(cm.initial_state, 1, (cm.source.blank,) * cm.cells, 1, ("0",) * cm.clock_cells)


def accepting_configuration(cm: ClockedMachine) -> Configuration:
    return Configuration(cm.accept_state, 1, (cm.source.blank,) * cm.cells, 1, ("0",) * cm.clock_cells)


def all_configurations(cm: ClockedMachine):
    from itertools import product

    for q in cm.states:
        for h in range(1, cm.cells + 1):
            for tape in product(cm.source.alphabet, repeat=cm.cells):
                for ch in range(1, cm.clock_cells + 1):
                    for clock in product("01", repeat=cm.clock_cells):
                        yield Configuration(q, h, tape, ch, clock)


def encode_configuration(c: CompiledTM, conf: Configuration) -> int:
    """Assignment of a configuration: transitions 0, split witnesses minimal."""
    n = c.n
    val = {}
    cm = c.machine
    for i, a in enumerate(conf.tape, 1):
        for sym in cm.source.alphabet:
            val[c.var[f"x({i},{sym})"]] = int(sym == a)
        val[c.var[f"y({i})"]] = int(i == conf.head)
    for j, b in enumerate(conf.clock, 1):
        for sym in "01":
            val[c.var[f"xc({j},{sym})"]] = int(sym == b)
        val[c.var[f"yc({j})"]] = int(j == conf.clock_head)
    if conf.state not in cm.tape_of:
        raise ValueError(f"unknown state {conf.state!r}")
    for q in cm.states:
        val[c.var[f"z({q})"]] = int(q == conf.state)
    for tr in c.transitions:
        val[tr.var] = 0
    for lits, ws in c.chains:
        # witness k is forced to 1 exactly when literals 1..k+1 are all false
        dead = all(not _lit(val, l) for l in lits[:2])
        for k, w in enumerate(ws):
            if k > 0:
                dead = dead and not _lit(val, lits[k + 1])
            val[w] = int(dead)
    a = 0
    for v, b in val.items():
        if b:
            a |= var_bit(v, n)
    return a


def _lit(val, l):
    return val[abs(l)] == (1 if l > 0 else 0)


def decode_configuration(c: CompiledTM, a: int) -> Configuration:
    f = c.formula
    if not evaluate(f, a):
        raise NotASolution("assignment does not satisfy the compiled formula")
    n = f.n

    def bit(name):
        return (a >> (n - c.var[name])) & 1

    if any((a >> (n - tr.var)) & 1 for tr in c.transitions):
        raise NotAConfiguration("a transition variable is set")
    cm = c.machine
    tape = tuple(next(s for s in cm.source.alphabet if bit(f"x({i},{s})")) for i in range(1, cm.cells + 1))
    head = next(i for i in range(1, cm.cells + 1) if bit(f"y({i})"))
    clock = tuple(next(s for s in "01" if bit(f"xc({j},{s})")) for j in range(1, cm.clock_cells + 1))
    chead = next(j for j in range(1, cm.clock_cells + 1) if bit(f"yc({j})"))
    state = next(q for q in cm.states if bit(f"z({q})"))
    return Configuration(state, head, tape, chead, clock)


def config_components(cm: ClockedMachine) -> int:
    """Weak components of the configuration graph of M' (every node has out-degree 1)."""
    import networkx as nx

    g = nx.Graph()
    for conf in all_configurations(cm):
        g.add_edge(conf, cm.step(conf))
    return nx.number_connected_components(g)


def accepts(m: TMachine, n: int, limit: int | None = None) -> bool:
    """Direct simulation of ``m`` on n blanks, rejecting on leaving the tape or looping."""
    seen = set()
    q, h, tape = m.q0, 1, [m.blank] * n
    steps = 0
    while q not in (m.accept, m.reject):
        key = (q, h, tuple(tape))
        if key in seen:
            return False
        seen.add(key)
        q2, b, d = m.delta[(q, tape[h - 1])]
        tape[h - 1] = b
        h += 1 if d == "R" else -1
        if not 1 <= h <= n:
            return False
        q = q2
        steps += 1
        if limit is not None and steps > limit:
            return False
    return q == m.accept


MICRO_MACHINES = {
    "accepter": "states q0 qa qr\nalphabet _\ndelta q0 _ -> qa _ R\n",
    "rejecter": "states q0 qa qr\nalphabet _\ndelta q0 _ -> qr _ R\n",
    "boundary": "states q0 qa qr\nalphabet _\ndelta q0 _ -> q0 _ L\n",
    "looper": "states q0 qa qr q1\nalphabet _\ndelta q0 _ -> q1 _ R\ndelta q1 _ -> q0 _ L\n",
}


def micro_machine(name: str) -> TMachine:
    return parse_machine(MICRO_MACHINES[name])
