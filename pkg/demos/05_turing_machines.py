"""Compiling a space-bounded Turing machine into a CNF whose solution graph
connects start and accept exactly when the machine accepts.

Run with ``python demos/05_turing_machines.py`` (about a minute).
"""
# %%
from solgraph.hardness import (MICRO_MACHINES, accepts, all_configurations,
                               compile_tm, config_components, encode_configuration,
                               micro_machine, serialize_machine)
from solgraph.oracle import build_graph, oracle_st_conn

# %%
print(serialize_machine(micro_machine("accepter")))

# %% [markdown]
# Each machine is wrapped with a binary clock that restarts it when it runs too
# long, then compiled on a tape of two cells.  The formulas are too large for
# brute force, so the oracle enumerates them by search with propagation.

# %%
for name in MICRO_MACHINES:
    m = micro_machine(name)
    c = compile_tm(m, 2, clock_cells=2)
    g = build_graph(c.formula, strategy="search")
    st = oracle_st_conn(g, c.s, c.t).connected
    print(f"{name:9s} accepts={accepts(m, 2)!s:5s} vars={c.n:3d} solutions={len(g):5d} "
          f"components={g.component_count:3d} (configurations: {config_components(c.machine)}) "
          f"s~t={st}")

# %% [markdown]
# Solutions with no transition variable set are exactly the encoded
# configurations.

# %%
c = compile_tm(micro_machine("looper"), 2, clock_cells=1)
g = build_graph(c.formula, strategy="search")
tmask = sum(1 << (c.n - v) for v in c.transition_vars())
quiet = {a for a in g.solutions if not a & tmask}
confs = {encode_configuration(c, x) for x in all_configurations(c.machine)}
print(len(quiet), len(confs), quiet == confs)
