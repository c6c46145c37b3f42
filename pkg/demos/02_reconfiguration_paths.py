"""Polynomial st-connectivity and connectivity for tight formulas, checked
against brute-force solution graphs.

Run with ``python demos/02_reconfiguration_paths.py``.
"""
# %%
import random

from solgraph.formulas import Formula, cnf_formula, to_bits
from solgraph.oracle import build_graph, oracle_diameter, oracle_st_conn
from solgraph.relations import NAND, R13
from solgraph.sampling import pool, random_formula
from solgraph.tight import conn_poly, stconn_tight, tight_branches

# %% [markdown]
# One-in-three has three isolated solutions, so 100 and 010 are not connected.

# %%
f = Formula.build(3, [(R13, (1, 2, 3))])
d = stconn_tight(f, None, "100", "010")
print(d.answer, d.method)

# %% [markdown]
# A chain of NANDs is OR-free.  Walking both endpoints down to their minimal
# solutions gives a path of length at most 2n.

# %%
f = Formula.build(4, [(NAND, (1, 2)), (NAND, (2, 3)), (NAND, (3, 4))])
print(tight_branches(f))
d = stconn_tight(f, "or_free", "1010", "0101")
print(" -> ".join(to_bits(a, 4) for a in d.path))

# %% [markdown]
# Connectivity of a 2-CNF: x1 <-> x2 has exactly two solutions, far apart.

# %%
d = conn_poly(cnf_formula(2, [(1, -2), (-1, 2)]), "bijunctive")
print(d.answer, [to_bits(a, 2) for a in d.certificate])

# %% [markdown]
# Random tight formulas: the deciders agree with the oracle, and diameters stay
# within 2n.

# %%
rng = random.Random(0)
rels = pool("nand_free")
agree = total = worst = 0
while total < 200:
    n = rng.randint(3, 10)
    f = random_formula(rng, n, rels, rng.randint(1, 2 * n))
    if "nand_free" not in tight_branches(f):
        continue
    g = build_graph(f)
    if not len(g):
        continue
    s, t = rng.choice(g.solutions), rng.choice(g.solutions)
    total += 1
    agree += stconn_tight(f, "nand_free", s, t).answer == oracle_st_conn(g, s, t).connected
    worst = max(worst, oracle_diameter(g) / (2 * n))
print(f"{agree}/{total} agree; largest diameter / 2n = {worst:.2f}")
