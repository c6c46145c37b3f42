"""Faithful expressions: defining one relation from another without
changing how solutions connect.

Run with ``python demos/04_faithful_expressions.py``.
"""
# %%
import random

from solgraph.expressibility import (compose, express_s3, nae_clause_gadgets,
                                     verify_faithful, witness_table)
from solgraph.formulas import Formula
from solgraph.oracle import build_graph
from solgraph.relations import NAE, clause_relation

# %% [markdown]
# Two ways of writing a 3-clause with not-all-equal constraints.  Both define
# the right relation, but only the first keeps connectivity.

# %%
good, bad = nae_clause_gadgets()
print(verify_faithful(good))
print(verify_faithful(bad))

# %% [markdown]
# The full chain from {NAE}: 2-clauses, a distance-expanding relation, a path of
# length 4, then all four 3-clauses.

# %%
pipe = express_s3([NAE])
for name, e in pipe.gadgets.items():
    print(f"{name:5s} {e.formula.n:2d} vars  faithful={verify_faithful(e).ok}")

# %% [markdown]
# Witnesses of the gadget for (x1 or x2 or x3), one row per solution.

# %%
for x, ws in witness_table(pipe.three_clauses["D0"]).items():
    print(format(x, "03b"), [format(y, "05b") for y in ws])

# %% [markdown]
# Replacing each clause of a 3-CNF by its gadget keeps the number of
# components of the solution graph.

# %%
rng = random.Random(4)
psi = Formula.build(5, [(clause_relation(3, rng.randint(0, 3)), rng.sample(range(1, 6), 3))
                        for _ in range(3)])
phi = compose(psi, pipe.three_clauses)
print(psi.n, build_graph(psi).component_count, phi.n, build_graph(phi).component_count)

flat = pipe.flatten(pipe.three_clauses["D0"])
print(sorted({r.name for r in flat.formula.relations}), flat.formula.n, verify_faithful(flat).ok)
