"""Where does a set of Boolean relations sit in the connectivity landscape?

Run with ``python demos/01_classify_relations.py``.
"""
# %%
from solgraph.relations import M, NAE, NAND, OR, R13, classify_set, relation_flags
from solgraph.formulas import clausal_form, NotExpressible
from solgraph.sampling import all_relations

# %% [markdown]
# A relation is a set of 0/1 tuples.  Its flags record closure properties
# (majority, AND, OR, XOR, ...) and the two "free" properties used for tightness.

# %%
for rel in (OR, NAND, R13, M, NAE):
    f = relation_flags(rel)
    print(f"{rel.name:5s} {' '.join(rel.tuples())}")
    print(f"      bijunctive={f.bijunctive} horn={f.horn} dual_horn={f.dual_horn} affine={f.affine}"
          f" or_free={f.or_free} nand_free={f.nand_free} cw_bijunctive={f.componentwise_bijunctive}")

# %% [markdown]
# Classifying whole sets gives the complexity of satisfiability, st-connectivity,
# connectivity and the worst-case diameter of the solution graph.

# %%
for rels in ([OR, NAND], [R13], [NAE], [R13, NAND]):
    report = classify_set(rels)
    print(f"{{{', '.join(r.name for r in rels)}}}: {report.summary()}")

# %% [markdown]
# Closure properties are exactly what makes a clause representation possible.

# %%
print(clausal_form(NAND, "horn"))
print(clausal_form(M, "two_cnf") is NotExpressible)

# %% [markdown]
# Counting the verdicts over every non-empty ternary relation.

# %%
counts = {}
for rel in all_relations(3):
    v = classify_set([rel]).verdict
    counts[v] = counts.get(v, 0) + 1
print(counts)
