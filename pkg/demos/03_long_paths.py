"""Non-tight formulas can have solution graphs of exponential diameter.

Run with ``python demos/03_long_paths.py``.
"""
# %%
from solgraph.formulas import to_bits
from solgraph.hardness import gen_long_path, long_path_endpoints
from solgraph.oracle import build_graph, is_simple_path, oracle_diameter, oracle_st_conn

# %% [markdown]
# The family adds two variables at a time and doubles the length of the path.

# %%
for n in range(2, 15, 2):
    g = build_graph(gen_long_path(n))
    print(f"n={n:2d}  solutions={len(g):4d}  simple path={is_simple_path(g)}  "
          f"diameter={oracle_diameter(g):4d}  2^(n/2)={2 ** (n // 2)}")

# %% [markdown]
# The whole path for n=6.

# %%
n = 6
g = build_graph(gen_long_path(n))
s, t = long_path_endpoints(n)
path = oracle_st_conn(g, s, t).path
print(" ".join(to_bits(a, n) for a in path))
