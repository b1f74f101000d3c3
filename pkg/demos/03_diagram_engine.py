"""Under the hood: the decision-diagram engine.

Managers own a fixed variable order, a unique table, and operation caches;
equal functions are equal node references. This is what makes minimal
attacks and metric sweeps fast on shared (DAG) trees.
"""

from atquery import BddManager
from atquery.compiler import interleaved_variables

mgr = BddManager(["x", "y", "z"])
x, y, z = mgr.var("x"), mgr.var("y"), mgr.var("z")

# canonicity: same function, same node
a = (x & y) | (x & z)
b = x & (y | z)
print("distributed == factored:", a == b)
print("nodes in the diagram:", a.node_count())

# tautologies collapse to the true terminal
print("excluded middle is true:", (x | ~x).is_true)

# restrict fixes a variable, exists abstracts it away
print("restrict x=1 of x&y:", (x & y).restrict("x", 1) == y)
print("exists y of x&y:", (x & y).exists({"y"}) == x)

# enumeration expands don't-cares to total assignments
print("allsat(x | y):", sorted(sorted(s) for s in (x | y).allsat(["x", "y"])))

# renaming moves a function onto fresh variables (order-safely)
mgr2 = BddManager(interleaved_variables(["p", "q"]))
p, q = mgr2.var("p"), mgr2.var("q")
primed = (p & q).rename({"p": "p'", "q": "q'"})
print("renamed support:", sorted(primed.support()))

# the strict-subset constraint that powers minimal-attack computation:
# true exactly when the primed assignment is strictly below the unprimed
c = mgr2.subset_constraint(["p'", "q'"], ["p", "q"])
sats = c.allsat(["p", "q", "p'", "q'"])
print("strict-subset rows (of 16):", len(sats))

# DOT dump for debugging (solid = high edge, dashed = low edge)
print("\n" + (x & (y | z)).to_dot())
