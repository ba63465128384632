# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Rational R-matrices from scratch
#
# Everything below is exact: entries are `Fraction`s, and an R-matrix is
# obtained by solving the linear intertwining equations of the Yangian
# action, not by plugging into a formula.

# %%
from fractions import Fraction

from qkz.glnrep import build_irrep, TensorModule, permutation_operator
from qkz.linalg import SparseMatrix
from qkz.rmatrix import compute_rmatrix, check_rmatrix_axioms
from qkz.exceptions import NonGenericParameter

V = build_irrep(2, (1, 0))
R = compute_rmatrix(V, V, 3).matrix
print(R.to_dense())

# %% [markdown]
# For two vector representations the result is Yang's matrix
# `(x - P) / (x - 1)`.  We can confirm that with the flip operator.

# %%
P = permutation_operator(TensorModule((V, V)), (1, 0)).matrix
x = Fraction(3)
yang = (SparseMatrix.identity(4).scale(x) - P).scale(1 / (x - 1))
print(R == yang)

# %% [markdown]
# `x = 1` is a pole.  The solver does not return garbage there; it says so.

# %%
try:
    compute_rmatrix(V, V, 1)
except NonGenericParameter as exc:
    print(type(exc).__name__, "->", exc)

# %% [markdown]
# Larger modules work the same way.  Here is the symmetric square of the
# gl(3) vector against the vector, and the Yang-Baxter equation on a mixed
# triple.  Symmetry and inversion are only requested for equal factors.

# %%
S2 = build_irrep(3, (2, 0, 0))
V3 = build_irrep(3, (1, 0, 0))
rep = check_rmatrix_axioms(S2, V3, V3, Fraction(7, 3), Fraction(-5, 2))
for line in rep.checks:
    print(line.line())
