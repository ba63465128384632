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
# # The Jordan plane
#
# `xy = yx + y^2`.  Elements are kept in the normal form `y^a x^b`, with
# coefficients polynomial in a symbolic step `p`.

# %%
from qkz.jordan import (JORDAN, NCPoly, quantum, hilbert_dimension,
                        jordan_identity_sides, verify_jordan_identity)

x, y = NCPoly.x(JORDAN), NCPoly.y(JORDAN)
print(x * y)
print(x ** 2 * y)

# %% [markdown]
# The power `(x + p y)^k` factors into linear terms with shifted steps.  Both
# sides and a closed form agree for every k we try.

# %%
lhs, rhs, closed = jordan_identity_sides(3)
print(lhs)
print(lhs == rhs == closed)
print(all(verify_jordan_identity(k).passed for k in range(1, 8)))

# %% [markdown]
# Degree-r pieces have dimension r + 1, like a commutative polynomial ring in
# two variables, and so does the quantum plane.

# %%
print([hilbert_dimension(JORDAN, r) for r in range(8)])
print([hilbert_dimension(quantum(2), r) for r in range(8)])
