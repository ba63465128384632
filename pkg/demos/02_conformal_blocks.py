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
# # qKZ operators and quantized conformal blocks
#
# Four gl(2) vector representations at integer points.  In the weight space
# `l = 2` the step `p = -3` is resonant with `k = 2`.

# %%
from qkz.blocks import (QkzContext, conformal_blocks, resonance_k, qkz_operator,
                        verify_invariance, verify_permutation, check_compatibility)
from qkz.glnrep import singular_space_l

ctx = QkzContext.of(2, [(1, 0)] * 4, (0, 13, 29, 47), -3)
print(resonance_k(ctx, 2))

# %% [markdown]
# The singular weight space is two dimensional; the kernel of `e(z)^k` cuts
# it down.

# %%
sing = singular_space_l(ctx.t, 2)
C = conformal_blocks(ctx, 2)
print("singular:", sing.dim, " blocks:", C.dim)
for v in C.basis:
    print(dict(v))

# %% [markdown]
# The qKZ operators move blocks at z to blocks at the shifted point, and
# `P R` moves them to the permuted point.

# %%
for i in range(1, 5):
    for c in verify_invariance(ctx, 2, i).checks:
        print(c.line())
for i in range(1, 4):
    for c in verify_permutation(ctx, 2, i).checks:
        print(c.line())

# %% [markdown]
# Finally, the operators form a flat connection.

# %%
print(all(c.passed for c in check_compatibility(ctx).checks))
print(qkz_operator(ctx, 1).matrix.rows)
