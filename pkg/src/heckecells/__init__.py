"""Exact Kazhdan-Lusztig cell machinery for affine Weyl groups of rank <= 2."""

__version__ = "0.1.0"

# Normalization bridge, stamped into every cache file and report:
# the canonical basis coefficients live in v*Z[v] off the diagonal and
# relate to the classical polynomials by p_{x,w}(v) = v^(l(w)-l(x)) P_{x,w}(v^-2).
CONVENTION_ID = "v1:Cs=Ts+v;TsTs=Te+(v^-1-v)Ts;p=v^(lw-lx)P(v^-2);gamma@v^-a"

# Isogeny convention recorded in output metadata: G simply connected,
# translations are the full coroot lattice, the dual group is adjoint.
ISOGENY = "G simply connected; dual group adjoint"
