"""Modular differential equations ``y'' = Q(z) y`` on SL(2, Z).

Submodules: :mod:`qseries` (exact q-expansions), :mod:`cusp` (Frobenius at
the cusp), :mod:`elliptic` (expansions at rho and i), :mod:`sphere`
(Fuchsian equations on the sphere and the modular family),
:mod:`monodromy` (existence criteria), :mod:`cover` (permutation
certificates), :mod:`reproductions` (worked tables and examples).
"""

__version__ = "0.1.0"
