"""Exact construction and verification of symmetric Beltrami / Helmholtz vector fields."""

from .exact import ExactMatrix, ExactVector, QuadExt, galois_conj, quad_sign
from .trig import COS, SIN, SymFun, Term, TrigKind, VecField, normalize
from .calculus import check_lambent, curl, div, grad, laplacian
from .groups import FiniteGroup, GroupElement, conjugate_field, generate_closure, is_invariant
from .fields import (
    beltramize,
    cyclic_lift,
    dihedral_ansatz_field,
    harmonic,
    helmholtz_scalar,
    induce_icosahedral,
    octa_field,
    octa_precurl,
    solve_dihedral_constraints,
    tetra_field,
    tetra_precurl,
    dihedral_symmetric_field,
    dihedral_order0_field,
)

__version__ = "0.1.0"
