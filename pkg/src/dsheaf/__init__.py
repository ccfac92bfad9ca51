"""Exact invariants of modular curves of D-elliptic sheaves over F_q(T)."""

from .errors import BudgetExceeded, ContractViolation, DomainError, DSheafError, InvariantViolation
from .field_poly import FieldSpec, Poly, gf, is_irreducible, enumerate_monic_irreducibles
from .places import Place, PlaceSet, artin_legendre_constant_ext, count_places_of_degree, enumerate_places
from .invariants import (
    Discriminant,
    InvariantReport,
    LevelIdeal,
    build_report,
    chi_bare,
    chi_level,
    class_number,
    classify,
    covering_degree,
    extra_autos,
    genus,
    genus_artin_legendre_form,
    gl2_order,
    mass,
    optimality_scan,
    riemann_hurwitz_residual,
    supersingular_count,
    wp,
)
from .shimura_compare import RationalDiscriminant, legendre_q3, legendre_qi, shimura_genus, zeta_constants

__version__ = "0.1.0"
