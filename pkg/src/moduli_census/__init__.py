"""Exact F_q-point counts for moduli of bundles over hyperelliptic curves.

Layers (each importable on its own):

  fields       arithmetic in F_{p^e} and extension towers
  polynomials  monic polynomials over F_q, irreducibles, Legendre symbol
  tables       vectorized Zech-log scan tables (performance core)
  curves       point counts, L-polynomials, Jacobian orders, zeta values
  hn           Harder-Narasimhan stratum masses and semistable masses
  counts       the headline integers: M_L(n,d), M^s(2,0), desingularization
  stats        family sampling, Delta_Z, theoretical moments, surveys
  cache        persistent L-polynomial cache (JSONL + CRC32)
  cli          command-line surface
"""

__version__ = "0.1.0"

from .counts import (
    count_desingularization,
    count_ml,
    count_ms20,
    grassmannian_count,
    kummer_strata,
    projective_count,
)
from .curves import HyperellipticCurve, LPolynomial, count_points, jacobian_order, l_polynomial, zeta_value
from .fields import FieldElement, FieldSpec, embed, make_field, quadratic_character
from .hn import CurveContext, beta, c_l, c_l_box_oracle
from .polynomials import MonicPoly, is_irreducible, is_squarefree, legendre_poly
from .stats import FamilySpec, char_fn_phi, delta_z, moment_h
from .survey import load_records, survey

__all__ = [
    "FieldElement",
    "FieldSpec",
    "embed",
    "make_field",
    "quadratic_character",
    "MonicPoly",
    "is_irreducible",
    "is_squarefree",
    "legendre_poly",
    "HyperellipticCurve",
    "LPolynomial",
    "count_points",
    "jacobian_order",
    "l_polynomial",
    "zeta_value",
    "CurveContext",
    "beta",
    "c_l",
    "c_l_box_oracle",
    "count_ml",
    "count_ms20",
    "count_desingularization",
    "kummer_strata",
    "projective_count",
    "grassmannian_count",
    "FamilySpec",
    "delta_z",
    "moment_h",
    "char_fn_phi",
    "survey",
    "load_records",
    "__version__",
]
