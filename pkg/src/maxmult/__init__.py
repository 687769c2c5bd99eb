"""Exact tools for maximum-multiplicity strata, Rees algebras and transversality."""

from maxmult._kernel import BACKEND
from maxmult.blowup import (
    BlowupChart,
    blowup_charts,
    strict_transform,
    tower_transform,
    weak_transform,
)
from maxmult.errors import (
    BudgetExceeded,
    MaxMultError,
    NotPermissibleError,
    ParseError,
)
from maxmult.groebner import (
    GREVLEX,
    LEX,
    MonomialOrder,
    eliminate,
    gb_budget,
    groebner_basis,
    ideal_equal,
    ideal_membership,
    normal_form,
    saturate,
)
from maxmult.multiplicity import (
    hilbert_samuel_multiplicity,
    max_mult_stratum,
    presentation_algebra,
    stratum_contains,
    zariski_check,
)
from maxmult.points import CoordinatePrime, order_at_coordinate_prime
from maxmult.rees import (
    ReesAlgebra,
    algebra_equal_up_to,
    diff_saturate,
    eliminate_algebra,
    graded_piece,
    restrict_to_subscheme,
    sing_locus,
    tau_at_point,
)
from maxmult.ring import Ideal, Polynomial, RingSpec, hasse_derivative, parse_poly
from maxmult.tower import Tower
from maxmult.transversality import (
    condition_star,
    construct_extension,
    is_transversal,
    monomial_closure_membership,
    reduction_test,
    rees_integrality_test,
    strong_transversality_probe,
)

__version__ = "0.1.0"
