"""gatc: a kernel, symbolic calculus and CLI for generalized algebraic theories.

The public surface re-exports the pieces most library users need; the
modules themselves stay importable for the full API.
"""

from .deriv import (
    BASE,
    DEFAULT_FUEL,
    Fuel,
    Judgment,
    RuleSet,
    WITH_PI,
    check_judgment,
    eq_check,
    replay_eq_trace,
)
from .expr import Ap, App, BVar, Expr, Lam, Pi, Var, hypothesize, substitute, translate
from .gatcat import (
    Interpretation,
    check_interpretation,
    check_mutually_inverse,
    coequalizer,
    compose,
    coproduct,
    equivalent,
    identity,
    limit_presentation,
    pushout,
    reconstruct,
)
from .models import Model, check_colimit_duality, enumerate_models, reduct
from .poly import derive_unit, pi_square, poly_apply, poly_interp, verify_polynomial_axioms
from .theory import Declaration, Theory, check_theory, extend, mk_El, mk_Ty, stdlib

__version__ = "0.1.0"

__all__ = [
    "Ap",
    "App",
    "BASE",
    "BVar",
    "DEFAULT_FUEL",
    "Declaration",
    "Expr",
    "Fuel",
    "Interpretation",
    "Judgment",
    "Lam",
    "Model",
    "Pi",
    "RuleSet",
    "Theory",
    "Var",
    "WITH_PI",
    "check_colimit_duality",
    "check_interpretation",
    "check_judgment",
    "check_mutually_inverse",
    "check_theory",
    "coequalizer",
    "compose",
    "coproduct",
    "derive_unit",
    "enumerate_models",
    "eq_check",
    "equivalent",
    "extend",
    "hypothesize",
    "identity",
    "limit_presentation",
    "mk_El",
    "mk_Ty",
    "pi_square",
    "poly_apply",
    "poly_interp",
    "pushout",
    "reconstruct",
    "reduct",
    "replay_eq_trace",
    "stdlib",
    "substitute",
    "translate",
    "verify_polynomial_axioms",
]
