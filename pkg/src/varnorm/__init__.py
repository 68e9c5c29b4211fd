"""Variable-exponent norms, K-functionals, and operator diagnostics."""

from ._kernels import BACKEND
from .core import (DyadicLevelSequence, ExponentField, MeasureGrid,
                   SampledFunction, build_level_sequence, validate)
from .interpolation import (InterpolationParams, k_functional, real_interp_norm,
                            tilde_p, verify_interpolation_theorem)
from .lebesgue import luxemburg_norm, modular
from .lorentz import (identity_constant, lorentz_equiv_expression,
                      lorentz_norm_qconst, lorentz_quasinorm,
                      verify_embeddings, verify_identity_Lpp,
                      verify_quasi_triangle)
from .mixed_sequence import (FunctionSequence, easy_modular, mixed_modular,
                             mixed_quasinorm)
from .operators import (counterexample_sweep, geometric_grid, glued_function,
                        glued_operator, hardy_op, make_glued_pair,
                        marcinkiewicz_predicate, maximal_op_1d,
                        question28_experiment, singular_sample,
                        weak_type_ratio)
from .rearrangement import (StepFunction, classical_lorentz_norm,
                            decreasing_rearrangement, distribution,
                            levelset_factor)
from .report import CheckResult, VerificationReport

__all__ = [
    "BACKEND",
    "MeasureGrid",
    "ExponentField",
    "SampledFunction",
    "DyadicLevelSequence",
    "build_level_sequence",
    "validate",
    "modular",
    "luxemburg_norm",
    "StepFunction",
    "distribution",
    "decreasing_rearrangement",
    "classical_lorentz_norm",
    "levelset_factor",
    "FunctionSequence",
    "mixed_modular",
    "easy_modular",
    "mixed_quasinorm",
    "lorentz_norm_qconst",
    "lorentz_quasinorm",
    "lorentz_equiv_expression",
    "identity_constant",
    "verify_identity_Lpp",
    "verify_quasi_triangle",
    "verify_embeddings",
    "InterpolationParams",
    "tilde_p",
    "k_functional",
    "real_interp_norm",
    "verify_interpolation_theorem",
    "hardy_op",
    "maximal_op_1d",
    "weak_type_ratio",
    "make_glued_pair",
    "glued_function",
    "glued_operator",
    "geometric_grid",
    "singular_sample",
    "counterexample_sweep",
    "marcinkiewicz_predicate",
    "question28_experiment",
    "CheckResult",
    "VerificationReport",
]
__version__ = "0.1.0"
