"""Backend selection for the evaluation kernels.

The numba backend is used when importable unless ``VARNORM_NO_NUMBA`` is set
to a non-empty value, in which case the pure-numpy reference backend runs.
``BACKEND`` records which one is active.
"""

from __future__ import annotations

import os

from . import _kernels_np as _np_backend

BACKEND = "numpy"
_impl = _np_backend

if not os.environ.get("VARNORM_NO_NUMBA"):
    try:
        from . import _kernels_nb as _nb_backend

        _impl = _nb_backend
        BACKEND = "numba"
    except ImportError:
        pass

LOG_HUGE = _np_backend.LOG_HUGE
TINY = _np_backend.TINY
RTOL = _np_backend.RTOL
MAXIT = _np_backend.MAXIT

phi_sum = _impl.phi_sum
luxemburg = _impl.luxemburg
truncation_norm = _impl.truncation_norm
inner_term = _impl.inner_term
inner_term_const = _impl.inner_term_const
dyadic_mixed_modular = _impl.dyadic_mixed_modular
nested_indicator_norms = _impl.nested_indicator_norms
hardy = _impl.hardy
maximal = _impl.maximal
