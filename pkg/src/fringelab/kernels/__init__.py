"""Hot inner loops with a numba backend and a pure-numpy fallback.

The numba path is used when numba imports cleanly, unless the environment
variable ``FRINGELAB_DISABLE_NUMBA`` is set to a true value ("1", "true",
"yes"). Both backends stay importable as ``numpy_backend`` /
``numba_backend`` so tests and benchmarks can compare them.
"""

import os

from . import _numpy as numpy_backend

try:
    from . import _numba as numba_backend
except ImportError:  # numba missing or broken
    numba_backend = None


def _numba_disabled() -> bool:
    return os.environ.get("FRINGELAB_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}


if numba_backend is not None and not _numba_disabled():
    backend = numba_backend
    BACKEND_NAME = "numba"
else:
    backend = numpy_backend
    BACKEND_NAME = "numpy"

quadratic_form_batch = backend.quadratic_form_batch
intensity_grad = backend.intensity_grad
linear_sweep = backend.linear_sweep
torus_grid_values = backend.torus_grid_values

__all__ = [
    "BACKEND_NAME",
    "intensity_grad",
    "linear_sweep",
    "numba_backend",
    "numpy_backend",
    "quadratic_form_batch",
    "torus_grid_values",
]
