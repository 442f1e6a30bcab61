"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The compiled extension (``_core``, built from Cython) is preferred; if it
is missing or ``BALPART_FORCE_PURE`` is set in the environment, the
pure-Python twin in ``_pure`` takes over. Both produce identical results;
``benchmarks/bench_kernels.py`` compares their speed.
"""

import os

if os.environ.get("BALPART_FORCE_PURE"):
    from . import _pure as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pure as _impl

IS_COMPILED = _impl.IS_COMPILED
lpt_assign = _impl.lpt_assign
km1 = _impl.km1
match_vertices = _impl.match_vertices
fm_pass = _impl.fm_pass

__all__ = ["IS_COMPILED", "lpt_assign", "km1", "match_vertices", "fm_pass"]
