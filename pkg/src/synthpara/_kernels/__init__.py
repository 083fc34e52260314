"""Generation kernel backend selection.

The compiled extension is preferred when importable; the pure-Python twin is
the fallback and produces byte-identical output. Set SYNTHPARA_PURE_KERNELS=1
to force the fallback (used by tests and the benchmark).
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("SYNTHPARA_PURE_KERNELS"):
    _impl = _pure
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND
gen_identity_block = _impl.gen_identity_block
gen_case_map_block = _impl.gen_case_map_block
gen_pb_trees_block = _impl.gen_pb_trees_block


def available_backends() -> dict:
    """Name -> kernel module, for equality tests and benchmarks."""
    backends = {"pure": _pure}
    try:
        from . import _speedups

        backends["compiled"] = _speedups
    except ImportError:
        pass
    return backends
