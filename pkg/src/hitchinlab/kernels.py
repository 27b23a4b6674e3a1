"""Backend selection for the flow hot-path kernels.

The compiled extension is preferred when importable; the NumPy reference
implementation is the fallback.  Set HITCHIN_LAB_KERNEL=reference (or
=compiled) to force a backend; forcing the compiled one raises if the
extension is missing.
"""

from __future__ import annotations

import os

from .errors import ConfigError

_requested = os.environ.get("HITCHIN_LAB_KERNEL", "auto").strip().lower()

if _requested in ("", "auto", "compiled"):
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _requested == "compiled":
            raise
        from . import _kernels_ref as _impl  # type: ignore[no-redef]
elif _requested in ("reference", "python", "numpy"):
    from . import _kernels_ref as _impl  # type: ignore[no-redef]
else:
    raise ConfigError(
        f"HITCHIN_LAB_KERNEL={_requested!r}; expected 'auto', 'compiled' or 'reference'"
    )

eval_state = _impl.eval_state
eval_gradient = _impl.eval_gradient


def backend_name() -> str:
    return _impl.BACKEND


def available_backends() -> dict:
    """Importable kernel modules keyed by backend name (for tests/benchmarks)."""
    from . import _kernels_ref

    backends = {_kernels_ref.BACKEND: _kernels_ref}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        backends[_kernels.BACKEND] = _kernels
    except ImportError:
        pass
    return backends
