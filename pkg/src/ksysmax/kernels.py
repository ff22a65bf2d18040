"""Gain-kernel backend selection.

The compiled extension (ksysmax._gainc, Cython) is used when present;
otherwise the numpy fallback (ksysmax._gainpy). KSYS_KERNEL_BACKEND=python
or =compiled forces a backend; forcing a missing compiled backend raises.
"""

import os

from . import _gainpy

try:
    from . import _gainc
except ImportError:
    _gainc = None


def _select(name: str):
    if name in ("python", "py"):
        return _gainpy, "python"
    if name in ("compiled", "c"):
        if _gainc is None:
            raise ImportError(
                "KSYS_KERNEL_BACKEND=compiled but ksysmax._gainc is not built; "
                "reinstall with a C compiler or unset the variable"
            )
        return _gainc, "compiled"
    if name == "":
        if _gainc is not None:
            return _gainc, "compiled"
        return _gainpy, "python"
    raise ValueError(f"unknown kernel backend {name!r} (use 'compiled' or 'python')")


_impl, BACKEND = _select(os.environ.get("KSYS_KERNEL_BACKEND", "").strip().lower())


def set_backend(name: str) -> str:
    """Switch backends at runtime (used by the kernel benchmark and tests)."""
    global _impl, BACKEND
    _impl, BACKEND = _select(name.strip().lower())
    return BACKEND


def available_backends():
    return ("compiled", "python") if _gainc is not None else ("python",)


def cd_gains(colsum, diag, simsum, cands):
    return _impl.cd_gains(colsum, diag, simsum, cands)


def fl_gains(sim, curmax, covsum, simsum, diag, inv_n, cands, nonempty):
    return _impl.fl_gains(sim, curmax, covsum, simsum, diag, inv_n, cands, nonempty)


def sr_gains(indptr, indices, weights, alpha, wsum, seeded, n_products, cands):
    return _impl.sr_gains(indptr, indices, weights, alpha, wsum, seeded, n_products, cands)
