"""Selects the kernel backend: compiled extension or NumPy fallback.

The compiled extension is preferred when it imported cleanly; set the
environment variable ``FCLSIM_BACKEND`` to ``python`` or ``compiled`` to
force one. :func:`set_backend` switches at runtime (intended for tests and
benchmarks, not for mid-training switches).
"""

from __future__ import annotations

import os

from . import _kernels_py

_BACKENDS = {"python": _kernels_py}

try:
    from . import _kernels_cy  # type: ignore[attr-defined]

    _BACKENDS["compiled"] = _kernels_cy
except ImportError:
    _kernels_cy = None

_forced = os.environ.get("FCLSIM_BACKEND")
if _forced is not None and _forced not in _BACKENDS:
    raise RuntimeError(
        f"FCLSIM_BACKEND={_forced!r} requested but only "
        f"{sorted(_BACKENDS)} are available"
    )

_active = _forced or ("compiled" if "compiled" in _BACKENDS else "python")


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def active_backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; have {sorted(_BACKENDS)}")
    _active = name


def kernels():
    """The active kernel module (see ``_kernels_py`` for the contract)."""
    return _BACKENDS[_active]
