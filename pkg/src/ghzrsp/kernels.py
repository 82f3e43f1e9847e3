"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy reference in ``_pykernels`` is used. Set ``GHZRSP_PURE_PYTHON=1`` to
force the reference backend.
"""
import os

from . import _pykernels

if os.environ.get("GHZRSP_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND
apply_local = _impl.apply_local
project = _impl.project
monomial_search = _impl.monomial_search

__all__ = ["BACKEND", "apply_local", "project", "monomial_search"]
