"""Dual-unitary circuit spectral form factor laboratory."""

import importlib.util as _ilu
import os as _os
import sys as _sys

try:
    from ._core import *  # noqa: F401,F403
    from . import _core as _core  # noqa: F401
except ImportError:  # running from the build tree
    _mod_dir = _os.environ.get("DUSFF_PYMODULE_DIR")
    if not _mod_dir:
        raise
    _candidates = [
        _os.path.join(_mod_dir, _f)
        for _f in _os.listdir(_mod_dir)
        if _f.startswith("_core") and _f.endswith(".so")
    ]
    if not _candidates:
        raise
    _spec = _ilu.spec_from_file_location("dusff._core", _candidates[0])
    _core = _ilu.module_from_spec(_spec)
    _spec.loader.exec_module(_core)
    _sys.modules["dusff._core"] = _core
    for _name in dir(_core):
        if not _name.startswith("_"):
            globals()[_name] = getattr(_core, _name)

__version__ = "0.1.0"
