"""Hot kernels, compiled when the extension is built and pure Python otherwise.

``BACKEND`` names the implementation in use.  Setting ``HDA_SEM_PURE=1``
forces the fallback.
"""

from __future__ import annotations

import os

from . import _fallback

try:
    if os.environ.get("HDA_SEM_PURE"):
        raise ImportError("pure backend requested")
    from . import _core
except ImportError:
    _core = None

BACKEND = "compiled" if _core is not None else "python"


def lex_normal_form(word: list[int], indep: list[list[int]]) -> list[int]:
    if _core is not None:
        return _core.lex_normal_form(list(word), indep)
    return _fallback.lex_normal_form(word, indep)


def smith_diagonal(rows: list[list[int]], ncols: int) -> list[int]:
    if _core is not None:
        try:
            return _core.smith_diagonal(rows, ncols)
        except OverflowError:
            pass
    return _fallback.smith_diagonal(rows, ncols)
