"""Frobenius splitting and global F-regularity of weak del Pezzo surface models.

The heavy lifting happens in the compiled ``_core`` extension; structured
results cross the boundary as JSON strings.  The helpers below decode them
into plain dictionaries.
"""

import json as _json

from ._core import (  # noqa: F401
    ParseError,
    RefusalError,
    ResourceError,
    __version__,
    certify_text,
    check_file,
    check_text,
    exceptional_cells,
    fsplit,
    gfr_search,
    lattice_counts,
    model_hash_text,
    sample,
)

__all__ = [
    "ParseError",
    "ResourceError",
    "RefusalError",
    "__version__",
    "check",
    "check_file",
    "check_text",
    "certify",
    "certify_text",
    "exceptional_cells",
    "fsplit",
    "gfr_search",
    "lattice_counts",
    "model_hash_text",
    "sample",
    "sample_cell",
]


def check(path=None, text=None, **options):
    """Run the verdict pipeline on a TOML model; returns the report as a dict.

    Pass exactly one of ``path`` (a model file) or ``text`` (inline TOML).
    Keyword options: ``emax``, ``kmax``, ``retries``, ``seed``.
    """
    if (path is None) == (text is None):
        raise ValueError("pass exactly one of path= or text=")
    raw = check_file(path, **options) if path is not None else check_text(text, **options)
    return _json.loads(raw)


def sample_cell(k2, p, **options):
    """Sample random models in the (K^2, p) cell; returns the summary as a dict."""
    return _json.loads(sample(k2, p, **options))


def certify(text, **options):
    """Search a boundary certificate for a blowup model; returns a dict."""
    return _json.loads(certify_text(text, **options))
