"""Opacity verification and enforcement for Petri nets and LTSs.

Models are accepted as a path, a JSON string or an already decoded dict.
Results come back as plain dicts and lists.
"""

import json
import os
from pathlib import Path

_corpus = Path(__file__).with_name("corpus")
if _corpus.is_dir():
    os.environ.setdefault("OPACITY_CORPUS_DIR", str(_corpus))

from . import _core  # noqa: E402
from ._core import (  # noqa: E402,F401
    BoundError,
    EnforcementError,
    ModelError,
    PackagingError,
    ParseError,
    UsageError,
)

__all__ = [
    "check",
    "sog",
    "enforce",
    "min_superlanguage",
    "oracle",
    "validate",
    "export_dot",
    "corpus_names",
    "corpus_path",
    "load",
    "ModelError",
    "BoundError",
    "ParseError",
    "EnforcementError",
    "UsageError",
    "PackagingError",
]


def _text(model):
    if isinstance(model, dict):
        return json.dumps(model), "<dict>"
    if isinstance(model, Path) or (isinstance(model, str) and not model.lstrip().startswith("{")):
        path = Path(model)
        return path.read_text(), str(path)
    return model, "<string>"


def load(model):
    text, _ = _text(model)
    return json.loads(text)


def check(model, variant="simple", k=1):
    return json.loads(_core.check(*_text(model), variant, k))


def sog(model):
    return json.loads(_core.sog(*_text(model)))


def enforce(model):
    """Opacified model, patch and verdicts before/after."""
    return json.loads(_core.enforce(*_text(model)))


def min_superlanguage(model):
    return json.loads(_core.min_superlanguage(*_text(model)))


def oracle(model, k=0, depth=None):
    return json.loads(_core.oracle(*_text(model), k, depth))


def validate(model):
    return json.loads(_core.validate(*_text(model)))


def export_dot(model):
    """(sog_dot, lts_dot)"""
    return _core.export_dot(*_text(model))


def corpus_names():
    return list(_core.corpus_names())


def corpus_path(name):
    return Path(_core.corpus_path(name))
