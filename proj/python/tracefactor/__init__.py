"""Certified traceless and semi-traceless matrix factorizations.

Thin wrapper over the native module: matrices and certificates are JSON
documents in the same formats the certify CLI reads and writes.
"""

import json as _json

from _tracefactor import (  # noqa: F401
    bounds,
    factor as _factor,
    oracle,
    quaternion_pure_product,
    semisimple as _semisimple,
    verify as _verify,
)

__all__ = [
    "bounds",
    "factor",
    "verify",
    "oracle",
    "semisimple",
    "quaternion_pure_product",
]


def factor(kind, matrix, seed=1):
    """Factor a matrix document (dict) and return the certificate as a dict."""
    return _json.loads(_factor(kind, _json.dumps(matrix), seed))


def verify(certificate):
    """Re-check every claim of a certificate dict."""
    return _verify(_json.dumps(certificate))


def semisimple(components, seed=1):
    """Componentwise generalized-commutator decomposition."""
    return _json.loads(_semisimple([_json.dumps(c) for c in components], seed))
