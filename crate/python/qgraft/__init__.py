"""Exact symbolic engine for quantum-group grafting.

The compiled core lives in ``qgraft._native``; this package re-exports
it and adds a dict-returning wrapper around the pipeline report.
"""

import json

from ._native import (
    Matrix,
    Pair,
    Scalar,
    check_ybe,
    frt_constant,
    graft_report,
    hilbert_series,
    pair,
    pairing_rank,
    quadratic_relations,
    radical_dimension,
    reduce_word,
    standard_r,
    tensor_r,
)

__all__ = [
    "Matrix",
    "Pair",
    "Scalar",
    "check_ybe",
    "frt_constant",
    "graft",
    "graft_report",
    "hilbert_series",
    "pair",
    "pairing_rank",
    "quadratic_relations",
    "radical_dimension",
    "reduce_word",
    "standard_r",
    "tensor_r",
]


def graft(preset, n=2, m=2):
    """Run the grafting pipeline for a preset and return the report dict."""
    return json.loads(graft_report(preset, n, m))
