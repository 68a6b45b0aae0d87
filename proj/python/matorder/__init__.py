"""Quasi matrix means of positive semidefinite matrices, matrix orderings,
and the comparison-table tooling around them.

The heavy lifting lives in the compiled extension ``matorder._core``.
"""

from matorder._core import (
    DEFAULT_SEED,
    MatorderError,
    coeffs,
    condition_table,
    find_counterexample,
    gpower,
    implication_chain,
    kubo_ando,
    ltk,
    mean,
    order,
    support_projection,
    verify_inequality,
)

__all__ = [
    "DEFAULT_SEED",
    "MatorderError",
    "coeffs",
    "condition_table",
    "find_counterexample",
    "gpower",
    "implication_chain",
    "kubo_ando",
    "ltk",
    "mean",
    "order",
    "support_projection",
    "verify_inequality",
]
