"""Exact shifted-partial-derivative (SPDP) rank toolkit."""

__version__ = "0.1.0"

from .algebra import (GFP, MULTILINEAR, QQ, STANDARD, Monomial, Polynomial, PrimeField,
                      parse_polynomial, format_polynomial)
from .core import (BlockPartition, RankReport, SpdpMatrix, SpdpParams, blocked_matrix,
                   build_matrix, codimension, rank, spdp_rank)

__all__ = [
    "__version__", "GFP", "MULTILINEAR", "QQ", "STANDARD", "Monomial", "Polynomial",
    "PrimeField", "parse_polynomial", "format_polynomial", "BlockPartition", "RankReport",
    "SpdpMatrix", "SpdpParams", "blocked_matrix", "build_matrix", "codimension", "rank",
    "spdp_rank",
]
