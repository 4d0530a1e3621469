"""Incompressible Euler flow on a rectangle."""

from ._core import (
    IoError,
    PreconditionError,
    approx_domain,
    biot_savart,
    bmo_norms,
    curl,
    dirichlet_solve,
    read_snapshot,
    solve,
    stability,
    w2bmo_ratio,
    write_snapshot,
)

__all__ = [
    "IoError",
    "PreconditionError",
    "approx_domain",
    "biot_savart",
    "bmo_norms",
    "curl",
    "dirichlet_solve",
    "read_snapshot",
    "solve",
    "stability",
    "w2bmo_ratio",
    "write_snapshot",
]
