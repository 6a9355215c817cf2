"""Cyclic and quasi-cyclic LDPC codes from circulant decomposition."""

from .circulant import BlockCirculantArray, Circulant, decompose, recompose
from .cyclic import CyclicCodeSpec, cyclic_code, generator_from_rows
from .geometry import CpmArray, cpm_decompose, eg_circulant, eg_lines, pg_circulant
from .gf import GF2, FieldSpec, Poly, build_field, gf2_rank

__version__ = "0.1.0"

__all__ = [
    "GF2",
    "FieldSpec",
    "Poly",
    "build_field",
    "gf2_rank",
    "Circulant",
    "BlockCirculantArray",
    "decompose",
    "recompose",
    "CyclicCodeSpec",
    "cyclic_code",
    "generator_from_rows",
    "CpmArray",
    "cpm_decompose",
    "eg_lines",
    "eg_circulant",
    "pg_circulant",
]
