"""Circulants and their decomposition into arrays of smaller circulants.

A circulant is stored by its generator ``w`` (the first row); row i is ``w``
cyclically shifted i places to the right.  Under a factorisation n = c*l the
permutation ``pi`` regroups rows and columns by residue mod c and turns the
circulant into a c x c array of l x l circulants built from the c cyclic
sections of ``w``.  Block (r, t) holds section (t - r) mod c, shifted one
more place to the right when t < r.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .gf import GF2, BinaryMatrix, FieldSpec

DEFAULT_MEMORY_CAP = 2 << 30  # bytes


class MemoryCapError(MemoryError):
    """Raised when dense materialisation would exceed the memory cap."""


class StructureError(ValueError):
    """Raised when a block array breaks the doubly cyclic pattern."""


def _check_cap(nbytes: int, cap: int | None) -> None:
    cap = DEFAULT_MEMORY_CAP if cap is None else cap
    if nbytes > cap:
        raise MemoryCapError(f"dense matrix needs {nbytes} bytes, cap is {cap}")


def circulant_dense(w, max_bytes: int | None = None) -> np.ndarray:
    """Dense circulant with generator w (row i = w shifted right i places)."""
    w = np.asarray(w)
    n = len(w)
    dtype = np.uint8 if w.max(initial=0) < 256 else np.int64
    _check_cap(n * n * np.dtype(dtype).itemsize, max_bytes)
    w2 = np.concatenate([w, w]).astype(dtype)
    win = sliding_window_view(w2, n)
    return np.ascontiguousarray(win[(n - np.arange(n)) % n])


@dataclass(frozen=True, eq=False)
class Circulant:
    """Square circulant over a field, stored by its first row.

    ``orientation`` records whether the construction placed incidence
    vectors as rows or as columns; the stored generator is always the first
    row.
    """

    w: np.ndarray
    field: FieldSpec = GF2
    orientation: str = "rows"

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.int64).ravel()
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        if self.orientation not in ("rows", "columns"):
            raise ValueError(f"orientation must be 'rows' or 'columns', got {self.orientation!r}")

    @classmethod
    def from_column(cls, col, field: FieldSpec = GF2) -> Circulant:
        """Circulant whose first column is ``col`` and column i is col shifted down i places."""
        col = np.asarray(col, dtype=np.int64)
        n = len(col)
        return cls(col[(-np.arange(n)) % n], field, "columns")

    @property
    def n(self) -> int:
        return len(self.w)

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.w))

    @property
    def is_binary(self) -> bool:
        return self.field.q == 2

    def row(self, i: int) -> np.ndarray:
        return np.roll(self.w, i)

    def column(self, j: int) -> np.ndarray:
        return np.roll(self.w[(-np.arange(self.n)) % self.n], j)

    def shifted(self, k: int = 1) -> Circulant:
        return Circulant(np.roll(self.w, k), self.field, self.orientation)

    def dense(self, max_bytes: int | None = None) -> np.ndarray:
        return circulant_dense(self.w, max_bytes)

    def binary(self, max_bytes: int | None = None) -> BinaryMatrix:
        if not self.is_binary:
            raise ValueError("not a binary circulant")
        return BinaryMatrix.from_dense(self.dense(max_bytes))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Circulant):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.w, other.w)

    def __hash__(self) -> int:
        return hash((self.field, self.w.tobytes()))


def _check_factor(n: int, c: int) -> int:
    if c <= 1 or c >= n or n % c:
        raise ValueError(f"c={c} is not a proper factor of n={n}")
    return n // c


def proper_factors(n: int) -> list[int]:
    return [c for c in range(2, n) if n % c == 0]


def pi_permutation(n: int, c: int) -> np.ndarray:
    """The index permutation pi for n = c*l.

    Position k of the permuted vector takes original index ``pi[k]``:
    ``[0, c, ..., (l-1)c, 1, c+1, ..., (l-1)c+1, ..., c-1, ..., n-1]``.
    """
    l = _check_factor(n, c)
    return (np.arange(c)[:, None] + c * np.arange(l)[None, :]).ravel()


def inverse_permutation(perm) -> np.ndarray:
    perm = np.asarray(perm)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    return inv


def cyclic_section(w, c: int, i: int) -> np.ndarray:
    """(w_i, w_{c+i}, ..., w_{(l-1)c+i})."""
    w = np.asarray(w)
    _check_factor(len(w), c)
    if not 0 <= i < c:
        raise IndexError(f"section index {i} out of range for c={c}")
    return w[i::c].copy()


@dataclass(frozen=True)
class MaskPattern:
    """Sections to zero out, or a binary masking matrix for CPM arrays."""

    sections: frozenset = field(default_factory=frozenset)
    matrix: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class BlockCirculantArray:
    """c x c array of l x l circulants referencing c stored sections.

    ``grid_section[r, t]`` is the section index of block (r, t) and
    ``grid_shift[r, t]`` is True when the block is the section's circulant
    shifted once more to the right.
    """

    sections: np.ndarray
    grid_section: np.ndarray
    grid_shift: np.ndarray
    field: FieldSpec = GF2

    @classmethod
    def from_sections(cls, sections, field: FieldSpec = GF2) -> BlockCirculantArray:
        sections = np.asarray(sections, dtype=np.int64)
        c = sections.shape[0]
        r = np.arange(c)[:, None]
        t = np.arange(c)[None, :]
        return cls(sections, (t - r) % c, np.broadcast_to(t < r, (c, c)).copy(), field)

    @property
    def c(self) -> int:
        return self.sections.shape[0]

    @property
    def l(self) -> int:
        return self.sections.shape[1]

    @property
    def n(self) -> int:
        return self.c * self.l

    def block_generator(self, r: int, t: int) -> np.ndarray:
        s = self.sections[self.grid_section[r, t]]
        return np.roll(s, 1) if self.grid_shift[r, t] else s.copy()

    def block(self, r: int, t: int) -> np.ndarray:
        return circulant_dense(self.block_generator(r, t))

    def validate(self) -> None:
        """Check the doubly cyclic pattern; zero blocks match either flag."""
        c = self.c
        for r in range(c):
            for t in range(c):
                want = (t - r) % c
                got = self.grid_section[r, t]
                ok = got == want and bool(self.grid_shift[r, t]) == (t < r)
                if not ok:
                    blank = not self.sections[got].any() and not self.sections[want].any()
                    if not blank:
                        raise StructureError(
                            f"block ({r},{t}) holds section {got} "
                            f"{'shifted' if self.grid_shift[r, t] else 'plain'}, "
                            f"expected section {want} {'shifted' if t < r else 'plain'}"
                        )

    def census(self) -> dict[int, tuple[int, int]]:
        """Per section index: (plain occurrences, shifted occurrences)."""
        out = {}
        for i in range(self.c):
            sel = self.grid_section == i
            out[i] = (int(np.sum(sel & ~self.grid_shift)), int(np.sum(sel & self.grid_shift)))
        return out

    def dense(self, max_bytes: int | None = None) -> np.ndarray:
        """Materialised n x n matrix."""
        n, l, c = self.n, self.l, self.c
        dtype = np.uint8 if self.sections.max(initial=0) < 256 else np.int64
        _check_cap(n * n * np.dtype(dtype).itemsize, max_bytes)
        out = np.zeros((n, n), dtype=dtype)
        idx = (np.arange(l)[None, :] - np.arange(l)[:, None]) % l  # entry (a, b) of a circulant is g[b - a]
        for r in range(c):
            gens = self.sections[self.grid_section[r]]
            gens = np.where(self.grid_shift[r][:, None], np.roll(gens, 1, axis=1), gens)
            # gens[t][idx] is block (r, t); lay the blocks side by side
            out[r * l : (r + 1) * l] = gens[:, idx].transpose(1, 0, 2).reshape(l, n)
        return out

    def row_weights(self) -> np.ndarray:
        """Row weight of each block row (equal within a block row)."""
        nz = np.count_nonzero(self.sections, axis=1)
        return nz[self.grid_section].sum(axis=1)

    def column_weights(self) -> np.ndarray:
        nz = np.count_nonzero(self.sections, axis=1)
        return nz[self.grid_section].sum(axis=0)


def decompose(W: Circulant, c: int) -> BlockCirculantArray:
    """Decompose a circulant into a c x c array of circulants."""
    n = W.n
    l = _check_factor(n, c)
    sections = W.w.reshape(l, c).T.copy()
    return BlockCirculantArray.from_sections(sections, W.field)


def recompose(A: BlockCirculantArray) -> Circulant:
    """Inverse of :func:`decompose`; validates the grid first."""
    A.validate()
    return Circulant(A.sections.T.reshape(-1), A.field)


def permute_matrix(M: np.ndarray, c: int) -> np.ndarray:
    """pi applied to the columns and then the rows of a square matrix."""
    perm = pi_permutation(M.shape[0], c)
    return M[perm][:, perm]


def mask_sections(A: BlockCirculantArray, pattern) -> BlockCirculantArray:
    """Zero the named sections, and with them every copy in the grid."""
    idx = pattern.sections if isinstance(pattern, MaskPattern) else pattern
    idx = sorted(set(int(i) for i in idx))
    for i in idx:
        if not 0 <= i < A.c:
            raise IndexError(f"section index {i} out of range for c={A.c}")
    sections = A.sections.copy()
    sections[idx] = 0
    return BlockCirculantArray(sections, A.grid_section, A.grid_shift, A.field)


def subarray(A: BlockCirculantArray, rows: int, cols: int, origin=(0, 0)) -> np.ndarray:
    """Dense rows x cols window of blocks starting at block ``origin``."""
    r0, c0 = origin
    if r0 < 0 or c0 < 0 or r0 + rows > A.c or c0 + cols > A.c or rows < 1 or cols < 1:
        raise IndexError(f"window {rows}x{cols} at {origin} exceeds the {A.c}x{A.c} array")
    l = A.l
    dtype = np.uint8 if A.sections.max(initial=0) < 256 else np.int64
    out = np.zeros((rows * l, cols * l), dtype=dtype)
    for r in range(rows):
        for t in range(cols):
            out[r * l : (r + 1) * l, t * l : (t + 1) * l] = A.block(r0 + r, c0 + t)
    return out


def stack_sections(A: BlockCirculantArray, indices) -> np.ndarray:
    """Vertical stack of the circulants of the given sections."""
    indices = [int(i) for i in indices]
    if len(set(indices)) != len(indices):
        raise ValueError("duplicate section indices")
    for i in indices:
        if not 0 <= i < A.c:
            raise IndexError(f"section index {i} out of range for c={A.c}")
    return np.vstack([circulant_dense(A.sections[i]) for i in indices])


__all__ = [
    "DEFAULT_MEMORY_CAP",
    "MemoryCapError",
    "StructureError",
    "Circulant",
    "BlockCirculantArray",
    "MaskPattern",
    "circulant_dense",
    "proper_factors",
    "pi_permutation",
    "inverse_permutation",
    "cyclic_section",
    "decompose",
    "recompose",
    "permute_matrix",
    "mask_sections",
    "subarray",
    "stack_sections",
]
