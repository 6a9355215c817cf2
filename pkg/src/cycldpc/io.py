"""Plain-text formats: alist matrices, key=value manifests, vectors and grids."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class FormatError(ValueError):
    """Raised on malformed input files."""


# alist ---------------------------------------------------------------------------


def write_alist(H, path=None) -> str:
    """MacKay alist text for a binary matrix (1-based, zero padded)."""
    H = np.asarray(H) != 0
    m, n = H.shape
    cols = [np.flatnonzero(H[:, j]) + 1 for j in range(n)]
    rows = [np.flatnonzero(H[i]) + 1 for i in range(m)]
    cw = [len(c) for c in cols]
    rw = [len(r) for r in rows]
    mc, mr = max(cw, default=0), max(rw, default=0)

    def pad(v, k):
        return " ".join(str(int(x)) for x in list(v) + [0] * (k - len(v)))

    lines = [f"{n} {m}", f"{mc} {mr}", " ".join(map(str, cw)), " ".join(map(str, rw))]
    lines += [pad(c, mc) for c in cols]
    lines += [pad(r, mr) for r in rows]
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def parse_alist(text: str) -> np.ndarray:
    toks = text.split()
    try:
        vals = [int(t) for t in toks]
    except ValueError as exc:
        raise FormatError(f"non-integer token in alist: {exc}") from None
    if len(vals) < 4:
        raise FormatError("alist header is truncated")
    n, m, mc, mr = vals[:4]
    pos = 4
    cw = vals[pos : pos + n]
    pos += n
    rw = vals[pos : pos + m]
    pos += m
    if len(cw) != n or len(rw) != m:
        raise FormatError("alist weight lines are truncated")
    H = np.zeros((m, n), dtype=np.uint8)
    for j in range(n):
        idx = vals[pos : pos + mc]
        pos += mc
        if len(idx) != mc:
            raise FormatError(f"alist column list {j} is truncated")
        for i in idx[: cw[j]]:
            if not 1 <= i <= m:
                raise FormatError(f"row index {i} out of range in column {j}")
            H[i - 1, j] = 1
    # row lists are redundant; check them when present
    if len(vals) >= pos + m * mr:
        for i in range(m):
            idx = [x for x in vals[pos : pos + mr][: rw[i]]]
            pos += mr
            if sorted(idx) != list(np.flatnonzero(H[i]) + 1):
                raise FormatError(f"row list {i} disagrees with the column lists")
    return H


def read_alist(path) -> np.ndarray:
    return parse_alist(Path(path).read_text())


# manifests -----------------------------------------------------------------------

MANIFEST_KEYS = {
    "kind": str,
    "m": int,
    "q": int,
    "eta": int,
    "n": int,
    "roots": str,
    "generator": str,
    "c": int,
    "l": int,
    "b": int,
    "e": int,
    "mask": str,
    "orientation": str,
    "class": int,
    "matrix": str,
    "seed": int,
}
KINDS = ("eg", "pg", "bch", "rs-dispersion", "ls-dispersion", "manual")


@dataclass
class Manifest:
    """Key=value description of a construction."""

    values: dict = field(default_factory=dict)

    def __post_init__(self):
        for k, v in list(self.values.items()):
            if k not in MANIFEST_KEYS:
                raise FormatError(f"unknown manifest key {k!r}")
            try:
                self.values[k] = MANIFEST_KEYS[k](v)
            except ValueError:
                raise FormatError(f"manifest key {k!r} has invalid value {v!r}") from None
        kind = self.values.get("kind")
        if kind is not None and kind not in KINDS:
            raise FormatError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
        o = self.values.get("orientation")
        if o is not None and o not in ("rows", "columns"):
            raise FormatError("orientation must be rows or columns")

    def get(self, key, default=None):
        return self.values.get(key, default)

    def __getitem__(self, key):
        try:
            return self.values[key]
        except KeyError:
            raise FormatError(f"manifest needs {key!r}") from None

    def to_text(self) -> str:
        return "".join(f"{k}={self.values[k]}\n" for k in MANIFEST_KEYS if k in self.values)

    @classmethod
    def from_text(cls, text: str) -> Manifest:
        vals = {}
        for no, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise FormatError(f"line {no}: expected key=value")
            k, v = (s.strip() for s in line.split("=", 1))
            if k in vals:
                raise FormatError(f"line {no}: duplicate key {k!r}")
            vals[k] = v
        return cls(vals)


def read_manifest(path) -> Manifest:
    return Manifest.from_text(Path(path).read_text())


def parse_int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(";", ",").split(",") if x.strip()]


# vectors and matrices --------------------------------------------------------------


def vector_to_text(v) -> str:
    return " ".join(str(int(x)) for x in np.asarray(v)) + "\n"


def vector_from_text(text: str) -> np.ndarray:
    return np.array([int(x) for x in text.split()], dtype=np.int64)


def matrix_from_text(text: str) -> np.ndarray:
    rows = [[int(x) for x in line.split()] for line in text.splitlines() if line.strip()]
    if not rows or len({len(r) for r in rows}) != 1:
        raise FormatError("matrix rows must be nonempty and of equal length")
    return np.array(rows, dtype=np.int64)


__all__ = [
    "FormatError",
    "Manifest",
    "MANIFEST_KEYS",
    "KINDS",
    "write_alist",
    "parse_alist",
    "read_alist",
    "read_manifest",
    "parse_int_list",
    "vector_to_text",
    "vector_from_text",
    "matrix_from_text",
]
