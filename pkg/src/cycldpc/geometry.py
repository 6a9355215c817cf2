"""Finite-geometry circulants, CPM arrays and field-based base matrices.

EG(m, q) is realised by GF(q^m): the nonzero elements alpha^j are the
non-origin points, indexed by j.  PG(2, q) is realised by GF(q^3) with the
points alpha^0 .. alpha^(n-1), n = q^2 + q + 1.  A line is canonicalised as
its sorted tuple of point indices; the representative of a cyclic class is
the lexicographically smallest member of the orbit under multiplication by
alpha.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circulant import Circulant, decompose
from .gf import FieldSpec, build_field, prime_factors

MAX_POINTS = 1 << 20


class GeometryError(ValueError):
    """Raised for invalid geometry parameters or violated structural claims."""


def _prime_power(q: int) -> tuple[int, int]:
    pf = prime_factors(q)
    if len(pf) != 1:
        raise GeometryError(f"q={q} is not a prime power")
    p = pf[0]
    s = 0
    while q > 1:
        q //= p
        s += 1
    return p, s


@dataclass(frozen=True, eq=False)
class GeometrySpec:
    """EG*(m, q) or PG(2, q) with its realisation field."""

    kind: str
    m: int
    q: int
    field: FieldSpec
    npoints: int


@dataclass(frozen=True)
class LineOrbit:
    """A cyclic class of lines, given by its representative."""

    representative: tuple[int, ...]
    orbit_length: int
    class_index: int
    npoints: int

    def shifted(self, k: int) -> tuple[int, ...]:
        """Point indices of alpha^k times the representative."""
        return tuple(sorted((e + k) % self.npoints for e in self.representative))

    def incidence(self, k: int = 0) -> np.ndarray:
        v = np.zeros(self.npoints, dtype=np.int64)
        v[list(self.shifted(k))] = 1
        return v


def eg_geometry(m: int, q: int) -> GeometrySpec:
    p, s = _prime_power(q)
    if m < 2:
        raise GeometryError("EG dimension must be at least 2")
    if q**m > MAX_POINTS:
        raise GeometryError(f"EG({m},{q}) has more than {MAX_POINTS} points")
    F = build_field(p, s * m)
    return GeometrySpec("EG", m, q, F, q**m - 1)


def pg_geometry(q: int) -> GeometrySpec:
    p, s = _prime_power(q)
    if q**3 > MAX_POINTS:
        raise GeometryError(f"PG(2,{q}) realisation exceeds {MAX_POINTS} elements")
    F = build_field(p, 3 * s)
    return GeometrySpec("PG", 2, q, F, q * q + q + 1)


def _subfield_codes(F: FieldSpec, q: int) -> np.ndarray:
    """Codes of the nonzero elements of GF(q) inside F."""
    t = F.order // (q - 1)
    return F.alpha_pow(t * np.arange(q - 1))


def _orbit_rep(points, N: int) -> tuple[int, ...]:
    pts = np.asarray(points, dtype=np.int64)
    cands = np.sort((pts[None, :] - pts[:, None]) % N, axis=1)
    best = min(map(tuple, cands.tolist()))
    return tuple(int(x) for x in best)


def _orbit_length(rep: tuple[int, ...], N: int) -> int:
    s = set(rep)
    for d in sorted(d for d in range(1, N + 1) if N % d == 0):
        if {(e + d) % N for e in rep} == s:
            return d
    return N


def _classes(lines, N: int) -> list[LineOrbit]:
    reps = sorted({_orbit_rep(L, N) for L in lines})
    return [LineOrbit(r, _orbit_length(r, N), i, N) for i, r in enumerate(reps)]


def eg_lines(m: int, q: int) -> list[LineOrbit]:
    """Cyclic classes of the lines of EG(m, q) not through the origin.

    Every class contains lines through the point alpha^0, so the classes
    are found from the lines {1 + eta x : eta in GF(q)} with x ranging over
    directions not parallel to 1.
    """
    G = eg_geometry(m, q)
    F, N = G.field, G.npoints
    sub = np.concatenate([[0], _subfield_codes(F, q)])
    t = N // (q - 1)
    lines = []
    for d in range(1, t):
        x = F.alpha_pow(d)
        pts = F.add(np.ones(q, dtype=np.int64), F.mul(sub, np.full(q, x)))
        lines.append(F.log[pts])
    return _classes(lines, N)


def eg_all_lines(m: int, q: int) -> list[tuple[int, ...]]:
    """Every line of EG*(m, q), listed through all parallel bundles."""
    G = eg_geometry(m, q)
    F, N = G.field, G.npoints
    sub = np.concatenate([[0], _subfield_codes(F, q)])
    t = N // (q - 1)
    allpts = np.arange(F.q)
    out = set()
    for d in range(t):
        S = F.mul(sub, np.full(q, F.alpha_pow(d)))
        cos = F.add(allpts[:, None], S[None, :])
        for row in np.unique(np.sort(cos, axis=1), axis=0):
            if 0 in row:
                continue
            out.add(tuple(sorted(int(e) for e in F.log[row])))
    return sorted(out)


def pg_lines(q: int) -> list[LineOrbit]:
    """Cyclic classes of lines of PG(2, q) (a single Singer orbit)."""
    G = pg_geometry(q)
    F, n = G.field, G.npoints
    sub = np.concatenate([[0], _subfield_codes(F, q)])
    a = np.repeat(sub, q)
    b = np.tile(sub, q)
    vec = F.add(a, F.mul(b, np.full(len(b), F.alpha_pow(1))))
    vec = vec[vec != 0]
    pts = np.unique(F.log[vec] % n)
    return _classes([pts], n)


def eg_circulant(line: LineOrbit, orientation: str = "rows") -> Circulant:
    """Incidence circulant of a cyclic class of lines."""
    if line.orbit_length != line.npoints:
        raise GeometryError(
            f"orbit of length {line.orbit_length} cannot fill a {line.npoints}x{line.npoints} circulant"
        )
    v = line.incidence()
    if orientation == "columns":
        return Circulant.from_column(v)
    return Circulant(v)


def pg_circulant(q: int) -> Circulant:
    (line,) = pg_lines(q)
    return Circulant(line.incidence())


def eg_root_condition(h: int, s: int) -> bool:
    """True if alpha^h is a root of the EG(2, 2^s) generator polynomial.

    The condition is 0 < max W(h^(l)) < 2^s over the 2-adic rotations
    h^(l) = 2^l h mod (2^(2s) - 1), where W is the radix-2^s digit sum.
    """
    N = (1 << (2 * s)) - 1
    Q = 1 << s
    if not 0 <= h < N + 1:
        raise ValueError(f"h must lie in [0, {N}]")
    best = 0
    for l in range(2 * s):
        r = (h << l) % N
        best = max(best, r % Q + r // Q)
    return 0 < best < Q


# CPM arrays -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CpmArray:
    """Array of l x l blocks, each a CPM (shift k >= 0) or a ZM (-1).

    Shift k means the top row has its single 1 in position k.
    """

    shifts: np.ndarray
    l: int

    def __post_init__(self):
        s = np.asarray(self.shifts, dtype=np.int64)
        if s.ndim != 2 or np.any(s < -1) or np.any(s >= self.l):
            raise GeometryError("shift grid entries must lie in [-1, l)")
        object.__setattr__(self, "shifts", s)

    @property
    def shape(self) -> tuple[int, int]:
        return self.shifts.shape

    def row_counts(self) -> np.ndarray:
        return np.sum(self.shifts >= 0, axis=1)

    def col_counts(self) -> np.ndarray:
        return np.sum(self.shifts >= 0, axis=0)

    def window(self, rows: int, cols: int, origin=(0, 0)) -> CpmArray:
        r0, c0 = origin
        R, C = self.shape
        if r0 < 0 or c0 < 0 or r0 + rows > R or c0 + cols > C:
            raise IndexError(f"window {rows}x{cols} at {origin} exceeds {R}x{C}")
        return CpmArray(self.shifts[r0 : r0 + rows, c0 : c0 + cols].copy(), self.l)

    def dense(self) -> np.ndarray:
        R, C = self.shape
        l = self.l
        out = np.zeros((R * l, C * l), dtype=np.uint8)
        rows = np.arange(l)
        for i in range(R):
            for j in range(C):
                k = self.shifts[i, j]
                if k >= 0:
                    out[i * l + rows, j * l + (rows + k) % l] = 1
        return out

    def to_text(self) -> str:
        return "\n".join(" ".join(str(int(x)) for x in row) for row in self.shifts) + "\n"

    @classmethod
    def from_text(cls, text: str, l: int) -> CpmArray:
        rows = [list(map(int, line.split())) for line in text.strip().splitlines() if line.strip()]
        return cls(np.array(rows, dtype=np.int64), l)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CpmArray):
            return NotImplemented
        return self.l == other.l and np.array_equal(self.shifts, other.shifts)


def cpm_decompose(W: Circulant, b: int, l: int, q: int | None = None) -> CpmArray:
    """Decompose a geometry circulant into an array of CPMs and ZMs.

    With q - 1 = b*l the array is (n/l) x (n/l); every block must be a CPM
    or a ZM and every row and column block must hold exactly q CPMs.
    """
    q = W.weight if q is None else q
    if b * l != q - 1:
        raise GeometryError(f"b*l = {b * l} but q - 1 = {q - 1}")
    n = W.n
    if n % l:
        raise GeometryError(f"l={l} does not divide n={n}")
    c = n // l
    A = decompose(W, c)
    wts = np.count_nonzero(A.sections, axis=1)
    bad = np.flatnonzero(wts > 1)
    if bad.size:
        raise GeometryError(f"section {bad[0]} has weight {wts[bad[0]]}: block is neither CPM nor ZM")
    pos = np.where(wts == 1, np.argmax(A.sections != 0, axis=1), -1)
    sec = A.grid_section
    sh = pos[sec]
    shifts = np.where(sh >= 0, (sh + A.grid_shift.astype(np.int64)) % l, -1)
    out = CpmArray(shifts, l)
    rc, cc = out.row_counts(), out.col_counts()
    if np.any(rc != q) or np.any(cc != q):
        raise GeometryError(f"CPM census violated: row counts {sorted(set(rc))}, column counts {sorted(set(cc))}")
    return out


def eg_cpm_array(m: int, q: int, b: int, l: int) -> CpmArray:
    """Concatenated CPM arrays of all cyclic classes of EG(m, q), lines as columns."""
    blocks = [cpm_decompose(eg_circulant(L, "columns"), b, l, q).shifts for L in eg_lines(m, q)]
    return CpmArray(np.hstack(blocks), l)


def diagonal_zm_line_search(m: int, q: int, b: int = 1, l: int | None = None):
    """Find a generating line whose CPM array has all ZMs on the diagonal.

    Requires l = q - 1 and b = 1.  Returns (line point indices, shift k of
    the class representative) or None when no shift works.
    """
    l = q - 1 if l is None else l
    if b != 1 or l != q - 1:
        raise GeometryError("diagonal ZM search needs b = 1 and l = q - 1")
    (line,) = eg_lines(2, q) if m == 2 else eg_lines(m, q)[:1]
    N = line.npoints
    c = N // l
    for k in range(N):
        v = line.incidence(k)
        wts = np.count_nonzero(v.reshape(l, c).T, axis=1)
        if wts[0] == 0 and np.all(wts[1:] > 0):
            return line.shifted(k), k
    return None


def block_split(A: CpmArray, e: int) -> CpmArray:
    """e x e expansion: column blocks, then row blocks, split round-robin.

    The r-th CPM met while scanning a column block top to bottom moves to
    new column block r mod e; then the r-th CPM of each row block, scanning
    left to right, moves to new row block r mod e.  Relative positions are
    kept.
    """
    counts = set(A.row_counts().tolist()) | set(A.col_counts().tolist())
    if len(counts) != 1:
        raise GeometryError("block split needs equal CPM counts in every row and column block")
    q = counts.pop()
    if e < 1 or q % e:
        raise GeometryError(f"e={e} does not divide the CPM count {q}")
    if e == 1:
        return CpmArray(A.shifts.copy(), A.l)
    R, C = A.shape
    mid = np.full((R, C * e), -1, dtype=np.int64)
    for j in range(C):
        rows = np.flatnonzero(A.shifts[:, j] >= 0)
        for r, i in enumerate(rows):
            mid[i, j * e + r % e] = A.shifts[i, j]
    out = np.full((R * e, C * e), -1, dtype=np.int64)
    for i in range(R):
        cols = np.flatnonzero(mid[i] >= 0)
        for r, j in enumerate(cols):
            out[i * e + r % e, j] = mid[i, j]
    return CpmArray(out, A.l)


def mask_product(Z, A: CpmArray) -> CpmArray:
    """Keep block (i, j) where Z[i, j] = 1, replace it by a ZM elsewhere."""
    Z = np.asarray(Z)
    if Z.shape != A.shape:
        raise GeometryError(f"masking matrix {Z.shape} does not match array {A.shape}")
    return CpmArray(np.where(Z != 0, A.shifts, -1), A.l)


def random_mask(gamma: int, rho: int, weight: int, rng: np.random.Generator) -> np.ndarray:
    """Random gamma x rho binary matrix with ``weight`` ones per column."""
    if not 0 <= weight <= gamma:
        raise ValueError("column weight must lie in [0, gamma]")
    Z = np.zeros((gamma, rho), dtype=np.uint8)
    for j in range(rho):
        Z[rng.choice(gamma, weight, replace=False), j] = 1
    return Z


def random_masked_array(
    A: CpmArray, weight: int, rng: np.random.Generator, min_girth: int = 6, tries: int = 100
) -> tuple[np.ndarray, CpmArray]:
    """Draw masking matrices until the masked array has the required girth."""
    from .tanner import NO_CYCLE, girth

    for _ in range(tries):
        Z = random_mask(A.shape[0], A.shape[1], weight, rng)
        M = mask_product(Z, A)
        g = girth(M.dense())
        if g is NO_CYCLE or g >= min_girth:
            return Z, M
    raise GeometryError(f"no masking matrix with girth >= {min_girth} after {tries} tries")


# Base matrices ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BaseMatrix:
    """Matrix over GF(q) for array dispersion (entries are field codes)."""

    entries: np.ndarray
    field: FieldSpec
    tag: str


def _field_for(q: int) -> FieldSpec:
    p, s = _prime_power(q)
    return build_field(p, s)


def rs_base_matrix(q: int, field: FieldSpec | None = None) -> BaseMatrix:
    """W[i][j] = alpha^((j - i) mod (q-1)) - 1."""
    F = _field_for(q) if field is None else field
    idx = (np.arange(q - 1)[None, :] - np.arange(q - 1)[:, None]) % (q - 1)
    W = F.sub(F.alpha_pow(idx), np.ones_like(idx))
    return BaseMatrix(np.asarray(W), F, "rs")


def latin_square_base(q: int, eta: int = 1, field: FieldSpec | None = None) -> BaseMatrix:
    """W[i][j] = alpha^i eta - alpha^j; index q - 1 stands for the zero element.

    ``eta`` is the exponent of the nonzero multiplier.
    """
    F = _field_for(q) if field is None else field
    elems = np.concatenate([F.alpha_pow(np.arange(q - 1)), [0]])
    left = F.mul(elems, np.full(q, F.alpha_pow(eta)))
    W = F.sub(left[:, None] * np.ones((1, q), dtype=np.int64), np.ones((q, 1), dtype=np.int64) * elems[None, :])
    return BaseMatrix(np.asarray(W), F, "ls")


def cpm_dispersion(W: BaseMatrix) -> CpmArray:
    """alpha^i becomes the CPM of shift i, zero becomes a ZM."""
    F = W.field
    return CpmArray(np.where(W.entries == 0, -1, F.log[W.entries]), F.q - 1)


def rd_violation(W: BaseMatrix, min_distance: int | None = None):
    """First (i, j, c, l) breaking the row-distance constraint, or None.

    Rows alpha^c w_i and alpha^l w_j (i != j) must differ in at least
    ``min_distance`` places (default: row length - 1).
    """
    F = W.field
    E = W.entries
    rows, cols = E.shape
    need = cols - 1 if min_distance is None else min_distance
    logs = np.where(E == 0, -1, F.log[E])
    for i in range(rows):
        for j in range(rows):
            if i == j:
                continue
            a, b = logs[i], logs[j]
            both0 = int(np.sum((a < 0) & (b < 0)))
            nz = (a >= 0) & (b >= 0)
            diff = (b[nz] - a[nz]) % F.order
            agree = np.bincount(diff, minlength=F.order) + both0
            d = int(np.argmax(agree))
            if cols - agree[d] < need:
                return i, j, d, 0
    return None


def is_latin_square(W: BaseMatrix) -> bool:
    E = W.entries
    q = W.field.q
    full = np.arange(q)
    return E.shape == (q, q) and all(np.array_equal(np.sort(r), full) for r in E) and all(
        np.array_equal(np.sort(c), full) for c in E.T
    )


__all__ = [
    "GeometryError",
    "GeometrySpec",
    "LineOrbit",
    "CpmArray",
    "BaseMatrix",
    "eg_geometry",
    "pg_geometry",
    "eg_lines",
    "eg_all_lines",
    "pg_lines",
    "eg_circulant",
    "pg_circulant",
    "eg_root_condition",
    "cpm_decompose",
    "eg_cpm_array",
    "diagonal_zm_line_search",
    "block_split",
    "mask_product",
    "random_mask",
    "random_masked_array",
    "rs_base_matrix",
    "latin_square_base",
    "cpm_dispersion",
    "rd_violation",
    "is_latin_square",
]
