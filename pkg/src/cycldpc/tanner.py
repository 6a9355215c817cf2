"""Tanner graphs, RC/girth checks and exhaustive trapping-set enumeration.

Columns of H are packed into uint64 words so that the odd-degree check
nodes of a variable-node subset are the popcount of the XOR of its columns.
Enumeration is level-wise and vectorised, sharded by the first VN index.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb

import numpy as np

DEFAULT_BUDGET = 10**9


class TannerError(ValueError):
    """Raised on structural violations (RC failure, bound counterexample)."""


class BudgetExceeded(RuntimeError):
    """Enumeration would exceed the work budget.

    ``completed`` is the largest kappa fully enumerated; ``records`` holds
    the partial results.
    """

    def __init__(self, msg: str, completed: int, records=None):
        super().__init__(msg)
        self.completed = completed
        self.records = records or []


class _NoCycle:
    def __repr__(self) -> str:
        return "NO_CYCLE"


NO_CYCLE = _NoCycle()


@dataclass(frozen=True, eq=False)
class TannerGraph:
    """Bipartite graph of a binary parity-check matrix."""

    m: int
    n: int
    cn_adj: tuple
    vn_adj: tuple

    @classmethod
    def from_dense(cls, H) -> TannerGraph:
        H = np.asarray(H) != 0
        m, n = H.shape
        cn = tuple(np.flatnonzero(r) for r in H)
        vn = tuple(np.flatnonzero(c) for c in H.T)
        return cls(m, n, cn, vn)

    @property
    def dv(self) -> np.ndarray:
        return np.array([len(a) for a in self.vn_adj], dtype=np.int64)

    @property
    def dc(self) -> np.ndarray:
        return np.array([len(a) for a in self.cn_adj], dtype=np.int64)

    @property
    def edges(self) -> int:
        return int(self.dv.sum())


def _as_bool(H) -> np.ndarray:
    if isinstance(H, TannerGraph):
        out = np.zeros((H.m, H.n), dtype=bool)
        for i, a in enumerate(H.cn_adj):
            out[i, a] = True
        return out
    return np.asarray(H) != 0


def rc_check(H):
    """(True, None) if no two rows share more than one 1-position.

    On failure returns (False, (row_a, row_b, shared positions)).
    """
    B = _as_bool(H).astype(np.float32)
    G = B @ B.T  # exact: counts stay far below 2**24
    np.fill_diagonal(G, 0)
    bad = np.argwhere(G > 1)
    if bad.size == 0:
        return True, None
    a, b = (int(x) for x in bad[0])
    pos = tuple(int(x) for x in np.flatnonzero((B[a] > 0) & (B[b] > 0)))
    return False, (a, b, pos)


def girth(H):
    """Length of the shortest cycle, or NO_CYCLE."""
    B = _as_bool(H)
    m, n = B.shape
    N = m + n
    # RC failure is exactly a 4-cycle; otherwise stop at the first 6-cycle
    if not rc_check(B)[0]:
        return 4
    floor = 6
    adj = [np.flatnonzero(B[i]) + m for i in range(m)] + [np.flatnonzero(B[:, j]) for j in range(n)]
    best = math.inf
    for root in range(N):
        if best == floor:
            break
        dist = np.full(N, -1, dtype=np.int64)
        parent = np.full(N, -1, dtype=np.int64)
        dist[root] = 0
        frontier = [root]
        while frontier:
            if 2 * dist[frontier[0]] + 1 >= best:
                break
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if v == parent[u]:
                        continue
                    if dist[v] < 0:
                        dist[v] = dist[u] + 1
                        parent[v] = u
                        nxt.append(v)
                    else:
                        best = min(best, dist[u] + dist[v] + 1)
            frontier = nxt
    return NO_CYCLE if best == math.inf else int(best)


# Trapping sets -----------------------------------------------------------------


@dataclass(frozen=True)
class TrappingSetRecord:
    """A (kappa, tau) trapping set with its classification flags."""

    vns: tuple
    tau: int
    cn_degrees: tuple
    elementary: bool
    small: bool
    codeword: bool

    @property
    def kappa(self) -> int:
        return len(self.vns)


def _pack_columns(B: np.ndarray) -> np.ndarray:
    m, n = B.shape
    W = (m + 63) // 64
    pad = np.zeros((n, W * 64), dtype=np.uint8)
    pad[:, :m] = B.T
    return np.packbits(pad, axis=1, bitorder="little").view(np.uint64).reshape(n, W)


def _popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x).sum(axis=-1, dtype=np.int64)


def _shard(cols: np.ndarray, first: int, kappa_max: int):
    """Yield (kappa, subsets, tau, elementary) for subsets starting at ``first``."""
    n = cols.shape[0]
    subs = np.array([[first]], dtype=np.int32)
    g1 = cols[first][None, :].copy()
    odd = g1.copy()
    g2 = np.zeros_like(g1)
    g3 = np.zeros_like(g1)
    for k in range(1, kappa_max + 1):
        if k > 1:
            last = subs[:, -1].astype(np.int64)
            cnt = n - 1 - last
            tot = int(cnt.sum())
            if tot == 0:
                return
            idx = np.repeat(np.arange(len(subs)), cnt)
            starts = np.cumsum(cnt) - cnt
            j = last[idx] + 1 + (np.arange(tot) - starts[idx])
            x = cols[j]
            subs = np.hstack([subs[idx], j[:, None].astype(np.int32)])
            odd = odd[idx] ^ x
            g3 = g3[idx] | (g2[idx] & x)
            g2 = g2[idx] | (g1[idx] & x)
            g1 = g1[idx] | x
        tau = _popcount(odd)
        elem = ~np.any(g3, axis=1)
        yield k, subs, tau, elem


def _degrees(B: np.ndarray, vns) -> tuple:
    deg = B[:, list(vns)].sum(axis=1)
    c = Counter(int(d) for d in deg if d > 0)
    return tuple(sorted(c.items()))


def _histograms(Bt: np.ndarray, subs: np.ndarray, k: int) -> np.ndarray:
    """Per subset, the number of CNs of induced degree 0..k."""
    out = np.empty((len(subs), k + 1), dtype=np.int64)
    for a in range(0, len(subs), 4096):
        chunk = subs[a : a + 4096]
        deg = Bt[chunk].sum(axis=1, dtype=np.int64)
        rows = np.repeat(np.arange(len(chunk)), deg.shape[1])
        out[a : a + len(chunk)] = np.bincount(rows * (k + 1) + deg.ravel(), minlength=len(chunk) * (k + 1)).reshape(-1, k + 1)
    return out


def _small(kappa: int, tau: int, n: int) -> bool:
    return kappa <= math.isqrt(n) and tau <= 4 * kappa


def _check_budget(n: int, kappa_max: int, budget: int) -> int:
    """Largest kappa <= kappa_max whose cumulative subset count fits."""
    total = 0
    for k in range(1, kappa_max + 1):
        total += comb(n, k)
        if total > budget:
            return k - 1
    return kappa_max


def _walk(B: np.ndarray, kappa_max: int, threads: int, reduce):
    """Apply ``reduce`` to each first-VN shard; results in shard order."""
    cols = _pack_columns(B)
    n = B.shape[1]

    def run(first):
        return reduce(_shard(cols, first, kappa_max))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(run, range(n)))
    return [run(i) for i in range(n)]


def _prepare(H, kappa_max: int) -> np.ndarray:
    B = _as_bool(H)
    if kappa_max < 1 or kappa_max > B.shape[1]:
        raise ValueError(f"kappa_max must lie in [1, {B.shape[1]}]")
    return B


def enumerate_trapping_sets(
    H,
    kappa_max: int,
    tau_max: int | None = None,
    kind: str = "all",
    threads: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> list[TrappingSetRecord]:
    """All VN subsets of size 1..kappa_max, as trapping-set records.

    ``kind`` is "all", "elementary" or "codeword"; ``tau_max`` drops records
    with more odd-degree CNs.  Records are sorted by (kappa, vns).  When the
    subset count exceeds ``budget`` the sizes that fit are still enumerated
    and returned inside :class:`BudgetExceeded`.
    """
    if kind not in ("all", "elementary", "codeword"):
        raise ValueError(f"unknown filter {kind!r}")
    B = _prepare(H, kappa_max)
    n = B.shape[1]
    fit = _check_budget(n, kappa_max, budget)
    Bt = B.T.astype(np.int8)

    def reduce(it):
        out = []
        for k, subs, tau, elem in it:
            keep = np.ones(len(tau), dtype=bool)
            if tau_max is not None:
                keep &= tau <= tau_max
            if kind == "elementary":
                keep &= elem
            elif kind == "codeword":
                keep &= tau == 0
            sel = np.flatnonzero(keep)
            if sel.size == 0:
                continue
            hist = _histograms(Bt, subs[sel], k)
            for i, h in zip(sel.tolist(), hist.tolist()):
                t = int(tau[i])
                degs = tuple((d, c) for d, c in enumerate(h) if d and c)
                out.append(TrappingSetRecord(tuple(subs[i].tolist()), t, degs, bool(elem[i]), _small(k, t, n), t == 0))
        return out

    recs = []
    if fit:
        for part in _walk(B, fit, threads, reduce):
            recs.extend(part)
        recs.sort(key=lambda r: (r.kappa, r.vns))
    if fit < kappa_max:
        raise BudgetExceeded(f"subsets of size <= {kappa_max} exceed the budget {budget}; completed kappa <= {fit}", fit, recs)
    return recs


@dataclass
class TauSpectrum:
    """Counts of trapping sets per (kappa, tau) and a witness for each minimum."""

    counts: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)

    def taus(self, kappa: int) -> set:
        return set(self.counts.get(kappa, {}))

    def min_tau(self, kappa: int) -> int:
        return min(self.counts[kappa])


def tau_spectrum(H, kappa_max: int, threads: int = 1, budget: int = DEFAULT_BUDGET) -> TauSpectrum:
    """Histogram of tau per kappa without materialising records."""
    B = _prepare(H, kappa_max)
    fit = _check_budget(B.shape[1], kappa_max, budget)
    if fit < kappa_max:
        raise BudgetExceeded(f"subsets of size <= {kappa_max} exceed the budget {budget}", fit)

    def reduce(it):
        part = {}
        for k, subs, tau, _ in it:
            vals, cnt = np.unique(tau, return_counts=True)
            i = int(np.argmin(tau))
            part[k] = (dict(zip(vals.tolist(), cnt.tolist())), (int(tau[i]), tuple(subs[i].tolist())))
        return part

    spec = TauSpectrum()
    for part in _walk(B, kappa_max, threads, reduce):
        for k, (hist, wit) in part.items():
            d = spec.counts.setdefault(k, {})
            for v, c in hist.items():
                d[v] = d.get(v, 0) + c
            if k not in spec.witness or wit[0] < spec.witness[k][0]:
                spec.witness[k] = wit
    spec.counts = {k: dict(sorted(v.items())) for k, v in sorted(spec.counts.items())}
    return spec


def classify(vns, H) -> TrappingSetRecord:
    """Record for one VN subset, computed directly from H."""
    B = _as_bool(H)
    vns = tuple(sorted(int(v) for v in vns))
    deg = B[:, list(vns)].sum(axis=1)
    tau = int(np.sum(deg % 2))
    elem = bool(np.all(deg <= 2))
    x = np.zeros(B.shape[1], dtype=np.int64)
    x[list(vns)] = 1
    cw = not np.any((B.astype(np.int64) @ x) % 2)
    if cw != (tau == 0):
        raise TannerError("codeword flag disagrees with null-space membership")
    return TrappingSetRecord(vns, tau, _degrees(B, vns), elem, _small(len(vns), tau, B.shape[1]), cw)


def write_csv(records, fh) -> None:
    fh.write("kappa,tau,elementary,codeword,vn_indices\n")
    for r in records:
        fh.write(f"{r.kappa},{r.tau},{int(r.elementary)},{int(r.codeword)},{';'.join(map(str, r.vns))}\n")


# Orthogonal sets and bound checks ------------------------------------------------


@dataclass(frozen=True)
class OrthogonalSet:
    """Rows of H checking bit j."""

    j: int
    rows: tuple

    @property
    def size(self) -> int:
        return len(self.rows)


def orthogonal_sets(H, j: int) -> OrthogonalSet:
    B = _as_bool(H)
    rows = tuple(int(i) for i in np.flatnonzero(B[:, j]))
    if not rows:
        raise TannerError(f"column {j} is zero")
    S = B[list(rows)]
    other = S.sum(axis=0)
    other[j] = 0
    if np.any(other > 1):
        p = int(np.flatnonzero(other > 1)[0])
        raise TannerError(f"position {p} appears in more than one row orthogonal on {j}")
    return OrthogonalSet(j, rows)


@dataclass
class BoundReport:
    """Minimum tau per kappa and any violated bound."""

    gamma: int
    min_tau: dict
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def table(self) -> str:
        return "\n".join(f"kappa={k} min_tau={t}" for k, t in sorted(self.min_tau.items()))


def verify_size_tau_bound(H, gamma: int, kappa_check: int, threads: int = 1) -> BoundReport:
    """Exhaustively check the trapping-set size/tau bounds.

    For kappa <= min(kappa_check, gamma): tau >= gamma and
    tau >= kappa (gamma - kappa + 1).  For kappa < gamma - 3: tau > 4 kappa,
    so no trapping set of that size is small.
    """
    ok, wit = rc_check(H)
    if not ok:
        raise TannerError(f"H is not RC-constrained: rows {wit[0]} and {wit[1]} share {wit[2]}")
    kmax = min(kappa_check, gamma)
    spec = tau_spectrum(H, kmax, threads=threads)
    viol = []
    for k in range(1, kmax + 1):
        t, vns = spec.witness[k]
        need = max(gamma, k * (gamma - k + 1))
        if t < need:
            viol.append((k, t, need, vns))
        if k < gamma - 3 and t <= 4 * k:
            viol.append((k, t, 4 * k + 1, vns))
    return BoundReport(gamma, {k: spec.witness[k][0] for k in spec.witness}, viol)


__all__ = [
    "DEFAULT_BUDGET",
    "NO_CYCLE",
    "TannerError",
    "BudgetExceeded",
    "TannerGraph",
    "TrappingSetRecord",
    "TauSpectrum",
    "OrthogonalSet",
    "BoundReport",
    "rc_check",
    "girth",
    "enumerate_trapping_sets",
    "tau_spectrum",
    "classify",
    "write_csv",
    "orthogonal_sets",
    "verify_size_tau_bound",
]
