"""BPSK/AWGN channel, iterative and majority-logic decoders, Monte Carlo harness.

Decoders work on batches of frames (rows).  Messages live on the edges of
the Tanner graph, ordered by check node; a second ordering by variable node
is used for the variable-node sums.  Schedule is flooding.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import chain, combinations, islice

import numpy as np

from .gf import gf2_rank, rank_and_nullspace

LLR_CLAMP = 30.0
MS_SCALE = 0.75
BLOCK_FRAMES = 256
THREADS_ENV = "CYCLDPC_THREADS"


@dataclass(frozen=True)
class ChannelSpec:
    """BPSK over AWGN: bit b is sent as 1 - 2b."""

    ebn0_db: float
    rate: float
    seed: int = 0

    @property
    def sigma2(self) -> float:
        return 1.0 / (2.0 * self.rate * 10.0 ** (self.ebn0_db / 10.0))

    def llr(self, y: np.ndarray) -> np.ndarray:
        return 2.0 * y / self.sigma2


@dataclass
class DecodeResult:
    hard: np.ndarray
    iterations: int
    converged: bool
    trace: list = field(default_factory=list)


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def syndrome(H, z) -> np.ndarray:
    """z H^T over GF(2); z may be a vector or a batch of rows."""
    H = np.asarray(H, dtype=np.int64)
    z = np.asarray(z, dtype=np.int64)
    if z.shape[-1] != H.shape[1]:
        raise ValueError(f"vector length {z.shape[-1]} does not match n={H.shape[1]}")
    return ((z @ H.T) % 2).astype(np.uint8)


class TannerDecoder:
    """Edge structure of H shared by the batch decoders."""

    def __init__(self, H):
        H = np.asarray(H) != 0
        self.H = H.astype(np.uint8)
        self.m, self.n = H.shape
        cn, vn = np.nonzero(H)
        self.edge_cn = cn
        self.edge_vn = vn
        self.cn_start = np.searchsorted(cn, np.arange(self.m))
        self.by_vn = np.argsort(vn, kind="stable")
        self.vn_start = np.searchsorted(vn[self.by_vn], np.arange(self.n))
        self.gamma = H.sum(axis=0).astype(np.int64)
        if np.any(H.sum(axis=1) == 0) or np.any(self.gamma == 0):
            raise ValueError("H has an empty row or column")

    # helpers
    def _cn_sum(self, x):
        return np.add.reduceat(x, self.cn_start, axis=1)

    def _vn_sum(self, x):
        return np.add.reduceat(x[:, self.by_vn], self.vn_start, axis=1)

    def syndrome(self, hard):
        return (self._cn_sum(hard[:, self.edge_vn].astype(np.int64)) & 1).astype(np.uint8)

    def _check_llr(self, llr):
        llr = np.atleast_2d(np.asarray(llr, dtype=np.float64))
        if llr.shape[1] != self.n:
            raise ValueError(f"LLR length {llr.shape[1]} does not match n={self.n}")
        if not np.all(np.isfinite(llr)):
            raise ValueError("LLRs must be finite")
        return llr

    def _spa_cn(self, v2c):
        t = np.tanh(np.clip(v2c, -LLR_CLAMP, LLR_CLAMP) / 2.0)
        neg = t < 0
        mag = np.maximum(np.abs(t), 1e-300)
        logm = np.log(mag)
        tot = self._cn_sum(logm)[:, self.edge_cn] - logm
        nneg = self._cn_sum(neg.astype(np.int64))[:, self.edge_cn] - neg
        prod = np.exp(tot) * np.where(nneg & 1, -1.0, 1.0)
        prod = np.clip(prod, -1 + 1e-15, 1 - 1e-15)
        return np.clip(2.0 * np.arctanh(prod), -LLR_CLAMP, LLR_CLAMP)

    def _ms_cn(self, v2c, scale):
        a = np.abs(v2c)
        neg = v2c < 0
        min1 = np.minimum.reduceat(a, self.cn_start, axis=1)
        is_min = a == min1[:, self.edge_cn]
        # keep only the first minimiser of each check
        first = np.cumsum(is_min, axis=1)
        first_at_start = np.concatenate([np.zeros((len(a), 1), dtype=first.dtype), first[:, self.cn_start[1:] - 1]], axis=1)
        is_first = is_min & ((first - first_at_start[:, self.edge_cn]) == 1)
        a2 = np.where(is_first, np.inf, a)
        min2 = np.minimum.reduceat(a2, self.cn_start, axis=1)
        mag = np.where(is_first, min2[:, self.edge_cn], min1[:, self.edge_cn])
        mag = np.where(np.isinf(mag), 0.0, mag)
        nneg = self._cn_sum(neg.astype(np.int64))[:, self.edge_cn] - neg
        return np.clip(scale * mag * np.where(nneg & 1, -1.0, 1.0), -LLR_CLAMP, LLR_CLAMP)

    def _bp(self, llr, max_iter, cn_update, trace):
        llr = self._check_llr(llr)
        if max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        B = llr.shape[0]
        hard = (llr < 0).astype(np.uint8)
        iters = np.zeros(B, dtype=np.int64)
        # at least one iteration always runs, even on a clean codeword
        done = np.zeros(B, dtype=bool)
        log = []
        v2c = np.clip(llr[:, self.edge_vn], -LLR_CLAMP, LLR_CLAMP)
        for it in range(1, max_iter + 1):
            act = np.flatnonzero(~done)
            if act.size == 0:
                break
            c2v = cn_update(v2c[act])
            post = llr[act] + self._vn_sum(c2v)
            v2c[act] = np.clip(post[:, self.edge_vn] - c2v, -LLR_CLAMP, LLR_CLAMP)
            h = (post < 0).astype(np.uint8)
            hard[act] = h
            iters[act] = it
            s = self.syndrome(h)
            ok = ~np.any(s, axis=1)
            done[act[ok]] = True
            if trace:
                log.append(int(s.sum()))
        return hard, iters, done, log

    def spa(self, llr, max_iter: int = 50, trace: bool = False):
        return self._bp(llr, max_iter, self._spa_cn, trace)

    def min_sum(self, llr, max_iter: int = 50, scale: float = MS_SCALE, trace: bool = False):
        return self._bp(llr, max_iter, lambda v: self._ms_cn(v, scale), trace)

    def osmlgd(self, z):
        """One-step majority logic: flip bit j iff more than floor(gamma_j/2) of its checks fail."""
        z = np.atleast_2d(np.asarray(z, dtype=np.uint8))
        Hf = self.H.astype(np.float32)
        # float32 products are exact for these small counts and use BLAS
        s = np.fmod(z.astype(np.float32) @ Hf.T, 2.0)
        votes = s @ Hf
        flip = votes > (self.gamma // 2)
        out = z ^ flip.astype(np.uint8)
        ok = ~np.any(np.fmod(out.astype(np.float32) @ Hf.T, 2.0), axis=1)
        return out, np.ones(len(z), dtype=np.int64), ok


def _single(res) -> DecodeResult:
    hard, iters, done, *rest = res
    return DecodeResult(hard[0], int(iters[0]), bool(done[0]), list(rest[0]) if rest else [])


def spa_decode(H, llr, max_iter: int = 50, trace: bool = False) -> DecodeResult:
    return _single(TannerDecoder(H).spa(llr, max_iter, trace))


def min_sum_decode(H, llr, max_iter: int = 50, scale: float = MS_SCALE, trace: bool = False) -> DecodeResult:
    return _single(TannerDecoder(H).min_sum(llr, max_iter, scale, trace))


def osmlgd(H, z) -> DecodeResult:
    return _single(TannerDecoder(H).osmlgd(z))


def error_patterns(n: int, max_weight: int, chunk: int = 65536):
    """Yield batches of all error patterns of weight 1..max_weight."""
    for w in range(1, max_weight + 1):
        it = combinations(range(n), w)
        while True:
            flat = np.fromiter(chain.from_iterable(islice(it, chunk)), dtype=np.int64)
            if flat.size == 0:
                break
            sup = flat.reshape(-1, w)
            E = np.zeros((len(sup), n), dtype=np.uint8)
            E[np.arange(len(sup))[:, None], sup] = 1
            yield E


def osmlgd_exhaustive(H, max_weight: int) -> tuple[int, int]:
    """(failures, patterns) over all error patterns of weight <= max_weight."""
    dec = TannerDecoder(H)
    fails = total = 0
    for E in error_patterns(dec.n, max_weight):
        out, _, _ = dec.osmlgd(E)
        fails += int(np.count_nonzero(np.any(out, axis=1)))
        total += len(E)
    return fails, total


# Monte Carlo -------------------------------------------------------------------


@dataclass(frozen=True)
class SimRow:
    snr_db: float
    frames: int
    bit_errors: int
    frame_errors: int
    undetected: int
    iterations: int

    bits_per_frame: int = 1

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.frames * self.bits_per_frame) if self.frames else 0.0

    @property
    def bler(self) -> float:
        return self.frame_errors / self.frames if self.frames else 0.0

    @property
    def avg_iters(self) -> float:
        return self.iterations / self.frames if self.frames else 0.0


@dataclass
class SimReport:
    """Per-SNR error counts; BER counts errors over all n code bits."""

    n: int
    k: int
    decoder: str
    rows: list = field(default_factory=list)

    def to_csv(self) -> str:
        out = [f"# n={self.n} k={self.k} decoder={self.decoder} ber=bit_errors/(frames*n)"]
        out.append("snr_db,frames,bit_errors,frame_errors,undetected,ber,bler,avg_iters")
        for r in self.rows:
            out.append(
                f"{r.snr_db:g},{r.frames},{r.bit_errors},{r.frame_errors},{r.undetected},"
                f"{r.ber:.6e},{r.bler:.6e},{r.avg_iters:.4f}"
            )
        return "\n".join(out) + "\n"


def frame_rng(seed: int, snr_index: int, frame: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, snr_index, frame]))


def _run_block(dec, decoder, ch, G, snr_index, start, count, max_iter, scale):
    n = dec.n
    sigma = np.sqrt(ch.sigma2)
    tx = np.zeros((count, n), dtype=np.uint8)
    y = np.empty((count, n))
    for f in range(count):
        rng = frame_rng(ch.seed, snr_index, start + f)
        if G is not None:
            u = rng.integers(0, 2, G.shape[0], dtype=np.int64)
            tx[f] = (u @ G) % 2
        y[f] = 1.0 - 2.0 * tx[f] + sigma * rng.standard_normal(n)
    if decoder == "osmlgd":
        hard, iters, ok = dec.osmlgd((y < 0).astype(np.uint8))
    elif decoder == "spa":
        hard, iters, ok, _ = dec.spa(ch.llr(y), max_iter)
    elif decoder == "min-sum":
        hard, iters, ok, _ = dec.min_sum(ch.llr(y), max_iter, scale)
    else:
        raise ValueError(f"unknown decoder {decoder!r}")
    err = hard != tx
    bits = int(err.sum())
    wrong = np.any(err, axis=1)
    return bits, int(wrong.sum()), int(np.sum(wrong & ok)), int(iters.sum())


def monte_carlo(
    H,
    decoder: str,
    snrs,
    max_frames: int = 10_000,
    min_frame_errors: int | None = None,
    seed: int = 0,
    threads: int | None = None,
    max_iter: int = 50,
    scale: float = MS_SCALE,
    generator=None,
    block: int = BLOCK_FRAMES,
) -> SimReport:
    """Seeded BER/BLER simulation.

    Frames are grouped into fixed blocks processed in order, so the counts
    do not depend on ``threads``.  Without ``generator`` the all-zero
    codeword is sent.
    """
    dec = TannerDecoder(H)
    n = dec.n
    k = n - gf2_rank(dec.H)
    threads = default_threads() if threads is None else max(1, threads)
    G = None if generator is None else np.asarray(generator, dtype=np.int64) % 2
    rep = SimReport(n, k, decoder)
    for si, snr in enumerate(snrs):
        ch = ChannelSpec(float(snr), k / n, seed)
        starts = list(range(0, max_frames, block))
        tot = [0, 0, 0, 0]
        frames = 0

        def job(s):
            return _run_block(dec, decoder, ch, G, si, s, min(block, max_frames - s), max_iter, scale)

        with ThreadPoolExecutor(max_workers=threads) as ex:
            for w in range(0, len(starts), threads):
                wave = starts[w : w + threads]
                stop = False
                for s, res in zip(wave, ex.map(job, wave)):
                    tot = [a + b for a, b in zip(tot, res)]
                    frames += min(block, max_frames - s)
                    if min_frame_errors is not None and tot[1] >= min_frame_errors:
                        stop = True
                        break
                if stop:
                    break
        rep.rows.append(SimRow(float(snr), frames, tot[0], tot[1], tot[2], tot[3], n))
    return rep


def nullspace_generator(H) -> np.ndarray:
    """A generator matrix for the null space of H."""
    _, basis = rank_and_nullspace(np.asarray(H, dtype=np.uint8))
    return basis


__all__ = [
    "LLR_CLAMP",
    "MS_SCALE",
    "THREADS_ENV",
    "ChannelSpec",
    "DecodeResult",
    "SimRow",
    "SimReport",
    "TannerDecoder",
    "default_threads",
    "syndrome",
    "spa_decode",
    "min_sum_decode",
    "osmlgd",
    "osmlgd_exhaustive",
    "error_patterns",
    "frame_rng",
    "monte_carlo",
    "nullspace_generator",
]
