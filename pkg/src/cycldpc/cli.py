"""Command-line interface.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import circulant as circ
from . import cyclic, decode, geometry, tanner
from .gf import gf2_rank
from .io import (
    FormatError,
    Manifest,
    matrix_from_text,
    parse_int_list,
    read_alist,
    read_manifest,
    vector_to_text,
    write_alist,
)


class UsageError(Exception):
    pass


def parse_snr(text: str) -> list[float]:
    """'start:step:end' (inclusive) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"SNR range must be start:step:end, got {text!r}")
        a, st, b = (float(x) for x in parts)
        if st <= 0 or b < a:
            raise UsageError("SNR range needs step > 0 and end >= start")
        k = int(np.floor((b - a) / st + 1e-9))
        return [round(a + i * st, 10) for i in range(k + 1)]
    return [float(x) for x in text.split(",") if x.strip()]


def as_circulant(H) -> circ.Circulant | None:
    H = np.asarray(H)
    n = H.shape[0]
    if H.ndim != 2 or H.shape[1] != n:
        return None
    w = H[0].astype(np.int64)
    if all(np.array_equal(H[i], np.roll(w, i)) for i in range(n)):
        return circ.Circulant(w)
    return None


# construction ----------------------------------------------------------------------

_CONSTRUCT_KEYS = ("kind", "m", "q", "eta", "n", "roots", "generator", "orientation", "class", "matrix")


def _manifest_from(args, keys) -> Manifest:
    vals = dict(read_manifest(args.manifest).values) if getattr(args, "manifest", None) else {}
    for k in keys:
        v = getattr(args, k.replace("-", "_").replace("class", "cls"), None)
        if v is not None:
            vals[k] = v
    return Manifest(vals)


def _bch(man: Manifest) -> cyclic.CyclicCodeSpec:
    n = man["n"]
    if man.get("generator"):
        return cyclic.cyclic_code(n, generator=parse_int_list(man["generator"]), q=man.get("q", 2))
    return cyclic.cyclic_code(n, roots=parse_int_list(man["roots"]), q=man.get("q", 2))


def build_matrix(man: Manifest) -> np.ndarray:
    kind = man["kind"]
    if kind == "eg":
        m, q = man.get("m", 2), man["q"]
        lines = geometry.eg_lines(m, q)
        orient = man.get("orientation", "rows" if m == 2 else "columns")
        if "class" in man.values:
            lines = [lines[man["class"]]]
        mats = [geometry.eg_circulant(L, orient).dense() for L in lines]
        return mats[0] if len(mats) == 1 else np.hstack(mats)
    if kind == "pg":
        return geometry.pg_circulant(man["q"]).dense()
    if kind == "bch":
        return cyclic.circulant_parity_matrix(_bch(man)).dense()
    if kind == "rs-dispersion":
        return geometry.cpm_dispersion(geometry.rs_base_matrix(man["q"])).dense()
    if kind == "ls-dispersion":
        return geometry.cpm_dispersion(geometry.latin_square_base(man["q"], man.get("eta", 1))).dense()
    if kind == "manual":
        return read_alist(man["matrix"])
    raise FormatError(f"unknown kind {kind!r}")


def _load(args) -> np.ndarray:
    if getattr(args, "input", None):
        return read_alist(args.input)
    if getattr(args, "manifest", None):
        return build_matrix(read_manifest(args.manifest))
    raise UsageError("give --in ALIST or --manifest FILE")


def _weights(v) -> str:
    u = sorted(set(int(x) for x in v))
    return ",".join(map(str, u))


def cmd_construct(args) -> int:
    man = _manifest_from(args, _CONSTRUCT_KEYS)
    if "kind" not in man.values:
        raise UsageError("construct needs --kind or a manifest with kind=")
    H = build_matrix(man)
    r = gf2_rank(H)
    ok, _ = tanner.rc_check(H)
    print(f"shape: {H.shape[0]}x{H.shape[1]}")
    print(f"n: {H.shape[1]}")
    print(f"rank: {r}")
    print(f"k: {H.shape[1] - r}")
    print(f"row weights: {_weights(H.sum(axis=1))}")
    print(f"column weights: {_weights(H.sum(axis=0))}")
    print(f"rc: {'ok' if ok else 'violated'}")
    if args.girth:
        print(f"girth: {tanner.girth(H)}")
    if args.out:
        write_alist(H, args.out)
    if args.manifest_out:
        Path(args.manifest_out).write_text(man.to_text())
    else:
        sys.stdout.write(man.to_text())
    return 0


def _grid_text(A: circ.BlockCirculantArray) -> str:
    rows = []
    for r in range(A.c):
        rows.append(" ".join(f"{A.grid_section[r, t]}{'+' if A.grid_shift[r, t] else ''}" for t in range(A.c)))
    return "\n".join(rows) + "\n"


def cmd_decompose(args) -> int:
    H = _load(args)
    W = as_circulant(H)
    if W is None:
        raise FormatError("input matrix is not a circulant")
    if args.b is not None or args.l is not None:
        if args.b is None or args.l is None:
            raise UsageError("CPM decomposition needs both --b and --l")
        A = geometry.cpm_decompose(W, args.b, args.l)
        text = A.to_text()
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        print(f"array: {A.shape[0]}x{A.shape[1]} blocks of {A.l}x{A.l}", file=sys.stderr)
        print(f"CPMs per row block: {_weights(A.row_counts())}", file=sys.stderr)
        print(f"CPMs per column block: {_weights(A.col_counts())}", file=sys.stderr)
        return 0
    if args.c is None:
        raise UsageError("decompose needs --c or --b/--l")
    A = circ.decompose(W, args.c)
    nz = [i for i in range(A.c) if A.sections[i].any()]
    print(f"c: {A.c}")
    print(f"l: {A.l}")
    print(f"nonzero sections: {len(nz)}")
    if args.out_dir:
        d = Path(args.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        width = len(str(A.c - 1))
        for i in range(A.c):
            (d / f"section_{i:0{width}d}.txt").write_text(vector_to_text(A.sections[i]))
        (d / "grid.txt").write_text(_grid_text(A))
        print(f"wrote {A.c} sections to {d}")
    if args.descendant is not None:
        j = args.descendant
        if not A.sections[j].any():
            print(f"section {j}: whole space")
        else:
            g = cyclic.generator_from_rows(A.sections[j], W.field)
            print(f"section {j} generator: {g}")
            print(f"section {j} code: ({A.l},{A.l - g.degree})")
    return 0


def cmd_mask(args) -> int:
    if args.grid:
        if args.l is None or args.mask is None:
            raise UsageError("masking a grid needs --l and --mask")
        A = geometry.CpmArray.from_text(Path(args.grid).read_text(), args.l)
        Z = matrix_from_text(Path(args.mask).read_text())
        M = geometry.mask_product(Z, A)
        text = M.to_text()
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        if args.alist_out:
            write_alist(M.dense(), args.alist_out)
        return 0
    H = _load(args)
    W = as_circulant(H)
    if W is None:
        raise FormatError("input matrix is not a circulant")
    if args.c is None or args.sections is None:
        raise UsageError("section masking needs --c and --sections")
    A = circ.mask_sections(circ.decompose(W, args.c), parse_int_list(args.sections))
    D = A.dense()
    r = gf2_rank(D)
    print(f"rank: {r}")
    print(f"column weights: {_weights(D.sum(axis=0))}")
    if args.alist_out:
        write_alist(D, args.alist_out)
    return 0


def cmd_split(args) -> int:
    A = geometry.CpmArray.from_text(Path(args.grid).read_text(), args.l)
    S = geometry.block_split(A, args.e)
    text = S.to_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"array: {S.shape[0]}x{S.shape[1]}", file=sys.stderr)
    print(f"CPMs per row block: {_weights(S.row_counts())}", file=sys.stderr)
    if args.alist_out:
        write_alist(S.dense(), args.alist_out)
    return 0


def cmd_trapset(args) -> int:
    H = _load(args)
    threads = args.threads or decode.default_threads()
    if args.csv or args.filter != "all" or args.tau_max is not None:
        recs = tanner.enumerate_trapping_sets(H, args.kappa_max, args.tau_max, args.filter, threads=threads)
        counts: dict = {}
        for r in recs:
            d = counts.setdefault(r.kappa, {})
            d[r.tau] = d.get(r.tau, 0) + 1
        if args.csv:
            with open(args.csv, "w") as fh:
                tanner.write_csv(recs, fh)
    else:
        counts = tanner.tau_spectrum(H, args.kappa_max, threads=threads).counts
    for k in sorted(counts):
        body = " ".join(f"{t}:{c}" for t, c in sorted(counts[k].items()))
        print(f"kappa={k} tau:count {body}")
    return 0


def cmd_rank(args) -> int:
    H = _load(args)
    if args.method == "gauss":
        print(f"rank: {gf2_rank(H)}")
        return 0
    W = as_circulant(H)
    if W is None:
        raise FormatError("the ft method needs a circulant matrix")
    print(f"rank: {cyclic.ft_rank(W)}")
    return 0


def cmd_roots(args) -> int:
    if args.manifest:
        code = _bch(read_manifest(args.manifest))
    elif args.n is None:
        raise UsageError("roots needs --manifest or --n")
    elif args.roots:
        code = cyclic.cyclic_code(args.n, roots=parse_int_list(args.roots))
    else:
        code = cyclic.random_code(args.n, np.random.default_rng(args.seed))
    c = args.c if args.c is not None else min(circ.proper_factors(code.n), default=None)
    if c is None:
        raise FormatError(f"n={code.n} has no proper factor")
    part = cyclic.equal_classes(cyclic.root_coefficients(code), c)
    j = args.section
    pred = cyclic.type1_descendant_roots(part, j)
    sec = circ.cyclic_section(cyclic.parity_check_vector(code), c, j)
    if not sec.any():
        orc = cyclic.WHOLE_SPACE
    else:
        g = cyclic.generator_from_rows(sec, code.base)
        orc = frozenset(cyclic.descendant_code_roots(code, g, c))

    def show(x):
        return str(x) if x is cyclic.WHOLE_SPACE else "[" + ", ".join(map(str, sorted(x))) + "]"

    print(f"code: ({code.n},{code.k}) c={c} l={code.n // c} section={j}")
    print(f"predicted: {show(pred)}")
    print(f"oracle:    {show(orc)}")
    same = pred == orc
    print("MATCH" if same else "MISMATCH")
    return 0 if same else 1


def cmd_simulate(args) -> int:
    if args.exhaustive_weight is not None:
        if args.decoder != "osmlgd":
            raise UsageError("--exhaustive-weight applies to --decoder osmlgd")
        fails, total = decode.osmlgd_exhaustive(_load(args), args.exhaustive_weight)
        print(f"{fails} failures / {total} patterns")
        return 0
    if args.snr is None:
        raise UsageError("simulate needs --snr")
    snrs = parse_snr(args.snr)
    rep = decode.monte_carlo(
        _load(args),
        args.decoder,
        snrs,
        max_frames=args.frames,
        min_frame_errors=args.min_errors,
        seed=args.seed,
        threads=args.threads,
        max_iter=args.max_iter,
        scale=args.scale,
    )
    text = rep.to_csv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cycldpc", description="Cyclic and quasi-cyclic LDPC code workbench.")
    sub = p.add_subparsers(dest="command", required=True)

    def src(sp):
        sp.add_argument("--in", dest="input", help="parity-check matrix in alist format")
        sp.add_argument("--manifest", help="key=value construction manifest")

    c = sub.add_parser("construct", help="build a parity-check matrix")
    c.add_argument("--manifest", help="key=value construction manifest")
    c.add_argument("--kind", help="eg, pg, bch, rs-dispersion, ls-dispersion or manual")
    c.add_argument("--m", type=int, help="geometry dimension (eg)")
    c.add_argument("--q", type=int, help="field size")
    c.add_argument("--eta", type=int, help="exponent of eta (ls-dispersion)")
    c.add_argument("--n", type=int, help="code length (bch)")
    c.add_argument("--roots", help="comma list of root exponents (bch)")
    c.add_argument("--generator", help="comma list of generator coefficients, lowest first (bch)")
    c.add_argument("--orientation", choices=["rows", "columns"], help="incidence vectors as rows or columns")
    c.add_argument("--class", dest="cls", type=int, help="single cyclic class index (eg, m > 2)")
    c.add_argument("--matrix", help="alist path (manual)")
    c.add_argument("--out", help="write the matrix as alist")
    c.add_argument("--manifest-out", help="write the effective manifest here instead of stdout")
    c.add_argument("--no-girth", dest="girth", action="store_false", help="skip the girth computation")
    c.set_defaults(func=cmd_construct)

    d = sub.add_parser("decompose", help="decompose a circulant into sections or CPMs")
    src(d)
    d.add_argument("--c", type=int, help="number of sections (proper factor of n)")
    d.add_argument("--b", type=int, help="CPM decomposition: b with b*l = q-1")
    d.add_argument("--l", type=int, help="CPM decomposition: block size l")
    d.add_argument("--out-dir", help="directory for section files and grid.txt")
    d.add_argument("--out", help="CPM grid output file (default stdout)")
    d.add_argument("--descendant", type=int, help="print the generator of section j's descendant")
    d.set_defaults(func=cmd_decompose)

    mk = sub.add_parser("mask", help="mask a CPM grid or zero circulant sections")
    src(mk)
    mk.add_argument("--grid", help="CPM grid text")
    mk.add_argument("--l", type=int, help="CPM size of the grid")
    mk.add_argument("--mask", help="masking matrix text (rows of 0/1)")
    mk.add_argument("--c", type=int, help="number of sections")
    mk.add_argument("--sections", help="comma list of sections to zero")
    mk.add_argument("--out", help="masked grid output (default stdout)")
    mk.add_argument("--alist-out", help="write the masked matrix as alist")
    mk.set_defaults(func=cmd_mask)

    s = sub.add_parser("split", help="e x e block splitting of a CPM grid")
    s.add_argument("--grid", required=True, help="CPM grid text")
    s.add_argument("--l", type=int, required=True, help="CPM size")
    s.add_argument("--e", type=int, required=True, help="split factor dividing q")
    s.add_argument("--out", help="output grid (default stdout)")
    s.add_argument("--alist-out", help="write the split matrix as alist")
    s.set_defaults(func=cmd_split)

    t = sub.add_parser("trapset", help="exhaustive trapping-set enumeration")
    src(t)
    t.add_argument("--kappa-max", type=int, required=True, help="largest VN subset size")
    t.add_argument("--tau-max", type=int, help="drop sets with more odd-degree CNs")
    t.add_argument("--filter", choices=["all", "elementary", "codeword"], default="all", help="record filter")
    t.add_argument("--csv", help="write records as CSV")
    t.add_argument("--threads", type=int, help=f"worker threads (default ${decode.THREADS_ENV} or 1)")
    t.set_defaults(func=cmd_trapset)

    r = sub.add_parser("rank", help="GF(2) rank of a matrix")
    src(r)
    r.add_argument("--method", choices=["ft", "gauss"], default="gauss", help="Fourier (circulants) or elimination")
    r.set_defaults(func=cmd_rank)

    ro = sub.add_parser("roots", help="predicted versus oracle roots of a descendant code")
    ro.add_argument("--manifest", help="manifest with kind=bch, n and roots or generator")
    ro.add_argument("--n", type=int, help="code length")
    ro.add_argument("--roots", help="comma list of root exponents")
    ro.add_argument("--seed", type=int, default=0, help="seed for a random code when no roots are given")
    ro.add_argument("--c", type=int, help="number of sections (default: smallest proper factor)")
    ro.add_argument("--section", type=int, required=True, help="section index j")
    ro.set_defaults(func=cmd_roots)

    sm = sub.add_parser("simulate", help="BPSK/AWGN Monte Carlo or exhaustive OSMLGD check")
    src(sm)
    sm.add_argument("--decoder", choices=["spa", "min-sum", "osmlgd"], default="spa", help="decoder")
    sm.add_argument("--snr", help="Eb/N0 in dB: start:step:end (inclusive) or comma list")
    sm.add_argument("--frames", type=int, default=10_000, help="maximum frames per SNR")
    sm.add_argument("--min-errors", type=int, help="stop an SNR point after this many frame errors")
    sm.add_argument("--seed", type=int, default=0, help="random seed")
    sm.add_argument("--max-iter", type=int, default=50, help="decoder iterations")
    sm.add_argument("--scale", type=float, default=decode.MS_SCALE, help="min-sum scale factor")
    sm.add_argument("--threads", type=int, help=f"worker threads (default ${decode.THREADS_ENV} or 1)")
    sm.add_argument("--exhaustive-weight", type=int, help="osmlgd: test all error patterns up to this weight")
    sm.add_argument("--out", help="CSV output (default stdout)")
    sm.set_defaults(func=cmd_simulate)
    return p


DOMAIN_ERRORS = (ValueError, ArithmeticError, LookupError, OSError, MemoryError, RuntimeError)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
