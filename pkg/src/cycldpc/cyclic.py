"""Cyclic codes, their circulant parity-check matrices and descendant roots.

A code of length n over GF(q) is described by its generator g(X) and by the
roots of g, written as exponents r of a fixed n-th root of unity
beta = alpha^((q^m - 1)/n) in the extension GF(q^m).  Roots of a descendant
code of length l = n/c are written as exponents of gamma = beta^c.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .circulant import Circulant, _check_factor, cyclic_section
from .gf import (
    FieldElement,
    FieldError,
    FieldSpec,
    Poly,
    build_field,
    cyclotomic_coset,
    extension_degree,
    field_embedding,
    fourier_transform,
    poly_divmod,
    poly_gcd,
    poly_lcm,
    prime_factors,
    root_of_unity,
    subfield,
)


class CodeError(ValueError):
    """Raised for inconsistent cyclic-code descriptions."""


def _fields(n: int, q: int, ext: FieldSpec | None = None) -> tuple[FieldSpec, FieldSpec]:
    """Base field GF(q) and an extension containing the n-th roots of unity."""
    pf = prime_factors(q)
    if len(pf) != 1:
        raise FieldError(f"q={q} is not a prime power")
    p = pf[0]
    s = round(np.log(q) / np.log(p))
    if gcd(n, q) != 1:
        raise CodeError(f"gcd(n={n}, q={q}) != 1: repeated roots")
    m = extension_degree(q, n)
    if ext is None:
        ext = build_field(p, s * m)
    elif ext.p != p or ext.s % s or ext.order % n:
        raise FieldError(f"{ext} cannot host length-{n} codes over GF({q})")
    base = ext if s == ext.s else (build_field(p) if s == 1 else subfield(ext, s))
    return base, ext


def embed_poly(poly: Poly, ext: FieldSpec) -> Poly:
    """Move a polynomial over a subfield into the extension."""
    if poly.field == ext:
        return poly
    return Poly(ext, field_embedding(poly.field, ext)[poly.coeffs])


def code_roots(poly: Poly, beta: FieldElement) -> list[int]:
    """Exponents r in [0, ord(beta)) with poly(beta^r) = 0."""
    ext = beta.field
    N = beta.multiplicative_order()
    pts = ext.alpha_pow(beta.exp * np.arange(N))
    vals = embed_poly(poly, ext).eval_many(pts)
    return [int(r) for r in np.flatnonzero(vals == 0)]


@dataclass(frozen=True, eq=False)
class CyclicCodeSpec:
    """(n, k) cyclic code over GF(q) with its roots in GF(q^m)."""

    n: int
    base: FieldSpec
    ext: FieldSpec
    g: Poly
    roots: tuple[int, ...]

    @property
    def k(self) -> int:
        return self.n - self.g.degree

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def beta(self) -> FieldElement:
        return root_of_unity(self.ext, self.n)

    @property
    def h(self) -> Poly:
        quo, rem = poly_divmod(Poly.x_n_minus_1(self.base, self.n), self.g)
        if not rem.is_zero():
            raise CodeError("g(X) does not divide X^n - 1")
        return quo

    def __repr__(self) -> str:
        return f"CyclicCodeSpec(n={self.n}, k={self.k}, q={self.q}, roots={len(self.roots)})"


def cyclic_code(
    n: int,
    roots=None,
    generator=None,
    q: int = 2,
    ext: FieldSpec | None = None,
    closure: bool = True,
) -> CyclicCodeSpec:
    """Build a cyclic code from roots or from a generator polynomial.

    Parameters
    ----------
    n : int
        Code length, coprime to q.
    roots : iterable of int, optional
        Exponents of beta; closed under conjugation (multiplication by q
        mod n) when ``closure`` is set.
    generator : Poly or sequence of int, optional
        Generator coefficients over GF(q), lowest degree first.
    q : int
        Size of the symbol field.
    ext : FieldSpec, optional
        Extension field to use instead of the default GF(q^m).
    """
    base, ext = _fields(n, q, ext)
    beta = root_of_unity(ext, n)
    if (roots is None) == (generator is None):
        raise CodeError("give exactly one of roots or generator")
    if roots is not None:
        rs = set()
        for r in roots:
            rs.update(cyclotomic_coset(int(r), q, n) if closure else [int(r) % n])
        rs = sorted(rs)
        g_ext = Poly.from_roots(ext, ext.alpha_pow(beta.exp * np.array(rs, dtype=np.int64)))
        if base == ext:
            g = g_ext
        elif base.s == 1:
            if np.any(g_ext.coeffs >= base.p):
                raise CodeError("root set is not closed under conjugation")
            g = Poly(base, g_ext.coeffs)
        else:
            try:
                g = Poly(base, base.restrict(g_ext.coeffs))
            except FieldError as e:
                raise CodeError("root set is not closed under conjugation") from e
        return CyclicCodeSpec(n, base, ext, g, tuple(rs))
    g = generator if isinstance(generator, Poly) else Poly(base, generator)
    if g.field != base:
        g = Poly(base, g.coeffs)
    g = g.monic()
    if g.is_zero() or not poly_divmod(Poly.x_n_minus_1(base, n), g)[1].is_zero():
        raise CodeError("g(X) does not divide X^n - 1")
    return CyclicCodeSpec(n, base, ext, g, tuple(code_roots(g, beta)))


def parity_check_vector(code: CyclicCodeSpec) -> np.ndarray:
    """h~ = (h_k, h_{k-1}, ..., h_0, 0, ..., 0)."""
    h = code.h
    out = np.zeros(code.n, dtype=np.int64)
    out[: h.degree + 1] = h.coeffs[::-1]
    return out


def circulant_parity_matrix(code: CyclicCodeSpec) -> Circulant:
    """The n x n circulant generated by the parity-check vector."""
    return Circulant(parity_check_vector(code), code.base)


@dataclass(frozen=True, eq=False)
class RootData:
    """sigma_i and lambda_i per root, as codes of the extension field."""

    code: CyclicCodeSpec
    roots: tuple[int, ...]
    sigma: np.ndarray
    lam: np.ndarray

    def root_vector(self, i: int) -> np.ndarray:
        """v~_i = (1, beta_i, ..., beta_i^(n-1))."""
        ext, n = self.code.ext, self.code.n
        e = self.code.beta.exp * self.roots[i]
        return ext.alpha_pow(e * np.arange(n))

    def combination(self, coeffs=None) -> np.ndarray:
        """sum_i coeffs_i v~_i componentwise (defaults to lambda)."""
        ext, n = self.code.ext, self.code.n
        coeffs = self.lam if coeffs is None else np.asarray(coeffs)
        be = self.code.beta.exp
        logs = ext.log[coeffs]
        r = np.array(self.roots, dtype=np.int64)
        e = (logs[:, None] + be * ((r[:, None] * np.arange(n)[None, :]) % n)) % ext.order
        terms = np.where(coeffs[:, None] == 0, 0, ext.exp[e])
        return ext.sum(terms, axis=0)


def root_coefficients(code: CyclicCodeSpec) -> RootData:
    """sigma_i = prod_{j != i}(beta_i - beta_j)^-1 and lambda_i = sigma_i beta_i^(n-k-1)."""
    ext = code.ext
    r = np.array(code.roots, dtype=np.int64)
    if len(set(code.roots)) != len(code.roots):
        raise CodeError("repeated roots")
    be = code.beta.exp
    vals = ext.alpha_pow(be * r)
    d = len(r)
    sigma = np.zeros(d, dtype=np.int64)
    for i in range(d):
        diffs = ext.sub(np.full(d - 1, vals[i]), np.delete(vals, i))
        logsum = int(np.sum(ext.log[diffs])) if d > 1 else 0
        sigma[i] = ext.alpha_pow(-logsum)
    lam = ext.mul(sigma, ext.alpha_pow(be * r * (code.n - code.k - 1)))
    return RootData(code, tuple(int(x) for x in r), sigma, np.asarray(lam))


@dataclass(frozen=True, eq=False)
class EqualClassPartition:
    """Roots grouped by equal c-th power.

    ``keys[e]`` is the exponent of gamma = beta^c shared by class e and
    ``classes[e]`` lists its (root exponent, lambda code) pairs.
    """

    rd: RootData
    c: int
    l: int
    keys: tuple[int, ...]
    classes: tuple[tuple[tuple[int, int], ...], ...]

    def section_generator(self, e: int) -> np.ndarray:
        """v~*_{e,0} = (1, gamma^k, ..., gamma^((l-1)k)) for class key k."""
        ext = self.rd.code.ext
        ge = self.rd.code.beta.exp * self.c
        return ext.alpha_pow(ge * self.keys[e] * np.arange(self.l))

    def lam_star(self, j: int) -> np.ndarray:
        """lambda*_{e,j} = sum_f lambda_{e,f} beta_{e,f}^j for every class e."""
        ext = self.rd.code.ext
        be = self.rd.code.beta.exp
        out = np.zeros(len(self.classes), dtype=np.int64)
        for e, cl in enumerate(self.classes):
            terms = [ext.mul(lam, ext.alpha_pow(be * r * j)) for r, lam in cl]
            out[e] = ext.sum(np.array(terms, dtype=np.int64))
        return out


def equal_classes(rd: RootData, c: int) -> EqualClassPartition:
    n = rd.code.n
    l = _check_factor(n, c)
    groups: dict[int, list[tuple[int, int]]] = {}
    for r, lam in zip(rd.roots, rd.lam):
        groups.setdefault((r * c % n) // c, []).append((r, int(lam)))
    keys = tuple(sorted(groups))
    return EqualClassPartition(rd, c, l, keys, tuple(tuple(groups[k]) for k in keys))


class _WholeSpace:
    """Marker for an all-zero section: every length-l word is a codeword."""

    def __repr__(self) -> str:
        return "WHOLE_SPACE"


WHOLE_SPACE = _WholeSpace()


def type1_descendant_roots(part: EqualClassPartition, j: int):
    """Predicted roots of the type-1 descendant generator g_j.

    Returns the set of gamma-exponents k (gamma = beta^c) with
    lambda*_{e,j} != 0, or ``WHOLE_SPACE`` when section j is all zero.
    """
    if not 0 <= j < part.c:
        raise IndexError(f"section index {j} out of range for c={part.c}")
    ls = part.lam_star(j)
    if not ls.any():
        return WHOLE_SPACE
    return frozenset(int(k) for k, v in zip(part.keys, ls) if v != 0)


def type2_generator(generators) -> Poly:
    """Generator of a stacked-section descendant: the LCM of type-1 generators."""
    generators = list(generators)
    if not generators:
        raise ValueError("empty generator list")
    return poly_lcm(generators)


def generator_from_rows(M, field: FieldSpec, n: int | None = None) -> Poly:
    """Generator of the cyclic null space of a matrix whose row space is cyclic.

    The gcd d(X) of all row polynomials and X^n - 1 generates the row space;
    the parity polynomial is the reciprocal of d made monic and the
    generator is (X^n - 1) divided by it.
    """
    M = np.atleast_2d(np.asarray(M, dtype=np.int64))
    n = M.shape[1] if n is None else n
    if M.shape[1] != n:
        raise ValueError("row length does not match n")
    if not M.any():
        raise ValueError("all-zero matrix has no generator")
    xn = Poly.x_n_minus_1(field, n)
    d = xn
    seen = set()
    for row in M:
        if not row.any():
            continue
        key = row.tobytes()
        if key in seen:
            continue
        seen.add(key)
        d = poly_gcd(d, Poly(field, row))
        if d.degree == 0:
            break
    h = d.reciprocal().monic()
    g, rem = poly_divmod(xn, h)
    if not rem.is_zero():
        raise CodeError("row space is not cyclic")
    return g.monic()


def descendant_generator(code: CyclicCodeSpec, j: int, c: int) -> Poly:
    """Generator of the null space of the j-th section circulant (oracle path)."""
    sec = cyclic_section(parity_check_vector(code), c, j)
    return generator_from_rows(sec, code.base)


def descendant_code_roots(code: CyclicCodeSpec, g: Poly, c: int) -> list[int]:
    """gamma-exponents of the roots of a length-(n/c) generator."""
    gamma = code.beta ** c
    return code_roots(g, gamma)


def _ft_ext(n: int, q: int, ext: FieldSpec | None) -> FieldElement:
    _, ext = _fields(n, q, ext)
    return root_of_unity(ext, n)


def ft_rank(W: Circulant, ext: FieldSpec | None = None) -> int:
    """Rank of a circulant as the number of nonzero Fourier components."""
    beta = _ft_ext(W.n, W.field.q, ext)
    v = field_embedding(W.field, beta.field)[W.w]
    return int(np.count_nonzero(fourier_transform(v, beta)))


def ft_group_rank(sections, field: FieldSpec, ext: FieldSpec | None = None) -> int:
    """Rank of a stack of l x l circulants: spectral positions nonzero in some section."""
    sections = np.atleast_2d(np.asarray(sections, dtype=np.int64))
    l = sections.shape[1]
    beta = _ft_ext(l, field.q, ext)
    emb = field_embedding(field, beta.field)
    live = np.zeros(l, dtype=bool)
    for s in sections:
        v = emb[s]
        live |= fourier_transform(v, beta) != 0
    return int(np.count_nonzero(live))


def random_code(n: int, rng: np.random.Generator, q: int = 2) -> CyclicCodeSpec:
    """Random nontrivial cyclic code: a random proper nonempty union of cosets."""
    cosets, seen = [], set()
    for r in range(n):
        if r not in seen:
            cs = cyclotomic_coset(r, q, n)
            seen.update(cs)
            cosets.append(cs)
    if len(cosets) < 2:
        raise CodeError(f"no proper cyclic codes of length {n}")
    while True:
        pick = rng.random(len(cosets)) < 0.5
        if 0 < pick.sum() < len(cosets):
            break
    roots = [r for cs, p in zip(cosets, pick) if p for r in cs]
    return cyclic_code(n, roots=roots, q=q, closure=False)


__all__ = [
    "CodeError",
    "CyclicCodeSpec",
    "RootData",
    "EqualClassPartition",
    "WHOLE_SPACE",
    "cyclic_code",
    "embed_poly",
    "code_roots",
    "parity_check_vector",
    "circulant_parity_matrix",
    "root_coefficients",
    "equal_classes",
    "type1_descendant_roots",
    "type2_generator",
    "generator_from_rows",
    "descendant_generator",
    "descendant_code_roots",
    "ft_rank",
    "ft_group_rank",
    "random_code",
]
