"""Finite fields GF(p^s), polynomials over them, and GF(2) linear algebra.

Field elements are handled as integer *codes*: the base-p digits of a code
are the coefficients of the element written as a polynomial in the
primitive element alpha (lowest digit is the constant term).  Every field
keeps log/antilog tables so multiplication is exponent addition.  The zero
element has the exponent sentinel ``ZERO``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

ZERO = -1  # exponent of the zero element

# Smallest primitive polynomial of each degree over GF(2), as bitmasks.
PRIMITIVE_GF2 = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100000000101011,
    15: 0b1000000000000011,
    16: 0b10000000000101101,
}

_MAX_PRIME = 1 << 16
_MAX_ORDER = 1 << 24


class FieldError(ValueError):
    """Raised for invalid field parameters or polynomials."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def primitive_root(p: int) -> int:
    """Smallest primitive root modulo the prime p."""
    if p == 2:
        return 1
    fs = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in fs):
            return g
    raise FieldError(f"no primitive root mod {p}")


def _bitmask_to_coeffs(mask: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(mask.bit_length()))


class FieldSpec:
    """GF(p^s) with log/antilog tables.

    Use :func:`build_field` to construct one.  Instances are immutable after
    construction and safe to share between threads.
    """

    def __init__(self, p: int, s: int, poly: tuple[int, ...], exp: np.ndarray, log: np.ndarray):
        self.p = p
        self.s = s
        self.q = p**s
        self.order = self.q - 1  # multiplicative group order
        self.poly = poly
        self.exp = exp
        self.log = log
        self.parent: FieldSpec | None = None
        self._embed: np.ndarray | None = None
        self._restrict: dict[int, int] | None = None
        self.exp.setflags(write=False)
        self.log.setflags(write=False)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.s})"

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.s, self.poly) == (other.p, other.s, other.poly)

    def __hash__(self) -> int:
        return hash((self.p, self.s, self.poly))

    # element constructors
    def element(self, exp: int) -> FieldElement:
        """alpha**exp, or zero when exp is ZERO."""
        if exp == ZERO:
            return FieldElement(self, ZERO)
        return FieldElement(self, int(exp) % self.order)

    def from_code(self, code: int) -> FieldElement:
        return FieldElement(self, int(self.log[code]))

    @property
    def alpha(self) -> FieldElement:
        return self.element(1)

    def alpha_pow(self, e):
        """Code of alpha**e (vectorised over e)."""
        return self.exp[np.asarray(e) % self.order]

    # vectorised arithmetic on codes
    def _digits(self, a):
        a = np.asarray(a, dtype=np.int64)
        return [(a // self.p**k) % self.p for k in range(self.s)]

    def _undigits(self, ds):
        out = np.zeros_like(ds[0])
        for k, d in enumerate(ds):
            out = out + d * self.p**k
        return out

    def add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.s == 1:
            return (np.asarray(a) + b) % self.p
        da, db = self._digits(a), self._digits(b)
        return self._undigits([(x + y) % self.p for x, y in zip(da, db)])

    def neg(self, a):
        if self.p == 2:
            return a
        if self.s == 1:
            return (-np.asarray(a)) % self.p
        return self._undigits([(-x) % self.p for x in self._digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        r = self.exp[(self.log[a] + self.log[b]) % self.order]
        r = np.where((a == 0) | (b == 0), 0, r)
        return r if r.ndim else int(r)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        r = self.exp[(-self.log[a]) % self.order]
        return r if r.ndim else int(r)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e: int):
        a = np.asarray(a)
        if e < 0:
            a = np.asarray(self.inv(a))
            e = -e
        r = self.exp[(self.log[a] * e) % self.order]
        if e == 0:
            r = np.ones_like(r)
        else:
            r = np.where(a == 0, 0, r)
        return r if r.ndim else int(r)

    def sum(self, a, axis=None):
        """Field sum of an array of codes along an axis."""
        a = np.asarray(a)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        if self.s == 1:
            return np.sum(a, axis=axis) % self.p
        return self._undigits([np.sum(d, axis=axis) % self.p for d in self._digits(a)])

    def scale(self, c: int, a):
        """c * a for a scalar code c and an array of codes a."""
        return self.mul(np.full(np.shape(a), c, dtype=np.int64), a)

    # subfield bookkeeping
    def embed(self, codes):
        """Map codes of this field into its parent field."""
        if self.parent is None:
            return np.asarray(codes)
        return self._embed[np.asarray(codes)]

    def restrict(self, parent_codes):
        """Map parent-field codes lying in this subfield back to our codes."""
        out = []
        for c in np.ravel(parent_codes):
            c = int(c)
            if c not in self._restrict:
                raise FieldError(f"element {c} of {self.parent} is not in {self}")
            out.append(self._restrict[c])
        return np.array(out, dtype=np.int64).reshape(np.shape(parent_codes))


@dataclass(frozen=True)
class FieldElement:
    """An element alpha**exp of a field (exp == ZERO for zero)."""

    field: FieldSpec
    exp: int

    @property
    def code(self) -> int:
        return 0 if self.exp == ZERO else int(self.field.exp[self.exp])

    @property
    def is_zero(self) -> bool:
        return self.exp == ZERO

    def __mul__(self, other: FieldElement) -> FieldElement:
        if self.is_zero or other.is_zero:
            return FieldElement(self.field, ZERO)
        return self.field.element(self.exp + other.exp)

    def __add__(self, other: FieldElement) -> FieldElement:
        return self.field.from_code(self.field.add(self.code, other.code))

    def __sub__(self, other: FieldElement) -> FieldElement:
        return self.field.from_code(self.field.sub(self.code, other.code))

    def __neg__(self) -> FieldElement:
        return self.field.from_code(self.field.neg(self.code))

    def inverse(self) -> FieldElement:
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        return self.field.element(-self.exp % self.field.order)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        return self * other.inverse()

    def __pow__(self, e: int) -> FieldElement:
        if self.is_zero:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return self.field.element(0 if e == 0 else ZERO)
        return self.field.element(self.exp * e % self.field.order)

    def multiplicative_order(self) -> int:
        if self.is_zero:
            raise FieldError("zero has no multiplicative order")
        return self.field.order // gcd(self.exp, self.field.order)

    def __repr__(self) -> str:
        if self.is_zero:
            return "0"
        return f"a^{self.exp}"


def _poly_mod_p_divides(a: list[int], b: list[int], p: int) -> bool:
    """True if b divides a over GF(p) (lists low-first, b monic)."""
    r = list(a)
    db = len(b) - 1
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] % p
        if c:
            for k in range(db + 1):
                r[i - db + k] = (r[i - db + k] - c * b[k]) % p
    return not any(x % p for x in r[:db])


def _find_factor(poly: tuple[int, ...], p: int) -> tuple[int, ...] | None:
    """Smallest monic factor of degree <= deg/2, by trial division."""
    s = len(poly) - 1
    for d in range(1, s // 2 + 1):
        for low in range(p**d):
            cand = [(low // p**k) % p for k in range(d)] + [1]
            if _poly_mod_p_divides(list(poly), cand, p):
                return tuple(cand)
    return None


def _poly_str(coeffs) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = int(coeffs[i])
        if not c:
            continue
        mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}" if i == 0 else f"{c}{mono}")
    return " + ".join(terms) if terms else "0"


@lru_cache(maxsize=None)
def _smallest_primitive(p: int, s: int) -> tuple[int, ...]:
    """First primitive polynomial when the lower coefficients are read as a base-p number."""
    for v in range(1, p**s):
        low = tuple((v // p**k) % p for k in range(s))
        if low[0] == 0:
            continue
        try:
            build_field(p, s, low + (1,))
        except FieldError:
            continue
        return low + (1,)
    raise FieldError(f"no primitive polynomial of degree {s} over GF({p})")


def build_field(p: int, s: int = 1, primitive_poly=None) -> FieldSpec:
    """Build GF(p^s).

    Parameters
    ----------
    p : int
        Characteristic (prime).
    s : int
        Extension degree.
    primitive_poly : sequence of int, int bitmask, Poly or None
        Coefficients over GF(p), lowest degree first, monic of degree s.
        A bitmask is accepted for p = 2.  When omitted the embedded
        default is used: the smallest primitive polynomial for p = 2 and
        s <= 16, the smallest primitive root for prime fields, and
        otherwise the first primitive polynomial found by a search.

    Returns
    -------
    FieldSpec
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if s < 1:
        raise FieldError("degree must be >= 1")
    q = p**s
    if q > _MAX_ORDER:
        raise FieldError(f"GF({p}^{s}) exceeds the supported size")
    if primitive_poly is None:
        if p == 2 and s in PRIMITIVE_GF2:
            coeffs = _bitmask_to_coeffs(PRIMITIVE_GF2[s])
        elif s == 1 and p <= _MAX_PRIME:
            coeffs = ((-primitive_root(p)) % p, 1)
        else:
            coeffs = _smallest_primitive(p, s)
    elif isinstance(primitive_poly, int):
        if p != 2:
            raise FieldError("bitmask polynomials are only accepted for p = 2")
        coeffs = _bitmask_to_coeffs(primitive_poly)
    elif isinstance(primitive_poly, Poly):
        coeffs = tuple(int(c) for c in primitive_poly.coeffs)
    else:
        coeffs = tuple(int(c) % p for c in primitive_poly)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if len(coeffs) != s + 1:
        raise FieldError(f"primitive polynomial must have degree {s}, got {len(coeffs) - 1}")
    if coeffs[-1] != 1:
        raise FieldError("primitive polynomial must be monic")

    order = q - 1
    exp = np.zeros(order, dtype=np.int64)
    log = np.full(q, ZERO, dtype=np.int64)
    if s == 1:
        g = (-coeffs[0]) % p
        x = 1
        for i in range(order):
            if log[x] != ZERO:
                raise FieldError(f"{g} is not a primitive root mod {p}: its order is {i}")
            exp[i] = x
            log[x] = i
            x = (x * g) % p
        if x != 1:
            raise FieldError(f"{g} is not a primitive root mod {p}")
    else:
        factor = _find_factor(coeffs, p)
        if factor is not None:
            raise FieldError(f"polynomial {_poly_str(coeffs)} is reducible: divisible by {_poly_str(factor)}")
        digits = [1] + [0] * (s - 1)
        pw = [p**k for k in range(s)]
        for i in range(order):
            code = sum(d * w for d, w in zip(digits, pw))
            if log[code] != ZERO:
                raise FieldError(
                    f"polynomial {_poly_str(coeffs)} is irreducible but not primitive: x has order {i}"
                )
            exp[i] = code
            log[code] = i
            top = digits[-1]
            digits = [0] + digits[:-1]
            if top:
                digits = [(d - top * c) % p for d, c in zip(digits, coeffs[:-1])]
    return FieldSpec(p, s, coeffs, exp, log)


def subfield(F: FieldSpec, d: int) -> FieldSpec:
    """The subfield GF(p^d) of F, generated by alpha**((q-1)/(p^d-1)).

    The returned field records F as its parent so codes can be moved
    between the two with ``embed`` and ``restrict``.
    """
    if F.s % d:
        raise FieldError(f"GF({F.p}^{d}) is not a subfield of {F}")
    if d == F.s:
        return F
    qs = F.p**d
    t = F.order // (qs - 1)
    gamma = F.element(t)
    mp = _minpoly_in(gamma)
    coeffs = tuple(int(c) for c in mp.coeffs)
    if any(c >= F.p for c in coeffs):
        raise FieldError("minimal polynomial escaped the prime field")
    sub = build_field(F.p, d, coeffs)
    emb = np.zeros(qs, dtype=np.int64)
    nz = np.arange(1, qs)
    emb[nz] = F.exp[(sub.log[nz] * t) % F.order]
    sub.parent = F
    sub._embed = emb
    sub._restrict = {int(c): i for i, c in enumerate(emb)}
    return sub


def field_embedding(F: FieldSpec, ext: FieldSpec) -> np.ndarray:
    """Code table mapping GF(p^d) into an extension ``ext`` of the same characteristic.

    Uses the recorded embedding for subfields of ``ext``; otherwise sends
    F's primitive element to the first root of F's defining polynomial in
    ``ext``.
    """
    if F == ext:
        return np.arange(F.q, dtype=np.int64)
    if F.p != ext.p or ext.s % F.s:
        raise FieldError(f"{F} does not embed in {ext}")
    if F.parent is not None and F.parent == ext:
        return F._embed
    if F.s == 1:
        return np.arange(F.q, dtype=np.int64)
    t = ext.order // F.order
    cand = t * np.arange(1, F.order + 1)
    cand = cand[np.gcd(cand // t, F.order) == 1]
    poly = Poly(ext, np.array(F.poly, dtype=np.int64))
    hits = cand[poly.eval_many(ext.alpha_pow(cand)) == 0]
    if len(hits) == 0:
        raise FieldError(f"no root of the defining polynomial of {F} in {ext}")
    emb = np.zeros(F.q, dtype=np.int64)
    nz = np.arange(1, F.q)
    emb[nz] = ext.exp[(F.log[nz] * int(hits[0])) % ext.order]
    return emb


def root_of_unity(F: FieldSpec, n: int) -> FieldElement:
    """alpha**((q-1)/n), an element of order n."""
    if n < 1 or F.order % n:
        raise FieldError(f"{F} has no element of order {n}")
    return F.element(F.order // n)


def extension_degree(q: int, n: int) -> int:
    """Smallest m with n | q^m - 1."""
    if gcd(n, q) != 1:
        raise FieldError(f"gcd({n}, {q}) != 1: no root of unity of order {n}")
    if n == 1:
        return 1
    m, x = 1, q % n
    while x != 1:
        x = (x * q) % n
        m += 1
    return m


def cyclotomic_coset(e: int, Q: int, N: int) -> list[int]:
    """Orbit of e under multiplication by Q modulo N."""
    out = [e % N]
    x = (e * Q) % N
    while x != out[0]:
        out.append(x)
        x = (x * Q) % N
    return out


class Poly:
    """Polynomial over a FieldSpec, coefficients lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs=()):
        c = np.array(coeffs, dtype=np.int64).ravel()
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        self.field = field
        self.coeffs = c

    @classmethod
    def monomial(cls, field: FieldSpec, deg: int, coef: int = 1) -> Poly:
        c = np.zeros(deg + 1, dtype=np.int64)
        c[deg] = coef
        return cls(field, c)

    @classmethod
    def x_n_minus_1(cls, field: FieldSpec, n: int) -> Poly:
        c = np.zeros(n + 1, dtype=np.int64)
        c[n] = 1
        c[0] = field.neg(1)
        return cls(field, c)

    @classmethod
    def from_roots(cls, field: FieldSpec, roots) -> Poly:
        """prod (X - r) for root codes r."""
        out = cls(field, [1])
        for r in roots:
            out = out * cls(field, [field.neg(int(r)), 1])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def lead(self) -> int:
        return int(self.coeffs[-1]) if len(self.coeffs) else 0

    def _check(self, other: Poly) -> None:
        if self.field != other.field:
            raise FieldError(f"polynomials over different fields: {self.field} and {other.field}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.field, tuple(self.coeffs.tolist())))

    def __repr__(self) -> str:
        return f"Poly({self.field}, {self.coeffs.tolist()})"

    def __str__(self) -> str:
        return _poly_str(self.coeffs).replace("x", "X")

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=np.int64)
        b = np.zeros(n, dtype=np.int64)
        a[: len(self.coeffs)] = self.coeffs
        b[: len(other.coeffs)] = other.coeffs
        return Poly(self.field, self.field.add(a, b))

    def __neg__(self) -> Poly:
        return Poly(self.field, self.field.neg(self.coeffs))

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        self._check(other)
        F = self.field
        if self.is_zero() or other.is_zero():
            return Poly(F)
        a, b = self.coeffs, other.coeffs
        if F.p == 2 and F.s == 1:
            return Poly(F, np.convolve(a, b) & 1)
        if len(a) > len(b):
            a, b = b, a
        out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
        for i in np.flatnonzero(a):
            out[i : i + len(b)] = F.add(out[i : i + len(b)], F.scale(int(a[i]), b))
        return Poly(F, out)

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        return poly_divmod(self, other)

    def __floordiv__(self, other: Poly) -> Poly:
        return poly_divmod(self, other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return poly_divmod(self, other)[1]

    def scale(self, c: int) -> Poly:
        return Poly(self.field, self.field.scale(c, self.coeffs))

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lead))

    def reciprocal(self) -> Poly:
        """X^deg * p(1/X)."""
        return Poly(self.field, self.coeffs[::-1])

    def __call__(self, x: int) -> int:
        """Evaluate at the element with code x (Horner)."""
        F = self.field
        acc = 0
        for c in self.coeffs[::-1]:
            acc = F.add(F.mul(acc, x), int(c))
        return int(acc)

    def eval_many(self, xs) -> np.ndarray:
        F = self.field
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros_like(xs)
        for c in self.coeffs[::-1]:
            acc = F.add(F.mul(acc, xs), np.full_like(xs, int(c)))
        return acc

    def vector(self, n: int) -> np.ndarray:
        """Coefficient vector padded to length n."""
        if len(self.coeffs) > n:
            raise ValueError(f"degree {self.degree} does not fit length {n}")
        out = np.zeros(n, dtype=np.int64)
        out[: len(self.coeffs)] = self.coeffs
        return out


def _to_int(c: np.ndarray) -> int:
    """GF(2) coefficient vector as an int bitset (bit i = coefficient of X^i)."""
    if len(c) == 0:
        return 0
    return int.from_bytes(np.packbits(c.astype(np.uint8), bitorder="little").tobytes(), "little")


def _from_int(x: int) -> np.ndarray:
    if x == 0:
        return np.zeros(0, dtype=np.int64)
    nb = (x.bit_length() + 7) // 8
    bits = np.unpackbits(np.frombuffer(x.to_bytes(nb, "little"), dtype=np.uint8), bitorder="little")
    return bits[: x.bit_length()].astype(np.int64)


def _gf2_divmod(a: int, b: int) -> tuple[int, int]:
    q = 0
    db = b.bit_length()
    while a.bit_length() >= db:
        sh = a.bit_length() - db
        q |= 1 << sh
        a ^= b << sh
    return q, a


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Quotient and remainder with a = q*b + r, deg r < deg b."""
    a._check(b)
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    F = a.field
    if F.q == 2:
        q, r = _gf2_divmod(_to_int(a.coeffs), _to_int(b.coeffs))
        return Poly(F, _from_int(q)), Poly(F, _from_int(r))
    r = a.coeffs.copy()
    db = b.degree
    if len(r) <= db:
        return Poly(F), Poly(F, r)
    q = np.zeros(len(r) - db, dtype=np.int64)
    bc = b.coeffs
    inv_lead = F.inv(b.lead)
    for i in range(len(r) - 1, db - 1, -1):
        c = int(r[i])
        if c:
            f = F.mul(c, inv_lead)
            q[i - db] = f
            r[i - db : i + 1] = F.sub(r[i - db : i + 1], F.scale(f, bc))
    return Poly(F, q), Poly(F, r[:db])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor."""
    a._check(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials")
    if a.field.q == 2:
        x, y = _to_int(a.coeffs), _to_int(b.coeffs)
        while y:
            x, y = y, _gf2_divmod(x, y)[1]
        return Poly(a.field, _from_int(x))
    while not b.is_zero():
        a, b = b, poly_divmod(a, b)[1]
    return a.monic()


def poly_lcm(polys) -> Poly:
    """Monic least common multiple of a nonempty list."""
    polys = list(polys)
    if not polys:
        raise ValueError("lcm of an empty list")
    out = polys[0].monic()
    for p in polys[1:]:
        if out.is_zero() or p.is_zero():
            out = Poly(out.field)
            continue
        out = (out * p // poly_gcd(out, p)).monic()
    return out


def _minpoly_in(beta: FieldElement, Q: int | None = None) -> Poly:
    """Minimal polynomial of beta over GF(Q), coefficients as codes of beta's field."""
    F = beta.field
    Q = F.p if Q is None else Q
    if beta.is_zero:
        return Poly(F, [0, 1])
    coset = cyclotomic_coset(beta.exp, Q, F.order)
    return Poly.from_roots(F, F.alpha_pow(np.array(coset)))


def minimal_polynomial(beta: FieldElement, sub: FieldSpec | None = None) -> Poly:
    """Minimal polynomial of beta over a subfield.

    Parameters
    ----------
    beta : FieldElement
        Element of the extension field.
    sub : FieldSpec, optional
        The subfield, either a prime field of the same characteristic, the
        extension itself, or a field made by :func:`subfield`.  Defaults
        to GF(p).

    Returns
    -------
    Poly
        Monic irreducible polynomial over ``sub`` with beta as a root.
    """
    F = beta.field
    if sub is None:
        sub = build_field(F.p, 1)
    if sub.p != F.p or F.s % sub.s:
        raise FieldError(f"{sub} is not a subfield of {F}")
    mp = _minpoly_in(beta, sub.q)
    if sub == F:
        return Poly(sub, mp.coeffs)
    if sub.s == 1:
        if np.any(mp.coeffs >= F.p):
            raise FieldError("minimal polynomial not over the prime field")
        return Poly(sub, mp.coeffs)
    if sub.parent is None or sub.parent != F:
        raise FieldError(f"{sub} was not built as a subfield of {F}")
    return Poly(sub, sub.restrict(mp.coeffs))


GF2 = build_field(2, 1)


# GF(2) linear algebra ------------------------------------------------------


def _popcount(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words)


class BinaryMatrix:
    """Dense GF(2) matrix with rows packed into 64-bit words."""

    def __init__(self, words: np.ndarray, ncols: int):
        self.words = np.ascontiguousarray(words, dtype=np.uint64)
        self.nrows = self.words.shape[0]
        self.ncols = ncols
        if self.words.shape[1] != (ncols + 63) // 64:
            raise ValueError("word count does not match column count")

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @classmethod
    def from_dense(cls, M) -> BinaryMatrix:
        M = np.asarray(M)
        if M.ndim != 2:
            raise ValueError("expected a 2-d array")
        m, n = M.shape
        nw = (n + 63) // 64
        buf = np.zeros((m, nw * 64), dtype=np.uint8)
        buf[:, :n] = M & 1
        packed = np.packbits(buf, axis=1, bitorder="little")
        words = packed.view("<u8").astype(np.uint64).reshape(m, nw)
        return cls(words, n)

    @classmethod
    def from_supports(cls, supports, ncols: int) -> BinaryMatrix:
        M = np.zeros((len(supports), ncols), dtype=np.uint8)
        for i, s in enumerate(supports):
            M[i, np.asarray(s, dtype=np.int64)] = 1
        return cls.from_dense(M)

    def to_dense(self) -> np.ndarray:
        b = self.words.astype("<u8").view(np.uint8).reshape(self.nrows, -1)
        return np.unpackbits(b, axis=1, bitorder="little")[:, : self.ncols]

    def row_weights(self) -> np.ndarray:
        return _popcount(self.words).sum(axis=1)

    def rank(self) -> int:
        return gf2_rank(self)


def _as_binary(M) -> BinaryMatrix:
    return M if isinstance(M, BinaryMatrix) else BinaryMatrix.from_dense(M)


def gf2_rank(M) -> int:
    """Rank over GF(2) by forward elimination on packed rows."""
    M = _as_binary(M)
    A = M.words.copy()
    m = M.nrows
    r = 0
    for col in range(M.ncols):
        if r == m:
            break
        w, b = divmod(col, 64)
        bit = np.uint64(1 << b)
        hits = np.flatnonzero(A[r:, w] & bit)
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            A[[r, p]] = A[[p, r]]
        rows = r + 1 + np.flatnonzero(A[r + 1 :, w] & bit)
        if rows.size:
            A[rows, w:] ^= A[r, w:]
        r += 1
    return r


def rank_and_nullspace(M) -> tuple[int, np.ndarray]:
    """Rank and a null-space basis over GF(2).

    Parameters
    ----------
    M : BinaryMatrix or array_like
        Binary matrix.

    Returns
    -------
    rank : int
    basis : ndarray of uint8, shape (ncols - rank, ncols)
        Rows v with M v^T = 0, one per free column.
    """
    M = _as_binary(M)
    A = M.words.copy()
    m, n = M.nrows, M.ncols
    pivots = []
    r = 0
    for col in range(n):
        if r == m:
            break
        w, b = divmod(col, 64)
        bit = np.uint64(1 << b)
        hits = np.flatnonzero(A[r:, w] & bit)
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            A[[r, p]] = A[[p, r]]
        rows = np.flatnonzero(A[:, w] & bit)
        rows = rows[rows != r]
        if rows.size:
            A[rows, w:] ^= A[r, w:]
        pivots.append(col)
        r += 1
    rank = r
    R = BinaryMatrix(A[:rank], n).to_dense() if rank else np.zeros((0, n), dtype=np.uint8)
    pivot_set = np.zeros(n, dtype=bool)
    pivot_set[pivots] = True
    free = np.flatnonzero(~pivot_set)
    basis = np.zeros((len(free), n), dtype=np.uint8)
    basis[np.arange(len(free)), free] = 1
    if rank:
        basis[:, pivots] = R[:, free].T
    return rank, basis


def fourier_transform(v, beta: FieldElement, chunk: int = 1 << 20) -> np.ndarray:
    """Spectrum V_i = sum_j beta^(ij) v_j of a vector over beta's field.

    Parameters
    ----------
    v : array_like of int
        Element codes of beta's field; binary vectors work directly.
    beta : FieldElement
        Element of multiplicative order len(v).

    Returns
    -------
    ndarray
        The len(v) spectral components as codes.
    """
    F = beta.field
    v = np.asarray(v, dtype=np.int64)
    n = len(v)
    if beta.is_zero or beta.multiplicative_order() != n:
        raise FieldError(f"beta must have order {n}")
    support = np.flatnonzero(v)
    out = np.zeros(n, dtype=np.int64)
    if support.size == 0:
        return out
    logs = F.log[v[support]]
    step = max(1, chunk // support.size)
    for start in range(0, n, step):
        i = np.arange(start, min(n, start + step), dtype=np.int64)
        e = ((np.outer(i, support) % n) * beta.exp + logs) % F.order
        out[i] = F.sum(F.exp[e], axis=1)
    return out


__all__ = [
    "ZERO",
    "GF2",
    "PRIMITIVE_GF2",
    "FieldError",
    "FieldSpec",
    "FieldElement",
    "Poly",
    "BinaryMatrix",
    "build_field",
    "subfield",
    "field_embedding",
    "root_of_unity",
    "extension_degree",
    "cyclotomic_coset",
    "primitive_root",
    "poly_divmod",
    "poly_gcd",
    "poly_lcm",
    "minimal_polynomial",
    "gf2_rank",
    "rank_and_nullspace",
    "fourier_transform",
]
