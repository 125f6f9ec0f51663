"""Exact coefficient ring: Gaussian-rational polynomials in z, zbar, tensored
with a power series in one deformation parameter t truncated at order N.

A monomial z^a zbar^b t^m is keyed by the flat exponent tuple
``a + b + (m,)`` of length ``2n + 1``.  Zero coefficients are never stored,
so two equal series always have equal term maps.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Tuple, Union

Key = Tuple[int, ...]
Scalar = Union[int, Fraction, "GaussRational"]


class RingMismatch(ValueError):
    """Operands live in different rings (chart dimension or truncation)."""


class GaussRational:
    """Exact element of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @classmethod
    def coerce(cls, x: Scalar) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x, 0)
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussRational")

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __add__(self, other):
        o = GaussRational.coerce(other)
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussRational.coerce(other)
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussRational.coerce(other)
        if not self.im and not o.im:
            return GaussRational(self.re * o.re, 0)
        return GaussRational(self.re * o.re - self.im * o.im,
                             self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def inverse(self) -> "GaussRational":
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("GaussRational division by zero")
        return GaussRational(self.re / norm, -self.im / norm)

    def __truediv__(self, other):
        return self * GaussRational.coerce(other).inverse()

    def __rtruediv__(self, other):
        return GaussRational.coerce(other) * self.inverse()

    def __repr__(self):
        return f"GaussRational({self.re!s}, {self.im!s})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return _imag_str(self.im)
        im = _imag_str(self.im)
        sep = "" if im.startswith("-") else "+"
        return f"({self.re}{sep}{im})"


def _imag_str(q: Fraction) -> str:
    if q == 1:
        return "i"
    if q == -1:
        return "-i"
    return f"{q}*i"


ZERO = GaussRational(0, 0)
ONE = GaussRational(1, 0)
I_UNIT = GaussRational(0, 1)


class PolySeries:
    """Sparse element of Q(i)[z, zbar][[t]] / (t^(N+1)).

    ``terms`` maps exponent keys to nonzero :class:`GaussRational`
    coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("n", "N", "terms", "_hash")

    def __init__(self, n: int, N: int, terms: Dict[Key, GaussRational] | None = None,
                 *, _trusted: bool = False):
        self.n = n
        self.N = N
        self._hash = None
        if _trusted:
            self.terms = terms
            return
        clean: Dict[Key, GaussRational] = {}
        width = 2 * n + 1
        for key, c in (terms or {}).items():
            key = tuple(key)
            if len(key) != width:
                raise ValueError(f"exponent key {key} has length {len(key)}, expected {width}")
            if any(e < 0 for e in key):
                raise ValueError(f"negative exponent in {key}")
            if key[-1] > N:
                continue
            c = GaussRational.coerce(c)
            if c:
                clean[key] = clean.get(key, ZERO) + c
        self.terms = {k: v for k, v in clean.items() if v}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int, N: int) -> "PolySeries":
        return cls(n, N, {}, _trusted=True)

    @classmethod
    def const(cls, n: int, N: int, c: Scalar) -> "PolySeries":
        c = GaussRational.coerce(c)
        if not c:
            return cls.zero(n, N)
        return cls(n, N, {(0,) * (2 * n + 1): c}, _trusted=True)

    @classmethod
    def one(cls, n: int, N: int) -> "PolySeries":
        return cls.const(n, N, 1)

    @classmethod
    def monomial(cls, n: int, N: int, a: Iterable[int] = (), b: Iterable[int] = (),
                 m: int = 0, c: Scalar = 1) -> "PolySeries":
        a = tuple(a) or (0,) * n
        b = tuple(b) or (0,) * n
        return cls(n, N, {a + b + (m,): c})

    @classmethod
    def z(cls, n: int, N: int, i: int) -> "PolySeries":
        _check_axis(n, i)
        a = [0] * n
        a[i - 1] = 1
        return cls.monomial(n, N, a=a)

    @classmethod
    def zb(cls, n: int, N: int, i: int) -> "PolySeries":
        _check_axis(n, i)
        b = [0] * n
        b[i - 1] = 1
        return cls.monomial(n, N, b=b)

    @classmethod
    def t(cls, n: int, N: int) -> "PolySeries":
        return cls.monomial(n, N, m=1)

    # -- ring structure -----------------------------------------------------

    def _same_ring(self, other: "PolySeries") -> None:
        if self.n != other.n or self.N != other.N:
            raise RingMismatch(f"ring mismatch: (n={self.n}, N={self.N}) vs (n={other.n}, N={other.N})")

    def _lift(self, other) -> "PolySeries":
        if isinstance(other, PolySeries):
            self._same_ring(other)
            return other
        return PolySeries.const(self.n, self.N, other)

    def __add__(self, other) -> "PolySeries":
        other = self._lift(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            prev = out.get(k)
            if prev is None:
                out[k] = c
            else:
                s = prev + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return PolySeries(self.n, self.N, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "PolySeries":
        return PolySeries(self.n, self.N, {k: -c for k, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other) -> "PolySeries":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "PolySeries":
        return self._lift(other) - self

    def __mul__(self, other) -> "PolySeries":
        if not isinstance(other, PolySeries):
            return self.scale(other)
        self._same_ring(other)
        if not self.terms or not other.terms:
            return PolySeries.zero(self.n, self.N)
        N = self.N
        out: Dict[Key, GaussRational] = {}
        for k1, c1 in self.terms.items():
            m1 = k1[-1]
            for k2, c2 in other.terms.items():
                if m1 + k2[-1] > N:
                    continue
                k = tuple(x + y for x, y in zip(k1, k2))
                c = c1 * c2
                prev = out.get(k)
                out[k] = c if prev is None else prev + c
        return PolySeries(self.n, N, {k: v for k, v in out.items() if v}, _trusted=True)

    def __rmul__(self, other) -> "PolySeries":
        return self.scale(other)

    def scale(self, c: Scalar) -> "PolySeries":
        c = GaussRational.coerce(c)
        if not c:
            return PolySeries.zero(self.n, self.N)
        if c == 1:
            return self
        return PolySeries(self.n, self.N, {k: v * c for k, v in self.terms.items()}, _trusted=True)

    def __pow__(self, e: int) -> "PolySeries":
        if not isinstance(e, int) or e < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = PolySeries.one(self.n, self.N)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    # -- calculus -----------------------------------------------------------

    def d_z(self, i: int) -> "PolySeries":
        _check_axis(self.n, i)
        return self._diff(i - 1)

    def d_zbar(self, i: int) -> "PolySeries":
        _check_axis(self.n, i)
        return self._diff(self.n + i - 1)

    def _diff(self, slot: int) -> "PolySeries":
        out = {}
        for k, c in self.terms.items():
            e = k[slot]
            if e:
                out[k[:slot] + (e - 1,) + k[slot + 1:]] = c * e
        return PolySeries(self.n, self.N, out, _trusted=True)

    # -- t-structure --------------------------------------------------------

    def t_coefficient(self, m: int) -> "PolySeries":
        """Coefficient of t^m, as a t-free series in the same ring."""
        out = {k[:-1] + (0,): c for k, c in self.terms.items() if k[-1] == m}
        return PolySeries(self.n, self.N, out, _trusted=True)

    def times_t(self, m: int) -> "PolySeries":
        out = {k[:-1] + (k[-1] + m,): c for k, c in self.terms.items() if k[-1] + m <= self.N}
        return PolySeries(self.n, self.N, out, _trusted=True)

    def t_degree(self) -> int:
        return max((k[-1] for k in self.terms), default=-1)

    def retruncate(self, N: int) -> "PolySeries":
        """Same series viewed in the ring truncated at order ``N``."""
        return PolySeries(self.n, N, {k: c for k, c in self.terms.items() if k[-1] <= N},
                          _trusted=True)

    def constant_term(self) -> GaussRational:
        return self.terms.get((0,) * (2 * self.n + 1), ZERO)

    def zbar_degree(self) -> int:
        n = self.n
        return max((sum(k[n:2 * n]) for k in self.terms), default=-1)

    # -- comparison / display -----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, PolySeries):
            return self.n == other.n and self.N == other.N and self.terms == other.terms
        if isinstance(other, (int, Fraction, GaussRational)):
            return self == PolySeries.const(self.n, self.N, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.N, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> Iterator[Tuple[Key, GaussRational]]:
        # lexicographic in (t-degree, z-exponents, zbar-exponents)
        return iter(sorted(self.terms.items(), key=lambda kv: (kv[0][-1],) + kv[0][:-1]))

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for key, c in self.sorted_terms():
            mono = _monomial_str(self.n, key)
            if not c.im:
                mag = abs(c.re)
                sign = "-" if c.re < 0 else "+"
                body = mono if mag == 1 and mono else (f"{mag}*{mono}" if mono else str(mag))
            else:
                sign = "+"
                cs = str(c)
                if not c.re and cs.startswith("-"):
                    cs = f"({cs})"
                body = f"{cs}*{mono}" if mono else cs
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"PolySeries(n={self.n}, N={self.N}, {self})"


def _monomial_str(n: int, key: Key) -> str:
    parts = []
    for i in range(n):
        parts.append(_power("z%d" % (i + 1), key[i]))
    for i in range(n):
        parts.append(_power("zb%d" % (i + 1), key[n + i]))
    parts.append(_power("t", key[-1]))
    return "*".join(p for p in parts if p)


def _power(name: str, e: int) -> str:
    if e == 0:
        return ""
    return name if e == 1 else f"{name}^{e}"


def _check_axis(n: int, i: int) -> None:
    if not 1 <= i <= n:
        raise IndexError(f"axis {i} out of range 1..{n}")
