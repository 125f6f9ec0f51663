"""Bigraded exterior algebra of scalar forms on one complex chart.

A term is stored under the key ``(I, J)`` and means
``coeff * dzbar^J ^ dz^I`` with both index tuples strictly increasing:
the antiholomorphic block always comes first.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Dict, Iterable, Iterator, Optional, Tuple

from .coeff_ring import GaussRational, PolySeries, RingMismatch

MultiIndex = Tuple[int, ...]
FormKey = Tuple[MultiIndex, MultiIndex]


def merge_sign(a: MultiIndex, b: MultiIndex) -> Tuple[int, Optional[MultiIndex]]:
    """Sign and sorted union for ``dx^a ^ dx^b``; ``(0, None)`` on overlap."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    inversions = 0
    for x in a:
        for y in b:
            if x == y:
                return 0, None
            if x > y:
                inversions += 1
    return (-1 if inversions & 1 else 1), tuple(sorted(a + b))


def normalize_index(seq: Iterable[int]) -> Tuple[int, Optional[MultiIndex]]:
    """Sort an arbitrary index sequence, returning the permutation sign."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, None
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign, tuple(sorted(seq))


def multi_indices(n: int, k: int) -> Iterator[MultiIndex]:
    return combinations(range(1, n + 1), k)


class Form:
    """Inhomogeneous scalar form ``sum f_{I,J} dzbar^J ^ dz^I``."""

    __slots__ = ("n", "N", "terms")

    def __init__(self, n: int, N: int, terms: Dict[FormKey, PolySeries] | None = None,
                 *, _trusted: bool = False):
        self.n = n
        self.N = N
        if _trusted:
            self.terms = terms
            return
        out: Dict[FormKey, PolySeries] = {}
        for (I, J), f in (terms or {}).items():
            I, J = tuple(I), tuple(J)
            for idx in (I, J):
                if any(not 1 <= i <= n for i in idx) or list(idx) != sorted(set(idx)):
                    raise ValueError(f"invalid multi-index {idx} for n={n}")
            if f.n != n or f.N != N:
                raise RingMismatch("coefficient ring does not match form ring")
            if f:
                prev = out.get((I, J))
                out[(I, J)] = f if prev is None else prev + f
        self.terms = {k: v for k, v in out.items() if v}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int, N: int) -> "Form":
        return cls(n, N, {}, _trusted=True)

    @classmethod
    def scalar(cls, f: PolySeries) -> "Form":
        if not f:
            return cls.zero(f.n, f.N)
        return cls(f.n, f.N, {((), ()): f}, _trusted=True)

    @classmethod
    def const(cls, n: int, N: int, c=1) -> "Form":
        return cls.scalar(PolySeries.const(n, N, c))

    @classmethod
    def basis(cls, n: int, N: int, I: Iterable[int] = (), J: Iterable[int] = (),
              coeff: PolySeries | None = None) -> "Form":
        """``coeff * dzbar^J ^ dz^I`` for unsorted index lists (sign applied)."""
        sI, I = normalize_index(I)
        sJ, J = normalize_index(J)
        if not sI or not sJ:
            return cls.zero(n, N)
        f = coeff if coeff is not None else PolySeries.one(n, N)
        if sI * sJ < 0:
            f = -f
        return cls(n, N, {(I, J): f})

    @classmethod
    def dz(cls, n: int, N: int, i: int) -> "Form":
        return cls.basis(n, N, I=(i,))

    @classmethod
    def dzb(cls, n: int, N: int, j: int) -> "Form":
        return cls.basis(n, N, J=(j,))

    @classmethod
    def top(cls, n: int, N: int) -> "Form":
        """The holomorphic volume form dz^1 ^ ... ^ dz^n."""
        return cls.basis(n, N, I=range(1, n + 1))

    # -- linear structure ---------------------------------------------------

    def _check(self, other: "Form") -> None:
        if self.n != other.n or self.N != other.N:
            raise RingMismatch(f"form ring mismatch: (n={self.n}, N={self.N}) vs (n={other.n}, N={other.N})")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for k, f in other.terms.items():
            prev = out.get(k)
            if prev is None:
                out[k] = f
            else:
                s = prev + f
                if s:
                    out[k] = s
                else:
                    del out[k]
        return Form(self.n, self.N, out, _trusted=True)

    def __neg__(self) -> "Form":
        return Form(self.n, self.N, {k: -f for k, f in self.terms.items()}, _trusted=True)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, c) -> "Form":
        """Multiply by a PolySeries or a scalar constant."""
        if isinstance(c, PolySeries):
            out = {}
            for k, f in self.terms.items():
                g = c * f
                if g:
                    out[k] = g
            return Form(self.n, self.N, out, _trusted=True)
        c = GaussRational.coerce(c)
        if c == 1:
            return self
        if not c:
            return Form.zero(self.n, self.N)
        return Form(self.n, self.N, {k: f.scale(c) for k, f in self.terms.items()}, _trusted=True)

    def map_coeffs(self, fn: Callable[[PolySeries], PolySeries]) -> "Form":
        out = {}
        for k, f in self.terms.items():
            g = fn(f)
            if g:
                out[k] = g
        return Form(self.n, self.N, out, _trusted=True)

    # -- products -----------------------------------------------------------

    def wedge(self, other: "Form") -> "Form":
        self._check(other)
        out: Dict[FormKey, PolySeries] = {}
        for (I1, J1), f1 in self.terms.items():
            for (I2, J2), f2 in other.terms.items():
                sJ, J = merge_sign(J1, J2)
                if not sJ:
                    continue
                sI, I = merge_sign(I1, I2)
                if not sI:
                    continue
                sign = sJ * sI
                if len(I1) & 1 and len(J2) & 1:
                    sign = -sign
                g = f1 * f2
                if not g:
                    continue
                if sign < 0:
                    g = -g
                prev = out.get((I, J))
                out[(I, J)] = g if prev is None else prev + g
        return Form(self.n, self.N, {k: v for k, v in out.items() if v}, _trusted=True)

    __xor__ = wedge

    # -- differentials ------------------------------------------------------

    def partial(self) -> "Form":
        out: Dict[FormKey, PolySeries] = {}
        n = self.n
        for (I, J), f in self.terms.items():
            for k in range(1, n + 1):
                if k in I:
                    continue
                g = f.d_z(k)
                if not g:
                    continue
                # dz^k ^ dzbar^J ^ dz^I: pass dzbar^J, then insert into I
                sign = -1 if (len(J) + sum(1 for i in I if i < k)) & 1 else 1
                key = (tuple(sorted(I + (k,))), J)
                if sign < 0:
                    g = -g
                prev = out.get(key)
                out[key] = g if prev is None else prev + g
        return Form(n, self.N, {k: v for k, v in out.items() if v}, _trusted=True)

    def dbar(self) -> "Form":
        out: Dict[FormKey, PolySeries] = {}
        n = self.n
        for (I, J), f in self.terms.items():
            for k in range(1, n + 1):
                if k in J:
                    continue
                g = f.d_zbar(k)
                if not g:
                    continue
                sign = -1 if sum(1 for j in J if j < k) & 1 else 1
                key = (I, tuple(sorted(J + (k,))))
                if sign < 0:
                    g = -g
                prev = out.get(key)
                out[key] = g if prev is None else prev + g
        return Form(n, self.N, {k: v for k, v in out.items() if v}, _trusted=True)

    def d(self) -> "Form":
        return self.partial() + self.dbar()

    # -- interior products --------------------------------------------------

    def interior_z(self, i: int) -> "Form":
        """Antiderivation contraction with the holomorphic field d/dz^i."""
        out = {}
        for (I, J), f in self.terms.items():
            if i not in I:
                continue
            pos = I.index(i)
            sign = -1 if (len(J) + pos) & 1 else 1
            out[(I[:pos] + I[pos + 1:], J)] = f if sign > 0 else -f
        return Form(self.n, self.N, out, _trusted=True)

    def interior_zbar(self, j: int) -> "Form":
        """Antiderivation contraction with d/dzbar^j."""
        out = {}
        for (I, J), f in self.terms.items():
            if j not in J:
                continue
            pos = J.index(j)
            out[(I, J[:pos] + J[pos + 1:])] = f if pos % 2 == 0 else -f
        return Form(self.n, self.N, out, _trusted=True)

    # -- grading ------------------------------------------------------------

    def component(self, p: int, q: int) -> "Form":
        return Form(self.n, self.N,
                    {k: f for k, f in self.terms.items() if len(k[0]) == p and len(k[1]) == q},
                    _trusted=True)

    def bidegrees(self) -> set:
        return {(len(I), len(J)) for I, J in self.terms}

    def bidegree(self) -> Tuple[int, int]:
        degs = self.bidegrees()
        if len(degs) != 1:
            raise ValueError(f"form is not bihomogeneous: bidegrees {sorted(degs)}")
        return next(iter(degs))

    def is_homogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1

    def degrees(self) -> set:
        return {len(I) + len(J) for I, J in self.terms}

    # -- t-structure --------------------------------------------------------

    def t_coefficient(self, m: int) -> "Form":
        return self.map_coeffs(lambda f: f.t_coefficient(m))

    def times_t(self, m: int) -> "Form":
        return self.map_coeffs(lambda f: f.times_t(m))

    def t_degree(self) -> int:
        return max((f.t_degree() for f in self.terms.values()), default=-1)

    # -- comparison / display -----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.n == other.n and self.N == other.N and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.N, frozenset(self.terms.items())))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (I, J), f in self.sorted_terms():
            label = basis_label(I, J)
            parts.append(f"({f})" if label == "1" else f"({f})*{label}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Form(n={self.n}, N={self.N}, {self})"


def basis_label(I: MultiIndex, J: MultiIndex) -> str:
    gens = [f"dzb{j}" for j in J] + [f"dz{i}" for i in I]
    return "^".join(gens) if gens else "1"


def parse_basis_label(label: str, n: int) -> Tuple[int, MultiIndex, MultiIndex]:
    """Parse ``"dzb1^dz2"`` style labels; returns ``(sign, I, J)``.

    Generators may appear in any order; the sign of the sorting
    permutation into the canonical dzbar-then-dz order is returned.
    """
    label = label.strip()
    if label in ("", "1"):
        return 1, (), ()
    seq = []
    for gen in label.split("^"):
        gen = gen.strip()
        if gen.startswith("dzb"):
            axis, kind = gen[3:], 0
        elif gen.startswith("dz"):
            axis, kind = gen[2:], 1
        else:
            raise ValueError(f"unknown generator {gen!r} in {label!r}")
        if not axis.isdigit() or not 1 <= int(axis) <= n:
            raise ValueError(f"generator {gen!r} out of range for n={n}")
        seq.append((kind, int(axis)))
    sign, ordered = normalize_index(seq)
    if not sign:
        return 0, (), ()
    J = tuple(a for k, a in ordered if k == 0)
    I = tuple(a for k, a in ordered if k == 1)
    return sign, I, J
