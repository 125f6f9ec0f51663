"""Independent reference implementations used as test oracles.

Polynomials go through sympy; forms are dicts from generator words to
sympy expressions, with signs found by literally bubble-sorting the word.
None of this shares code with the package beyond the final conversion.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Tuple

import sympy as sp

from dolbeault.coeff_ring import GaussRational, PolySeries
from dolbeault.forms import Form

Gen = Tuple[str, int]  # ('b', j) = dzbar^j, ('h', i) = dz^i
Word = Tuple[Gen, ...]

T = sp.Symbol("t")


def zs(n):
    return sp.symbols(f"z1:{n + 1}")


def zbs(n):
    return sp.symbols(f"zb1:{n + 1}")


def to_sympy(f: PolySeries):
    n = f.n
    z, zb = zs(n), zbs(n)
    expr = sp.Integer(0)
    for key, c in f.terms.items():
        mono = sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(c.im.numerator, c.im.denominator)
        for i in range(n):
            mono *= z[i] ** key[i] * zb[i] ** key[n + i]
        expr += mono * T ** key[-1]
    return sp.expand(expr)


def from_sympy(expr, n: int, N: int) -> PolySeries:
    expr = sp.expand(expr)
    gens = list(zs(n)) + list(zbs(n)) + [T]
    if expr == 0:
        return PolySeries.zero(n, N)
    poly = sp.Poly(expr, *gens)
    terms = {}
    for monom, c in poly.terms():
        if monom[-1] > N:
            continue
        re, im = sp.re(c), sp.im(c)
        terms[tuple(monom)] = GaussRational(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))
    return PolySeries(n, N, terms)


def truncate(expr, N: int):
    expr = sp.expand(expr)
    return sp.expand(sum((expr.coeff(T, m) * T ** m for m in range(N + 1)), sp.Integer(0)))


def _order(g: Gen):
    return (0 if g[0] == "b" else 1, g[1])


def sort_word(word) -> Tuple[int, Word]:
    """Bubble sort into dzbar-then-dz order; sign 0 on a repeated generator."""
    w = list(word)
    if len(set(w)) != len(w):
        return 0, ()
    sign = 1
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            if _order(w[j]) > _order(w[j + 1]):
                w[j], w[j + 1] = w[j + 1], w[j]
                sign = -sign
    return sign, tuple(w)


class OForm:
    """Oracle form: ``{sorted word: sympy coefficient}``."""

    def __init__(self, n: int, N: int, terms: Dict[Word, object] | None = None):
        self.n, self.N = n, N
        self.terms = {}
        for w, c in (terms or {}).items():
            self._add(w, c)

    def _add(self, word, c):
        sign, w = sort_word(word)
        if not sign:
            return
        c = truncate(sign * c, self.N)
        total = sp.expand(self.terms.get(w, 0) + c)
        if total == 0:
            self.terms.pop(w, None)
        else:
            self.terms[w] = total

    @classmethod
    def from_form(cls, f: Form) -> "OForm":
        out = cls(f.n, f.N)
        for (I, J), c in f.terms.items():
            out._add(tuple(("b", j) for j in J) + tuple(("h", i) for i in I), to_sympy(c))
        return out

    def to_form(self) -> Form:
        terms = {}
        for w, c in self.terms.items():
            J = tuple(a for k, a in w if k == "b")
            I = tuple(a for k, a in w if k == "h")
            terms[(I, J)] = from_sympy(c, self.n, self.N)
        return Form(self.n, self.N, terms)

    def __add__(self, other):
        out = OForm(self.n, self.N, dict(self.terms))
        for w, c in other.terms.items():
            out._add(w, c)
        return out

    def wedge(self, other) -> "OForm":
        out = OForm(self.n, self.N)
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                out._add(w1 + w2, c1 * c2)
        return out

    def _d(self, kind: str, syms) -> "OForm":
        out = OForm(self.n, self.N)
        for w, c in self.terms.items():
            for k in range(self.n):
                out._add((( kind, k + 1),) + w, sp.diff(c, syms[k]))
        return out

    def partial(self):
        return self._d("h", zs(self.n))

    def dbar(self):
        return self._d("b", zbs(self.n))

    def interior(self, gen: Gen) -> "OForm":
        out = OForm(self.n, self.N)
        for w, c in self.terms.items():
            if gen in w:
                pos = w.index(gen)
                out._add(w[:pos] + w[pos + 1:], (-1) ** pos * c)
        return out

    def map(self, fn) -> "OForm":
        out = OForm(self.n, self.N)
        for w, c in self.terms.items():
            out._add(w, fn(c))
        return out


def oracle_contract(phi_components, s: OForm) -> OForm:
    """``sum_i phi^i ^ (d/dz^i -| s)`` with the contraction read off positions."""
    out = OForm(s.n, s.N)
    for i, comp in enumerate(phi_components, start=1):
        out = out + comp.wedge(s.interior(("h", i)))
    return out
