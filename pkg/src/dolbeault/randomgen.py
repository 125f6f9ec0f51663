"""Seeded random generators for polynomials, forms and deformation data.

Everything takes an explicit :class:`random.Random` so results depend only
on the seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .bundles import E, ConnectionData, Factor, ValuedForm
from .coeff_ring import GaussRational, PolySeries
from .deformation import BeltramiField, EndoField, PolyMatrix
from .forms import Form, multi_indices


def random_scalar(rng: random.Random, complex_: bool = True) -> GaussRational:
    re = Fraction(rng.randint(-3, 3), rng.choice((1, 1, 1, 2, 3)))
    im = Fraction(rng.randint(-2, 2), rng.choice((1, 2))) if complex_ and rng.random() < 0.3 else 0
    if not re and not im:
        re = Fraction(1)
    return GaussRational(re, im)


def random_poly(rng: random.Random, n: int, N: int, deg: int = 2, terms: int = 3,
                t_min: int = 0, t_max: Optional[int] = None, holomorphic: bool = False) -> PolySeries:
    """Sum of ``terms`` random monomials of total z/zbar degree <= deg.

    The t-exponent is drawn from ``[t_min, t_max]`` (default ``[t_min, N]``).
    """
    t_max = N if t_max is None else t_max
    acc = PolySeries.zero(n, N)
    if t_min > t_max:
        return acc
    for _ in range(terms):
        a = [0] * n
        b = [0] * n
        for _ in range(rng.randint(0, deg)):
            axis = rng.randrange(n)
            if holomorphic or rng.random() < 0.5:
                a[axis] += 1
            else:
                b[axis] += 1
        m = rng.randint(t_min, t_max)
        acc = acc + PolySeries.monomial(n, N, a, b, m, random_scalar(rng))
    return acc


def random_form(rng: random.Random, n: int, N: int, p: int, q: int, deg: int = 2,
                terms: int = 2, density: float = 0.6, **kw) -> Form:
    terms_out = {}
    for I in multi_indices(n, p):
        for J in multi_indices(n, q):
            if rng.random() < density:
                f = random_poly(rng, n, N, deg, terms, **kw)
                if f:
                    terms_out[(I, J)] = f
    return Form(n, N, terms_out)


def random_mixed_form(rng: random.Random, n: int, N: int, deg: int = 2, pieces: int = 2) -> Form:
    acc = Form.zero(n, N)
    for _ in range(pieces):
        acc = acc + random_form(rng, n, N, rng.randint(0, n), rng.randint(0, n), deg, density=0.4)
    return acc


def random_valued(rng: random.Random, word: Sequence[Factor], n: int, N: int, r: int,
                  p: int, q: int, deg: int = 2, density: float = 0.7) -> ValuedForm:
    from itertools import product
    comps = {}
    for b in product(*(fac.basis(n, r) for fac in word)):
        if rng.random() < density:
            f = random_form(rng, n, N, p, q, deg, terms=2, density=0.6)
            if f:
                comps[b] = f
    return ValuedForm(word, n, N, comps)


def random_beltrami(rng: random.Random, n: int, N: int, deg: int = 2, terms: int = 2,
                    t_min: int = 0, density: float = 0.6) -> BeltramiField:
    """Direct (usually off-shell) (0,1) field."""
    coeffs = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if rng.random() < density:
                coeffs[(i, j)] = random_poly(rng, n, N, deg, terms, t_min=t_min)
    return BeltramiField.from_coeffs(n, N, coeffs)


def random_endo(rng: random.Random, r: int, n: int, N: int, deg: int = 2,
                t_min: int = 0) -> EndoField:
    rows = []
    for _ in range(r):
        rows.append(tuple(random_form(rng, n, N, 0, 1, deg, terms=2, t_min=t_min) for _ in range(r)))
    return EndoField(tuple(rows))


def random_gamma(rng: random.Random, n: int, N: int, deg: int = 2,
                 density: float = 0.3) -> Dict[tuple, PolySeries]:
    gamma = {}
    for k in range(1, n + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if rng.random() < density:
                    g = random_poly(rng, n, N, deg, 2, t_max=0)
                    if g:
                        gamma[(k, i, j)] = g
    return gamma


def random_theta_generic(rng: random.Random, n: int, N: int, r: int, deg: int = 2) -> tuple:
    """Arbitrary t-independent (1,0) connection matrix."""
    return tuple(tuple(random_form(rng, n, N, 1, 0, deg, t_max=0) for _ in range(r)) for _ in range(r))


def _mixed_monomial(rng: random.Random, n: int, N: int, deg: int, m: int = 0) -> PolySeries:
    """``c z^i zbar^j t^m`` (zero when ``deg < 2``): keeps generated data away
    from the holomorphic or flat corner."""
    if deg < 2:
        return PolySeries.zero(n, N)
    a = [0] * n
    b = [0] * n
    a[rng.randrange(n)] = 1
    b[rng.randrange(n)] = 1
    return PolySeries.monomial(n, N, a, b, m, random_scalar(rng, complex_=False))


def random_unipotent(rng: random.Random, n: int, N: int, r: int, deg: int = 2) -> PolyMatrix:
    """Upper or lower unitriangular t-independent matrix."""
    upper = rng.random() < 0.5
    one, zero = PolySeries.one(n, N), PolySeries.zero(n, N)
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            if i == j:
                row.append(one)
            elif (i < j) == upper:
                row.append(random_poly(rng, n, N, deg, 2, t_max=0) + _mixed_monomial(rng, n, N, deg))
            else:
                row.append(zero)
        out.append(row)
    return out


def random_theta_chern(rng: random.Random, n: int, N: int, r: int, deg: int = 2) -> tuple:
    """``theta = (d'h) h^-1`` so that the (2,0) curvature ``d'theta - theta ^ theta``
    vanishes, as it does for a Chern connection in a holomorphic frame.

    ``h`` is a product of unipotent matrices, so its inverse is polynomial.
    """
    from .deformation import poly_matmul
    if r == 1:
        g = random_poly(rng, n, N, deg + 1, 3, t_max=0) + _mixed_monomial(rng, n, N, deg + 1)
        return ((Form.scalar(g).partial(),),)
    factors = [random_unipotent(rng, n, N, r, deg=deg) for _ in range(2)]
    h = poly_matmul(factors[0], factors[1])
    hinv = poly_matmul(_unipotent_inverse(factors[1]), _unipotent_inverse(factors[0]))
    dh = [[Form.scalar(x).partial() for x in row] for row in h]
    out = []
    for k in range(r):
        row = []
        for l in range(r):
            acc = Form.zero(n, N)
            for j in range(r):
                if hinv[j][l]:
                    acc = acc + dh[k][j].scale(hinv[j][l])
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _unipotent_inverse(u: PolyMatrix) -> PolyMatrix:
    """Inverse of a unitriangular matrix: finite Neumann series."""
    from .deformation import poly_identity, poly_matmul
    r = len(u)
    n, N = u[0][0].n, u[0][0].N
    ident = poly_identity(r, n, N)
    X = [[ident[i][j] - u[i][j] for j in range(r)] for i in range(r)]
    total, power = ident, ident
    for _ in range(r - 1):
        power = poly_matmul(power, X)
        total = [[total[i][j] + power[i][j] for j in range(r)] for i in range(r)]
    return total


def random_connection(rng: random.Random, n: int, N: int, r: int, deg: int = 2,
                      chern: bool = True, with_gamma: bool = True) -> ConnectionData:
    theta = random_theta_chern(rng, n, N, r, deg) if chern else random_theta_generic(rng, n, N, r, deg)
    gamma = random_gamma(rng, n, N, deg) if with_gamma else {}
    return ConnectionData(n, N, r, theta, gamma)


def random_zt(rng: random.Random, n: int, N: int, deg: int = 2, terms: int = 2) -> List[PolySeries]:
    """Deformed coordinates ``z_t^k = z^k + O(t)``."""
    out = [PolySeries.z(n, N, k) + random_poly(rng, n, N, deg, terms, t_min=1) for k in range(1, n + 1)]
    if N >= 1:
        k = rng.randrange(n)
        out[k] = out[k] + _mixed_monomial(rng, n, N, deg, m=1)
    return out


def random_w(rng: random.Random, n: int, N: int, r: int, deg: int = 2, terms: int = 2) -> PolyMatrix:
    """Transition matrix ``w = id + O(t)``."""
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            f = random_poly(rng, n, N, deg, terms, t_min=1) if rng.random() < 0.7 else PolySeries.zero(n, N)
            row.append(f + PolySeries.one(n, N) if i == j else f)
        out.append(row)
    return out


def random_closed_form(rng: random.Random, n: int, N: int, p: int, q: int, deg: int = 2) -> Form:
    """A t-free dbar-closed (p,q)-form: holomorphic coefficients for q=0,
    ``dbar`` of a random (p,q-1)-form plus a constant-coefficient part otherwise."""
    if q == 0:
        return random_form(rng, n, N, p, 0, deg, t_max=0, holomorphic=True)
    base = random_form(rng, n, N, p, q - 1, deg + 1, t_max=0).dbar()
    return base + random_form(rng, n, N, p, q, 0, terms=1, density=0.3, t_max=0)


def random_closed_valued(rng: random.Random, n: int, N: int, r: int, p: int, q: int,
                         deg: int = 2) -> ValuedForm:
    comps = {}
    for k in range(1, r + 1):
        f = random_closed_form(rng, n, N, p, q, deg)
        if f:
            comps[(k,)] = f
    return ValuedForm((E,), n, N, comps)
