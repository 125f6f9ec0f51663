"""Forms with values in tensor words over E, T, Omega^p, K^-1 and End(E).

A :class:`ValuedForm` is ``sum_b omega_b (x) b`` with the form part written
on the left and ``b`` running over product bases of the word.  Every
fiber-endomorphism action (connection 1-forms, Beltrami-type (0,1) data,
curvature) is applied as ``A(b) ^ omega``, i.e. wedged on the left of the
form part.  For odd ``A`` this is the same as ``(-1)^|omega| omega ^ A(b)``,
the usual sign for passing a connection form across ``omega``.

Fiber conventions (all frames holomorphic and global on the chart):

* ``E``: basis ``e_k``; an endomorphism matrix ``M`` acts by
  ``e_k -> sum_l M[k][l] e_l`` (row index is the source).
* ``OmegaP``: basis ``dz^I``; induced from a matrix on ``Omega`` acting by
  ``dz^k -> sum_l B[k][l] dz^l`` as a derivation of the wedge product.
* ``T``: dual of ``Omega``: ``d/dz^k -> -sum_l B[l][k] d/dz^l``.
* ``Kinv``: top power of ``T``: ``1/<dz> -> -tr(B) 1/<dz>``.
* ``EndE``: ``E* (x) E``; basis ``(k, l)`` is the map ``e_k -> e_l``.

With ``B[k][j] = -sum_l Gamma^k_{lj} dz^l`` these reproduce the connection
``nabla_{d/dz^i} d/dz^j = Gamma^k_{ij} d/dz^k`` on every factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .coeff_ring import PolySeries, RingMismatch
from .forms import Form, multi_indices, normalize_index

Matrix = Tuple[Tuple[Form, ...], ...]


class MissingConnectionData(ValueError):
    """A word factor has no connection or endomorphism data."""


@dataclass(frozen=True)
class Factor:
    kind: str  # 'E', 'T', 'OmegaP', 'Kinv', 'EndE'
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("E", "T", "OmegaP", "Kinv", "EndE"):
            raise ValueError(f"unknown fiber factor {self.kind!r}")

    def basis(self, n: int, r: int) -> List:
        if self.kind == "E":
            return list(range(1, r + 1))
        if self.kind == "T":
            return list(range(1, n + 1))
        if self.kind == "OmegaP":
            return list(multi_indices(n, self.p))
        if self.kind == "Kinv":
            return [1]
        return [(k, l) for k in range(1, r + 1) for l in range(1, r + 1)]

    def rank(self, n: int, r: int) -> int:
        return len(self.basis(n, r))

    def label(self, b) -> str:
        if self.kind == "E":
            return f"e{b}"
        if self.kind == "T":
            return f"d/dz{b}"
        if self.kind == "OmegaP":
            return "dz^(" + ",".join(map(str, b)) + ")"
        if self.kind == "Kinv":
            return "1/<dz>"
        return f"(e{b[0]}->e{b[1]})"

    def __str__(self):
        return f"OmegaP({self.p})" if self.kind == "OmegaP" else self.kind


E = Factor("E")
T = Factor("T")
KINV = Factor("Kinv")
ENDE = Factor("EndE")


def OmegaP(p: int) -> Factor:
    return Factor("OmegaP", p)


Word = Tuple[Factor, ...]


class ValuedForm:
    """``sum_b components[b] (x) b`` over the product basis of ``word``."""

    __slots__ = ("word", "n", "N", "components")

    def __init__(self, word: Sequence[Factor], n: int, N: int,
                 components: Dict[tuple, Form] | None = None, *, _trusted: bool = False):
        self.word = tuple(word)
        self.n = n
        self.N = N
        if _trusted:
            self.components = components
            return
        out = {}
        for b, f in (components or {}).items():
            b = tuple(b)
            if len(b) != len(self.word):
                raise ValueError(f"basis tuple {b} does not match word of length {len(self.word)}")
            if f.n != n or f.N != N:
                raise RingMismatch("component form ring mismatch")
            for fac, x in zip(self.word, b):
                if fac.kind == "OmegaP" and (len(x) != fac.p or list(x) != sorted(set(x))):
                    raise ValueError(f"OmegaP basis {x} is not an ascending {fac.p}-index")
            if f:
                prev = out.get(b)
                out[b] = f if prev is None else prev + f
        self.components = {b: f for b, f in out.items() if f}

    @classmethod
    def zero(cls, word: Sequence[Factor], n: int, N: int) -> "ValuedForm":
        return cls(word, n, N, {}, _trusted=True)

    @classmethod
    def scalar(cls, form: Form) -> "ValuedForm":
        return cls((), form.n, form.N, {(): form} if form else {}, _trusted=True)

    @classmethod
    def single(cls, word: Sequence[Factor], b: tuple, form: Form) -> "ValuedForm":
        return cls(word, form.n, form.N, {tuple(b): form})

    def _check(self, other: "ValuedForm") -> None:
        if self.word != other.word:
            raise ValueError(f"word mismatch: {fmt_word(self.word)} vs {fmt_word(other.word)}")
        if self.n != other.n or self.N != other.N:
            raise RingMismatch("valued form ring mismatch")

    def __add__(self, other: "ValuedForm") -> "ValuedForm":
        self._check(other)
        out = dict(self.components)
        for b, f in other.components.items():
            prev = out.get(b)
            if prev is None:
                out[b] = f
            else:
                s = prev + f
                if s:
                    out[b] = s
                else:
                    del out[b]
        return ValuedForm(self.word, self.n, self.N, out, _trusted=True)

    def __neg__(self) -> "ValuedForm":
        return ValuedForm(self.word, self.n, self.N,
                          {b: -f for b, f in self.components.items()}, _trusted=True)

    def __sub__(self, other: "ValuedForm") -> "ValuedForm":
        return self + (-other)

    def map_forms(self, fn) -> "ValuedForm":
        out = {}
        for b, f in self.components.items():
            g = fn(f)
            if g:
                out[b] = g
        return ValuedForm(self.word, self.n, self.N, out, _trusted=True)

    def scale(self, c) -> "ValuedForm":
        return self.map_forms(lambda f: f.scale(c))

    def wedge_left(self, form: Form) -> "ValuedForm":
        return self.map_forms(form.wedge)

    def component(self, p: int, q: int) -> "ValuedForm":
        return self.map_forms(lambda f: f.component(p, q))

    def bidegrees(self) -> set:
        out = set()
        for f in self.components.values():
            out |= f.bidegrees()
        return out

    def bidegree(self) -> Tuple[int, int]:
        degs = self.bidegrees()
        if len(degs) != 1:
            raise ValueError(f"valued form is not bihomogeneous: bidegrees {sorted(degs)}")
        return next(iter(degs))

    def t_coefficient(self, m: int) -> "ValuedForm":
        return self.map_forms(lambda f: f.t_coefficient(m))

    def times_t(self, m: int) -> "ValuedForm":
        return self.map_forms(lambda f: f.times_t(m))

    def is_zero(self) -> bool:
        return not self.components

    def __bool__(self):
        return bool(self.components)

    def __eq__(self, other):
        if not isinstance(other, ValuedForm):
            return NotImplemented
        return (self.word == other.word and self.n == other.n and self.N == other.N
                and self.components == other.components)

    def __hash__(self):
        return hash((self.word, frozenset(self.components.items())))

    def basis_label(self, b: tuple) -> str:
        return " (x) ".join(fac.label(x) for fac, x in zip(self.word, b))

    def __str__(self):
        if not self.components:
            return "0"
        if not self.word:
            return str(self.components[()])
        return " + ".join(f"[{f}] (x) {self.basis_label(b)}"
                          for b, f in sorted(self.components.items(), key=lambda kv: _sort_key(kv[0])))

    def __repr__(self):
        return f"ValuedForm({fmt_word(self.word)}, {self})"


def _sort_key(b):
    return tuple((x,) if isinstance(x, int) else tuple(x) for x in b)


def fmt_word(word: Word) -> str:
    return "(x)".join(str(f) for f in word) or "scalar"


def as_valued(s) -> ValuedForm:
    return s if isinstance(s, ValuedForm) else ValuedForm.scalar(s)


def tensor(s: ValuedForm, u: ValuedForm) -> ValuedForm:
    """``(omega (x) b) (x) (eta (x) c) = (omega ^ eta) (x) b (x) c``."""
    if s.n != u.n or s.N != u.N:
        raise RingMismatch("tensor ring mismatch")
    out: Dict[tuple, Form] = {}
    for b, f in s.components.items():
        for c, g in u.components.items():
            h = f.wedge(g)
            if h:
                key = b + c
                out[key] = h if key not in out else out[key] + h
    return ValuedForm(s.word + u.word, s.n, s.N, out)


# -- fiber endomorphisms ----------------------------------------------------

@dataclass(frozen=True)
class FiberEndo:
    """Endomorphism data on the basic fibers, extended to words as a derivation.

    ``e`` is an r x r matrix of forms acting on E, ``omega`` an n x n matrix
    acting on Omega; either may be ``None`` when no factor needs it.
    """

    n: int
    N: int
    e: Optional[Matrix] = None
    omega: Optional[Matrix] = None

    def _need(self, name: str, kind: str):
        mat = getattr(self, name)
        if mat is None:
            raise MissingConnectionData(f"no {name!r} data available for factor {kind}")
        return mat

    def images(self, fac: Factor, b) -> List[Tuple[Form, object]]:
        """The image of basis element ``b`` as a list of ``(form, basis)``."""
        n, N = self.n, self.N
        out: List[Tuple[Form, object]] = []
        if fac.kind == "E":
            M = self._need("e", "E")
            for l, c in enumerate(M[b - 1], start=1):
                if c:
                    out.append((c, l))
        elif fac.kind == "EndE":
            M = self._need("e", "EndE")
            k, l = b
            r = len(M)
            for j in range(1, r + 1):
                if M[l - 1][j - 1]:
                    out.append((M[l - 1][j - 1], (k, j)))
                if M[j - 1][k - 1]:
                    out.append((-M[j - 1][k - 1], (j, l)))
        elif fac.kind == "OmegaP":
            B = self._need("omega", "OmegaP")
            for pos, idx in enumerate(b):
                for l in range(1, n + 1):
                    c = B[idx - 1][l - 1]
                    if not c:
                        continue
                    sign, J = normalize_index(b[:pos] + (l,) + b[pos + 1:])
                    if sign:
                        out.append((c if sign > 0 else -c, J))
        elif fac.kind == "T":
            B = self._need("omega", "T")
            for l in range(1, n + 1):
                c = B[l - 1][b - 1]
                if c:
                    out.append((-c, l))
        elif fac.kind == "Kinv":
            B = self._need("omega", "Kinv")
            tr = Form.zero(n, N)
            for k in range(n):
                tr = tr + B[k][k]
            if tr:
                out.append((-tr, 1))
        return _collect(out)

    def act(self, s: ValuedForm, positions: Optional[Iterable[int]] = None) -> ValuedForm:
        """Derivation action ``sum_factors A(b_f) ^ omega (x) ...``."""
        s = as_valued(s)
        positions = range(len(s.word)) if positions is None else list(positions)
        cache: Dict[tuple, List] = {}
        out: Dict[tuple, Form] = {}
        for b, f in s.components.items():
            for pos in positions:
                fac = s.word[pos]
                key = (pos, b[pos])
                imgs = cache.get(key)
                if imgs is None:
                    imgs = cache[key] = self.images(fac, b[pos])
                for c, x in imgs:
                    g = c.wedge(f)
                    if not g:
                        continue
                    nb = b[:pos] + (x,) + b[pos + 1:]
                    prev = out.get(nb)
                    out[nb] = g if prev is None else prev + g
        return ValuedForm(s.word, s.n, s.N, {b: f for b, f in out.items() if f}, _trusted=True)


def _collect(pairs: List[Tuple[Form, object]]) -> List[Tuple[Form, object]]:
    acc: Dict[object, Form] = {}
    order = []
    for c, x in pairs:
        if x in acc:
            acc[x] = acc[x] + c
        else:
            acc[x] = c
            order.append(x)
    return [(acc[x], x) for x in order if acc[x]]


def matrix_from_valued(psi: ValuedForm, r: int) -> Matrix:
    """Matrix ``M[k][l]`` of an End(E)-valued form (basis ``e_k -> e_l``)."""
    if psi.word != (ENDE,):
        raise ValueError(f"expected an End(E)-valued form, got word {fmt_word(psi.word)}")
    zero = Form.zero(psi.n, psi.N)
    return tuple(tuple(psi.components.get(((k, l),), zero) for l in range(1, r + 1))
                 for k in range(1, r + 1))


def valued_from_matrix(M: Matrix, n: int, N: int) -> ValuedForm:
    comps = {}
    for k, row in enumerate(M, start=1):
        for l, f in enumerate(row, start=1):
            if f:
                comps[((k, l),)] = f
    return ValuedForm((ENDE,), n, N, comps, _trusted=True)


def zero_matrix(rows: int, cols: int, n: int, N: int) -> Matrix:
    z = Form.zero(n, N)
    return tuple(tuple(z for _ in range(cols)) for _ in range(rows))


def matrix_wedge(A: Matrix, B: Matrix) -> Matrix:
    """``(A ^ B)[k][m] = sum_l A[k][l] ^ B[l][m]``."""
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    out = []
    for k in range(rows):
        row = []
        for m in range(cols):
            acc = None
            for l in range(inner):
                if A[k][l] and B[l][m]:
                    term = A[k][l].wedge(B[l][m])
                    acc = term if acc is None else acc + term
            row.append(acc if acc is not None else Form.zero(A[k][0].n, A[k][0].N))
        out.append(tuple(row))
    return tuple(out)


# -- connections --------------------------------------------------------------

GammaKey = Tuple[int, int, int]  # (k, i, j) for Gamma^k_{ij}


@dataclass(frozen=True)
class ConnectionData:
    """(1,0) connection data in the holomorphic frames of the chart.

    ``theta[k][l]`` is the (1,0)-form with ``nabla e_k = sum_l theta[k][l] e_l``;
    ``gamma[(k, i, j)]`` is Gamma^k_{ij}, defaulting to zero.
    """

    n: int
    N: int
    r: int
    theta: Matrix
    gamma: Dict[GammaKey, PolySeries] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.theta) != self.r or any(len(row) != self.r for row in self.theta):
            raise ValueError(f"theta must be {self.r}x{self.r}")
        for row in self.theta:
            for f in row:
                if f.n != self.n or f.N != self.N:
                    raise RingMismatch("theta entry ring mismatch")
                if f and f.bidegrees() != {(1, 0)}:
                    raise ValueError(f"theta entries must be (1,0)-forms, got bidegrees {sorted(f.bidegrees())}")
        object.__setattr__(self, "gamma", {key: g for key, g in self.gamma.items() if g})
        for (k, i, j), g in self.gamma.items():
            if not all(1 <= x <= self.n for x in (k, i, j)):
                raise IndexError(f"Christoffel index {(k, i, j)} out of range")
            if g.n != self.n or g.N != self.N:
                raise RingMismatch("Christoffel symbol ring mismatch")

    @classmethod
    def flat(cls, n: int, N: int, r: int = 1) -> "ConnectionData":
        return cls(n, N, r, zero_matrix(r, r, n, N), {})

    def christoffel(self, k: int, i: int, j: int) -> PolySeries:
        g = self.gamma.get((k, i, j))
        return g if g is not None else PolySeries.zero(self.n, self.N)

    @cached_property
    def omega_matrix(self) -> Matrix:
        """``B[k][j] = -sum_l Gamma^k_{lj} dz^l`` (connection on Omega)."""
        n, N = self.n, self.N
        rows = []
        for k in range(1, n + 1):
            row = []
            for j in range(1, n + 1):
                acc = Form.zero(n, N)
                for l in range(1, n + 1):
                    g = self.gamma.get((k, l, j))
                    if g:
                        acc = acc - Form.dz(n, N, l).scale(g)
                row.append(acc)
            rows.append(tuple(row))
        return tuple(rows)

    @cached_property
    def endo(self) -> FiberEndo:
        return FiberEndo(self.n, self.N, self.theta, self.omega_matrix)


def nabla10(conn: ConnectionData, s) -> ValuedForm:
    """(1,0)-part of the induced connection on the word of ``s``."""
    s = as_valued(s)
    if not s.word:
        return s.map_forms(Form.partial)
    return s.map_forms(Form.partial) + conn.endo.act(s)


def dbar_valued(s) -> ValuedForm:
    return as_valued(s).map_forms(Form.dbar)


def nabla(conn: ConnectionData, s) -> ValuedForm:
    return dbar_valued(s) + nabla10(conn, s)


def curvature_matrix(conn: ConnectionData) -> Matrix:
    return tuple(tuple(f.dbar() for f in row) for row in conn.theta)


def curvature(conn: ConnectionData) -> ValuedForm:
    """(1,1) curvature ``dbar theta`` as an End(E)-valued form."""
    return valued_from_matrix(curvature_matrix(conn), conn.n, conn.N)


def end_act(psi, s, factor: Optional[int] = None) -> ValuedForm:
    """Act with an End(E)-valued form on ``s``.

    ``psi`` is either an End(E)-valued :class:`ValuedForm` or an r x r matrix
    of forms.  With ``factor=None`` the action is the derivation over every
    E / End(E) factor of the word; otherwise only that position is touched.
    """
    s = as_valued(s)
    if isinstance(psi, ValuedForm):
        M = matrix_from_valued(psi, max(_rank_from_word(psi), _max_e_index(s)))
    else:
        M = psi
    r = len(M)
    positions = [i for i, fac in enumerate(s.word) if fac.kind in ("E", "EndE")]
    if factor is not None:
        if factor not in positions:
            raise ValueError(f"factor {factor} of {fmt_word(s.word)} is not an E or End(E) factor")
        positions = [factor]
    for b in s.components:
        for pos in positions:
            x = b[pos]
            top = x if isinstance(x, int) else max(x)
            if top > r:
                raise ValueError(f"rank mismatch: endomorphism of rank {r} on basis {x}")
    return FiberEndo(s.n, s.N, M, None).act(s, positions)


def _rank_from_word(psi: ValuedForm) -> int:
    if psi.word != (ENDE,):
        raise ValueError("expected an End(E)-valued form")
    return max((max(b[0]) for b in psi.components), default=1)


def _max_e_index(s: ValuedForm) -> int:
    top = 1
    for b in s.components:
        for fac, x in zip(s.word, b):
            if fac.kind == "E":
                top = max(top, x)
            elif fac.kind == "EndE":
                top = max(top, *x)
    return top
