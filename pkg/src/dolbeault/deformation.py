"""Contraction, extension map, brackets, Lie derivatives, Maurer-Cartan
residuals and the constructors for the (0,1) endomorphism data psi.

Sign conventions (pinned by the exactness tests of the conjugated-connection identity):

* ``i_phi s = sum_i phi^i ^ (d/dz^i -| s)`` with ``-|`` the interior
  antiderivation.  For a (0,1) field this is an even derivation:
  ``i_phi(a ^ b) = i_phi a ^ b + a ^ i_phi b``.
* ``[phi, psi]^k = phi^i ^ d_i psi^k + psi^i ^ d_i phi^k`` where ``d_i`` differentiates
  the coefficients in z^i.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .bundles import (ENDE, ConnectionData, FiberEndo, Factor, Matrix, ValuedForm,
                      as_valued, curvature, dbar_valued, matrix_wedge, nabla, nabla10,
                      valued_from_matrix)
from .coeff_ring import GaussRational, PolySeries, RingMismatch
from .forms import Form, MultiIndex, normalize_index


class NotInvertibleAtZero(ValueError):
    """A matrix series whose t=0 value is not the identity."""


class BeltramiField:
    """``sum_i phi^i (x) d/dz^i`` with ``phi^i`` a (0,k)-form."""

    __slots__ = ("n", "N", "k", "components")

    def __init__(self, n: int, N: int, k: int, components: Sequence[Form]):
        components = tuple(components)
        if len(components) != n:
            raise ValueError(f"expected {n} vector components, got {len(components)}")
        for f in components:
            if f.n != n or f.N != N:
                raise RingMismatch("Beltrami component ring mismatch")
            if f and f.bidegrees() != {(0, k)}:
                raise ValueError(f"Beltrami components must be (0,{k})-forms, got {sorted(f.bidegrees())}")
        self.n, self.N, self.k = n, N, k
        self.components = components

    @classmethod
    def zero(cls, n: int, N: int, k: int = 1) -> "BeltramiField":
        return cls(n, N, k, [Form.zero(n, N)] * n)

    @classmethod
    def from_coeffs(cls, n: int, N: int, coeffs: Dict[Tuple[int, Iterable[int]], PolySeries],
                    k: int = 1) -> "BeltramiField":
        """Build from ``{(i, J): f}`` meaning ``f dzbar^J (x) d/dz^i``."""
        comps = [Form.zero(n, N) for _ in range(n)]
        for (i, J), f in coeffs.items():
            J = (J,) if isinstance(J, int) else tuple(J)
            if len(J) != k:
                raise ValueError(f"index {J} does not have length {k}")
            comps[i - 1] = comps[i - 1] + Form.basis(n, N, J=J, coeff=f)
        return cls(n, N, k, comps)

    def coeff(self, i: int, J: Iterable[int]) -> PolySeries:
        J = (J,) if isinstance(J, int) else tuple(J)
        sign, J = normalize_index(J)
        f = self.components[i - 1].terms.get(((), J))
        if f is None or not sign:
            return PolySeries.zero(self.n, self.N)
        return f if sign > 0 else -f

    @property
    def coeffs(self) -> Dict[Tuple[int, MultiIndex], PolySeries]:
        return {(i, J): f for i, comp in enumerate(self.components, start=1)
                for (_, J), f in comp.terms.items()}

    def _check(self, other: "BeltramiField") -> None:
        if (self.n, self.N, self.k) != (other.n, other.N, other.k):
            raise RingMismatch("Beltrami field mismatch")

    def __add__(self, other: "BeltramiField") -> "BeltramiField":
        self._check(other)
        return BeltramiField(self.n, self.N, self.k,
                             [a + b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "BeltramiField":
        return BeltramiField(self.n, self.N, self.k, [-a for a in self.components])

    def __sub__(self, other: "BeltramiField") -> "BeltramiField":
        return self + (-other)

    def scale(self, c) -> "BeltramiField":
        return BeltramiField(self.n, self.N, self.k, [a.scale(c) for a in self.components])

    def dbar(self) -> "BeltramiField":
        return BeltramiField(self.n, self.N, self.k + 1, [a.dbar() for a in self.components])

    def t_coefficient(self, m: int) -> "BeltramiField":
        return BeltramiField(self.n, self.N, self.k, [a.t_coefficient(m) for a in self.components])

    def times_t(self, m: int) -> "BeltramiField":
        return BeltramiField(self.n, self.N, self.k, [a.times_t(m) for a in self.components])

    def t_degree(self) -> int:
        return max((a.t_degree() for a in self.components), default=-1)

    def is_zero(self) -> bool:
        return not any(self.components)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, BeltramiField):
            return NotImplemented
        return (self.n, self.N, self.k) == (other.n, other.N, other.k) and self.components == other.components

    def __hash__(self):
        return hash((self.n, self.N, self.k, self.components))

    def __str__(self):
        parts = [f"[{c}] (x) d/dz{i}" for i, c in enumerate(self.components, start=1) if c]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"BeltramiField(k={self.k}, {self})"


# -- contraction and the extension map ----------------------------------------

def _contract_form(phi: BeltramiField, s: Form) -> Form:
    acc = Form.zero(s.n, s.N)
    for i, comp in enumerate(phi.components, start=1):
        if not comp:
            continue
        inner = s.interior_z(i)
        if inner:
            acc = acc + comp.wedge(inner)
    return acc


def contract(phi: BeltramiField, s):
    """``i_phi s``; works on :class:`Form` and :class:`ValuedForm`."""
    if isinstance(s, Form):
        return _contract_form(phi, s)
    return s.map_forms(lambda f: _contract_form(phi, f))


def exp_contract(phi: BeltramiField, s):
    """``e^{i_phi} s = sum_k i_phi^k s / k!`` (finite: each step lowers p)."""
    if phi.k != 1:
        raise ValueError("the extension map needs a (0,1) Beltrami field")
    total = s
    term = s
    k = 0
    while True:
        k += 1
        term = contract(phi, term)
        if not term:
            return total
        term = term.scale(Fraction(1, k))
        total = total + term


def bracket(phi: BeltramiField, psi: BeltramiField) -> BeltramiField:
    if phi.k != 1 or psi.k != 1:
        raise ValueError("bracket is implemented for (0,1) fields")
    phi._check(psi)
    n, N = phi.n, phi.N
    comps = []
    for k in range(n):
        acc = Form.zero(n, N)
        for i in range(1, n + 1):
            di_psi = psi.components[k].map_coeffs(lambda f: f.d_z(i))
            di_phi = phi.components[k].map_coeffs(lambda f: f.d_z(i))
            if phi.components[i - 1] and di_psi:
                acc = acc + phi.components[i - 1].wedge(di_psi)
            if psi.components[i - 1] and di_phi:
                acc = acc + psi.components[i - 1].wedge(di_phi)
        comps.append(acc)
    return BeltramiField(n, N, 2, comps)


def mc_residual(phi: BeltramiField) -> BeltramiField:
    """``dbar phi - 1/2 [phi, phi]``."""
    return phi.dbar() - bracket(phi, phi).scale(Fraction(1, 2))


# -- Lie derivatives ----------------------------------------------------------

def lie10_scalar(phi: BeltramiField, s):
    """``L^{1,0}_phi = i_phi d' - d' i_phi`` with d' the holomorphic differential."""
    if isinstance(s, Form):
        return contract(phi, s.partial()) - contract(phi, s).partial()
    return s.map_forms(lambda f: lie10_scalar(phi, f))


def lie10_conn(conn: ConnectionData, phi: BeltramiField, s) -> ValuedForm:
    return contract(phi, nabla10(conn, s)) - nabla10(conn, contract(phi, as_valued(s)))


def lie_full(conn: ConnectionData, phi: BeltramiField, s) -> ValuedForm:
    return contract(phi, nabla(conn, s)) - nabla(conn, contract(phi, as_valued(s)))


# -- psi data -----------------------------------------------------------------

@dataclass(frozen=True)
class EndoField:
    """r x r matrix of (0,1)-forms; ``entries[k][l]`` is the e_k -> e_l entry."""

    entries: Matrix

    def __post_init__(self):
        r = len(self.entries)
        for row in self.entries:
            if len(row) != r:
                raise ValueError("endomorphism field must be square")
            for f in row:
                if f and f.bidegrees() != {(0, 1)}:
                    raise ValueError(f"endomorphism entries must be (0,1)-forms, got {sorted(f.bidegrees())}")

    @property
    def r(self) -> int:
        return len(self.entries)

    @classmethod
    def zero(cls, r: int, n: int, N: int) -> "EndoField":
        z = Form.zero(n, N)
        return cls(tuple(tuple(z for _ in range(r)) for _ in range(r)))

    def valued(self) -> ValuedForm:
        f = self.entries[0][0]
        return valued_from_matrix(self.entries, f.n, f.N)

    def __add__(self, other: "EndoField") -> "EndoField":
        return EndoField(tuple(tuple(a + b for a, b in zip(ra, rb))
                               for ra, rb in zip(self.entries, other.entries)))

    def t_coefficient(self, m: int) -> "EndoField":
        return EndoField(tuple(tuple(f.t_coefficient(m) for f in row) for row in self.entries))

    def is_zero(self) -> bool:
        return not any(f for row in self.entries for f in row)

    def __eq__(self, other):
        if not isinstance(other, EndoField):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __str__(self):
        return str(self.valued())


def psi_omega(phi: BeltramiField, conn: ConnectionData) -> Matrix:
    """``psi_Omega[k][l] = -d_l phi^k - Gamma^k_{jl} phi^j`` (acts dz^k -> dz^l)."""
    n = phi.n
    rows = []
    for k in range(1, n + 1):
        row = []
        for l in range(1, n + 1):
            acc = -phi.components[k - 1].map_coeffs(lambda f: f.d_z(l))
            for j in range(1, n + 1):
                g = conn.gamma.get((k, j, l))
                if g and phi.components[j - 1]:
                    acc = acc - phi.components[j - 1].scale(g)
            row.append(acc)
        rows.append(tuple(row))
    return tuple(rows)


def psi_endo(phi: BeltramiField, conn: ConnectionData,
             psi_e: Optional[EndoField] = None) -> FiberEndo:
    """Derivation data of psi on every factor: psi_Omega induced, psi_E given."""
    return FiberEndo(phi.n, phi.N, psi_e.entries if psi_e is not None else None,
                     psi_omega(phi, conn))


def _basis_images(endo: FiberEndo, word: Tuple[Factor, ...], b: tuple) -> ValuedForm:
    unit = ValuedForm(word, endo.n, endo.N, {b: Form.const(endo.n, endo.N)})
    return endo.act(unit)


def psi_omega_p(phi: BeltramiField, conn: ConnectionData, p: int) -> Dict[MultiIndex, ValuedForm]:
    """Images ``psi_{Omega^p}(dz^I)`` for every ascending I of length p."""
    from .bundles import OmegaP
    fac = OmegaP(p)
    endo = psi_endo(phi, conn)
    return {I: _basis_images(endo, (fac,), (I,)) for I in fac.basis(phi.n, 0)}


def psi_kinv(phi: BeltramiField, conn: ConnectionData) -> ValuedForm:
    """``psi_{K^-1}(1/<dz>)`` as a Kinv-valued (0,1)-form."""
    from .bundles import KINV
    return _basis_images(psi_endo(phi, conn), (KINV,), (1,))


def psi_tensor(phi: BeltramiField, conn: ConnectionData, p: int) -> Dict[MultiIndex, ValuedForm]:
    """Images of ``dz^I (x) 1/<dz>`` under psi on Omega^p (x) K^-1."""
    from .bundles import KINV, OmegaP
    word = (OmegaP(p), KINV)
    endo = psi_endo(phi, conn)
    return {I: _basis_images(endo, word, (I, 1)) for I in OmegaP(p).basis(phi.n, 0)}


def holomorphic_split(form: Form, p: int) -> ValuedForm:
    """Read a form with dz-degree p as an Omega^p-valued form: f dzbar^J^dz^I -> (f dzbar^J) (x) dz^I."""
    from .bundles import OmegaP
    comps: Dict[tuple, Form] = {}
    for (I, J), f in form.terms.items():
        if len(I) != p:
            raise ValueError(f"term with dz-degree {len(I)} cannot be read as Omega^{p}-valued")
        key = (I,)
        piece = Form(form.n, form.N, {((), J): f}, _trusted=True)
        comps[key] = comps[key] + piece if key in comps else piece
    return ValuedForm((OmegaP(p),), form.n, form.N, comps)


# -- transition data ----------------------------------------------------------

PolyMatrix = List[List[PolySeries]]


def poly_identity(r: int, n: int, N: int) -> PolyMatrix:
    return [[PolySeries.one(n, N) if i == j else PolySeries.zero(n, N) for j in range(r)]
            for i in range(r)]


def poly_matmul(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    n, N = A[0][0].n, A[0][0].N
    out = []
    for i in range(len(A)):
        row = []
        for j in range(len(B[0])):
            acc = PolySeries.zero(n, N)
            for l in range(len(B)):
                if A[i][l] and B[l][j]:
                    acc = acc + A[i][l] * B[l][j]
            row.append(acc)
        out.append(row)
    return out


def series_inverse(w: PolyMatrix) -> PolyMatrix:
    """Inverse of a matrix series with ``w(t=0) = identity``, to order N."""
    r = len(w)
    n, N = w[0][0].n, w[0][0].N
    for i in range(r):
        for j in range(r):
            c0 = w[i][j].t_coefficient(0)
            if c0 != (1 if i == j else 0):
                raise NotInvertibleAtZero(f"entry ({i + 1},{j + 1}) at t=0 is {c0}, expected {int(i == j)}")
    ident = poly_identity(r, n, N)
    X = [[ident[i][j] - w[i][j] for j in range(r)] for i in range(r)]
    total = ident
    power = ident
    for _ in range(N):
        power = poly_matmul(power, X)
        total = [[total[i][j] + power[i][j] for j in range(r)] for i in range(r)]
    return total


def deformed_dbar(phi: BeltramiField, f: PolySeries) -> Form:
    """``(dbar - L^{1,0}_phi) f = dbar f - i_phi d'f`` for a function f."""
    g = Form.scalar(f)
    return g.dbar() - contract(phi, g.partial())


def psi_from_transition(w: PolyMatrix, conn: ConnectionData, phi: BeltramiField) -> EndoField:
    """``psi^{kl} = (w^-1)^{lj} (dbar - L_phi) w^{jk} + i_phi theta^{kl}``."""
    r = len(w)
    if r != conn.r:
        raise ValueError(f"transition matrix is {r}x{r} but the bundle has rank {conn.r}")
    winv = series_inverse(w)
    dw = [[deformed_dbar(phi, w[j][k]) for k in range(r)] for j in range(r)]
    rows = []
    for k in range(r):
        row = []
        for l in range(r):
            acc = contract(phi, conn.theta[k][l])
            for j in range(r):
                if winv[l][j] and dw[j][k]:
                    acc = acc + dw[j][k].scale(winv[l][j])
            row.append(acc)
        rows.append(tuple(row))
    return EndoField(tuple(rows))


def phi_from_trivialization(zt: Sequence[PolySeries]) -> BeltramiField:
    """Beltrami field ``(dz_t/dz)^-1 dbar z_t`` of deformed coordinates z_t."""
    n = len(zt)
    N = zt[0].N
    for k, f in enumerate(zt, start=1):
        if f.n != n:
            raise RingMismatch("z_t must have one entry per chart axis")
        if f.t_coefficient(0) != PolySeries.z(n, N, k):
            raise NotInvertibleAtZero(f"z_t^{k} must reduce to z{k} at t=0")
    jac = [[zt[k].d_z(i) for i in range(1, n + 1)] for k in range(n)]
    jinv = series_inverse(jac)
    dbar_zt = [Form.scalar(f).dbar() for f in zt]
    comps = []
    for i in range(n):
        acc = Form.zero(n, N)
        for k in range(n):
            if jinv[i][k] and dbar_zt[k]:
                acc = acc + dbar_zt[k].scale(jinv[i][k])
        comps.append(acc)
    return BeltramiField(n, N, 1, comps)


@dataclass(frozen=True)
class IntegrabilityResult:
    holds: bool
    witness: ValuedForm  # End(E)-valued; entry (k, j) is the defect of nabla_t e_t^k along e_0^j

    def __bool__(self):
        return self.holds


def integrability_check(w: PolyMatrix, conn: ConnectionData, phi: BeltramiField,
                        psi: Optional[EndoField] = None) -> IntegrabilityResult:
    """Check that ``nabla + psi`` is integrable on the deformed bundle.

    Expresses ``beta^k = (nabla + psi) e_t^k`` with ``e_t^k = (w^-1)^{lk} e_0^l``
    in the t=0 frame and tests ``beta^{0,1} = i_phi beta^{1,0}`` entrywise.
    """
    if psi is None:
        psi = psi_from_transition(w, conn, phi)
    r = conn.r
    n, N = phi.n, phi.N
    winv = series_inverse(w)
    comps = {}
    for k in range(r):
        for j in range(r):
            beta = Form.scalar(winv[j][k]).d()
            for l in range(r):
                if winv[l][k]:
                    beta = beta + (conn.theta[l][j] + psi.entries[l][j]).scale(winv[l][k])
            defect = beta.component(0, 1) - contract(phi, beta.component(1, 0))
            if defect:
                comps[((k + 1, j + 1),)] = defect
    witness = ValuedForm((ENDE,), n, N, comps, _trusted=True)
    return IntegrabilityResult(witness.is_zero(), witness)


def second_residual(conn: ConnectionData, phi: BeltramiField, psi: EndoField) -> ValuedForm:
    """``(dbar - L_phi) psi - psi ^ psi - i_phi Theta`` as an End(E)-valued (0,2)-form."""
    psiv = psi.valued()
    first = dbar_valued(psiv) - lie_full(conn, phi, psiv)
    square = valued_from_matrix(matrix_wedge(psi.entries, psi.entries), phi.n, phi.N)
    return first - square - contract(phi, curvature(conn))


__all__ = [
    "BeltramiField", "EndoField", "IntegrabilityResult", "NotInvertibleAtZero",
    "contract", "exp_contract", "bracket", "mc_residual", "lie10_scalar", "lie10_conn",
    "lie_full", "psi_omega", "psi_omega_p", "psi_kinv", "psi_tensor", "psi_endo",
    "psi_from_transition", "phi_from_trivialization", "integrability_check",
    "second_residual", "series_inverse", "holomorphic_split", "deformed_dbar",
    "GaussRational",
]
