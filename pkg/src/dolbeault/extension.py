"""Order-by-order extension of dbar-closed forms along a deformation.

At order m each equation reads ``dbar sigma_m = rhs_m`` with ``rhs_m`` built
from lower orders.  It is solved with the radial homotopy ``h`` in the zbar
variables, which satisfies ``dbar h + h dbar = id`` on positive zbar-degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from .bundles import E, ConnectionData, ValuedForm, as_valued, dbar_valued, end_act, fmt_word
from .coeff_ring import PolySeries
from .deformation import BeltramiField, EndoField, contract, lie10_conn, lie10_scalar, mc_residual
from .forms import Form


class ExtensionError(ValueError):
    """A right side failed to be dbar-closed, or the final residual is nonzero."""

    def __init__(self, message: str, order: int, witness):
        super().__init__(f"{message} at order {order}: {witness}")
        self.order = order
        self.witness = witness


class NotClosedError(ValueError):
    def __init__(self, witness):
        super().__init__(f"input is not dbar-closed; dbar gives {witness}")
        self.witness = witness


# -- homotopy ------------------------------------------------------------------

def _homotopy_form(w: Form) -> Form:
    n, N = w.n, w.N
    out = {}
    for (I, J), f in w.terms.items():
        q = len(J)
        if q == 0:
            raise ValueError("the dbar homotopy needs dzbar-degree >= 1 on every term")
        for pos, j in enumerate(J):
            key = (I, J[:pos] + J[pos + 1:])
            slot = n + j - 1
            acc = out.setdefault(key, {})
            for mono, c in f.terms.items():
                weight = sum(mono[n:2 * n]) + q
                c = c * Fraction(1, weight)
                if pos & 1:
                    c = -c
                nm = mono[:slot] + (mono[slot] + 1,) + mono[slot + 1:]
                prev = acc.get(nm)
                acc[nm] = c if prev is None else prev + c
    terms = {}
    for key, coeffs in out.items():
        f = PolySeries(n, N, {k: c for k, c in coeffs.items() if c}, _trusted=True)
        if f:
            terms[key] = f
    return Form(n, N, terms, _trusted=True)


def homotopy_h(w):
    """Radial homotopy: Euler-field contraction in zbar divided by ``|b| + q``."""
    if isinstance(w, Form):
        return _homotopy_form(w)
    return w.map_forms(_homotopy_form)


def dbar_solve(beta):
    """A solution ``x`` of ``dbar x = beta`` for dbar-closed ``beta`` of dzbar-degree >= 1."""
    d = beta.dbar() if isinstance(beta, Form) else dbar_valued(beta)
    if d:
        raise NotClosedError(d)
    return homotopy_h(beta)


# -- families -----------------------------------------------------------------

@dataclass(frozen=True)
class DeformationFamily:
    """``phi(t) = sum_{k>=1} t^k phi_k`` and optionally ``psi(t)`` likewise.

    ``phi_orders[k-1]`` is ``phi_k``; coefficients are t-free.
    """

    phi_orders: Sequence[BeltramiField]
    psi_orders: Optional[Sequence[EndoField]] = None

    def __post_init__(self):
        for k, phi in enumerate(self.phi_orders, start=1):
            if phi.k != 1:
                raise ValueError(f"phi_{k} is not a (0,1) field")
            if phi.t_degree() > 0:
                raise ValueError(f"phi_{k} must have t-free coefficients")
        if self.psi_orders is not None:
            for k, psi in enumerate(self.psi_orders, start=1):
                if any(f.t_degree() > 0 for row in psi.entries for f in row):
                    raise ValueError(f"psi_{k} must have t-free coefficients")

    @classmethod
    def from_series(cls, phi: BeltramiField, psi: Optional[EndoField] = None) -> "DeformationFamily":
        if phi.t_coefficient(0):
            raise ValueError("phi(0) must vanish")
        phis = [phi.t_coefficient(k) for k in range(1, phi.N + 1)]
        psis = None
        if psi is not None:
            if not psi.t_coefficient(0).is_zero():
                raise ValueError("psi(0) must vanish")
            psis = [psi.t_coefficient(k) for k in range(1, phi.N + 1)]
        return cls(phis, psis)

    def phi_k(self, k: int) -> Optional[BeltramiField]:
        return self.phi_orders[k - 1] if 1 <= k <= len(self.phi_orders) else None

    def psi_k(self, k: int) -> Optional[EndoField]:
        if self.psi_orders is None or not 1 <= k <= len(self.psi_orders):
            return None
        return self.psi_orders[k - 1]

    def phi_series(self, n: int, N: int) -> BeltramiField:
        acc = BeltramiField.zero(n, N)
        for k in range(1, min(N, len(self.phi_orders)) + 1):
            acc = acc + self.phi_orders[k - 1].times_t(k)
        return acc

    def psi_series(self, r: int, n: int, N: int) -> EndoField:
        acc = EndoField.zero(r, n, N)
        if self.psi_orders is not None:
            for k in range(1, min(N, len(self.psi_orders)) + 1):
                acc = acc + EndoField(tuple(tuple(f.times_t(k) for f in row)
                                            for row in self.psi_orders[k - 1].entries))
        return acc


@dataclass
class OrderReport:
    order: int
    rhs: object
    solution: object


@dataclass
class ExtensionResult:
    sigma: object  # Form or ValuedForm, the full series sigma(t)
    orders: List[OrderReport] = field(default_factory=list)
    residual: object = None

    def order_term(self, m: int):
        return self.sigma.t_coefficient(m)


def _iterate(sigma0, N: int, rhs_at: Callable[[int, list], object], residual_of) -> ExtensionResult:
    sols = [sigma0]
    reports = []
    for m in range(1, N + 1):
        rhs = rhs_at(m, sols)
        if rhs:
            try:
                sol = dbar_solve(rhs)
            except NotClosedError as exc:
                raise ExtensionError("right side is not dbar-closed", m, exc.witness) from None
        else:
            sol = rhs
        reports.append(OrderReport(m, rhs, sol))
        sols.append(sol)
    sigma = sols[0]
    for m in range(1, N + 1):
        sigma = sigma + sols[m].times_t(m)
    residual = residual_of(sigma)
    if residual:
        raise ExtensionError("full equation residual is nonzero", N, residual)
    return ExtensionResult(sigma, reports, residual)


def _check_seed(sigma0, N: int):
    if sigma0.N != N:
        raise ValueError(f"seed lives in the ring truncated at {sigma0.N}, expected {N}")
    if isinstance(sigma0, Form):
        if sigma0.t_degree() > 0:
            raise ValueError("the seed must be t-free")
        d = sigma0.dbar()
    else:
        if any(f.t_degree() > 0 for f in sigma0.components.values()):
            raise ValueError("the seed must be t-free")
        d = dbar_valued(sigma0)
    if d:
        raise NotClosedError(d)


def extend_scalar(family: DeformationFamily, sigma0: Form, N: int) -> ExtensionResult:
    """Solve ``(dbar - L^{1,0}_phi(t)) sigma(t) = 0`` through order N."""
    _check_seed(sigma0, N)

    def rhs_at(m, sols):
        acc = Form.zero(sigma0.n, N)
        for k in range(1, m + 1):
            phi = family.phi_k(k)
            if phi is not None and sols[m - k]:
                acc = acc + lie10_scalar(phi, sols[m - k])
        return acc

    phi_t = family.phi_series(sigma0.n, N)
    return _iterate(sigma0, N, rhs_at, lambda s: s.dbar() - lie10_scalar(phi_t, s))


def extend_bundle(family: DeformationFamily, conn: ConnectionData, sigma0, N: int) -> ExtensionResult:
    """Solve ``(dbar - L^{1,0}_phi(t) + psi_E(t)) sigma(t) = 0`` through order N."""
    sigma0 = as_valued(sigma0)
    if sigma0.word != (E,):
        raise ValueError(f"extend_bundle takes E-valued seeds, got word {fmt_word(sigma0.word)}")
    _check_seed(sigma0, N)
    n = sigma0.n

    def rhs_at(m, sols):
        acc = ValuedForm.zero(sigma0.word, n, N)
        for k in range(1, m + 1):
            prev = sols[m - k]
            if not prev:
                continue
            phi = family.phi_k(k)
            if phi is not None:
                acc = acc + lie10_conn(conn, phi, prev)
            psi = family.psi_k(k)
            if psi is not None:
                acc = acc - end_act(psi.entries, prev)
        return acc

    phi_t = family.phi_series(n, N)
    psi_t = family.psi_series(conn.r, n, N)

    def residual_of(s):
        return dbar_valued(s) - lie10_conn(conn, phi_t, s) + end_act(psi_t.entries, s)

    return _iterate(sigma0, N, rhs_at, residual_of)


def extend_nq(family: DeformationFamily, sigma0: Form, N: int) -> ExtensionResult:
    """Solve ``dbar sigma(t) + d' i_phi(t) sigma(t) = 0`` through order N for (n,q) seeds."""
    n = sigma0.n
    if any(p != n for p, _ in sigma0.bidegrees()):
        raise ValueError(f"extend_nq needs an (n,q) seed, got bidegrees {sorted(sigma0.bidegrees())}")
    _check_seed(sigma0, N)

    def rhs_at(m, sols):
        acc = Form.zero(n, N)
        for k in range(1, m + 1):
            phi = family.phi_k(k)
            if phi is not None and sols[m - k]:
                acc = acc - contract(phi, sols[m - k]).partial()
        return acc

    phi_t = family.phi_series(n, N)
    return _iterate(sigma0, N, rhs_at, lambda s: s.dbar() + contract(phi_t, s).partial())


def family_on_shell(family: DeformationFamily, n: int, N: int) -> bool:
    return mc_residual(family.phi_series(n, N)).is_zero()


__all__ = [
    "ExtensionError", "NotClosedError", "homotopy_h", "dbar_solve", "DeformationFamily",
    "OrderReport", "ExtensionResult", "extend_scalar", "extend_bundle", "extend_nq",
    "family_on_shell",
]
