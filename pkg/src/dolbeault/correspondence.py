"""The relabeling isomorphism I and exact verifiers for the chart identities.

Objects on the deformed fiber are never built; every statement is checked
through its conjugate on the t=0 chart.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

from .bundles import (E, KINV, ConnectionData, FiberEndo, OmegaP, ValuedForm, as_valued,
                      curvature_matrix, dbar_valued, end_act, fmt_word, nabla, nabla10,
                      valued_from_matrix)
from .deformation import (BeltramiField, EndoField, contract, exp_contract, lie10_conn,
                          mc_residual, psi_endo)
from .forms import Form


class OffShellError(ValueError):
    """The Beltrami field violates Maurer-Cartan where an on-shell field is required."""


@dataclass(frozen=True)
class CorrespondenceContext:
    conn: ConnectionData
    phi: BeltramiField
    psi_e: Optional[EndoField] = None

    def __post_init__(self):
        if self.phi.k != 1:
            raise ValueError("the context needs a (0,1) Beltrami field")
        if (self.phi.n, self.phi.N) != (self.conn.n, self.conn.N):
            raise ValueError("Beltrami field and connection live on different rings")
        if self.psi_e is not None and self.psi_e.r != self.conn.r:
            raise ValueError(f"psi_E has rank {self.psi_e.r}, bundle has rank {self.conn.r}")

    @property
    def n(self) -> int:
        return self.conn.n

    @property
    def N(self) -> int:
        return self.conn.N

    @property
    def r(self) -> int:
        return self.conn.r

    def on_shell(self) -> bool:
        return mc_residual(self.phi).is_zero()

    def psi_fiber(self) -> FiberEndo:
        psi_e = self.psi_e if self.psi_e is not None else EndoField.zero(self.r, self.n, self.N)
        return psi_endo(self.phi, self.conn, psi_e)

    def psi_e_act(self, s: ValuedForm) -> ValuedForm:
        if self.psi_e is None or not any(f.kind in ("E", "EndE") for f in s.word):
            return ValuedForm.zero(s.word, s.n, s.N)
        return end_act(self.psi_e.entries, s)


# -- the isomorphism I --------------------------------------------------------

def _split_word(s: ValuedForm) -> bool:
    if s.word == ():
        return False
    if s.word == (E,):
        return True
    raise ValueError(f"I is defined on scalar or E-valued forms, got word {fmt_word(s.word)}")


def iso_I(s) -> ValuedForm:
    """``f dzbar^J ^ dz^I (x) e_k  ->  (f dzbar^J ^ <dz>) (x) dz^I (x) 1/<dz> (x) e_k``."""
    s = as_valued(s)
    degs = s.bidegrees()
    if len(degs) > 1:
        raise ValueError(f"I needs a bihomogeneous input, got bidegrees {sorted(degs)}")
    return _iso_I(s, next(iter(degs))[0] if degs else 0, _split_word(s))


def iso_I_p(s, p: int) -> ValuedForm:
    """As :func:`iso_I` but with the holomorphic degree given (needed for s = 0)."""
    s = as_valued(s)
    degs = s.bidegrees()
    if any(d[0] != p for d in degs) or len(degs) > 1:
        raise ValueError(f"I needs a bihomogeneous input of holomorphic degree {p}, got {sorted(degs)}")
    return _iso_I(s, p, _split_word(s))


def _iso_I(s: ValuedForm, p: int, with_e: bool) -> ValuedForm:
    n, N = s.n, s.N
    top = tuple(range(1, n + 1))
    word = (OmegaP(p), KINV) + ((E,) if with_e else ())
    comps = {}
    for b, form in s.components.items():
        for (I, J), f in form.terms.items():
            key = (I, 1) + b
            piece = Form(n, N, {(top, J): f}, _trusted=True)
            comps[key] = comps[key] + piece if key in comps else piece
    return ValuedForm(word, n, N, comps, _trusted=True)


def iso_I_inv(u: ValuedForm) -> ValuedForm:
    if len(u.word) not in (2, 3) or u.word[0].kind != "OmegaP" or u.word[1] != KINV \
            or (len(u.word) == 3 and u.word[2] != E):
        raise ValueError(f"not in the image of I: word {fmt_word(u.word)}")
    n, N = u.n, u.N
    top = tuple(range(1, n + 1))
    word = (E,) if len(u.word) == 3 else ()
    comps = {}
    for b, form in u.components.items():
        I, rest = b[0], b[2:]
        for (K, J), f in form.terms.items():
            if K != top:
                raise ValueError("I^{-1} needs forms of holomorphic degree n")
            piece = Form(n, N, {(I, J): f}, _trusted=True)
            comps[rest] = comps[rest] + piece if rest in comps else piece
    return ValuedForm(word, n, N, comps, _trusted=True)


def _holo_degree(s: ValuedForm, p: Optional[int] = None) -> int:
    """Holomorphic degree of a bihomogeneous ``s``; ``p`` pins it for ``s = 0``."""
    degs = s.bidegrees()
    if len(degs) > 1:
        raise ValueError(f"expected a bihomogeneous form, got bidegrees {sorted(degs)}")
    if not degs:
        return p or 0
    if p is not None and next(iter(degs))[0] != p:
        raise ValueError(f"form has holomorphic degree {next(iter(degs))[0]}, expected {p}")
    return next(iter(degs))[0]


# -- conjugated operators -----------------------------------------------------

def conjugated_nabla(ctx: CorrespondenceContext, s) -> ValuedForm:
    """``e^{-i_phi} nabla e^{i_phi} s``."""
    return exp_contract(-ctx.phi, nabla(ctx.conn, exp_contract(ctx.phi, as_valued(s))))


def deformed_dbar(ctx: CorrespondenceContext, s) -> ValuedForm:
    """``(dbar - L^{1,0}_phi) s`` on any word."""
    s = as_valued(s)
    return dbar_valued(s) - lie10_conn(ctx.conn, ctx.phi, s)


def twisted_dbar(ctx: CorrespondenceContext, u: ValuedForm) -> ValuedForm:
    """``(dbar + nabla^{1,0} i_phi + psi) u`` on I-images: the chart form of
    the deformed Dolbeault operator on Omega^p (x) K^-1 (x) E."""
    return dbar_valued(u) + nabla10(ctx.conn, contract(ctx.phi, u)) + ctx.psi_fiber().act(u)


# -- identities ----------------------------------------------------------------

def identity_LRY(ctx: CorrespondenceContext, s) -> ValuedForm:
    s = as_valued(s)
    rhs = nabla(ctx.conn, s) - lie10_conn(ctx.conn, ctx.phi, s) + contract(mc_residual(ctx.phi), s)
    return conjugated_nabla(ctx, s) - rhs


def identity_pro2(ctx: CorrespondenceContext, sigma) -> ValuedForm:
    sigma = as_valued(sigma)
    n = ctx.n
    if any(p != n for p, _ in sigma.bidegrees()):
        raise ValueError(f"expected an (n,q) input with n={n}, got bidegrees {sorted(sigma.bidegrees())}")
    inner = exp_contract(ctx.phi, sigma)
    lhs = exp_contract(-ctx.phi, nabla(ctx.conn, inner) + ctx.psi_e_act(inner))
    rhs = dbar_valued(sigma) + nabla10(ctx.conn, contract(ctx.phi, sigma)) + ctx.psi_e_act(sigma)
    return lhs - rhs


def _thm_residual(ctx: CorrespondenceContext, s: ValuedForm, p: Optional[int]) -> ValuedForm:
    p = _holo_degree(s, p)
    u = iso_I_p(s, p)
    lhs = nabla10(ctx.conn, contract(ctx.phi, u)) + ctx.psi_fiber().act(u)
    target = -lie10_conn(ctx.conn, ctx.phi, s) + ctx.psi_e_act(s)
    return lhs - iso_I_p(target, p)


def identity_thm1(ctx: CorrespondenceContext, s, p: Optional[int] = None) -> ValuedForm:
    s = as_valued(s)
    if s.word != ():
        raise ValueError("identity_thm1 takes scalar forms")
    return _thm_residual(ctx, s, p)


def identity_thm2(ctx: CorrespondenceContext, s, p: Optional[int] = None) -> ValuedForm:
    s = as_valued(s)
    if s.word != (E,):
        raise ValueError("identity_thm2 takes E-valued forms")
    return _thm_residual(ctx, s, p)


def identity_nabla01(ctx: CorrespondenceContext, s, literal: bool = False,
                     p: Optional[int] = None) -> ValuedForm:
    """``(dbar + nabla^{1,0} i_phi + psi) I(s) - I((dbar - L^{1,0}_phi + psi_E) s)``.

    ``literal=True`` drops both psi terms; that residual equals
    ``-psi I(s) + I(psi_E s)``.
    """
    s = as_valued(s)
    p = _holo_degree(s, p)
    u = iso_I_p(s, p)
    if literal:
        lhs = dbar_valued(u) + nabla10(ctx.conn, contract(ctx.phi, u))
        return lhs - iso_I_p(deformed_dbar(ctx, s), p)
    return twisted_dbar(ctx, u) - iso_I_p(deformed_dbar(ctx, s) + ctx.psi_e_act(s), p)


def contracted_curvature(ctx: CorrespondenceContext):
    """``i_phi Theta`` as an r x r matrix of (0,2)-forms."""
    return tuple(tuple(contract(ctx.phi, f) for f in row) for row in curvature_matrix(ctx.conn))


def identity_pro4(ctx: CorrespondenceContext, s) -> ValuedForm:
    """``(dbar - L^{1,0}_phi)^2 s + (i_phi Theta) s`` for scalar or E / End(E) words."""
    s = as_valued(s)
    if any(f.kind not in ("E", "EndE") for f in s.word):
        raise ValueError(f"identity_pro4 supports words over E and End(E), got {fmt_word(s.word)}")
    if not ctx.on_shell():
        raise OffShellError("the Beltrami field does not satisfy Maurer-Cartan")
    twice = deformed_dbar(ctx, deformed_dbar(ctx, s))
    if not s.word:
        return twice
    return twice + end_act(contracted_curvature(ctx), s)


def coro1_residual(ctx: CorrespondenceContext) -> ValuedForm:
    """``(dbar - L_phi) psi - i_phi Theta`` for a line bundle."""
    if ctx.r != 1:
        raise ValueError(f"coro1 needs a line bundle, got rank {ctx.r}")
    n, N = ctx.n, ctx.N
    psi = ctx.psi_e.entries[0][0] if ctx.psi_e is not None else Form.zero(n, N)
    res = psi.dbar() - contract(ctx.phi, psi.partial()) - contracted_curvature(ctx)[0][0]
    return valued_from_matrix(((res,),), n, N)


# -- verifier wrapper -----------------------------------------------------------

class Verdict(NamedTuple):
    zero: bool
    residual: ValuedForm
    seconds: float


def verify(check: Callable[..., ValuedForm], *args, **kwargs) -> Verdict:
    start = time.perf_counter()
    res = check(*args, **kwargs)
    return Verdict(res.is_zero(), res, time.perf_counter() - start)


__all__ = [
    "CorrespondenceContext", "OffShellError", "Verdict", "iso_I", "iso_I_p", "iso_I_inv",
    "conjugated_nabla", "deformed_dbar", "twisted_dbar", "identity_LRY", "identity_pro2",
    "identity_thm1", "identity_thm2", "identity_nabla01", "identity_pro4", "coro1_residual",
    "contracted_curvature", "verify",
]
