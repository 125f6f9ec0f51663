"""Seeded construction of test contexts shared by several test modules."""

import random

from dolbeault.bundles import E, ValuedForm
from dolbeault.correspondence import CorrespondenceContext
from dolbeault.deformation import phi_from_trivialization, psi_from_transition
from dolbeault.randomgen import (random_beltrami, random_connection, random_endo, random_form,
                                 random_valued, random_w, random_zt)


def geometric_context(seed, n, N, r=1, deg=2):
    """On-shell context from random deformed coordinates and transition matrix."""
    rng = random.Random(seed)
    conn = random_connection(rng, n, N, r, deg)
    phi = phi_from_trivialization(random_zt(rng, n, N, deg))
    psi = psi_from_transition(random_w(rng, n, N, r, deg), conn, phi)
    return rng, CorrespondenceContext(conn, phi, psi)


def direct_context(seed, n, N, r=1, deg=2):
    """Usually off-shell context with independently drawn phi and psi_E."""
    rng = random.Random(seed)
    conn = random_connection(rng, n, N, r, deg)
    phi = random_beltrami(rng, n, N, deg, t_min=1)
    psi = random_endo(rng, r, n, N, deg, t_min=1)
    return rng, CorrespondenceContext(conn, phi, psi)


def scalar_form(rng, n, N, p, q):
    return ValuedForm.scalar(random_form(rng, n, N, p, q, t_max=0))


def bundle_form(rng, n, N, r, p, q):
    return random_valued(rng, (E,), n, N, r, p, q)
