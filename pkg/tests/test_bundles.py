import random

import pytest
from hypothesis import given, strategies as st

from dolbeault.bundles import (E, ENDE, KINV, T, ConnectionData, OmegaP, ValuedForm, curvature,
                               curvature_matrix,
                               dbar_valued, end_act, nabla10, tensor, valued_from_matrix, zero_matrix)
from dolbeault.expr import poly
from dolbeault.forms import Form
from dolbeault.randomgen import random_connection, random_valued

seeds = st.integers(0, 10**6)


def test_nabla10_scalar_is_partial():
    conn = ConnectionData.flat(2, 1)
    f = Form.scalar(poly("z1*zb2 + z2^2", 2, 1))
    assert nabla10(conn, f) == ValuedForm.scalar(f.partial())


def test_kinv_flat_and_christoffel():
    one = ValuedForm.single((KINV,), (1,), Form.const(1, 1))
    assert nabla10(ConnectionData.flat(1, 1), one).is_zero()
    conn = ConnectionData(1, 1, 1, zero_matrix(1, 1, 1, 1), {(1, 1, 1): poly("zb1", 1, 1)})
    expected = ValuedForm.single((KINV,), (1,), Form.dz(1, 1, 1).scale(poly("zb1", 1, 1)))
    assert nabla10(conn, one) == expected


def test_tangent_and_cotangent_are_dual():
    # nabla(dz^i) pairs with nabla(d/dz^j) so that the pairing stays constant
    conn = ConnectionData(2, 0, 1, zero_matrix(1, 1, 2, 0),
                          {(1, 2, 1): poly("z1", 2, 0), (2, 1, 2): poly("zb2", 2, 0)})
    for i in (1, 2):
        for j in (1, 2):
            a = nabla10(conn, ValuedForm.single((OmegaP(1),), ((i,),), Form.const(2, 0)))
            b = nabla10(conn, ValuedForm.single((T,), (j,), Form.const(2, 0)))
            total = a.components.get(((j,),), Form.zero(2, 0)) + b.components.get((i,), Form.zero(2, 0))
            assert total.is_zero()


def test_curvature_examples():
    assert curvature(ConnectionData.flat(2, 1)).is_zero()
    c1 = ConnectionData(1, 0, 1, ((Form.dz(1, 0, 1).scale(poly("zb1", 1, 0)),),))
    assert curvature(c1) == valued_from_matrix(((Form.basis(1, 0, I=(1,), J=(1,)),),), 1, 0)
    c2 = ConnectionData(2, 0, 1, ((Form.dz(2, 0, 1).scale(poly("zb2", 2, 0)),),))
    assert curvature(c2) == valued_from_matrix(((Form.basis(2, 0, I=(1,), J=(2,)),),), 2, 0)


def test_theta_must_be_10():
    with pytest.raises(ValueError):
        ConnectionData(1, 0, 1, ((Form.dzb(1, 0, 1),),))


def test_dbar_valued_example():
    s = ValuedForm.single((E,), (1,), Form.scalar(poly("zb1", 2, 0)))
    assert dbar_valued(s) == ValuedForm.single((E,), (1,), Form.dzb(2, 0, 1))


def test_end_act_examples():
    n, N = 2, 0
    ident = valued_from_matrix(((Form.const(n, N), Form.zero(n, N)), (Form.zero(n, N), Form.const(n, N))), n, N)
    s = ValuedForm((E,), n, N, {(1,): Form.scalar(poly("z1", n, N)), (2,): Form.const(n, N, 3)})
    assert end_act(ident, s) == s
    psi = ValuedForm.single((ENDE,), ((1, 2),), Form.dzb(n, N, 1))
    e1 = ValuedForm.single((E,), (1,), Form.const(n, N))
    assert end_act(psi, e1) == ValuedForm.single((E,), (2,), Form.dzb(n, N, 1))
    ee = ValuedForm.single((E, E), (1, 1), Form.const(n, N))
    expected = ValuedForm((E, E), n, N, {(2, 1): Form.dzb(n, N, 1), (1, 2): Form.dzb(n, N, 1)})
    assert end_act(psi, ee) == expected
    assert end_act(psi, ee, factor=0) == ValuedForm.single((E, E), (2, 1), Form.dzb(n, N, 1))


def test_end_act_rank_mismatch():
    psi = ((Form.dzb(1, 0, 1),),)
    with pytest.raises(ValueError):
        end_act(psi, ValuedForm.single((E,), (2,), Form.const(1, 0)))


def test_missing_connection_data():
    from dolbeault.bundles import FiberEndo, MissingConnectionData
    endo = FiberEndo(1, 0, None, None)
    with pytest.raises(MissingConnectionData):
        endo.act(ValuedForm.single((E,), (1,), Form.const(1, 0)))


@given(seeds, st.integers(1, 3), st.integers(1, 2))
def test_dbar_nabla_anticommutator_is_curvature(seed, n, r):
    rng = random.Random(seed)
    conn = random_connection(rng, n, 1, r)
    s = random_valued(rng, (E,), n, 1, r, rng.randint(0, n), rng.randint(0, n))
    lhs = dbar_valued(nabla10(conn, s)) + nabla10(conn, dbar_valued(s))
    assert lhs == end_act(curvature_matrix(conn), s)


@given(seeds, st.integers(1, 3))
def test_tensor_leibniz(seed, n):
    rng = random.Random(seed)
    r = rng.randint(1, 2)
    conn = random_connection(rng, n, 1, r)
    words = [(E,), (T,), (OmegaP(1),), (KINV,), (ENDE,), (E, KINV)]
    p1, p2 = rng.randint(0, n), rng.randint(0, n)
    s = random_valued(rng, rng.choice(words), n, 1, r, p1, rng.randint(0, n))
    u = random_valued(rng, rng.choice(words), n, 1, r, p2, rng.randint(0, n))
    if not s:
        return
    sign = -1 if sum(s.bidegree()) % 2 else 1
    lhs = nabla10(conn, tensor(s, u))
    rhs = tensor(nabla10(conn, s), u) + tensor(s, nabla10(conn, u)).scale(sign)
    assert lhs == rhs


@given(seeds, st.integers(1, 3))
def test_curvature_is_11(seed, n):
    rng = random.Random(seed)
    conn = random_connection(rng, n, 0, 2, chern=rng.random() < 0.5)
    theta = curvature(conn)
    assert theta.bidegrees() <= {(1, 1)}
