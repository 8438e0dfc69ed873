"""Curvature, epsilon-transport, triangle identity, pullback intertwining,
and horizontal lifts."""

import random
from fractions import Fraction

import pytest

from lamconn.connections import (
    LambdaConnection,
    TransversalDistribution,
    curvature,
    epsilon_transport,
    horizontal_lift,
    intertwines_pullbacks,
    is_integrable,
    lift_by_splitting_route,
    pullback_connection,
    transport_reduces_to_identity,
    verify_triangle,
)
from lamconn.errors import (
    BodyMismatch,
    NotMultiplicative,
    PreconditionViolated,
    SquareZeroViolation,
)
from lamconn.homs import RingHom, kahler_d
from lamconn.matrices import identity, mat_eq, mat_mul, parse_matrix
from lamconn.rings import Ring
from lamconn.sampling import (
    random_body_poly,
    sample_integrable_rank2,
    sample_square_zero_pair,
    sample_triangle,
)

QX = Ring(("x",))
QXY = Ring(("x", "y"))


def conn1(ring, lam, entries):
    mats = tuple(parse_matrix(ring, [[e]]) for e in entries)
    return LambdaConnection(ring, 1, Fraction(lam), mats)


# ---------------------------------------------------------------- curvature


def test_flat_trivial_connection():
    mats = tuple(parse_matrix(QXY, [["0", "0"], ["0", "0"]]) for _ in range(2))
    conn = LambdaConnection(QXY, 2, Fraction(5, 7), mats)
    assert curvature(conn).is_zero()


def test_curve_always_integrable():
    c = conn1(QX, 3, ["x^5 - 2"])
    assert curvature(c).components == ()
    assert is_integrable(c)


def test_frozen_rank1_curvature():
    # lam = 1, A_x = (y), A_y = (0): K_xy = -1
    c = conn1(QXY, 1, ["y", "0"])
    k = curvature(c).component(0, 1)
    assert k[0][0] == QXY.const(-1)
    assert not is_integrable(c)


def test_curvature_matches_independent_two_form_expansion():
    # Oracle: expand nabla^1(nabla(e_l)) = sum (lam d A_i + A_k A_i) e tensor
    # dx_k wedge dx_i by hand, collecting antisymmetric components.
    rng = random.Random(4)
    for _ in range(10):
        conn = sample_integrable_rank2(rng, QXY)
        mats = list(conn.matrices)
        # perturb to a generically non-flat connection
        mats[0] = parse_matrix(QXY, [["x*y", "1"], ["0", "y^2"]])
        conn = LambdaConnection(QXY, 2, conn.lam, tuple(mats))
        names = QXY.variables
        for i in range(2):
            for j in range(i + 1, 2):
                ai, aj = conn.matrices[i], conn.matrices[j]
                oracle = [
                    [
                        (aj[r][c].partial(names[i]) - ai[r][c].partial(names[j])) * conn.lam
                        for c in range(2)
                    ]
                    for r in range(2)
                ]
                prod1 = mat_mul(ai, aj)
                prod2 = mat_mul(aj, ai)
                oracle = [
                    [oracle[r][c] + prod1[r][c] - prod2[r][c] for c in range(2)]
                    for r in range(2)
                ]
                got = curvature(conn).component(i, j)
                assert all(
                    got[r][c] == oracle[r][c] for r in range(2) for c in range(2)
                )


# ---------------------------------------------------------- epsilon transport


def dual(names, extra=()):
    return Ring(tuple(names) + tuple(extra), nilpotents=("e",))


def test_transport_identity_when_homs_equal():
    c = conn1(QX, 1, ["x^2"])
    target = dual(("z",))
    f0 = RingHom(QX, target, {"x": target.parse("z^2")})
    t = epsilon_transport(c, f0, f0)
    assert mat_eq(t.matrix, identity(target, 1))


def test_transport_rank1_frozen():
    # A = (a(x)), f0(x) = c, f1(x) = c + e: matrix (1 + a(c) e)
    c = conn1(QX, 2, ["3*x^2 - x"])
    target = dual(("c",))
    f0 = RingHom(QX, target, {"x": target.parse("c")})
    f1 = RingHom(QX, target, {"x": target.parse("c + e")})
    t = epsilon_transport(c, f0, f1)
    assert t.matrix[0][0] == target.parse("1 + (3*c^2 - c)*e")
    assert transport_reduces_to_identity(t)
    inv = t.inverse_matrix()
    assert mat_eq(mat_mul(inv, t.matrix), identity(target, 1))


def test_transport_requires_square_zero():
    c = conn1(QX, 1, ["x"])
    target = dual(("c",))
    f0 = RingHom(QX, target, {"x": target.parse("c")})
    f1 = RingHom(QX, target, {"x": target.parse("c + 1")})
    with pytest.raises(SquareZeroViolation):
        epsilon_transport(c, f0, f1)


def test_transport_rejects_mixed_two_parameter_offsets():
    two = Ring(("c",), nilpotents=("e1", "e2"))
    mats = (parse_matrix(QXY, [["1"]]), parse_matrix(QXY, [["x"]]))
    c = LambdaConnection(QXY, 1, Fraction(1), mats)
    f0 = RingHom(QXY, two, {"x": two.parse("c"), "y": two.parse("c")})
    f1 = RingHom(QXY, two, {"x": two.parse("c + e1"), "y": two.parse("c + e2")})
    with pytest.raises(SquareZeroViolation):
        epsilon_transport(c, f0, f1)


# ----------------------------------------------------------------- triangle


def test_triangle_degenerate_cycles():
    rng = random.Random(1)
    conn = sample_integrable_rank2(rng, QXY)
    target = dual(("z", "w"))
    f0, f1 = sample_square_zero_pair(rng, QXY, target)
    # all six homs equal
    assert verify_triangle(conn, f0, f0, f0, f0, f0, f0)
    # lam = 1 degenerate cycle: f01 = f1, f12 = f2, f20 = f0
    conn1_ = LambdaConnection(conn.ring, conn.rank, Fraction(1), conn.matrices)
    f2 = f1
    assert verify_triangle(conn1_, f0, f1, f2, f1, f2, f0)


def test_triangle_seeded_sextuples():
    rng = random.Random(2)
    for _ in range(50):
        conn, homs = sample_triangle(rng)
        assert verify_triangle(conn, *homs)


def test_triangle_precondition_reporting():
    rng = random.Random(3)
    conn, (f0, f1, f2, f01, f12, f20) = sample_triangle(rng)
    bad = RingHom(
        f0.source,
        f0.target,
        {g: img + f0.target.one() for g, img in f01.images.items()},
    )
    with pytest.raises(PreconditionViolated):
        verify_triangle(conn, f0, f1, f2, bad, f12, f20)


# ----------------------------------------------------------------- pullback


def test_pullback_identity_and_constant():
    rng = random.Random(5)
    conn = sample_integrable_rank2(rng, QXY)
    ident = RingHom(QXY, QXY, {"x": QXY.var("x"), "y": QXY.var("y")})
    back = pullback_connection(conn, ident)
    assert all(mat_eq(a, b) for a, b in zip(back.matrices, conn.matrices))
    target = Ring(("z",))
    const = RingHom(QXY, target, {"x": target.const(2), "y": target.const(-1)})
    flat = pullback_connection(conn, const)
    assert all(all(x.is_zero() for row in m for x in row) for m in flat.matrices)


def test_pullback_intertwining_seeded():
    rng = random.Random(6)
    for _ in range(50):
        conn = sample_integrable_rank2(rng, QXY)
        target = dual(("z", "w"))
        f0, f1 = sample_square_zero_pair(rng, QXY, target)
        # the eta * d(eta) identity the symmetric second-order terms cancel by
        eta = {v: f1.images[v] - f0.images[v] for v in QXY.variables}
        for i in QXY.variables:
            for j in QXY.variables:
                assert (kahler_d(eta[i]) * eta[j] + kahler_d(eta[j]) * eta[i]).is_zero()
        assert intertwines_pullbacks(conn, f0, f1)


def test_paper_proof_identity_eta_deta():
    # (f1-f0)(x_j) d((f1-f0)(x_i)) + (i <-> j) = 0 needs eps*d(eps) = 0
    rng = random.Random(7)
    target = dual(("z", "w"))
    f0, f1 = sample_square_zero_pair(rng, QXY, target)
    eta = {v: f1.images[v] - f0.images[v] for v in QXY.variables}
    for i in QXY.variables:
        for j in QXY.variables:
            form = kahler_d(eta[i]) * eta[j] + kahler_d(eta[j]) * eta[i]
            assert form.is_zero()


# ------------------------------------------------------------- distributions


def test_distribution_rejects_bad_splitting():
    a = Ring(("a",))
    b = Ring(("x", "y"))
    rho = RingHom(a, b, {"a": b.var("x")})
    with pytest.raises(NotMultiplicative):
        TransversalDistribution(rho, Fraction(2), {"x": {}, "y": {}})


def test_identity_fibration_lift():
    # B = A, nabla = lam d: the lift of a is g(a) + lam D(a) e
    a = Ring(("a",))
    rho = RingHom(a, a, {"a": a.var("a")})
    lam = Fraction(3, 2)
    dist = TransversalDistribution(rho, lam, {"a": {"a": a.const(lam)}})
    target = dual(("z",))
    t = RingHom(a, target, {"a": target.parse("z^2")})
    tangent = RingHom(a, target, {"a": target.parse("z^2 + (z - 1)*e")})
    lift = horizontal_lift(dist, t, tangent)
    assert lift.images["a"] == target.parse("z^2 + 3/2*(z - 1)*e")


def test_lift_routes_coincide_and_lift_is_hom():
    rng = random.Random(8)
    a = Ring(("a",))
    b = Ring(("x", "y"))
    rho = RingHom(a, b, {"a": b.var("x")})
    target = dual(("z",))
    for _ in range(30):
        lam = Fraction(rng.randrange(-2, 4), rng.choice([1, 2]))
        dist = TransversalDistribution(
            rho,
            lam,
            {
                "x": {"a": b.const(lam)},
                "y": {"a": random_body_poly(rng, b, deg=2)},
            },
        )
        dist.check_derivation(
            [(random_body_poly(rng, b), random_body_poly(rng, b)) for _ in range(5)]
        )
        t = RingHom(b, target, {
            "x": target.parse("z + 1").body(),
            "y": random_body_poly(rng, target, deg=2).body(),
        })
        g_img = t(b.var("x")).into(target)
        tangent = RingHom(
            a, target, {"a": g_img + random_body_poly(rng, target, deg=1) * target.var("e")}
        )
        lift = horizontal_lift(dist, t, tangent)
        for _ in range(4):
            p = random_body_poly(rng, b)
            q = random_body_poly(rng, b)
            assert lift(p * q) == lift(p) * lift(q)
            assert lift(p) == lift_by_splitting_route(dist, t, tangent, p)
            assert lift(p).body() == t(p).into(target)
        # restriction to the base is the lam-interpolated tangent
        lifted_base = lift(rho(a.var("a")))
        d_val = tangent.images["a"].nil_coefficient({"e": 1}).into(target)
        assert lifted_base == g_img + d_val * lam * target.var("e")


def test_lift_body_mismatch():
    a = Ring(("a",))
    b = Ring(("x",))
    rho = RingHom(a, b, {"a": b.var("x")})
    dist = TransversalDistribution(rho, Fraction(1), {"x": {"a": b.one()}})
    target = dual(("z",))
    t = RingHom(b, target, {"x": target.parse("z")})
    tangent = RingHom(a, target, {"a": target.parse("z + 1 + e")})
    with pytest.raises(BodyMismatch):
        horizontal_lift(dist, t, tangent)


def test_lift_with_zero_derivation_is_constant():
    a = Ring(("a",))
    b = Ring(("x", "y"))
    rho = RingHom(a, b, {"a": b.var("x")})
    lam = Fraction(2)
    dist = TransversalDistribution(
        rho, lam, {"x": {"a": b.const(lam)}, "y": {"a": b.parse("x*y")}}
    )
    target = dual(("z",))
    t = RingHom(b, target, {"x": target.parse("z"), "y": target.parse("z - 1")})
    tangent = RingHom(a, target, {"a": target.parse("z")})  # D = 0
    lift = horizontal_lift(dist, t, tangent)
    for p in (b.parse("x^2*y - 3"), b.parse("y^4"), b.parse("x + y")):
        assert lift(p) == t(p).into(target)


def test_transports_reduce_to_identity_on_seeded_pairs():
    rng = random.Random(12)
    target = dual(("z", "w"))
    for _ in range(20):
        conn = sample_integrable_rank2(rng, QXY)
        f0, f1 = sample_square_zero_pair(rng, QXY, target)
        t = epsilon_transport(conn, f0, f1)
        assert transport_reduces_to_identity(t)


def test_pullback_with_declared_target_coordinates():
    rng = random.Random(13)
    conn = sample_integrable_rank2(rng, QXY)
    target = Ring(("z", "w"))
    f = RingHom(QXY, target, {"x": target.parse("z^2"), "y": target.parse("z - 3")})
    back = pullback_connection(conn, f, ("z",))
    assert back.ring.variables == ("z",)
    full = pullback_connection(conn, f)
    assert mat_eq(
        back.matrices[0],
        tuple(tuple(x.into(back.ring) for x in row) for row in full.matrices[0]),
    )
