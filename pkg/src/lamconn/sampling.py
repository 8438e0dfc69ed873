"""Seeded random generators shared by the test suite and the built-in
verification run. Everything is deterministic given the seed."""

from __future__ import annotations

import random
from fractions import Fraction

from .connections import LambdaConnection, TransversalDistribution
from .homs import RingHom, hom_affine_combination, interpolate_homs
from .matrices import identity, mat_add, mat_scale
from .rings import Ring, RingElement

NONZERO_LAMBDAS = [Fraction(1), Fraction(2), Fraction(-1), Fraction(1, 2), Fraction(1, 3), Fraction(-2, 3)]


def random_body_poly(rng: random.Random, ring: Ring, deg: int = 2, terms: int = 3) -> RingElement:
    p = ring.zero()
    for _ in range(rng.randrange(1, terms + 1)):
        exps = {}
        for v in ring.variables:
            lo = -deg if v in ring.inverted else 0
            exps[v] = rng.randrange(lo, deg + 1)
        p = p + ring.monomial(Fraction(rng.randrange(-4, 5)), exps)
    return p


def random_lambda(rng: random.Random, nonzero: bool = False) -> Fraction:
    choices = NONZERO_LAMBDAS + ([] if nonzero else [Fraction(0)])
    return rng.choice(choices)


def sample_square_zero_pair(
    rng: random.Random, source: Ring, target: Ring
) -> tuple[RingHom, RingHom]:
    """A pair f0, f1 = f0 + eps * (random) into a dual-number target."""
    eps = target.var(target.nilpotents[0])
    base = {g: random_body_poly(rng, target, deg=2).body() for g in source.variables}
    f0 = RingHom(source, target, base)
    f1 = RingHom(
        source,
        target,
        {g: base[g] + random_body_poly(rng, target, deg=2).body() * eps for g in source.variables},
    )
    return f0, f1


def sample_integrable_rank2(rng: random.Random, ring: Ring, lam: Fraction | None = None) -> LambdaConnection:
    """A_i = dG/dx_i * I + dF/dx_i * N for random polynomials F, G and a random
    constant matrix N; integrable for every lambda by construction."""
    if lam is None:
        lam = random_lambda(rng)
    f = random_body_poly(rng, ring, deg=3)
    g = random_body_poly(rng, ring, deg=2)
    n = tuple(
        tuple(ring.const(rng.randrange(-2, 3)) for _ in range(2)) for _ in range(2)
    )
    mats = []
    for v in ring.variables:
        m = mat_add(
            mat_scale(identity(ring, 2), g.partial(v)),
            mat_scale(n, f.partial(v)),
        )
        mats.append(m)
    return LambdaConnection(ring, 2, lam, tuple(mats))


def sample_triangle(rng: random.Random, source: Ring | None = None):
    """An integrable rank-2 connection and a valid sextuple
    (f0, f1, f2, f01, f12, f20) for the triangle identity."""
    source = source or Ring(("x", "y"))
    target = Ring(("z", "w"), nilpotents=("e",))
    lam = random_lambda(rng, nonzero=True)
    conn = sample_integrable_rank2(rng, source, lam)
    eps = target.var("e")
    base = {g: random_body_poly(rng, target, deg=2).body() for g in source.variables}
    f0 = RingHom(source, target, base)

    def offset_hom():
        return RingHom(
            source,
            target,
            {
                g: base[g] + random_body_poly(rng, target, deg=2).body() * eps
                for g in source.variables
            },
        )

    f01 = offset_hom()
    f12 = offset_hom()
    f1 = interpolate_homs(f0, f01, lam)
    f2 = interpolate_homs(f1, f12, lam)
    f20 = hom_affine_combination([(1 / lam, f0), (-(1 - lam) / lam, f2)])
    return conn, (f0, f1, f2, f01, f12, f20)


def sample_distribution_setup(rng: random.Random):
    """A fibration Q[a] -> Q[x, y] with a random multiplicative distribution,
    a point t into Q[z], and a tangent over it."""
    a = Ring(("a",))
    b = Ring(("x", "y"))
    target = Ring(("z",), nilpotents=("e",))
    rho = RingHom(a, b, {"a": b.var("x")})
    lam = random_lambda(rng)
    dist = TransversalDistribution(
        rho,
        lam,
        {
            "x": {"a": b.const(lam)},
            "y": {"a": random_body_poly(rng, b, deg=2)},
        },
    )
    t = RingHom(
        b,
        target,
        {
            "x": random_body_poly(rng, target, deg=2).body(),
            "y": random_body_poly(rng, target, deg=2).body(),
        },
    )
    g_img = t(b.var("x")).into(target)
    tangent = RingHom(
        a,
        target,
        {"a": g_img + random_body_poly(rng, target, deg=2).body() * target.var("e")},
    )
    return dist, t, tangent


MONOMIAL_COEFFS = [
    Fraction(1), Fraction(-1), Fraction(2), Fraction(-2),
    Fraction(3), Fraction(1, 2), Fraction(-1, 2), Fraction(3, 2),
]


def monomial_tangent_family(seed: int, count: int = 50) -> list[tuple[Fraction, int]]:
    """(coefficient, degree) pairs describing cocycles c * u^k d/du on the
    standard projective-line overlap."""
    rng = random.Random(seed)
    return [
        (rng.choice(MONOMIAL_COEFFS), rng.randrange(-2, 4)) for _ in range(count)
    ]
