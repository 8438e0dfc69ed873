"""Lambda-connections on free modules: curvature, transport between
infinitesimally close pullbacks, the triangle composition identity, pullback
along ring maps, and first-order horizontal lifts of tangent vectors."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    BodyMismatch,
    NotMultiplicative,
    PreconditionViolated,
    RingMismatch,
    SquareZeroViolation,
    UnsupportedTarget,
)
from .homs import RingHom, hom_square_zero_close, interpolate_homs
from .matrices import (
    Mat,
    identity,
    mat_add,
    mat_commutator,
    mat_eq,
    mat_is_zero,
    mat_mul,
    mat_partial,
    mat_scale,
    mat_sub,
    zero_matrix,
)
from .rings import Ring, RingElement


@dataclass(frozen=True)
class LambdaConnection:
    """nabla_i = lam * d/dx_i + A_i on a free module of rank ``rank``.

    ``matrices`` holds one rank x rank matrix per ring variable, in order.
    """

    ring: Ring
    rank: int
    lam: Fraction
    matrices: tuple[Mat, ...]

    def __post_init__(self):
        if len(self.matrices) != len(self.ring.variables):
            raise RingMismatch("one connection matrix per variable is required")
        for m in self.matrices:
            if len(m) != self.rank or any(len(row) != self.rank for row in m):
                raise RingMismatch("connection matrix has wrong shape")
            for row in m:
                for x in row:
                    if x.ring != self.ring:
                        raise RingMismatch("connection matrix entry in the wrong ring")

    def matrix(self, var: str) -> Mat:
        return self.matrices[self.ring.variables.index(var)]

    def apply(self, section: tuple[RingElement, ...]) -> dict[str, tuple[RingElement, ...]]:
        """nabla(s) as a map variable -> component vector of the dx-coefficient."""
        out = {}
        for var, m in zip(self.ring.variables, self.matrices):
            deriv = tuple(c.partial(var) * self.lam for c in section)
            lin = tuple(
                sum((m[i][j] * section[j] for j in range(self.rank)), start=self.ring.zero())
                for i in range(self.rank)
            )
            out[var] = tuple(a + b for a, b in zip(deriv, lin))
        return out


@dataclass(frozen=True)
class CurvatureTensor:
    """K_ij = lam (d_i A_j - d_j A_i) + [A_i, A_j], stored for i < j."""

    ring: Ring
    rank: int
    components: tuple[tuple[int, int, Mat], ...]

    def component(self, i: int, j: int) -> Mat:
        for a, b, m in self.components:
            if (a, b) == (i, j):
                return m
            if (a, b) == (j, i):
                return mat_scale(m, -1)
        return zero_matrix(self.ring, self.rank)

    def is_zero(self) -> bool:
        return all(mat_is_zero(m) for _, _, m in self.components)


def curvature(conn: LambdaConnection) -> CurvatureTensor:
    comps = []
    names = conn.ring.variables
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            ai, aj = conn.matrices[i], conn.matrices[j]
            m = mat_add(
                mat_scale(mat_sub(mat_partial(aj, names[i]), mat_partial(ai, names[j])), conn.lam),
                mat_commutator(ai, aj),
            )
            comps.append((i, j, m))
    return CurvatureTensor(conn.ring, conn.rank, tuple(comps))


def is_integrable(conn: LambdaConnection) -> bool:
    return curvature(conn).is_zero()


@dataclass(frozen=True)
class EpsilonTransport:
    """The canonical isomorphism f_lam^* E -> f_0^* E for a square-zero-close
    pair, as a matrix I + sum_i f0(A_i) (f1 - f0)(x_i) over the target ring."""

    conn: LambdaConnection
    f0: RingHom
    f1: RingHom
    matrix: Mat

    def inverse_matrix(self) -> Mat:
        # I + N with N nilpotent; the geometric series terminates.
        ring = self.f0.target
        r = self.conn.rank
        n = mat_sub(self.matrix, identity(ring, r))
        acc = identity(ring, r)
        power = mat_scale(n, -1)
        while not mat_is_zero(power):
            acc = mat_add(acc, power)
            power = mat_scale(mat_mul(power, n), -1)
        return acc


def _differences(f0: RingHom, f1: RingHom) -> dict[str, RingElement]:
    return {v: f1.images[v] - f0.images[v] for v in f0.source.variables}


def _require_square_zero_pair(f0: RingHom, f1: RingHom):
    if not hom_square_zero_close(f0, f1):
        raise SquareZeroViolation("hom pair is not square-zero close")
    eta = _differences(f0, f1)
    for v in eta:
        for w in eta:
            if not (eta[v] * eta[w]).is_zero():
                raise SquareZeroViolation(
                    f"generator differences at {v}, {w} have nonzero product"
                )


def epsilon_transport(conn: LambdaConnection, f0: RingHom, f1: RingHom) -> EpsilonTransport:
    if f0.source != conn.ring:
        raise RingMismatch("hom source must be the connection ring")
    _require_square_zero_pair(f0, f1)
    target = f0.target
    eta = _differences(f0, f1)
    m = identity(target, conn.rank)
    for var, a in zip(conn.ring.variables, conn.matrices):
        m = mat_add(m, mat_scale(f0.matrix(a), eta[var]))
    # Pulling the connection matrices back along f_lam instead of f0 gives the
    # same matrix: the change is nilpotent and eta annihilates it.
    f_lam = interpolate_homs(f0, f1, conn.lam)
    m_check = identity(target, conn.rank)
    for var, a in zip(conn.ring.variables, conn.matrices):
        m_check = mat_add(m_check, mat_scale(f_lam.matrix(a), eta[var]))
    assert mat_eq(m, m_check), "transport matrix depends on the pullback choice"
    return EpsilonTransport(conn, f0, f1, m)


def transport_reduces_to_identity(t: EpsilonTransport) -> bool:
    ring = t.f0.target
    return mat_eq(
        tuple(tuple(x.body() for x in row) for row in t.matrix),
        identity(ring, t.conn.rank),
    )


def verify_triangle(
    conn: LambdaConnection,
    f0: RingHom,
    f1: RingHom,
    f2: RingHom,
    f01: RingHom,
    f12: RingHom,
    f20: RingHom,
) -> bool:
    """Compose the three transports around the triangle and compare with the
    identity matrix. The interpolation relations, pairwise square-zero
    closeness, and the sum constraint are preconditions."""
    homs = {"f0": f0, "f1": f1, "f2": f2, "f01": f01, "f12": f12, "f20": f20}
    named = list(homs.items())
    for i in range(len(named)):
        for j in range(i + 1, len(named)):
            if not hom_square_zero_close(named[i][1], named[j][1]):
                raise PreconditionViolated(
                    f"{named[i][0]} and {named[j][0]} are not square-zero close"
                )
    lam = conn.lam
    relations = [
        ("f1 = (1-lam) f0 + lam f01", f1, interpolate_homs(f0, f01, lam)),
        ("f2 = (1-lam) f1 + lam f12", f2, interpolate_homs(f1, f12, lam)),
        ("f0 = (1-lam) f2 + lam f20", f0, interpolate_homs(f2, f20, lam)),
    ]
    for name, lhs, rhs in relations:
        if not lhs.equal_on_generators(rhs):
            raise PreconditionViolated(f"interpolation relation failed: {name}")
    for v in f0.source.variables:
        lhs = f0.images[v] + f1.images[v] + f2.images[v]
        rhs = f01.images[v] + f12.images[v] + f20.images[v]
        if lhs != rhs:
            raise PreconditionViolated(
                f"sum constraint f0+f1+f2 = f01+f12+f20 failed at {v}"
            )
    e0 = epsilon_transport(conn, f0, f01)
    e1 = epsilon_transport(conn, f1, f12)
    e2 = epsilon_transport(conn, f2, f20)
    composite = mat_mul(e2.matrix, mat_mul(e1.matrix, e0.matrix))
    return mat_eq(composite, identity(f0.target, conn.rank))


def pullback_connection(
    conn: LambdaConnection, f: RingHom, target_coordinates: tuple[str, ...] | None = None
) -> LambdaConnection:
    """B_k = sum_i f(A_i) * d f(x_i) / d y_k over the target ring."""
    target = f.target
    if target_coordinates is None:
        target_coordinates = target.variables
    for y in target_coordinates:
        if y not in target.variables:
            raise UnsupportedTarget(f"{y} is not a body variable of the target ring")
    mats = []
    pulled = [f.matrix(a) for a in conn.matrices]
    for y in target_coordinates:
        b = zero_matrix(target, conn.rank)
        for var, fa in zip(conn.ring.variables, pulled):
            jac = f.images[var].partial(y)
            b = mat_add(b, mat_scale(fa, jac))
        mats.append(b)
    restricted = Ring(tuple(target_coordinates),
                      frozenset(v for v in target_coordinates if v in target.inverted),
                      target.nilpotents)
    if tuple(target_coordinates) == target.variables:
        out_ring = target
    else:
        # entries must not involve the omitted coordinates
        out_ring = restricted
        mats = [
            tuple(tuple(x.into(out_ring) for x in row) for row in m) for m in mats
        ]
    return LambdaConnection(out_ring, conn.rank, conn.lam, tuple(mats))


def intertwines_pullbacks(
    conn: LambdaConnection, f0: RingHom, f1: RingHom
) -> bool:
    """The executable content of the pullback proposition: with M the
    transport matrix, M C_k = lam dM/dy_k + B_k M for every target coordinate,
    where C_k / B_k are the f_lam / f0 pullback matrices."""
    f_lam = interpolate_homs(f0, f1, conn.lam)
    pull0 = pullback_connection(conn, f0)
    pull_lam = pullback_connection(conn, f_lam)
    m = epsilon_transport(conn, f0, f1).matrix
    for k, y in enumerate(f0.target.variables):
        lhs = mat_mul(m, pull_lam.matrices[k])
        rhs = mat_add(mat_scale(mat_partial(m, y), conn.lam), mat_mul(pull0.matrices[k], m))
        if not mat_eq(lhs, rhs):
            return False
    return True


# ----------------------------------------------------------------------
# Transversal distributions and horizontal lifts
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class TransversalDistribution:
    """A multiplicative lambda-connection on B over A: a derivation
    nabla: B -> B tensor Omega_A with nabla(a) = lam tensor da on A.

    ``values`` gives nabla(y) for every B-variable y as a map
    A-variable -> coefficient of da, with coefficients in B.
    """

    structure: RingHom  # A -> B
    lam: Fraction
    values: dict[str, dict[str, RingElement]] = field(default_factory=dict)

    def __post_init__(self):
        b = self.structure.target
        a = self.structure.source
        for y in b.variables:
            if y not in self.values:
                raise RingMismatch(f"missing nabla value for {y}")
            for x in a.variables:
                c = self.values[y].get(x)
                if c is not None and c.ring != b:
                    raise RingMismatch("nabla coefficient in the wrong ring")
        # splitting normalization: nabla(rho(a_i)) = lam tensor d a_i, exactly
        for x_i in a.variables:
            img = self.structure.images[x_i]
            for x_k in a.variables:
                acc = b.zero()
                for y in b.variables:
                    c = self.values[y].get(x_k)
                    if c is not None:
                        acc = acc + img.partial(y) * c
                want = b.const(self.lam) if x_k == x_i else b.zero()
                if acc != want:
                    raise NotMultiplicative(
                        f"distribution is not a lambda-splitting at {x_i} (d{x_k} "
                        f"coefficient is {acc}, expected {want})"
                    )

    def apply(self, elem: RingElement) -> dict[str, RingElement]:
        """nabla(b) via the derivation extension, as a map A-var -> coefficient."""
        b = self.structure.target
        out = {x: b.zero() for x in self.structure.source.variables}
        for y in b.variables:
            dy = elem.partial(y)
            if dy.is_zero():
                continue
            for x, c in self.values[y].items():
                out[x] = out[x] + dy * c
        return out

    def check_derivation(self, pairs) -> None:
        """Sampled derivation property nabla(bb') = b nabla b' + b' nabla b."""
        for p, q in pairs:
            left = self.apply(p * q)
            for x in self.structure.source.variables:
                right = self.apply(q)[x] * p + self.apply(p)[x] * q
                if left[x] != right:
                    raise NotMultiplicative(
                        f"derivation property failed at d{x} for sampled pair"
                    )


def horizontal_lift(
    dist: TransversalDistribution, t: RingHom, tangent: RingHom
) -> RingHom:
    """First-order horizontal lift: B -> C[eps],
    y |-> t(y) + eps * sum_i t(nabla(y)_i) D(a_i)."""
    a_ring = dist.structure.source
    b_ring = dist.structure.target
    if t.source != b_ring:
        raise RingMismatch("t must map out of the fibration ring")
    if tangent.source != a_ring:
        raise RingMismatch("the tangent must map out of the base ring")
    target = tangent.target
    if len(target.nilpotents) != 1:
        raise RingMismatch("tangent target must be a dual-number ring")
    eps = target.var(target.nilpotents[0])
    nil_name = target.nilpotents[0]

    g_images = {x: tangent.images[x].body() for x in a_ring.variables}
    d_values = {
        x: tangent.images[x].nil_coefficient({nil_name: 1}).into(target)
        for x in a_ring.variables
    }

    def t_ext(elem: RingElement) -> RingElement:
        return t(elem).into(target) if t.target != target else t(elem)

    for x in a_ring.variables:
        if t_ext(dist.structure.images[x]) != g_images[x]:
            raise BodyMismatch(
                f"t restricted to the base disagrees with the tangent body at {x}"
            )

    images = {}
    for y in b_ring.variables:
        corr = target.zero()
        for x, c in dist.values[y].items():
            corr = corr + t_ext(c) * d_values[x]
        images[y] = t_ext(b_ring.var(y)) + corr * eps
    for n in b_ring.nilpotents:
        images[n] = target.var(n)
    return RingHom(b_ring, target, images)


def lift_by_splitting_route(
    dist: TransversalDistribution, t: RingHom, tangent: RingHom, elem: RingElement
) -> RingElement:
    """The splitting-route value t(b) + eps sum t(b_i) D(a_i) computed from
    nabla(b) directly (independent of the hom extension)."""
    target = tangent.target
    nil_name = target.nilpotents[0]
    eps = target.var(nil_name)

    def t_ext(e):
        return t(e).into(target) if t.target != target else t(e)

    nab = dist.apply(elem)
    acc = t_ext(elem)
    for x in dist.structure.source.variables:
        d_x = tangent.images[x].nil_coefficient({nil_name: 1}).into(target)
        acc = acc + t_ext(nab[x]) * d_x * eps
    return acc
