"""The first-order diagonal neighborhood ring P1 = A + Omega, its truncated
polynomial ring P1[t], the trivialization onto Omega*t^-1 + P1[t], and the
Gm-twisting consistency check for first-order tangents."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegreeOverflow, RingMismatch, ZeroLambda
from .homs import RingHom
from .rings import Ring, RingElement

DEFAULT_T_BOUND = 4


@dataclass(frozen=True)
class P1Element:
    """(a, omega) with multiplication (a, w)(a', w') = (aa', aw' + a'w).

    ``form`` maps variable names to the coefficient of the corresponding dx.
    """

    ring: Ring
    body: RingElement
    form: tuple[tuple[str, RingElement], ...]

    @staticmethod
    def make(ring: Ring, body: RingElement, form: dict[str, RingElement] | None = None):
        form = form or {}
        cleaned = tuple(
            (v, form[v]) for v in ring.variables if v in form and not form[v].is_zero()
        )
        return P1Element(ring, body, cleaned)

    def form_dict(self) -> dict[str, RingElement]:
        return dict(self.form)

    def __add__(self, other: "P1Element") -> "P1Element":
        f = self.form_dict()
        for v, c in other.form:
            f[v] = f.get(v, self.ring.zero()) + c
        return P1Element.make(self.ring, self.body + other.body, f)

    def __sub__(self, other: "P1Element") -> "P1Element":
        return self + other.scale(-1)

    def scale(self, c) -> "P1Element":
        return P1Element.make(
            self.ring, self.body * c, {v: x * c for v, x in self.form}
        )

    def __mul__(self, other: "P1Element") -> "P1Element":
        f = {v: c * other.body for v, c in self.form}
        for v, c in other.form:
            f[v] = f.get(v, self.ring.zero()) + c * self.body
        return P1Element.make(self.ring, self.body * other.body, f)

    def restrict(self) -> "P1Element":
        """r: the diagonal restriction (a, w) -> (a, 0)."""
        return P1Element.make(self.ring, self.body)

    def is_zero(self) -> bool:
        return self.body.is_zero() and not self.form

    def form_is_zero(self) -> bool:
        return not self.form

    def __eq__(self, other):
        return (
            isinstance(other, P1Element)
            and self.ring == other.ring
            and self.body == other.body
            and self.form_dict() == other.form_dict()
        )

    def __str__(self):
        forms = " + ".join(f"({c})d{v}" for v, c in self.form)
        return f"({self.body}{'; ' + forms if forms else ''})"


def d0(a: RingElement) -> P1Element:
    return P1Element.make(a.ring, a)


def d1(a: RingElement) -> P1Element:
    return P1Element.make(
        a.ring, a, {v: a.partial(v) for v in a.ring.variables}
    )


@dataclass(frozen=True)
class ReesPoly:
    """Element of P1[t], truncated at t-degree ``bound`` (hard error beyond)."""

    ring: Ring
    coeffs: tuple[tuple[int, P1Element], ...]
    bound: int = DEFAULT_T_BOUND

    @staticmethod
    def make(ring: Ring, coeffs: dict[int, P1Element], bound: int = DEFAULT_T_BOUND):
        for k in coeffs:
            if k < 0:
                raise DegreeOverflow("negative t-degree in P1[t]")
            if k > bound:
                raise DegreeOverflow(f"t-degree {k} exceeds bound {bound}")
        cleaned = tuple(sorted((k, v) for k, v in coeffs.items() if not v.is_zero()))
        return ReesPoly(ring, cleaned, bound)

    def coeff_dict(self) -> dict[int, P1Element]:
        return dict(self.coeffs)

    def coefficient(self, k: int) -> P1Element:
        return self.coeff_dict().get(k, d0(self.ring.zero()))

    def __add__(self, other: "ReesPoly") -> "ReesPoly":
        out = self.coeff_dict()
        for k, v in other.coeffs:
            out[k] = out.get(k, d0(self.ring.zero())) + v
        return ReesPoly.make(self.ring, out, self.bound)

    def __mul__(self, other: "ReesPoly") -> "ReesPoly":
        out: dict[int, P1Element] = {}
        for k1, v1 in self.coeffs:
            for k2, v2 in other.coeffs:
                k = k1 + k2
                if k > self.bound:
                    raise DegreeOverflow(
                        f"t-degree {k} exceeds bound {self.bound} mid-computation"
                    )
                p = v1 * v2
                out[k] = out.get(k, d0(self.ring.zero())) + p
        return ReesPoly.make(self.ring, out, self.bound)

    def __eq__(self, other):
        return (
            isinstance(other, ReesPoly)
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )


def rees_t(ring: Ring, bound: int = DEFAULT_T_BOUND) -> ReesPoly:
    return ReesPoly.make(ring, {1: d0(ring.one())}, bound)


@dataclass(frozen=True)
class TrivializedRees:
    """Element of Omega * t^-1 + P1[t] (a subring of P1[t, t^-1])."""

    ring: Ring
    t_minus_1: P1Element  # body must vanish
    poly: ReesPoly

    def __post_init__(self):
        if not self.t_minus_1.body.is_zero():
            raise RingMismatch("t^-1 coefficient must be a pure form")

    def __eq__(self, other):
        return (
            isinstance(other, TrivializedRees)
            and self.t_minus_1 == other.t_minus_1
            and self.poly == other.poly
        )

    def __mul__(self, other: "TrivializedRees") -> "TrivializedRees":
        # (w t^-1 + p)(w' t^-1 + p'): the t^-2 term w*w' vanishes (forms
        # multiply to zero) and w * p' contributes w*p'_0 at t^-1 plus
        # w*p'_{k+1} at t^k.
        ring = self.ring
        prod = self.poly * other.poly
        out = prod.coeff_dict()
        tm1 = (
            self.t_minus_1 * other.poly.coefficient(0)
            + other.t_minus_1 * self.poly.coefficient(0)
        )
        for k, v in self.poly.coeffs:
            if k >= 1:
                out[k - 1] = out.get(k - 1, d0(ring.zero())) + other.t_minus_1 * v
        for k, v in other.poly.coeffs:
            if k >= 1:
                out[k - 1] = out.get(k - 1, d0(ring.zero())) + self.t_minus_1 * v
        return TrivializedRees(ring, tm1, ReesPoly.make(ring, out, self.poly.bound))

    def scale_t(self, lam: Fraction) -> "TrivializedRees":
        """t -> lam * t, so the t^k coefficient picks up lam^k (k = -1 included)."""
        lam = Fraction(lam)
        if lam == 0:
            raise ZeroLambda("cannot rescale t by zero")
        return TrivializedRees(
            self.ring,
            self.t_minus_1.scale(1 / lam),
            ReesPoly.make(
                self.ring,
                {k: v.scale(lam**k) for k, v in self.poly.coeffs},
                self.poly.bound,
            ),
        )


def rees_trivialize(p: ReesPoly) -> TrivializedRees:
    """sum a_k t^k -> sum (a_{k+1} - r(a_{k+1}) + r(a_k)) t^k, with the pure
    form a_0 - r(a_0) landing at t^-1."""
    ring = p.ring
    coeffs = p.coeff_dict()
    zero = d0(ring.zero())
    out: dict[int, P1Element] = {}
    top = max(coeffs, default=-1)
    for k in range(0, top + 1):
        ak = coeffs.get(k, zero)
        ak1 = coeffs.get(k + 1, zero)
        out[k] = ak1 - ak1.restrict() + ak.restrict()
    a0 = coeffs.get(0, zero)
    return TrivializedRees(ring, a0 - a0.restrict(), ReesPoly.make(ring, out, p.bound))


def rees_untrivialize(tr: TrivializedRees) -> ReesPoly:
    """sum a'_k t^k -> sum (r(a'_k) + a'_{k-1} - r(a'_{k-1})) t^k."""
    ring = tr.ring
    coeffs = {-1: tr.t_minus_1, **tr.poly.coeff_dict()}
    zero = d0(ring.zero())
    out: dict[int, P1Element] = {}
    top = max(coeffs, default=-1)
    for k in range(0, top + 2):
        if k > tr.poly.bound:
            if not coeffs.get(k - 1, zero).form_is_zero():
                raise DegreeOverflow("untrivialization exceeds the t-degree bound")
            continue
        ak = coeffs.get(k, zero)
        akm = coeffs.get(k - 1, zero)
        out[k] = ak.restrict() + akm - akm.restrict()
    return ReesPoly.make(ring, out, tr.poly.bound)


# ----------------------------------------------------------------------
# Gm twist check
# ----------------------------------------------------------------------


def split_tangent(delta: RingHom) -> tuple[dict[str, RingElement], dict[str, RingElement], str]:
    """Split delta = f + eps*D into the body images of f and the values of D
    (both as elements of the target ring), returning also the eps name."""
    target = delta.target
    if len(target.nilpotents) != 1:
        raise RingMismatch("tangent target must be a dual-number ring (one eps)")
    eps = target.nilpotents[0]
    f_images: dict[str, RingElement] = {}
    d_values: dict[str, RingElement] = {}
    for g in delta.source.variables:
        img = delta.images[g]
        f_images[g] = img.body()
        d_values[g] = img.nil_coefficient({eps: 1}).into(target)
    return f_images, d_values, eps


class PairMap:
    """The map P1[t] -> C[eps] induced by a square-zero-close pair (f0, f1)
    of homs A -> C[eps] together with a value for t.

    On P1 it sends (a, sum c_i dx_i) to f0(a) + sum f0(c_i)(f1(x_i) - f0(x_i)).
    """

    def __init__(self, f0: RingHom, f1: RingHom, t_value: RingElement):
        if f0.source != f1.source or f0.target != f1.target:
            raise RingMismatch("pair maps need parallel homs")
        self.f0 = f0
        self.f1 = f1
        self.t_value = t_value
        self.eta = {
            v: f1.images[v] - f0.images[v] for v in f0.source.variables
        }

    def on_p1(self, el: P1Element) -> RingElement:
        acc = self.f0(el.body)
        for v, c in el.form:
            acc = acc + self.f0(c) * self.eta[v]
        return acc

    def __call__(self, p: ReesPoly) -> RingElement:
        acc = self.f0.target.zero()
        for k, v in p.coeffs:
            acc = acc + self.on_p1(v) * self.t_value**k
        return acc


def gm_scale(p: ReesPoly, lam: Fraction) -> ReesPoly:
    """The Gm action on P1[t] transported through the trivialization:
    trivialize, rescale t by lam, return."""
    return rees_untrivialize(rees_trivialize(p).scale_t(lam))


def _random_p1_poly(rng: random.Random, ring: Ring, bound: int) -> ReesPoly:
    def rand_elem():
        p = ring.zero()
        for _ in range(rng.randrange(1, 3)):
            exps = {v: rng.randrange(0, 3) for v in ring.variables}
            p = p + ring.monomial(Fraction(rng.randrange(-3, 4)), exps)
        return p

    coeffs = {}
    for k in range(0, min(bound, 2) + 1):
        coeffs[k] = P1Element.make(
            ring, rand_elem(), {v: rand_elem() for v in ring.variables}
        )
    return ReesPoly.make(ring, coeffs, bound)


def gm_twist_check(
    delta: RingHom,
    lam: Fraction,
    t_value: RingElement | None = None,
    *,
    bound: int = DEFAULT_T_BOUND,
    seed: int = 0,
    samples: int = 8,
) -> bool:
    """Check that twisting the pair (iota, delta) through the trivialized
    Gm action agrees with the directly rescaled pair (iota, f + lam^-1 eps D)
    evaluated at lam * t_value."""
    lam = Fraction(lam)
    if lam == 0:
        raise ZeroLambda("the twist parameter must be invertible")
    source = delta.source
    target = delta.target
    f_images, d_values, eps = split_tangent(delta)
    if t_value is None:
        t_value = target.one()
    elif t_value.ring != target:
        t_value = t_value.into(target)
    if not t_value.nil_part().is_zero():
        raise RingMismatch("t must take a body value")

    iota = RingHom(source, target, f_images)
    eps_el = target.var(eps)
    delta_scaled = RingHom(
        source,
        target,
        {g: f_images[g] + d_values[g] * (1 / lam) * eps_el for g in source.variables},
    )

    route_a = PairMap(iota, delta, t_value)
    route_b = PairMap(iota, delta_scaled, t_value * lam)

    def agree(p: ReesPoly) -> bool:
        return route_a(gm_scale(p, lam)) == route_b(p)

    probes = [ReesPoly.make(source, {0: d0(source.var(v))}, bound) for v in source.variables]
    probes += [ReesPoly.make(source, {0: d1(source.var(v))}, bound) for v in source.variables]
    probes += [
        ReesPoly.make(source, {1: d1(source.var(v))}, bound) for v in source.variables
    ]
    probes.append(rees_t(source, bound))
    rng = random.Random(seed)
    probes += [_random_p1_poly(rng, source, bound) for _ in range(samples)]
    return all(agree(p) for p in probes)
