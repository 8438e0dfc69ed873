"""The pointwise nonabelian Kodaira-Spencer pipeline: contraction of Higgs
fields with tangent cocycles, first-order deformations over dual numbers,
equivalence solving, gradedness, and the order-2 integrability shadow."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bundles import (
    HiggsBundleData,
    VectorBundle,
    extend_higgs,
    reduce_higgs,
    scale_higgs,
    validate_higgs,
)
from .cohomology import DegreeWindow, higgs_complex_for
from .covers import Cover
from .errors import (
    CocycleViolation,
    RingMismatch,
    UnsupportedCover,
    ValidationFailed,
    WindowNotSaturated,
    ZeroScalar,
)
from .hypercoc import HyperCocycle, _solve_once, check_conditions, zero_cocycle
from .matrices import (
    Mat,
    identity,
    mat_add,
    mat_eq,
    mat_inverse,
    mat_is_zero,
    mat_map,
    mat_mul,
    mat_scale,
    mat_sub,
)
from .rings import RingElement


@dataclass
class TangentCocycle:
    """chi_ab = c_ab(w) d/dw on each canonical overlap, the coefficient taken
    against the overlap ring's own coordinate w."""

    chi: dict[tuple[str, str], RingElement]

    def scale(self, c: Fraction) -> "TangentCocycle":
        return TangentCocycle({k: v * c for k, v in self.chi.items()})

    def __add__(self, other: "TangentCocycle") -> "TangentCocycle":
        return TangentCocycle({k: self.chi[k] + other.chi[k] for k in self.chi})


def monomial_tangent(cover: Cover, coeff: Fraction, degree: int) -> TangentCocycle:
    """c * u^degree d/du against the chart at infinity of a projective-line
    style cover; orientation follows the ordered pair, so the cocycle closes
    up on redundant covers."""
    chi = {}
    for key in cover.pair_keys():
        a, b = key
        ov = cover.overlap(a, b)
        u = ov.ring.variables[0]
        if b == "v":
            chi[key] = ov.ring.monomial(coeff, {u: degree})
        elif a == "v":
            chi[key] = ov.ring.monomial(-coeff, {u: degree})
        else:
            chi[key] = ov.ring.zero()
    return TangentCocycle(chi)


def validate_tangent(chi: TangentCocycle, cover: Cover) -> None:
    for key in cover.pair_keys():
        if key not in chi.chi:
            raise CocycleViolation(f"missing overlap {key}")
        if chi.chi[key].ring != cover.overlap(*key).ring:
            raise RingMismatch(f"tangent coefficient for {key} in the wrong ring")
    for a, b, c in cover.triple_keys():
        tr = cover.triples[(a, b, c)]
        w = tr.ring.variables[0]

        def in_triple(key):
            val = tr.from_pair[key](chi.chi[key])
            # vector-field coefficients transform by d(x_triple)/d(x_pair)
            ov = cover.overlaps[key]
            expr = tr.from_pair[key](ov.ring.var(ov.ring.variables[0]))
            jac = expr.partial(w)
            return val * jac.inverse()

        if in_triple((a, b)) + in_triple((b, c)) != in_triple((a, c)):
            raise CocycleViolation(
                f"chi_ab + chi_bc != chi_ac on the triple ({a},{b},{c})"
            )


def contract(h: HiggsBundleData, chi: TangentCocycle) -> dict[tuple[str, str], Mat]:
    """theta_chi on each overlap in the first chart's frame: the stored
    coefficient is against d/dw for the overlap coordinate w, so the pairing
    with phi_a dx_a picks up dx_a/dw. The second chart's presentation gives
    the same matrix after the compatibility conversion; asserted, not
    assumed."""
    validate_tangent(chi, h.cover)
    out = {}
    for key in h.cover.pair_keys():
        a, b = key
        ov = h.cover.overlap(a, b)
        w = ov.ring.variables[0]
        dxa_dw = ov.restrictions[a](h.cover.chart(a).ring.var(h.cover.coordinate(a))).partial(w)
        phi_a = ov.restrictions[a].matrix(h.field_matrix(a))
        theta = mat_scale(phi_a, chi.chi[key] * dxa_dw)
        # independent route through chart b
        g = h.bundle.transitions[key]
        g_inv = mat_inverse(g)
        dxb_dw = ov.restrictions[b](h.cover.chart(b).ring.var(h.cover.coordinate(b))).partial(w)
        phi_b = ov.restrictions[b].matrix(h.field_matrix(b))
        theta_b = mat_mul(g, mat_mul(mat_scale(phi_b, chi.chi[key] * dxb_dw), g_inv))
        assert mat_eq(theta, theta_b), "contraction depends on the chart presentation"
        out[key] = theta
    return out


def ks_cocycle(
    h: HiggsBundleData, chi: TangentCocycle, *, flip_sign: bool = False
) -> HyperCocycle:
    """(theta_chi, 0), with the three hyper-cocycle conditions verified."""
    c = HyperCocycle(contract(h, chi), zero_cocycle(h).t)
    check_conditions(c, h, flip_sign=flip_sign)
    return c


# ----------------------------------------------------------------------
# Deformations
# ----------------------------------------------------------------------

NIL_ONE = ("eps",)
NIL_TWO = ("eps1", "eps2")


@dataclass
class DeformedHiggsBundle:
    """A Higgs bundle over a square-zero extension of the base cover whose
    reduction at eps = 0 is the base."""

    base: HiggsBundleData
    nilpotents: tuple[str, ...]
    data: HiggsBundleData  # over base.cover.with_nilpotents(nilpotents)

    def __post_init__(self):
        reduced = reduce_higgs(self.data, self.base.cover)
        for key, g in reduced.bundle.transitions.items():
            if not mat_eq(g, self.base.bundle.transitions[key]):
                raise RingMismatch("deformation does not reduce to the base bundle")
        for name, mats in reduced.fields.items():
            for m, m0 in zip(mats, self.base.fields[name]):
                if not mat_eq(m, m0):
                    raise RingMismatch("deformation does not reduce to the base field")

    def component(self, exps: dict[str, int]) -> HyperCocycle:
        """The (s, t) coefficient at a square-zero monomial: s from
        g_hat g^-1 - I, t from phi_hat - phi."""
        cover_ext = self.data.cover
        s = {}
        for key in cover_ext.pair_keys():
            ring_ext = cover_ext.overlaps[key].ring
            g_ext = mat_map(
                self.base.bundle.transitions[key], lambda x: x.into(ring_ext)
            )
            p = mat_mul(self.data.bundle.transitions[key], mat_inverse(g_ext))
            s[key] = mat_map(p, lambda x: x.nil_coefficient(exps))
        t = {}
        for chart in cover_ext.charts:
            t[chart.name] = mat_map(
                self.data.fields[chart.name][0], lambda x: x.nil_coefficient(exps)
            )
        return HyperCocycle(s, t)


def _twisted_transitions(
    base_ext: HiggsBundleData, twists: list[tuple[str, dict[tuple[str, str], Mat]]]
) -> dict[tuple[str, str], Mat]:
    """(1 + eps_k s_k) ... (1 + eps_1 s_1) g for the listed twists, applied in
    order (first listed is applied to g first); all s in the first chart's
    frame."""
    out = {}
    for key, g in base_ext.bundle.transitions.items():
        ring = base_ext.cover.overlaps[key].ring
        acc = g
        for nil_name, s in twists:
            factor = mat_add(
                identity(ring, len(g)),
                mat_scale(mat_map(s[key], lambda x: x.into(ring)), ring.var(nil_name)),
            )
            acc = mat_mul(factor, acc)
        out[key] = acc
    return out


def build_deformation(
    h: HiggsBundleData, c: HyperCocycle, *, flip_sign: bool = False
) -> DeformedHiggsBundle:
    """Twist the transitions by 1 + eps*s and the fields by eps*t, then
    validate the result over the dual numbers."""
    check_conditions(c, h, flip_sign=flip_sign)
    cover_ext = h.cover.with_nilpotents(NIL_ONE)
    base_ext = extend_higgs(h, cover_ext)
    transitions = _twisted_transitions(base_ext, [("eps", c.s)])
    fields = {}
    for chart in cover_ext.charts:
        ring = chart.ring
        phi = base_ext.fields[chart.name][0]
        t_ext = mat_map(c.t[chart.name], lambda x: x.into(ring))
        fields[chart.name] = (mat_add(phi, mat_scale(t_ext, ring.var("eps"))),)
    data = HiggsBundleData(VectorBundle(cover_ext, h.rank, transitions), fields)
    report = validate_higgs(data)
    if not report.ok:
        raise ValidationFailed(report)
    return DeformedHiggsBundle(h, NIL_ONE, data)


def constant_deformation(h: HiggsBundleData) -> DeformedHiggsBundle:
    return build_deformation(h, zero_cocycle(h))


# ----------------------------------------------------------------------
# Equivalence of deformations: staged intertwiner solving
# ----------------------------------------------------------------------


def _nil_monomial_stages(nilpotents: tuple[str, ...]) -> list[dict[str, int]]:
    if len(nilpotents) == 1:
        return [{nilpotents[0]: 1}]
    if len(nilpotents) == 2:
        a, b = nilpotents
        return [{a: 1}, {b: 1}, {a: 1, b: 1}]
    raise UnsupportedCover("at most two square-zero parameters are supported")


def find_intertwiner(
    d1: DeformedHiggsBundle,
    d2: DeformedHiggsBundle,
    window: DegreeWindow | None = None,
    *,
    flip_sign: bool = False,
) -> dict[str, Mat] | None:
    """Chart automorphisms H_a = 1 + (nilpotent corrections) with
    H_a ghat1_ab = ghat2_ab H_b and H phi1 H^-1 = phi2, solved stage by stage
    in the square-zero monomials and verified by substitution at the end.

    Returns the full H matrices over the extended chart rings, or None."""
    if d1.base is not d2.base and not _same_base(d1.base, d2.base):
        raise RingMismatch("deformations have different bases")
    if d1.nilpotents != d2.nilpotents:
        raise RingMismatch("deformations live over different rings")
    base = d1.base
    cplx = higgs_complex_for(base, flip_sign)
    cover_ext = d1.data.cover
    rank = base.rank
    h_mats = {c.name: identity(c.ring, rank) for c in cover_ext.charts}

    degree_hint = 0
    for d in (d1, d2):
        for g in d.data.bundle.transitions.values():
            for row in g:
                for x in row:
                    degree_hint = max(degree_hint, x.max_abs_degree())
    window = window or cplx.window_for(degree_hint)

    for exps in _nil_monomial_stages(d1.nilpotents):
        residual_s, residual_t = _intertwiner_residual(d1, d2, h_mats, exps)
        if all(mat_is_zero(m) for m in residual_s.values()) and all(
            mat_is_zero(m) for m in residual_t.values()
        ):
            continue
        target = HyperCocycle(residual_s, residual_t)
        x = _solve_once(cplx, target, window)
        x_wide = _solve_once(cplx, target, window.widen(2))
        if (x is None) != (x_wide is None):
            raise WindowNotSaturated(x is not None, x_wide is not None)
        if x is None:
            return None
        for chart in cover_ext.charts:
            ring = chart.ring
            mono = ring.monomial(1, exps)
            h_mats[chart.name] = mat_add(
                h_mats[chart.name],
                mat_scale(mat_map(x[chart.name], lambda e: e.into(ring)), mono),
            )

    # full verification by substitution over the extended ring
    for key in cover_ext.pair_keys():
        a, b = key
        ov = cover_ext.overlaps[key]
        lhs = mat_mul(ov.restrictions[a].matrix(h_mats[a]), d1.data.bundle.transitions[key])
        rhs = mat_mul(d2.data.bundle.transitions[key], ov.restrictions[b].matrix(h_mats[b]))
        if not mat_eq(lhs, rhs):
            raise RingMismatch("intertwiner verification failed on transitions")
    for chart in cover_ext.charts:
        hm = h_mats[chart.name]
        lhs = mat_mul(hm, mat_mul(d1.data.fields[chart.name][0], mat_inverse(hm)))
        if not mat_eq(lhs, d2.data.fields[chart.name][0]):
            raise RingMismatch("intertwiner verification failed on fields")
    return h_mats


def _same_base(h1: HiggsBundleData, h2: HiggsBundleData) -> bool:
    return all(
        mat_eq(h1.bundle.transitions[k], h2.bundle.transitions[k])
        for k in h1.bundle.transitions
    ) and all(
        mat_eq(h1.fields[c][0], h2.fields[c][0]) for c in h1.fields
    )


def _intertwiner_residual(d1, d2, h_mats, exps):
    """Components at the given square-zero monomial of the defect of the
    current partial intertwiner, converted into coboundary-solver targets:
    s_target = (H ghat1 - ghat2 H) g^-1 at the monomial, t_target likewise on
    the fields."""
    base = d1.base
    cover_ext = d1.data.cover
    residual_s, residual_t = {}, {}
    for key in cover_ext.pair_keys():
        a, b = key
        ov = cover_ext.overlaps[key]
        lhs = mat_mul(ov.restrictions[a].matrix(h_mats[a]), d1.data.bundle.transitions[key])
        rhs = mat_mul(d2.data.bundle.transitions[key], ov.restrictions[b].matrix(h_mats[b]))
        defect = mat_sub(lhs, rhs)
        ring_ext = ov.ring
        g_inv_ext = mat_inverse(
            mat_map(base.bundle.transitions[key], lambda x: x.into(ring_ext))
        )
        normalized = mat_mul(defect, g_inv_ext)
        residual_s[key] = mat_map(normalized, lambda x: x.nil_coefficient(exps))
    for chart in cover_ext.charts:
        hm = h_mats[chart.name]
        lhs = mat_mul(hm, mat_mul(d1.data.fields[chart.name][0], mat_inverse(hm)))
        defect = mat_sub(lhs, d2.data.fields[chart.name][0])
        residual_t[chart.name] = mat_map(defect, lambda x: x.nil_coefficient(exps))
    return residual_s, residual_t


def deformations_equivalent(
    d1: DeformedHiggsBundle,
    d2: DeformedHiggsBundle,
    window: DegreeWindow | None = None,
    *,
    flip_sign: bool = False,
) -> dict[str, Mat] | None:
    """Witness automorphisms reducing to the identity at eps = 0, or None."""
    return find_intertwiner(d1, d2, window, flip_sign=flip_sign)


# ----------------------------------------------------------------------
# Gradedness and integrability
# ----------------------------------------------------------------------


def gradedness_check(
    h: HiggsBundleData,
    chi: TangentCocycle,
    t: Fraction,
    window: DegreeWindow | None = None,
    *,
    flip_sign: bool = False,
) -> bool:
    """Cocycle-level equality ks(t*theta, chi) = t-image of ks(theta, chi)
    under (s, t_a) -> (s, t * t_a), then solver equivalence of the two
    deformations of the scaled bundle."""
    t = Fraction(t)
    if t == 0:
        raise ZeroScalar("gradedness needs an invertible scalar")
    scaled = scale_higgs(h, t)
    lhs = ks_cocycle(scaled, chi, flip_sign=flip_sign)
    rhs = ks_cocycle(h, chi, flip_sign=flip_sign).scale(t).scale_t_part(t)
    if lhs != rhs:
        return False
    d_lhs = build_deformation(scaled, lhs, flip_sign=flip_sign)
    d_rhs = build_deformation(scaled, rhs, flip_sign=flip_sign)
    witness = deformations_equivalent(d_lhs, d_rhs, window, flip_sign=flip_sign)
    return witness is not None


def _order2_deformation(
    h: HiggsBundleData, s_a, s_b, *, swap_order: bool, names=NIL_TWO
) -> DeformedHiggsBundle:
    """The composite twist over Q[eps1,eps2]/(eps1^2,eps2^2): eps1 always
    carries s_a and eps2 always carries s_b; ``swap_order`` flips which twist
    is applied first (the two composites differ by eps1 eps2 [s_a, s_b])."""
    cover_ext = h.cover.with_nilpotents(names)
    base_ext = extend_higgs(h, cover_ext)
    twists = [(names[0], s_a), (names[1], s_b)]
    if swap_order:
        twists.reverse()
    transitions = _twisted_transitions(base_ext, twists)
    data = HiggsBundleData(VectorBundle(cover_ext, h.rank, transitions), base_ext.fields)
    return DeformedHiggsBundle(h, names, data)


def integrability_check(
    h: HiggsBundleData,
    chi_a: TangentCocycle,
    chi_b: TangentCocycle,
    window: DegreeWindow | None = None,
    *,
    flip_sign: bool = False,
) -> bool:
    """Order-2 shadow of the vanishing bracket: the composite deformation
    along chi_a then chi_b is equivalent to the opposite order over
    Q[eps1, eps2]/(eps1^2, eps2^2), via a substitution-verified witness."""
    s_a = contract(h, chi_a)
    s_b = contract(h, chi_b)
    d_ab = _order2_deformation(h, s_a, s_b, swap_order=False)
    d_ba = _order2_deformation(h, s_a, s_b, swap_order=True)
    witness = find_intertwiner(d_ab, d_ba, window, flip_sign=flip_sign)
    return witness is not None
