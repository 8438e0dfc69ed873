"""Vector bundles and Higgs bundles as explicit transition data, their
validation report, scaling, square-zero extension, and the order-2
stratification check."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .covers import Cover
from .errors import RingMismatch, UnsupportedCover, ZeroScalar
from .matrices import (
    Mat,
    identity,
    mat_add,
    mat_commutator,
    mat_eq,
    mat_inverse,
    mat_is_zero,
    mat_map,
    mat_mul,
    mat_scale,
    mat_str,
    mat_sub,
)


@dataclass
class ValidationReport:
    entries: list[tuple[str, str, str]] = field(default_factory=list)  # name, status, detail

    def add(self, name: str, ok: bool, witness: str = "", vacuous: bool = False):
        status = "vacuous" if (ok and vacuous) else ("pass" if ok else "fail")
        self.entries.append((name, status, witness))

    @property
    def ok(self) -> bool:
        return all(status != "fail" for _, status, _ in self.entries)

    def first_failure(self) -> str:
        for name, status, witness in self.entries:
            if status == "fail":
                return f"{name}: {witness}"
        return ""

    def __str__(self):
        return "\n".join(
            f"{name}: {status}" + (f" ({witness})" if witness and status == "fail" else "")
            for name, status, witness in self.entries
        )


@dataclass(frozen=True)
class VectorBundle:
    """Transitions g_{ab} for ordered pairs (a before b in chart order);
    sections glue as s_a = g_{ab} s_b on the overlap."""

    cover: Cover
    rank: int
    transitions: dict[tuple[str, str], Mat]

    def transition(self, a: str, b: str) -> Mat:
        if a == b:
            return identity(self.cover.overlap(a, b).ring, self.rank)
        key = self.cover.pair_key(a, b)
        g = self.transitions[key]
        if key == (a, b):
            return g
        return mat_inverse(g)


def line_bundle(cover: Cover, degree: int) -> VectorBundle:
    """O(degree) on a projective-line style cover: the frame jumps by u^degree
    against the chart at infinity ("v") and is shared by the other charts."""
    transitions = {}
    for a, b in cover.pair_keys():
        ov = cover.overlap(a, b)
        u = ov.ring.var(ov.ring.variables[0])
        if b == "v":
            transitions[(a, b)] = ((u**degree,),)
        elif a == "v":
            transitions[(a, b)] = ((u**-degree,),)
        else:
            transitions[(a, b)] = ((ov.ring.one(),),)
    return VectorBundle(cover, 1, transitions)


@dataclass(frozen=True)
class HiggsBundleData:
    """A bundle plus chart-local Higgs matrices phi (one per chart variable):
    theta_a = sum_i phi_a^(i) dx_a^i."""

    bundle: VectorBundle
    fields: dict[str, tuple[Mat, ...]]

    @property
    def cover(self) -> Cover:
        return self.bundle.cover

    @property
    def rank(self) -> int:
        return self.bundle.rank

    def field_matrix(self, chart: str, index: int = 0) -> Mat:
        return self.fields[chart][index]


def scale_higgs(h: HiggsBundleData, t: Fraction) -> HiggsBundleData:
    t = Fraction(t)
    if t == 0:
        raise ZeroScalar("scaling a Higgs field by zero is not invertible")
    return HiggsBundleData(
        h.bundle,
        {c: tuple(mat_scale(m, t) for m in mats) for c, mats in h.fields.items()},
    )


def validate_higgs(h: HiggsBundleData) -> ValidationReport:
    """Reports bundle cocycle, overlap compatibility, and integrability, each
    with the first failing witness."""
    report = ValidationReport()
    cover = h.cover
    rank = h.rank

    # shapes
    shape_ok, shape_witness = True, ""
    for chart in cover.charts:
        mats = h.fields.get(chart.name)
        if mats is None or len(mats) != len(chart.ring.variables):
            shape_ok, shape_witness = False, f"chart {chart.name}: wrong number of field matrices"
            break
        for m in mats:
            if len(m) != rank or any(len(row) != rank for row in m):
                shape_ok, shape_witness = False, f"chart {chart.name}: field matrix shape"
                break
    report.add("shapes", shape_ok, shape_witness)
    if not shape_ok:
        return report

    # transition invertibility and the cocycle on triples
    coc_ok, coc_witness = True, ""
    try:
        for a, b in cover.pair_keys():
            mat_inverse(h.bundle.transitions[(a, b)])
    except (ZeroDivisionError, KeyError) as exc:
        coc_ok, coc_witness = False, f"transition not invertible or missing: {exc}"
    if coc_ok:
        for a, b, c in cover.triple_keys():
            tr = cover.triples[(a, b, c)]
            to_triple = tr.from_pair
            g_ab = to_triple[(a, b)].matrix(h.bundle.transition(a, b))
            g_bc = to_triple[(b, c)].matrix(h.bundle.transition(b, c))
            g_ac = to_triple[(a, c)].matrix(h.bundle.transition(a, c))
            if not mat_eq(mat_mul(g_ab, g_bc), g_ac):
                coc_ok = False
                coc_witness = f"cocycle fails on ({a},{b},{c})"
                break
    report.add("cocycle", coc_ok, coc_witness)

    # overlap compatibility (Jacobian-twisted conjugation)
    comp_ok, comp_witness = True, ""
    for a, b in cover.pair_keys():
        ov = cover.overlap(a, b)
        if len(cover.chart(a).ring.variables) != 1:
            continue  # multi-dimensional charts occur only on single-chart covers
        g = h.bundle.transitions[(a, b)]
        g_inv = mat_inverse(g)
        jac = cover.jacobian(a, b)  # d x_a / d x_b
        phi_a = ov.restrictions[a].matrix(h.field_matrix(a))
        phi_b = ov.restrictions[b].matrix(h.field_matrix(b))
        expected_b = mat_scale(mat_mul(g_inv, mat_mul(phi_a, g)), jac)
        if not mat_eq(expected_b, phi_b):
            comp_ok = False
            diff = mat_sub(expected_b, phi_b)
            comp_witness = f"({a},{b}): g^-1 phi_{a} g * dx_{a}/dx_{b} - phi_{b} = {mat_str(diff)}"
            break
    report.add("compatibility", comp_ok, comp_witness)

    # integrability theta wedge theta = 0
    int_ok, int_witness, vacuous = True, "", True
    for chart in cover.charts:
        mats = h.fields[chart.name]
        if len(mats) > 1:
            vacuous = False
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                comm = mat_commutator(mats[i], mats[j])
                if not mat_is_zero(comm):
                    int_ok = False
                    int_witness = (
                        f"chart {chart.name}: [phi^({i}), phi^({j})] = {mat_str(comm)}"
                    )
    report.add("integrability", int_ok, int_witness, vacuous=vacuous)
    return report


def extend_bundle(b: VectorBundle, cover_ext: Cover) -> VectorBundle:
    """The same bundle over a square-zero extension of its cover."""
    transitions = {}
    for key, g in b.transitions.items():
        ring = cover_ext.overlaps[key].ring
        transitions[key] = mat_map(g, lambda x: x.into(ring))
    return VectorBundle(cover_ext, b.rank, transitions)


def extend_higgs(h: HiggsBundleData, cover_ext: Cover) -> HiggsBundleData:
    bundle = extend_bundle(h.bundle, cover_ext)
    fields = {}
    for chart in cover_ext.charts:
        ring = chart.ring
        fields[chart.name] = tuple(
            mat_map(m, lambda x: x.into(ring)) for m in h.fields[chart.name]
        )
    return HiggsBundleData(bundle, fields)


def reduce_higgs(h: HiggsBundleData, base_cover: Cover) -> HiggsBundleData:
    """Set every square-zero generator to zero, landing on the base cover."""
    transitions = {}
    for key, g in h.bundle.transitions.items():
        ring = base_cover.overlaps[key].ring
        transitions[key] = mat_map(g, lambda x: x.set_nil_zero().into(ring))
    bundle = VectorBundle(base_cover, h.rank, transitions)
    fields = {}
    for chart in base_cover.charts:
        ring = chart.ring
        fields[chart.name] = tuple(
            mat_map(m, lambda x: x.set_nil_zero().into(ring)) for m in h.fields[chart.name]
        )
    return HiggsBundleData(bundle, fields)


def summand_degrees(b: VectorBundle) -> list[int]:
    """Line-bundle degrees of a direct sum presented by a diagonal monomial
    transition against the chart at infinity (projective-line covers)."""
    key = None
    for a, bb in b.cover.pair_keys():
        if "v" in (a, bb):
            key = (a, bb)
            break
    if key is None:
        raise UnsupportedCover("no chart at infinity to read degrees from")
    g = b.transitions[key]
    degs = []
    for i in range(b.rank):
        for j in range(b.rank):
            entry = g[i][j]
            if i == j:
                if len(entry.terms) != 1:
                    raise RingMismatch("transition is not diagonal monomial")
                ((e, c),) = entry.terms.items()
                degs.append(e[0])
            elif not entry.is_zero():
                raise RingMismatch("transition is not diagonal monomial")
    return degs


def euler_char_line(d: int) -> int:
    """chi(O(d)) on the projective line."""
    return d + 1


def euler_char_higgs_complex(h: HiggsBundleData) -> int:
    """chi(End E) - chi(End E tensor Omega), from summand degrees alone.

    Independent of the Cech solver: pure degree arithmetic."""
    degs = summand_degrees(h.bundle)
    chi_end = sum(euler_char_line(di - dj) for di in degs for dj in degs)
    chi_end_omega = sum(euler_char_line(di - dj - 2) for di in degs for dj in degs)
    return chi_end - chi_end_omega


# ----------------------------------------------------------------------
# Order-2 stratification
# ----------------------------------------------------------------------


def stratification_order2(h: HiggsBundleData) -> bool:
    """Build the order-2 coaction from the chart fields and test that the
    truncated coassociativity square commutes; this reduces to the vanishing
    of every [phi^(i), phi^(j)] and is reported chart by chart."""
    for chart in h.cover.charts:
        mats = h.fields[chart.name]
        n = len(mats)
        if n <= 1:
            continue
        # theta2[(i, j)] with i <= j: the symmetrized second-order coefficient
        theta2 = {}
        for i in range(n):
            for j in range(i, n):
                sym = mat_scale(
                    mat_add(mat_mul(mats[i], mats[j]), mat_mul(mats[j], mats[i])),
                    Fraction(1, 2),
                )
                theta2[(i, j)] = sym
        # (id tensor m) theta2 has dx^i tensor dx^j coefficient theta2[{i,j}];
        # (theta1 tensor id) theta1 has coefficient phi_i phi_j. Compare all
        # ordered pairs.
        for i in range(n):
            for j in range(n):
                lhs = theta2[(min(i, j), max(i, j))]
                rhs = mat_mul(mats[i], mats[j])
                if not mat_eq(lhs, rhs):
                    return False
    return True
