"""The built-in geometric examples every check can run against."""

from __future__ import annotations

from .bundles import HiggsBundleData, VectorBundle, line_bundle
from .covers import Cover, proj_line_cover, proj_line_cover_redundant
from .matrices import parse_matrix, zero_matrix


def p1_trivial(cover: Cover | None = None) -> HiggsBundleData:
    """Trivial line bundle on the projective line with zero Higgs field."""
    cover = cover or proj_line_cover()
    bundle = line_bundle(cover, 0)
    fields = {c.name: (zero_matrix(c.ring, 1),) for c in cover.charts}
    return HiggsBundleData(bundle, fields)


def p1_nilpotent(cover: Cover | None = None) -> HiggsBundleData:
    """O(1) + O(-1) with the constant nilpotent Higgs field.

    The only Hom-degree admitting a nonzero global 1-form-valued entry is the
    one mapping the O(-1) summand into O(1) tensor Omega, so the field is the
    strictly upper triangular constant on the u-chart; transforming by the
    compatibility rule gives the negated constant on the v-chart.
    """
    cover = cover or proj_line_cover()
    transitions = {}
    for a, b in cover.pair_keys():
        ov = cover.overlap(a, b)
        if b == "v":
            transitions[(a, b)] = parse_matrix(ov.ring, [["u", "0"], ["0", "u^-1"]])
        elif a == "v":
            transitions[(a, b)] = parse_matrix(ov.ring, [["u^-1", "0"], ["0", "u"]])
        else:
            transitions[(a, b)] = parse_matrix(ov.ring, [["1", "0"], ["0", "1"]])
    bundle = VectorBundle(cover, 2, transitions)
    fields = {}
    for chart in cover.charts:
        if chart.name == "v":
            fields[chart.name] = (parse_matrix(chart.ring, [["0", "-1"], ["0", "0"]]),)
        else:
            fields[chart.name] = (parse_matrix(chart.ring, [["0", "1"], ["0", "0"]]),)
    return HiggsBundleData(bundle, fields)


def p1_split_zero(cover: Cover | None = None) -> HiggsBundleData:
    """O(1) + O(-1) with zero Higgs field; its deformation space has a
    two-dimensional first hypercohomology, so it provides genuinely
    inequivalent deformations."""
    base = p1_nilpotent(cover)
    fields = {
        name: (zero_matrix(mats[0][0][0].ring, 2),) for name, mats in base.fields.items()
    }
    return HiggsBundleData(base.bundle, fields)


BUILTIN_BUNDLES = {
    "p1-trivial": p1_trivial,
    "p1-nilpotent": p1_nilpotent,
    "p1-split-zero": p1_split_zero,
}


def builtin_bundle(name: str, redundant_cover: bool = False) -> HiggsBundleData:
    cover = proj_line_cover_redundant() if redundant_cover else proj_line_cover()
    try:
        return BUILTIN_BUNDLES[name](cover)
    except KeyError:
        raise KeyError(f"unknown built-in bundle {name!r}") from None
