"""Cover plumbing, Higgs validation, scaling, and the stratification check."""

from fractions import Fraction

import pytest

from lamconn.bundles import (
    HiggsBundleData,
    euler_char_higgs_complex,
    scale_higgs,
    stratification_order2,
    summand_degrees,
    validate_higgs,
)
from lamconn.builtin_bundles import p1_nilpotent, p1_split_zero, p1_trivial
from lamconn.covers import affine_cover, proj_line_cover, proj_line_cover_redundant
from lamconn.errors import ZeroScalar
from lamconn.matrices import parse_matrix
from lamconn.rings import Ring


def test_jacobian_on_standard_cover():
    cover = proj_line_cover()
    jac = cover.jacobian("u", "v")
    assert jac == cover.overlaps[("u", "v")].ring.parse("-u^2")
    assert cover.jacobian("v", "u") == cover.overlaps[("u", "v")].ring.parse("-u^-2")


def test_trivial_bundle_validates():
    report = validate_higgs(p1_trivial())
    assert report.ok
    names = [n for n, _, _ in report.entries]
    assert names == ["shapes", "cocycle", "compatibility", "integrability"]
    statuses = {n: s for n, s, _ in report.entries}
    assert statuses["integrability"] == "vacuous"


def test_nilpotent_bundle_validates_and_transforms_polynomially():
    h = p1_nilpotent()
    assert validate_higgs(h).ok
    assert summand_degrees(h.bundle) == [1, -1]
    assert euler_char_higgs_complex(h) == 8


def test_nilpotent_bundle_on_redundant_cover():
    h = p1_nilpotent(proj_line_cover_redundant())
    assert validate_higgs(h).ok


def test_untransformed_field_fails_with_witness():
    h = p1_nilpotent()
    bad_fields = dict(h.fields)
    bad_fields["v"] = (parse_matrix(h.cover.chart("v").ring, [["0", "1"], ["0", "0"]]),)
    bad = HiggsBundleData(h.bundle, bad_fields)
    report = validate_higgs(bad)
    assert not report.ok
    assert "compatibility" in report.first_failure()


def test_scale_higgs():
    h = p1_nilpotent()
    h2 = scale_higgs(h, Fraction(3, 2))
    assert validate_higgs(h2).ok
    assert h2.field_matrix("u")[0][1] == h.cover.chart("u").ring.const(Fraction(3, 2))
    with pytest.raises(ZeroScalar):
        scale_higgs(h, 0)


def test_euler_char_trivial():
    assert euler_char_higgs_complex(p1_trivial()) == 2
    assert euler_char_higgs_complex(p1_split_zero()) == 8


def two_var_higgs(phi1_rows, phi2_rows):
    ring = Ring(("x", "y"))
    cover = affine_cover(ring)
    from lamconn.bundles import VectorBundle

    bundle = VectorBundle(cover, 2, {})
    fields = {"main": (parse_matrix(ring, phi1_rows), parse_matrix(ring, phi2_rows))}
    return HiggsBundleData(bundle, fields)


def test_stratification_vacuous_on_curves():
    assert stratification_order2(p1_nilpotent())


def test_stratification_commuting_nilpotents():
    h = two_var_higgs([["0", "1"], ["0", "0"]], [["0", "x"], ["0", "0"]])
    assert validate_higgs(h).ok
    assert stratification_order2(h)


def test_stratification_noncommuting_pair():
    h = two_var_higgs([["0", "1"], ["0", "0"]], [["0", "0"], ["1", "0"]])
    assert not validate_higgs(h).ok  # integrability fails
    assert not stratification_order2(h)


def test_cover_extension_with_nilpotents():
    cover = proj_line_cover().with_nilpotents(("e",))
    assert cover.chart("u").ring.nilpotents == ("e",)
    ov = cover.overlaps[("u", "v")]
    v = cover.chart("v").ring.var("v")
    assert ov.restrict("v", v) == ov.ring.parse("u^-1")
    e = cover.chart("v").ring.var("e")
    assert ov.restrict("v", e) == ov.ring.var("e")
