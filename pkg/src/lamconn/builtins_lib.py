"""Built-in example scenarios runnable with zero authoring."""

from __future__ import annotations

from fractions import Fraction

from .builtin_bundles import builtin_bundle
from .errors import ResolutionError
from .ks import monomial_tangent
from .scenario import Scenario


def _bundle_scenario(name: str) -> Scenario:
    higgs = builtin_bundle(name)
    cover = higgs.cover
    tangents = {
        "chi": monomial_tangent(cover, Fraction(1), 1),
        "chi2": monomial_tangent(cover, Fraction(1), 2),
    }
    scn = Scenario(name, cover, higgs, tangents, {})
    scn.default_tasks = {
        "check": [
            {"op": "validate_higgs"},
            {"op": "stratification_order2"},
        ],
        "cohomology": [
            {"op": "hyper_dims"},
            {"op": "cech_h1", "twist": -2, "expect_dim": 1},
            {"op": "cech_h1", "twist": 2, "expect_dim": 0},
        ],
        "deform": [
            {"op": "ks_cocycle", "chi": "chi"},
            {"op": "ks_deform", "chi": "chi"},
            {"op": "coboundary_witness", "chi": "chi"},
            {"op": "gradedness", "chi": "chi", "t": "2"},
            {"op": "integrability", "chi_a": "chi", "chi_b": "chi2"},
        ],
    }
    return scn


def _interp_demo() -> Scenario:
    scn = Scenario("interp-demo")
    scn.default_tasks = {
        "check": [
            {"op": "interpolation_suite", "samples": 100},
            {"op": "triangle_suite", "samples": 50},
            {"op": "pullback_suite", "samples": 50},
            {"op": "lift_suite", "samples": 100},
        ],
    }
    return scn


def _rees_demo() -> Scenario:
    scn = Scenario("rees-demo")
    scn.default_tasks = {
        "check": [
            {"op": "rees_roundtrip", "samples": 20},
            {"op": "gm_twist", "lambdas": ["1", "2", "-1", "1/2"]},
        ],
    }
    return scn


BUILTIN_SCENARIOS = {
    "p1-trivial": lambda: _bundle_scenario("p1-trivial"),
    "p1-nilpotent": lambda: _bundle_scenario("p1-nilpotent"),
    "p1-split-zero": lambda: _bundle_scenario("p1-split-zero"),
    "interp-demo": _interp_demo,
    "rees-demo": _rees_demo,
}


def builtin_scenario(name: str) -> Scenario:
    try:
        return BUILTIN_SCENARIOS[name]()
    except KeyError:
        raise ResolutionError(
            f"unknown built-in example {name!r}; available: {', '.join(sorted(BUILTIN_SCENARIOS))}"
        ) from None
