"""Acceptance criteria, one test per criterion.

Every check is exact (no tolerances: the arithmetic is rational) and carries
the stated runtime bound. Each test prints a single PASS/FAIL line; run with
``pytest tests/test_acceptance.py -v -s`` to see them.
"""

import json
import subprocess
import sys
import time
from pathlib import Path

import pytest

from lamconn.builtin_bundles import p1_nilpotent
from lamconn.bundles import euler_char_higgs_complex, line_bundle
from lamconn.cohomology import hyper_dims, line_bundle_h1_monomial_count, sheaf_dims
from lamconn.covers import proj_line_cover
from lamconn import verify

SEED = 0


def _run(criterion: str, bound_seconds: float, fn):
    start = time.perf_counter()
    try:
        result = fn()
    except BaseException:
        print(f"ACCEPTANCE {criterion}: FAIL (exception)")
        raise
    elapsed = time.perf_counter() - start
    ok = result.get("status") == "pass"
    in_time = elapsed <= bound_seconds
    verdict = "PASS" if (ok and in_time) else "FAIL"
    print(f"ACCEPTANCE {criterion}: {verdict} ({elapsed:.2f}s / bound {bound_seconds:.0f}s)")
    assert ok, f"{criterion}: {result}"
    assert in_time, f"{criterion}: took {elapsed:.2f}s, bound {bound_seconds}s"


def test_criterion_01_interpolation_lemma_suite():
    _run(
        "1 hom-interpolation suite",
        5.0,
        lambda: verify.check_interpolation_multiplicative(SEED, False),
    )


def test_criterion_02_triangle_identity():
    _run("2 triangle identity", 10.0, lambda: verify.check_triangle_identity(SEED, False))


def test_criterion_03_pullback_intertwining():
    _run(
        "3 pullback intertwining",
        10.0,
        lambda: verify.check_pullback_intertwining(SEED, False),
    )


def test_criterion_04_horizontal_lift_coincidence():
    _run("4 horizontal lift", 5.0, lambda: verify.check_horizontal_lift(SEED, False))


def test_criterion_05_rees_roundtrip_and_gm_twist():
    def run():
        a = verify.check_rees_roundtrip(SEED, False)
        if a["status"] != "pass":
            return a
        return verify.check_gm_twist(SEED, False)

    _run("5 rees roundtrip + gm twist", 5.0, run)


def test_criterion_06_cohomology_oracle():
    def run():
        out = verify.check_cohomology_oracle(SEED, False)
        if out["status"] != "pass":
            return out
        # direct independent recomputation of the closed form
        cover = proj_line_cover()
        for d in range(-6, 7):
            res = sheaf_dims(line_bundle(cover, d))  # raises if not saturated
            if res.h1 != max(0, -d - 1) or res.h1 != line_bundle_h1_monomial_count(d):
                return {"status": "fail", "witness": f"d={d}"}
        return out

    _run("6 cohomology oracle", 10.0, run)


def test_criterion_07_euler_characteristic_crosscheck():
    def run():
        h = p1_nilpotent()
        res = hyper_dims(h)
        solver_side = res.h0 - res.h1 + res.h2
        independent = euler_char_higgs_complex(h)
        if solver_side != 8 or independent != 8:
            return {
                "status": "fail",
                "witness": f"solver {solver_side}, independent {independent}",
            }
        return {"status": "pass", "dims": [res.h0, res.h1, res.h2]}

    _run("7 euler cross-check", 20.0, run)


def test_criterion_08_ks_pipeline():
    def run():
        for fn in (
            verify.check_ks_conditions,
            verify.check_ks_deformations,
            verify.check_ks_coboundary_witnesses,
        ):
            out = fn(SEED, False)
            if out["status"] != "pass":
                return out
        return {"status": "pass"}

    _run("8 ks pipeline", 30.0, run)


def test_criterion_09_gradedness():
    def run():
        out = verify.check_gradedness_cocycle_level(SEED, False)
        if out["status"] != "pass":
            return out
        return verify.check_gradedness_bundle_level(SEED, False)

    _run("9 gradedness", 20.0, run)


def test_criterion_10_order2_integrability():
    _run(
        "10 order-2 integrability",
        60.0,
        lambda: verify.check_order2_integrability(SEED, False),
    )


def _cli(*argv) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "lamconn.cli", *argv],
        capture_output=True,
        cwd=Path(__file__).resolve().parent.parent,
    )


def test_criterion_11_verify_paper_aggregate():
    start = time.perf_counter()
    first = _cli("verify-paper", "--seed", "0", "--format", "structured")
    second = _cli("verify-paper", "--seed", "0", "--format", "structured")
    flipped = _cli(
        "verify-paper", "--seed", "0", "--format", "structured", "--debug-flip-m-theta"
    )
    elapsed = time.perf_counter() - start

    ok = True
    witness = ""
    if first.returncode != 0:
        ok, witness = False, f"clean run exited {first.returncode}"
    elif first.stdout != second.stdout:
        ok, witness = False, "structured output is not byte-stable"
    elif flipped.returncode != 1:
        ok, witness = False, f"flip run exited {flipped.returncode}, expected 1"
    else:
        payload = json.loads(first.stdout)
        names = {t["id"] for t in payload["tasks"]}
        expected = {name for name, _ in verify.CHECKS}
        if names != expected:
            ok, witness = False, "aggregate misses checks"
        flip_payload = json.loads(flipped.stdout)
        failing = [t for t in flip_payload["tasks"] if t["status"] != "pass"]
        if not failing or not any(t["values"].get("witness") for t in failing):
            ok, witness = False, "flip run lacks a named witness"

    verdict = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE 11 verify-paper aggregate: {verdict} ({elapsed:.2f}s)")
    assert ok, witness
