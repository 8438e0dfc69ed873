"""Scenario files: TOML descriptions of covers, bundles, Higgs fields and
cocycles plus an ordered task list, executed into a deterministic report."""

from __future__ import annotations

import random
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import rees
from .bundles import (
    HiggsBundleData,
    VectorBundle,
    euler_char_higgs_complex,
    line_bundle,
    stratification_order2,
    validate_higgs,
)
from .cohomology import DegreeWindow, hyper_dims, line_bundle_h1_monomial_count, sheaf_dims
from .connections import verify_triangle, intertwines_pullbacks, horizontal_lift, lift_by_splitting_route
from .covers import Cover, affine_cover, proj_line_cover, proj_line_cover_redundant
from .errors import LamconnError, ParseError, ResolutionError
from .homs import RingHom, hom_affine_combination, interpolate_homs
from .hypercoc import HyperCocycle, is_hyper_coboundary, zero_cocycle
from .ks import (
    TangentCocycle,
    build_deformation,
    deformations_equivalent,
    gradedness_check,
    integrability_check,
    ks_cocycle,
    monomial_tangent,
    validate_tangent,
)
from .matrices import mat_str, parse_matrix
from .report import Report, TaskRecord
from .rings import Ring
from .sampling import (
    random_body_poly,
    sample_distribution_setup,
    sample_integrable_rank2,
    sample_square_zero_pair,
    sample_triangle,
)

FORMAT_VERSIONS = {"1"}


@dataclass
class Scenario:
    name: str
    cover: Cover | None = None
    higgs: HiggsBundleData | None = None
    tangent_cocycles: dict[str, TangentCocycle] = field(default_factory=dict)
    hyper_cocycles: dict[str, HyperCocycle] = field(default_factory=dict)
    tasks: list[dict] = field(default_factory=list)
    default_tasks: dict[str, list[dict]] = field(default_factory=dict)

    def tasks_for(self, subcommand: str) -> list[dict]:
        if self.tasks:
            return self.tasks
        tasks = self.default_tasks.get(subcommand)
        if not tasks:
            raise ResolutionError(
                f"scenario {self.name!r} declares no tasks for {subcommand!r}"
            )
        return tasks


def _parse_fraction(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str) and re.fullmatch(r"-?\d+(/\d+)?", text.strip()):
        return Fraction(text.strip())
    raise ResolutionError(f"not a rational literal: {text!r}")


def _pair_key(cover: Cover, text: str) -> tuple[str, str]:
    parts = tuple(p.strip() for p in text.split(","))
    if len(parts) != 2:
        raise ResolutionError(f"overlap key must be 'a,b', got {text!r}")
    names = cover.chart_names()
    if parts[0] not in names or parts[1] not in names:
        raise ResolutionError(f"unknown chart in overlap key {text!r}")
    return cover.pair_key(*parts)


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ResolutionError(f"scenario file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        line, column = _toml_position(str(exc))
        raise ParseError(f"invalid scenario file: {exc}", line=line, column=column)
    return build_scenario(raw, name=path)


def _toml_position(message: str) -> tuple[int | None, int | None]:
    m = re.search(r"line (\d+), column (\d+)", message)
    if m:
        return int(m.group(1)), int(m.group(2))
    return None, None


def build_scenario(raw: dict, name: str = "<inline>") -> Scenario:
    version = str(raw.get("format_version", ""))
    if version not in FORMAT_VERSIONS:
        raise ResolutionError(
            f"unsupported or missing format_version {version!r} (expected one of {sorted(FORMAT_VERSIONS)})"
        )
    cover = None
    if "cover" in raw:
        cover = _build_cover(raw["cover"])
    higgs = None
    if "bundle" in raw or "higgs" in raw:
        if cover is None:
            raise ResolutionError("bundle/higgs sections need a cover")
        higgs = _build_higgs(cover, raw.get("bundle"), raw.get("higgs"))
    tangent = {}
    hyper = {}
    cocycles = raw.get("cocycles", {})
    if cocycles and cover is None:
        raise ResolutionError("cocycles need a cover")
    for cname, spec in cocycles.get("tangent", {}).items():
        tangent[cname] = _build_tangent(cover, spec)
    for cname, spec in cocycles.get("hyper", {}).items():
        if higgs is None:
            raise ResolutionError("hyper cocycles need bundle and higgs data")
        hyper[cname] = _build_hyper(cover, higgs, spec)
    tasks = raw.get("tasks", [])
    if not isinstance(tasks, list):
        raise ResolutionError("tasks must be an array of tables")
    scn = Scenario(name, cover, higgs, tangent, hyper, list(tasks))
    for t in tasks:
        if not isinstance(t, dict) or "op" not in t:
            raise ResolutionError(f"task without an op: {t!r}")
        _typecheck_task(t)
        _resolve_task_names(scn, t)
    return scn


_GEOMETRY_FREE_OPS = {
    "interpolation_suite",
    "triangle_suite",
    "pullback_suite",
    "lift_suite",
    "rees_roundtrip",
    "gm_twist",
}


def _resolve_task_names(scn: Scenario, task: dict) -> None:
    op = task["op"]
    if op not in _GEOMETRY_FREE_OPS and scn.higgs is None:
        raise ResolutionError(f"op {op!r} needs bundle and higgs data")
    for key in ("chi", "chi_a", "chi_b"):
        if key in task and task[key] not in scn.tangent_cocycles:
            raise ResolutionError(f"undeclared tangent cocycle {task[key]!r}")
    if "cocycle" in task and task["cocycle"] not in scn.hyper_cocycles:
        raise ResolutionError(f"undeclared hyper cocycle {task['cocycle']!r}")


def _build_cover(spec: dict) -> Cover:
    builtin = spec.get("builtin")
    if builtin == "p1":
        return proj_line_cover()
    if builtin == "p1-redundant":
        return proj_line_cover_redundant()
    if builtin is not None:
        raise ResolutionError(f"unknown builtin cover {builtin!r}")
    ring_spec = spec.get("ring")
    if not ring_spec or "variables" not in ring_spec:
        raise ResolutionError("cover needs builtin = ... or a ring table")
    variables = tuple(ring_spec["variables"])
    inverted = frozenset(ring_spec.get("inverted", ()))
    return affine_cover(Ring(variables, inverted))


def _build_higgs(cover: Cover, bundle_spec: dict | None, higgs_spec: dict | None) -> HiggsBundleData:
    rank = int(bundle_spec.get("rank", 1)) if bundle_spec else 1
    transitions = {}
    declared = (bundle_spec or {}).get("transitions", {})
    for key_text, rows in declared.items():
        key = _pair_key(cover, key_text)
        ring = cover.overlaps[key].ring
        try:
            transitions[key] = parse_matrix(ring, rows)
        except ParseError as exc:
            raise ParseError(f"transition {key_text!r}: {exc}", exc.line, exc.column)
    for key in cover.pair_keys():
        if key not in transitions:
            ring = cover.overlaps[key].ring
            transitions[key] = tuple(
                tuple(ring.one() if i == j else ring.zero() for j in range(rank))
                for i in range(rank)
            )
    bundle = VectorBundle(cover, rank, transitions)
    fields = {}
    declared_fields = higgs_spec or {}
    for chart in cover.charts:
        spec = declared_fields.get(chart.name)
        nvars = len(chart.ring.variables)
        if spec is None:
            zero = tuple(
                tuple(chart.ring.zero() for _ in range(rank)) for _ in range(rank)
            )
            fields[chart.name] = tuple(zero for _ in range(nvars))
            continue
        if nvars == 1 and spec and not isinstance(spec[0][0], list):
            spec = [spec]
        if len(spec) != nvars:
            raise ResolutionError(
                f"chart {chart.name} needs {nvars} field matrices, got {len(spec)}"
            )
        fields[chart.name] = tuple(parse_matrix(chart.ring, m) for m in spec)
    return HiggsBundleData(bundle, fields)


def _build_tangent(cover: Cover, spec: dict) -> TangentCocycle:
    if "coeff" in spec or "degree" in spec:
        coeff = _parse_fraction(spec.get("coeff", "1"))
        degree = int(spec.get("degree", 0))
        chi = monomial_tangent(cover, coeff, degree)
    else:
        chi_map = {}
        for key_text, literal in spec.items():
            key = _pair_key(cover, key_text)
            chi_map[key] = cover.overlaps[key].ring.parse(literal)
        for key in cover.pair_keys():
            chi_map.setdefault(key, cover.overlaps[key].ring.zero())
        chi = TangentCocycle(chi_map)
    validate_tangent(chi, cover)
    return chi


def _build_hyper(cover: Cover, higgs: HiggsBundleData, spec: dict) -> HyperCocycle:
    base = zero_cocycle(higgs)
    s = dict(base.s)
    t = dict(base.t)
    for key_text, rows in spec.get("s", {}).items():
        key = _pair_key(cover, key_text)
        s[key] = parse_matrix(cover.overlaps[key].ring, rows)
    for chart_name, rows in spec.get("t", {}).items():
        if chart_name not in cover.chart_names():
            raise ResolutionError(f"unknown chart {chart_name!r} in hyper cocycle")
        t[chart_name] = parse_matrix(cover.chart(chart_name).ring, rows)
    return HyperCocycle(s, t)


# ----------------------------------------------------------------------
# Task registry
# ----------------------------------------------------------------------

# param name -> (python type, required)
TASK_REGISTRY: dict[str, dict[str, tuple[type, bool]]] = {
    "validate_higgs": {},
    "stratification_order2": {},
    "cech_h1": {
        "twist": (int, False),
        "target": (str, False),
        "window": (str, False),
        "expect_dim": (int, False),
    },
    "hyper_dims": {
        "window": (str, False),
        "expect": (list, False),
        "expect_euler": (int, False),
    },
    "ks_cocycle": {"chi": (str, True)},
    "ks_deform": {"chi": (str, True)},
    "coboundary_witness": {
        "chi": (str, True),
        "expect_found": (bool, False),
        "window": (str, False),
    },
    "hyper_coboundary": {
        "cocycle": (str, True),
        "expect_found": (bool, False),
        "window": (str, False),
    },
    "deform_equivalent": {
        "chi_a": (str, True),
        "chi_b": (str, True),
        "expect": (bool, False),
        "window": (str, False),
    },
    "gradedness": {"chi": (str, True), "t": (str, True), "window": (str, False)},
    "integrability": {
        "chi_a": (str, True),
        "chi_b": (str, True),
        "window": (str, False),
    },
    "interpolation_suite": {"samples": (int, False)},
    "triangle_suite": {"samples": (int, False)},
    "pullback_suite": {"samples": (int, False)},
    "lift_suite": {"samples": (int, False)},
    "rees_roundtrip": {"samples": (int, False)},
    "gm_twist": {"lambdas": (list, False)},
}


def _typecheck_task(task: dict) -> None:
    op = task["op"]
    if op not in TASK_REGISTRY:
        raise ResolutionError(f"unknown op {op!r}")
    spec = TASK_REGISTRY[op]
    for key, value in task.items():
        if key in ("op", "id"):
            continue
        if key not in spec:
            raise ResolutionError(f"op {op!r} does not take parameter {key!r}")
        want, _ = spec[key]
        if want is bool:
            ok = isinstance(value, bool)
        elif want is int:
            ok = isinstance(value, int) and not isinstance(value, bool)
        else:
            ok = isinstance(value, want)
        if not ok:
            raise ResolutionError(
                f"op {op!r} parameter {key!r} must be {want.__name__}, got {type(value).__name__}"
            )
    for key, (want, required) in spec.items():
        if required and key not in task:
            raise ResolutionError(f"op {op!r} requires parameter {key!r}")


def _parse_window(text: str | None) -> DegreeWindow | None:
    if text is None:
        return None
    m = re.fullmatch(r"\s*(-?\d+)\s*:\s*(-?\d+)\s*", text)
    if not m:
        raise ResolutionError(f"window must be 'LO:HI', got {text!r}")
    return DegreeWindow(int(m.group(1)), int(m.group(2)))


@dataclass
class RunOptions:
    seed: int = 0
    window: DegreeWindow | None = None
    flip_sign: bool = False


class _TaskContext:
    def __init__(self, scenario: Scenario, options: RunOptions):
        self.scenario = scenario
        self.options = options

    def higgs(self) -> HiggsBundleData:
        if self.scenario.higgs is None:
            raise ResolutionError("this task needs bundle and higgs data")
        return self.scenario.higgs

    def tangent(self, name: str) -> TangentCocycle:
        try:
            return self.scenario.tangent_cocycles[name]
        except KeyError:
            raise ResolutionError(f"undeclared tangent cocycle {name!r}") from None

    def hyper(self, name: str) -> HyperCocycle:
        try:
            return self.scenario.hyper_cocycles[name]
        except KeyError:
            raise ResolutionError(f"undeclared hyper cocycle {name!r}") from None

    def window(self, task: dict) -> DegreeWindow | None:
        return _parse_window(task.get("window")) or self.options.window


def _run_task(ctx: _TaskContext, task: dict) -> tuple[str, dict]:
    op = task["op"]
    flip = ctx.options.flip_sign
    if op == "validate_higgs":
        report = validate_higgs(ctx.higgs())
        values = {name: status for name, status, _ in report.entries}
        if not report.ok:
            values["witness"] = report.first_failure()
        return ("pass" if report.ok else "fail"), values
    if op == "stratification_order2":
        ok = stratification_order2(ctx.higgs())
        return ("pass" if ok else "fail"), {"commutes": ok}
    if op == "cech_h1":
        h = ctx.higgs()
        window = ctx.window(task)
        if "twist" in task:
            target = line_bundle(h.cover, task["twist"])
            res = sheaf_dims(target, window)
            dim = res.h1
            values = {"twist": task["twist"], "h0": res.h0, "h1": res.h1,
                      "oracle": line_bundle_h1_monomial_count(task["twist"])}
            if values["oracle"] != dim:
                return "fail", {**values, "witness": "solver disagrees with the monomial oracle"}
        elif task.get("target", "higgs") == "bundle":
            res = sheaf_dims(h.bundle, window)
            dim = res.h1
            values = {"h0": res.h0, "h1": res.h1}
        else:
            res = hyper_dims(h, window, flip_sign=flip)
            dim = res.h1
            values = {"h0": res.h0, "h1": res.h1, "h2": res.h2}
        if "expect_dim" in task and task["expect_dim"] != dim:
            return "fail", {**values, "witness": f"expected dim {task['expect_dim']}"}
        return "pass", values
    if op == "hyper_dims":
        res = hyper_dims(ctx.higgs(), ctx.window(task), flip_sign=flip)
        values = {"dims": [res.h0, res.h1, res.h2]}
        if res.h2 is not None:
            values["euler"] = res.euler()
        try:
            independent = euler_char_higgs_complex(ctx.higgs())
        except LamconnError:
            independent = None  # degrees unreadable (non-diagonal transitions)
        if independent is not None and res.h2 is not None:
            values["euler_independent"] = independent
            if res.euler() != independent:
                return "fail", {**values, "witness": "euler mismatch against degree arithmetic"}
        if "expect" in task and list(task["expect"]) != values["dims"]:
            return "fail", {**values, "witness": f"expected dims {task['expect']}"}
        if "expect_euler" in task and (res.h2 is None or task["expect_euler"] != res.euler()):
            return "fail", {**values, "witness": f"expected euler {task['expect_euler']}"}
        return "pass", values
    if op == "ks_cocycle":
        c = ks_cocycle(ctx.higgs(), ctx.tangent(task["chi"]), flip_sign=flip)
        s_literals = {",".join(k): mat_str(m) for k, m in sorted(c.s.items())}
        return "pass", {"conditions": "verified", "s": s_literals}
    if op == "ks_deform":
        h = ctx.higgs()
        c = ks_cocycle(h, ctx.tangent(task["chi"]), flip_sign=flip)
        d = build_deformation(h, c, flip_sign=flip)
        return "pass", {"validates": True, "nilpotents": list(d.nilpotents)}
    if op == "coboundary_witness":
        h = ctx.higgs()
        c = ks_cocycle(h, ctx.tangent(task["chi"]), flip_sign=flip)
        u = is_hyper_coboundary(c, h, ctx.window(task), flip_sign=flip)
        expect = task.get("expect_found", True)
        found = u is not None
        status = "pass" if found == expect else "fail"
        values = {"found": found}
        if u is not None:
            values["primitive"] = {name: mat_str(m) for name, m in sorted(u.items())}
        return status, values
    if op == "hyper_coboundary":
        h = ctx.higgs()
        c = ctx.hyper(task["cocycle"])
        u = is_hyper_coboundary(c, h, ctx.window(task), flip_sign=flip)
        expect = task.get("expect_found", True)
        found = u is not None
        status = "pass" if found == expect else "fail"
        values = {"found": found}
        if u is not None:
            values["primitive"] = {name: mat_str(m) for name, m in sorted(u.items())}
        return status, values
    if op == "deform_equivalent":
        h = ctx.higgs()
        d1 = build_deformation(h, ks_cocycle(h, ctx.tangent(task["chi_a"]), flip_sign=flip), flip_sign=flip)
        d2 = build_deformation(h, ks_cocycle(h, ctx.tangent(task["chi_b"]), flip_sign=flip), flip_sign=flip)
        w = deformations_equivalent(d1, d2, ctx.window(task), flip_sign=flip)
        expect = task.get("expect", True)
        equivalent = w is not None
        return ("pass" if equivalent == expect else "fail"), {"equivalent": equivalent}
    if op == "gradedness":
        ok = gradedness_check(
            ctx.higgs(), ctx.tangent(task["chi"]), _parse_fraction(task["t"]),
            ctx.window(task), flip_sign=flip,
        )
        return ("pass" if ok else "fail"), {"t": task["t"], "graded": ok}
    if op == "integrability":
        ok = integrability_check(
            ctx.higgs(), ctx.tangent(task["chi_a"]), ctx.tangent(task["chi_b"]),
            ctx.window(task), flip_sign=flip,
        )
        return ("pass" if ok else "fail"), {"commutes": ok}
    if op == "interpolation_suite":
        return _interpolation_suite(ctx.options.seed, task.get("samples", 100))
    if op == "triangle_suite":
        return _triangle_suite(ctx.options.seed, task.get("samples", 50))
    if op == "pullback_suite":
        return _pullback_suite(ctx.options.seed, task.get("samples", 50))
    if op == "lift_suite":
        return _lift_suite(ctx.options.seed, task.get("samples", 100))
    if op == "rees_roundtrip":
        return _rees_roundtrip(ctx.options.seed, task.get("samples", 20))
    if op == "gm_twist":
        lambdas = [_parse_fraction(x) for x in task.get("lambdas", ["1", "2", "-1", "1/2"])]
        return _gm_twist(ctx.options.seed, lambdas)
    raise ResolutionError(f"unknown op {op!r}")  # pragma: no cover - typechecked


def _interpolation_suite(seed: int, samples: int) -> tuple[str, dict]:
    rng = random.Random(seed)
    source = Ring(("x", "y"))
    target = Ring(("z", "w"), nilpotents=("e",))
    for trial in range(samples):
        lam = Fraction(rng.randrange(-6, 7), rng.choice([1, 2, 3]))
        f0, f1 = sample_square_zero_pair(rng, source, target)
        h = interpolate_homs(f0, f1, lam)
        a = random_body_poly(rng, source, deg=3)
        b = random_body_poly(rng, source, deg=3)
        if h(a * b) != h(a) * h(b) or h(a) != f0(a) * (1 - lam) + f1(a) * lam:
            return "fail", {"witness": f"trial {trial}"}
        back = interpolate_homs(f0, f1, lam - 1)
        if not hom_affine_combination([(1 - lam, h), (lam, back)]).equal_on_generators(f0):
            return "fail", {"witness": f"trial {trial}: recovery"}
    return "pass", {"samples": samples}


def _triangle_suite(seed: int, samples: int) -> tuple[str, dict]:
    rng = random.Random(seed + 1)
    for trial in range(samples):
        conn, homs = sample_triangle(rng)
        if not verify_triangle(conn, *homs):
            return "fail", {"witness": f"sextuple {trial}"}
    return "pass", {"samples": samples}


def _pullback_suite(seed: int, samples: int) -> tuple[str, dict]:
    rng = random.Random(seed + 2)
    source = Ring(("x", "y"))
    target = Ring(("z", "w"), nilpotents=("e",))
    for trial in range(samples):
        conn = sample_integrable_rank2(rng, source)
        f0, f1 = sample_square_zero_pair(rng, source, target)
        if not intertwines_pullbacks(conn, f0, f1):
            return "fail", {"witness": f"pair {trial}"}
    return "pass", {"samples": samples}


def _lift_suite(seed: int, samples: int) -> tuple[str, dict]:
    rng = random.Random(seed + 3)
    for trial in range(samples):
        dist, t, tangent = sample_distribution_setup(rng)
        lift = horizontal_lift(dist, t, tangent)
        b_ring = dist.structure.target
        p = random_body_poly(rng, b_ring)
        q = random_body_poly(rng, b_ring)
        if lift(p * q) != lift(p) * lift(q):
            return "fail", {"witness": f"trial {trial}: not a hom"}
        if lift(p) != lift_by_splitting_route(dist, t, tangent, p):
            return "fail", {"witness": f"trial {trial}: routes disagree"}
    return "pass", {"samples": samples}


def _rees_roundtrip(seed: int, samples: int) -> tuple[str, dict]:
    rng = random.Random(seed + 4)
    ring = Ring(("x",))
    for trial in range(samples):
        p = rees._random_p1_poly(rng, ring, bound=4)
        if rees.rees_untrivialize(rees.rees_trivialize(p)) != p:
            return "fail", {"witness": f"roundtrip {trial}"}
    return "pass", {"samples": samples}


def _gm_twist(seed: int, lambdas) -> tuple[str, dict]:
    rng = random.Random(seed + 5)
    source = Ring(("x", "y"))
    target = Ring(("c", "d"), nilpotents=("e",))
    for lam in lambdas:
        for trial in range(4):
            images = {}
            for g in source.variables:
                body = random_body_poly(rng, target, deg=2).body()
                dpart = random_body_poly(rng, target, deg=1).body()
                images[g] = body + dpart * target.var("e")
            delta = RingHom(source, target, images)
            tv = random_body_poly(rng, target, deg=1).body()
            if not rees.gm_twist_check(delta, lam, tv, seed=seed + trial):
                return "fail", {"witness": f"lambda={lam}, tangent {trial}"}
    return "pass", {"lambdas": [str(x) for x in lambdas]}


def run_scenario(
    scenario: Scenario, options: RunOptions | None = None, subcommand: str = "check"
) -> Report:
    """Execute the scenario's tasks in order; failures do not abort later
    tasks; resolution problems surface as task errors."""
    options = options or RunOptions()
    report = Report(source=scenario.name, seed=options.seed)
    ctx = _TaskContext(scenario, options)
    for idx, task in enumerate(scenario.tasks_for(subcommand)):
        task_id = task.get("id", f"{idx + 1}:{task['op']}")
        start = time.perf_counter()
        try:
            status, values = _run_task(ctx, task)
        except (ResolutionError, ParseError):
            raise
        except LamconnError as exc:
            status, values = "error", {"error": str(exc)}
        elapsed = time.perf_counter() - start
        report.add(TaskRecord(task_id, task["op"], status, values, elapsed))
    return report
