"""Regenerate the golden structured report (run from the repo root)."""
import pathlib

from lamconn.scenario import RunOptions, load_scenario, run_scenario

scn = load_scenario("scenarios/p1_nilpotent.toml")
report = run_scenario(scn, RunOptions(seed=0))
report.source = "scenarios/p1_nilpotent.toml"
out = pathlib.Path("tests/golden/p1_nilpotent_report.json")
out.write_text(report.to_structured(), encoding="utf-8")
print(f"wrote {out}")
