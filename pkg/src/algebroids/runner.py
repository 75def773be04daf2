"""Execute a scenario's checks and assemble a deterministic report."""

from __future__ import annotations

import contextvars
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import yaml

from .checks import REGISTRY, CheckFailed
from .poly import DegreeCapError, set_degree_cap
from .sampling import rng_for
from .scenario import Scenario


@dataclass
class CheckResult:
    name: str
    status: str  # pass | fail | config_error
    detail: str
    witness: object = None
    elapsed: float = 0.0

    def to_record(self, timings: bool) -> dict:
        rec = {"name": self.name, "status": self.status, "detail": self.detail}
        if self.witness is not None:
            rec["witness"] = self.witness
        if timings:
            rec["elapsed_ms"] = round(self.elapsed * 1000, 1)
        return rec


@dataclass
class Report:
    scenario: str
    seed: int
    samples: int
    degree_cap: int | None
    results: list[CheckResult] = field(default_factory=list)

    @property
    def status(self) -> str:
        if any(r.status == "config_error" for r in self.results):
            return "config_error"
        return "pass" if all(r.status == "pass" for r in self.results) else "fail"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1, "config_error": 2}[self.status]

    def to_record(self, timings: bool = False) -> dict:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "samples": self.samples,
            "degree_cap": self.degree_cap,
            "status": self.status,
            "checks": [r.to_record(timings) for r in self.results],
        }


def _run_check(name: str, sc: Scenario) -> CheckResult:
    set_degree_cap(sc.degree_cap)
    rng = rng_for(sc.seed, name)
    start = time.perf_counter()
    try:
        detail = REGISTRY[name].run(sc, rng) or ""
        status, witness = "pass", None
    except CheckFailed as exc:
        status, detail, witness = "fail", exc.detail, exc.witness
    except DegreeCapError as exc:
        status, detail, witness = "config_error", f"degree cap: {exc}", None
    except Exception as exc:  # noqa: BLE001 - reported, never swallowed silently
        status, detail, witness = "fail", f"{type(exc).__name__}: {exc}", None
    return CheckResult(name, status, detail, witness, time.perf_counter() - start)


def run_scenario(sc: Scenario, jobs: int = 1) -> Report:
    """Run every named check; results come back in registry order regardless of scheduling."""
    names = [n for n in REGISTRY if n in sc.checks]
    if jobs <= 1:
        results = [contextvars.copy_context().run(_run_check, n, sc) for n in names]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(contextvars.copy_context().run, _run_check, n, sc) for n in names]
            results = [f.result() for f in futures]
    return Report(sc.name, sc.seed, sc.samples, sc.degree_cap, results)


def render(records: list[dict], fmt: str) -> str:
    payload = records[0] if len(records) == 1 else {"reports": records}
    if fmt == "json":
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    return yaml.safe_dump(payload, sort_keys=False, allow_unicode=True, width=4096)
