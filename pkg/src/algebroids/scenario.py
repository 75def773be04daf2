"""Scenario files: YAML descriptions of one desk-scale instance plus the checks to run on it."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Mapping

import yaml

from . import lie
from .atiyah import AtiyahModel, UnipotentGroup
from .forms import FormSpace, MixedForm, endo_values, kernel_values, scalar_values
from .lie import GroupElementField, LieAlgebra, Representation
from .poly import DEFAULT_DEGREE_CAP
from .serialize import RecordError, form_from_records, lie_algebra_from_record, poly_from


class ScenarioError(ValueError):
    """Configuration or parse problem (exit status 2)."""


@dataclass(frozen=True)
class AtlasSpec:
    charts: tuple[str, ...]
    family: dict  # (i, j) -> GroupElementField
    perturb: tuple[tuple[str, str], int, tuple] | None  # pair, direction, kernel coordinates


@dataclass
class Scenario:
    name: str
    d: int
    alg: LieAlgebra
    rep: Representation
    checks: list[str]
    seed: int = 0
    samples: int = 25
    degree_cap: int | None = DEFAULT_DEGREE_CAP
    potential: MixedForm | None = None
    gauge_elements: list[GroupElementField] = field(default_factory=list)
    group_n: int | None = None
    atlas: AtlasSpec | None = None
    ncg_n: int | None = None
    source: str = ""

    def space(self, kind: str = "kernel") -> FormSpace:
        if kind == "scalar":
            return FormSpace(self.d, scalar_values(self.alg))
        if kind == "kernel":
            return FormSpace(self.d, kernel_values(self.alg))
        if kind == "endo":
            return FormSpace(self.d, endo_values(self.rep))
        raise ValueError(kind)

    @cached_property
    def atiyah(self) -> AtiyahModel:
        return AtiyahModel(self.d, UnipotentGroup(self.group_n or 3))

    @property
    def matrix_n(self) -> int:
        """Matrix size for the derivation-based checks."""
        if self.ncg_n:
            return self.ncg_n
        if self.alg.name.startswith("sl") and self.alg.matrix_size:
            return self.alg.matrix_size
        return 2


_NAMED = {
    "heisenberg": lambda rec: lie.make_heisenberg(),
    "sl": lambda rec: lie.make_sl(int(rec.get("n", 2))),
    "sl2": lambda rec: lie.make_sl(2),
    "sl3": lambda rec: lie.make_sl(3),
    "abelian": lambda rec: lie.make_abelian(int(rec.get("dim", 1))),
    "upper_nilpotent": lambda rec: lie.make_upper_nilpotent(int(rec.get("n", 3))),
}


def _lie_algebra(rec: Any) -> LieAlgebra:
    if isinstance(rec, str):
        rec = {"name": rec}
    if not isinstance(rec, Mapping):
        raise ScenarioError("lie_algebra: expected a name or a record")
    if "structure_constants" in rec:
        try:
            return lie_algebra_from_record(rec, "lie_algebra")
        except RecordError as exc:
            raise ScenarioError(str(exc)) from None
    name = rec.get("name")
    if name not in _NAMED:
        raise ScenarioError(f"lie_algebra: unknown algebra {name!r} (known: {', '.join(sorted(_NAMED))})")
    try:
        return _NAMED[name](rec)
    except ValueError as exc:
        raise ScenarioError(f"lie_algebra: {exc}") from None


def _representation(alg: LieAlgebra, rec: Any) -> Representation:
    if rec is None:
        rec = "defining" if alg.matrix_basis is not None else "adjoint"
    if rec == "defining":
        if alg.matrix_basis is None:
            raise ScenarioError("representation: the algebra has no matrix basis")
        rep = lie.defining_rep(alg)
    elif rec == "adjoint":
        rep = lie.adjoint_rep(alg)
    elif isinstance(rec, Mapping) and "matrices" in rec:
        from .serialize import _fraction

        mats = tuple(
            tuple(_fraction(x, f"representation.matrices[{i}]") for row in m for x in row)
            for i, m in enumerate(rec["matrices"])
        )
        rep = Representation(alg, mats, "explicit")
    else:
        raise ScenarioError(f"representation: expected defining, adjoint or matrices, got {rec!r}")
    try:
        lie.check_representation(rep)
    except ValueError as exc:
        raise ScenarioError(f"representation: {exc}") from None
    return rep


def _group_element(rec: Any, n: int, d: int, path: str) -> GroupElementField:
    shears = rec.get("shears") if isinstance(rec, Mapping) else rec
    if not isinstance(shears, list):
        raise ScenarioError(f"{path}: expected a list of [i, j, polynomial] shears")
    factors = []
    for idx, s in enumerate(shears):
        if not isinstance(s, list) or len(s) != 3:
            raise ScenarioError(f"{path}[{idx}]: expected [i, j, polynomial]")
        i, j = int(s[0]) - 1, int(s[1]) - 1
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise ScenarioError(f"{path}[{idx}]: bad shear position ({s[0]}, {s[1]})")
        try:
            p = poly_from(str(s[2]), d, f"{path}[{idx}]")
        except RecordError as exc:
            raise ScenarioError(str(exc)) from None
        factors.append((i, j, p))
    g = lie.shear_product(factors, n, d)
    bad = lie.group_element_defects(g)
    if bad:
        raise ScenarioError(f"{path}: {bad[0]}")
    return g


def _atlas(rec: Mapping, alg: LieAlgebra, d: int) -> AtlasSpec:
    if alg.matrix_basis is None:
        raise ScenarioError("atlas: transition functions need a matrix Lie algebra")
    n = alg.matrix_size
    charts = tuple(str(c) for c in rec.get("charts", []))
    if not charts or len(set(charts)) != len(charts):
        raise ScenarioError("atlas.charts: need a non-empty list of distinct chart ids")
    family = {}
    for idx, t in enumerate(rec.get("transitions", []) or []):
        pair = tuple(str(c) for c in t.get("pair", []))
        if len(pair) != 2 or any(c not in charts for c in pair):
            raise ScenarioError(f"atlas.transitions[{idx}].pair: expected two known chart ids")
        family[pair] = _group_element(t, n, d, f"atlas.transitions[{idx}].shears")
    perturb = None
    if rec.get("perturb") is not None:
        p = rec["perturb"]
        pair = tuple(str(c) for c in p.get("pair", []))
        if len(pair) != 2 or pair[0] == pair[1] or any(c not in charts for c in pair):
            raise ScenarioError("atlas.perturb.pair: expected two distinct known chart ids")
        direction = int(p.get("direction", 1)) - 1
        if not 0 <= direction < d:
            raise ScenarioError("atlas.perturb.direction out of range")
        value = p.get("value")
        if not isinstance(value, list) or len(value) != alg.dim:
            raise ScenarioError(f"atlas.perturb.value: expected {alg.dim} coefficients")
        try:
            coeffs = tuple(poly_from(str(v), d, "atlas.perturb.value") for v in value)
        except RecordError as exc:
            raise ScenarioError(str(exc)) from None
        perturb = (pair, direction, coeffs)
    return AtlasSpec(charts, family, perturb)


def parse_scenario(data: Any, source: str = "<memory>") -> Scenario:
    try:
        return _parse(data, source)
    except ScenarioError:
        raise
    except (TypeError, ValueError, AttributeError) as exc:
        raise ScenarioError(f"{source}: malformed scenario ({exc})") from None


def _parse(data: Any, source: str) -> Scenario:
    from .checks import REGISTRY

    if not isinstance(data, Mapping):
        raise ScenarioError(f"{source}: top level must be a mapping")
    base = data.get("base", {}) or {}
    try:
        d = int(base.get("dim", 2))
    except (TypeError, ValueError):
        raise ScenarioError("base.dim: expected an integer") from None
    if d < 1:
        raise ScenarioError("base.dim: must be at least 1")
    cap = base.get("degree_cap", DEFAULT_DEGREE_CAP)
    alg = _lie_algebra(data.get("lie_algebra", "sl2"))
    rep = _representation(alg, data.get("representation"))
    checks = data.get("checks") or []
    if not isinstance(checks, list) or not checks:
        raise ScenarioError("checks: expected a non-empty list of check names")
    unknown = [c for c in checks if c not in REGISTRY]
    if unknown:
        raise ScenarioError(f"checks: unknown check {unknown[0]!r}")
    sc = Scenario(
        name=str(data.get("name", Path(source).stem)),
        d=d,
        alg=alg,
        rep=rep,
        checks=[str(c) for c in checks],
        seed=int(data.get("seed", 0)),
        samples=int(data.get("samples", 25)),
        degree_cap=None if cap is None else int(cap),
        source=source,
    )
    if data.get("potential") is not None:
        try:
            A = form_from_records(sc.space("kernel"), data["potential"], "potential", degree=1)
        except RecordError as exc:
            raise ScenarioError(str(exc)) from None
        if A.bidegrees() - {(1, 0)}:
            raise ScenarioError("potential: only dx components are allowed")
        sc.potential = A
    n_mat = alg.matrix_size
    for idx, g in enumerate(data.get("gauge_elements", []) or []):
        size = int(g.get("n", n_mat or 2)) if isinstance(g, Mapping) else (n_mat or 2)
        sc.gauge_elements.append(_group_element(g, size, d, f"gauge_elements[{idx}]"))
    if data.get("group") is not None:
        sc.group_n = int((data["group"] or {}).get("n", 3))
        if sc.group_n < 2:
            raise ScenarioError("group.n: must be at least 2")
    if data.get("ncg") is not None:
        sc.ncg_n = int((data["ncg"] or {}).get("n", 2))
        if sc.ncg_n < 2:
            raise ScenarioError("ncg.n: must be at least 2")
    if data.get("atlas") is not None:
        sc.atlas = _atlas(data["atlas"], alg, d)
    return sc


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark else str(path)
        raise ScenarioError(f"{where}: YAML parse error: {getattr(exc, 'problem', exc)}") from None
    return parse_scenario(data, str(path))


def corpus_dir() -> Path:
    return Path(__file__).parent / "scenarios"


def corpus_paths() -> list[Path]:
    return sorted(corpus_dir().glob("*.yaml"))
