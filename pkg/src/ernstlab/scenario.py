"""Declarative scenarios: sample a solution on a grid, transform it, check residuals.

A scenario is plain JSON::

    {
      "schema": 1,
      "family": {"tag": "x1", "A": 1.0, "B": 1.0, "C": 0.0},
      "grid": {"f_min": 0.5, "f_max": 1.5, "f_count": 8,
               "g_min": 0.5, "g_max": 1.5, "g_count": 8},
      "transforms": [{"kind": "x5", "epsilon": 0.3}],
      "outputs": ["fields", "residuals", "invariants"],
      "tolerance": 1e-9
    }

``"epd": [{"weight": 0.7, "basis": "log-sum"}, ...]`` may replace ``"family"``.
Transforms are applied in the order listed, each to the field produced so far.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DomainError
from .potentials import (
    EPD_BASIS,
    EpdCombination,
    FamilyParams,
    epd_to_ernst,
    ernst_residual,
    eval_x1_family,
    eval_x2_family,
    invariant_surface_residual,
)
from .transforms import (
    CoordinateAction,
    MoebiusMatrix,
    apply_moebius,
    apply_x5_action,
    coordinate_field,
    moebius_from_params,
    shift_scale,
    target_field,
)

__all__ = [
    "SCHEMA_VERSION",
    "FamilySpec",
    "Grid",
    "TransformStep",
    "Scenario",
    "ScenarioResult",
    "build_field",
    "run_scenario",
    "write_outputs",
]

SCHEMA_VERSION = 1
OUTPUT_KINDS = ("fields", "residuals", "invariants")
CSV_HEADER = ("f", "g", "K", "L", "resK", "resL")

# kind -> (parameter names, default values)
TRANSFORM_KINDS = {
    "coordinate-action": (("alpha", "beta"), (0.0, 0.0)),
    "shift-scale": (("gamma", "delta"), (0.0, 0.0)),
    "x5": (("epsilon",), (None,)),
    "moebius": (("a", "b", "c", "d"), (None, None, None, None)),
    "moebius-from-params": (("gamma", "delta", "epsilon"), (0.0, 0.0, 0.0)),
}


def _num(where, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{where}: must be finite")
    return float(value)


def _int(where, value):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    return value


def _keys(where, d, allowed, required=()):
    if not isinstance(d, dict):
        raise ConfigError(f"{where}: expected an object")
    extra = set(d) - set(allowed)
    if extra:
        raise ConfigError(f"{where}: unknown keys {sorted(extra)}")
    missing = [k for k in required if k not in d]
    if missing:
        raise ConfigError(f"{where}: missing keys {missing}")


@dataclass(frozen=True)
class FamilySpec:
    tag: str
    A: float
    B: float
    C: float = 0.0

    def __post_init__(self):
        if self.tag not in ("x1", "x2"):
            raise ConfigError(f"family.tag: expected 'x1' or 'x2', got {self.tag!r}")
        try:
            FamilyParams(self.A, self.B, self.C)
        except ValueError as exc:
            raise ConfigError(f"family: {exc}") from None

    @property
    def params(self) -> FamilyParams:
        return FamilyParams(self.A, self.B, self.C)

    def to_dict(self):
        return {"tag": self.tag, "A": self.A, "B": self.B, "C": self.C}

    @classmethod
    def from_dict(cls, d):
        _keys("family", d, ("tag", "A", "B", "C"), ("tag", "A", "B"))
        return cls(d["tag"], _num("family.A", d["A"]), _num("family.B", d["B"]), _num("family.C", d.get("C", 0.0)))


@dataclass(frozen=True)
class Grid:
    f_min: float
    f_max: float
    f_count: int
    g_min: float
    g_max: float
    g_count: int

    def __post_init__(self):
        for axis in ("f", "g"):
            lo, hi, n = (getattr(self, f"{axis}_{k}") for k in ("min", "max", "count"))
            if n < 2:
                raise ConfigError(f"grid.{axis}_count must be at least 2")
            if not lo < hi:
                raise ConfigError(f"grid: {axis}_min must be below {axis}_max")

    def axes(self):
        return np.linspace(self.f_min, self.f_max, self.f_count), np.linspace(self.g_min, self.g_max, self.g_count)

    def to_dict(self):
        return {k: getattr(self, k) for k in ("f_min", "f_max", "f_count", "g_min", "g_max", "g_count")}

    @classmethod
    def from_dict(cls, d):
        names = ("f_min", "f_max", "f_count", "g_min", "g_max", "g_count")
        _keys("grid", d, names, names)
        return cls(
            *(
                _int(f"grid.{k}", d[k]) if k.endswith("count") else _num(f"grid.{k}", d[k])
                for k in names
            )
        )


@dataclass(frozen=True)
class TransformStep:
    kind: str
    params: tuple  # values in the order of TRANSFORM_KINDS[kind]

    def __post_init__(self):
        if self.kind not in TRANSFORM_KINDS:
            raise ConfigError(f"transform kind {self.kind!r} not in {sorted(TRANSFORM_KINDS)}")
        if len(self.params) != len(TRANSFORM_KINDS[self.kind][0]):
            raise ConfigError(f"transform {self.kind}: wrong number of parameters")
        try:
            self.build()
        except ValueError as exc:
            raise ConfigError(f"transform {self.kind}: {exc}") from None

    def named(self):
        return dict(zip(TRANSFORM_KINDS[self.kind][0], self.params))

    def build(self):
        """``("coord", CoordinateAction)`` or ``("target", Z -> Z')``."""
        p = self.named()
        if self.kind == "coordinate-action":
            return "coord", CoordinateAction.from_params(p["alpha"], p["beta"])
        if self.kind == "shift-scale":
            return "target", lambda Z: shift_scale(p["gamma"], p["delta"], Z)
        if self.kind == "x5":
            return "target", lambda Z: apply_x5_action(p["epsilon"], Z)
        m = MoebiusMatrix(**p) if self.kind == "moebius" else moebius_from_params(**p)
        return "target", lambda Z: apply_moebius(m, Z)

    def to_dict(self):
        return {"kind": self.kind, **self.named()}

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "kind" not in d:
            raise ConfigError("each transform needs a 'kind'")
        kind = d["kind"]
        if kind not in TRANSFORM_KINDS:
            raise ConfigError(f"transform kind {kind!r} not in {sorted(TRANSFORM_KINDS)}")
        names, defaults = TRANSFORM_KINDS[kind]
        _keys(f"transform {kind}", d, ("kind", *names), [n for n, v in zip(names, defaults) if v is None])
        return cls(kind, tuple(_num(f"transform {kind}.{n}", d.get(n, v)) for n, v in zip(names, defaults)))


@dataclass(frozen=True)
class Scenario:
    grid: Grid
    family: FamilySpec | None = None
    epd: EpdCombination | None = None
    transforms: tuple = ()
    outputs: tuple = OUTPUT_KINDS
    tolerance: float = 1e-9
    schema: int = SCHEMA_VERSION

    def __post_init__(self):
        if (self.family is None) == (self.epd is None):
            raise ConfigError("give exactly one of 'family' or 'epd'")
        if self.schema != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema {self.schema!r}; expected {SCHEMA_VERSION}")
        bad = set(self.outputs) - set(OUTPUT_KINDS)
        if bad:
            raise ConfigError(f"unknown outputs {sorted(bad)}")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")
        self._check_domain()

    def _check_domain(self):
        # only the untransformed seed can be checked statically
        g = self.grid
        needs_quadrant = (self.family is not None and self.family.tag == "x2") or (
            self.epd is not None and any(t == "arctan-ratio" for _, t in self.epd.terms)
        )
        if needs_quadrant and not (g.f_min > 0 and g.g_min > 0):
            raise ConfigError("grid must lie in f > 0, g > 0 for this seed")
        if not g.f_min + g.g_min > 0:
            raise ConfigError("grid must lie in f + g > 0")

    def to_dict(self):
        out = {"schema": self.schema}
        if self.family is not None:
            out["family"] = self.family.to_dict()
        else:
            out["epd"] = [{"weight": w, "basis": t} for w, t in self.epd.terms]
        out["grid"] = self.grid.to_dict()
        out["transforms"] = [t.to_dict() for t in self.transforms]
        out["outputs"] = list(self.outputs)
        out["tolerance"] = self.tolerance
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d):
        _keys("scenario", d, ("schema", "family", "epd", "grid", "transforms", "outputs", "tolerance"), ("grid",))
        schema = d.get("schema", SCHEMA_VERSION)
        if schema != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema {schema!r}; expected {SCHEMA_VERSION}")
        epd = None
        if "epd" in d:
            if not isinstance(d["epd"], list):
                raise ConfigError("epd: expected a list of {weight, basis}")
            pairs = []
            for i, term in enumerate(d["epd"]):
                _keys(f"epd[{i}]", term, ("weight", "basis"), ("weight", "basis"))
                if term["basis"] not in EPD_BASIS:
                    raise ConfigError(f"epd[{i}].basis must be one of {EPD_BASIS}")
                pairs.append((_num(f"epd[{i}].weight", term["weight"]), term["basis"]))
            epd = EpdCombination.of(pairs)
        transforms = d.get("transforms", [])
        if not isinstance(transforms, list):
            raise ConfigError("transforms: expected a list")
        outputs = d.get("outputs", list(OUTPUT_KINDS))
        if not isinstance(outputs, list):
            raise ConfigError("outputs: expected a list")
        return cls(
            grid=Grid.from_dict(d["grid"]),
            family=FamilySpec.from_dict(d["family"]) if "family" in d else None,
            epd=epd,
            transforms=tuple(TransformStep.from_dict(t) for t in transforms),
            outputs=tuple(outputs),
            tolerance=_num("tolerance", d.get("tolerance", 1e-9)),
            schema=schema,
        )

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path):
        return cls.from_json(Path(path).read_text())


def build_field(sc: Scenario):
    """Callable ``(f, g) -> PotentialSample`` for the seed with all transforms applied."""
    if sc.family is not None:
        p = sc.family.params
        seed = eval_x1_family if sc.family.tag == "x1" else eval_x2_family
        fld = lambda f, g: seed(p, f, g)  # noqa: E731
    else:
        fld = lambda f, g: epd_to_ernst(sc.epd.evaluate(f, g))  # noqa: E731
    for step in sc.transforms:
        kind, op = step.build()
        fld = coordinate_field(fld, op) if kind == "coord" else target_field(fld, op)
    return fld


def _invariant_generator(sc: Scenario):
    if sc.family is not None:
        return "X1" if sc.family.tag == "x1" else "X2"
    tags = {t for w, t in sc.epd.terms if w} - {"const"}
    if tags <= {"log-sum"}:
        return "X1"
    if tags <= {"arctan-ratio"}:
        return "X2"
    return None


@dataclass
class ScenarioResult:
    scenario: Scenario
    f: np.ndarray
    g: np.ndarray
    K: np.ndarray
    L: np.ndarray
    resK: np.ndarray
    resL: np.ndarray
    invariant_checks: list = field(default_factory=list)

    @property
    def max_abs_resK(self):
        return float(np.max(np.abs(self.resK)))

    @property
    def max_abs_resL(self):
        return float(np.max(np.abs(self.resL)))

    @property
    def ok(self):
        tol = self.scenario.tolerance
        return self.max_abs_resK <= tol and self.max_abs_resL <= tol

    def summary(self):
        return {
            "max_abs_resK": self.max_abs_resK,
            "max_abs_resL": self.max_abs_resL,
            "tolerance": self.scenario.tolerance,
            "within_tolerance": self.ok,
            "invariant_checks": self.invariant_checks,
        }

    def csv_text(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        cols = (self.f, self.g, self.K, self.L, self.resK, self.resL)
        for row in zip(*(c.ravel() for c in cols)):
            w.writerow([f"{x:.17g}" for x in row])
        return buf.getvalue()


def _threads(n_rows):
    env = os.environ.get("ERNSTLAB_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ConfigError(f"ERNSTLAB_THREADS must be an integer, got {env!r}") from None
        if cap < 1:
            raise ConfigError("ERNSTLAB_THREADS must be at least 1")
    return max(1, min(cap, n_rows))


def _locate(fld, f, g_axis, exc):
    """Re-raise a domain failure on a grid row with the offending node."""
    for g in g_axis:
        try:
            fld(float(f), float(g))
        except DomainError:
            return DomainError("run_scenario", (float(f), float(g)), str(exc))
    return exc


def run_scenario(sc: Scenario) -> ScenarioResult:
    """Evaluate the scenario on its grid; rows are evaluated concurrently.

    Raises:
        DomainError: naming the first grid node ``(f, g)`` where the field is undefined.
    """
    fld = build_field(sc)
    f_axis, g_axis = sc.grid.axes()
    want_inv = "invariants" in sc.outputs
    gen = _invariant_generator(sc) if want_inv else None

    def row(f):
        fs = np.full_like(g_axis, f)
        try:
            s = fld(fs, g_axis)
            rK, rL = ernst_residual(s, fs, g_axis)
            inv = invariant_surface_residual(fld, gen, fs, g_axis) if gen else None
        except DomainError as exc:
            raise _locate(fld, f, g_axis, exc) from None
        return np.real(s.K.value), np.real(s.L.value), np.real(rK), np.real(rL), inv

    with ThreadPoolExecutor(max_workers=_threads(len(f_axis))) as pool:
        rows = list(pool.map(row, f_axis))  # map preserves row order

    F, G = np.meshgrid(f_axis, g_axis, indexing="ij")
    K, L, rK, rL = (np.vstack([r[i] for r in rows]) for i in range(4))
    checks = []
    if gen:
        iK = max(float(np.max(np.abs(r[4][0]))) for r in rows)
        iL = max(float(np.max(np.abs(r[4][1]))) for r in rows)
        checks.append(
            {"generator": gen, "max_abs_K": iK, "max_abs_L": iL, "holds": max(iK, iL) <= sc.tolerance}
        )
    return ScenarioResult(sc, F, G, K, L, rK, rL, checks)


def write_outputs(result: ScenarioResult, out_dir, stem="scenario"):
    """Write ``<stem>.csv`` (when fields or residuals are requested) and ``<stem>.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if {"fields", "residuals"} & set(result.scenario.outputs):
        p = out / f"{stem}.csv"
        p.write_text(result.csv_text())
        written.append(p)
    p = out / f"{stem}.json"
    p.write_text(json.dumps(result.summary(), indent=2) + "\n")
    written.append(p)
    return written
