"""Problem-instance data model: supplier catalogs, durations, economics, policy.

A scenario is loaded from a JSON document (see ``README.md`` for the schema),
validated, and optionally transformed by overrides for sensitivity runs.
Everything here is immutable once built.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields, replace
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping

LEAD_POLICIES = ("max_over_groups", "sum_as_written")
COMPONENTS = ("A", "B", "C", "D")


class ScenarioError(ValueError):
    """Raised when a scenario document or override is malformed."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class SupplierOfferSeries:
    price: float
    lead_days: float
    failure_rate: float
    repair_rate: float
    nominal_reliability: float


@dataclass(frozen=True)
class SupplierOfferParallel:
    unit_price_single: float
    unit_price_pair: float
    unit_price_triple: float
    lead_single: float
    lead_pair: float
    lead_triple: float
    failure_rate: float
    repair_rate: float
    nominal_reliability: float


@dataclass(frozen=True)
class Scenario:
    series_catalog: tuple[SupplierOfferSeries, ...]
    parallel_catalog: tuple[SupplierOfferParallel, ...]
    process_times_series: tuple[float, ...]
    process_times_parallel: tuple[float, ...]
    deadline: float
    budget: float
    daily_penalty: float
    alpha: float
    beta: float
    marr: float
    min_reliability: float
    hours_per_year: float = 8760.0
    lead_policy: str = "max_over_groups"
    discount_enabled: bool = True
    # Daily SD/HC costs from the source tables. Carried along, never used.
    daily_cost_shutdown: float | None = None
    daily_cost_half_capacity: float | None = None

    @property
    def n_suppliers(self) -> int:
        return len(self.series_catalog)


@dataclass(frozen=True)
class Assignment:
    """Supplier index (1-based) chosen for each of A, B, C, D."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def from_tuple(cls, t: Iterable[int]) -> "Assignment":
        a, b, c, d = t
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def parse(cls, text: str) -> "Assignment":
        """Parse ``"A=3,B=1,C=2,D=1"``."""
        picked: dict[str, int] = {}
        for part in text.split(","):
            key, sep, value = part.partition("=")
            key = key.strip().upper()
            if not sep or key not in COMPONENTS or key in picked:
                raise ValueError(f"malformed assignment {text!r}")
            try:
                picked[key] = int(value.strip())
            except ValueError:
                raise ValueError(f"malformed assignment {text!r}") from None
        if set(picked) != set(COMPONENTS):
            raise ValueError(f"assignment must name each of A, B, C, D: {text!r}")
        return cls(*(picked[k] for k in COMPONENTS))

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def parallel(self) -> tuple[int, int, int]:
        return (self.b, self.c, self.d)

    def check(self, s: Scenario) -> None:
        for name, j in zip(COMPONENTS, self.as_tuple()):
            if not 1 <= j <= s.n_suppliers:
                raise ValueError(
                    f"supplier index {j} for component {name} outside 1..{s.n_suppliers}"
                )

    def __str__(self) -> str:
        return ",".join(f"{k}={j}" for k, j in zip(COMPONENTS, self.as_tuple()))


@dataclass(frozen=True)
class Violation:
    severity: str  # "error" | "warning" | "note"
    path: str
    message: str


# --- parsing -----------------------------------------------------------------

_SERIES_KEYS = {
    "price": "price",
    "lead_days": "lead_days",
    "lambda": "failure_rate",
    "mu": "repair_rate",
    "reliability": "nominal_reliability",
}
_PARALLEL_KEYS = {
    "price_single": "unit_price_single",
    "price_pair": "unit_price_pair",
    "price_triple": "unit_price_triple",
    "lead_single": "lead_single",
    "lead_pair": "lead_pair",
    "lead_triple": "lead_triple",
    "lambda": "failure_rate",
    "mu": "repair_rate",
    "reliability": "nominal_reliability",
}
_ECONOMICS_REQUIRED = (
    "deadline", "budget", "daily_penalty", "alpha", "beta", "marr", "min_reliability",
)
_ECONOMICS_OPTIONAL = ("hours_per_year", "daily_cost_shutdown", "daily_cost_half_capacity")
_NONNEGATIVE_ECONOMICS = ("deadline", "budget", "daily_penalty", "alpha", "beta")
_DURATION_FIELDS = {"lead_days", "lead_single", "lead_pair", "lead_triple"}


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(path, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ScenarioError(path, "must be finite")
    return float(value)


def _require(obj: Any, key: str, path: str) -> Any:
    if not isinstance(obj, Mapping):
        raise ScenarioError(path, "expected an object")
    if key not in obj:
        raise ScenarioError(f"{path}.{key}" if path else key, "missing key")
    return obj[key]


def _offers(doc: Mapping, key: str, keymap: dict[str, str], cls):
    raw = _require(doc, key, "")
    if not isinstance(raw, list) or not raw:
        raise ScenarioError(key, "expected a non-empty array")
    offers = []
    for j, item in enumerate(raw):
        path = f"{key}[{j}]"
        kwargs = {}
        for src, dst in keymap.items():
            val = _number(_require(item, src, path), f"{path}.{src}")
            if dst in _DURATION_FIELDS and val < 0:
                raise ScenarioError(f"{path}.{src}", "negative duration")
            kwargs[dst] = val
        offers.append(cls(**kwargs))
    return tuple(offers)


def _durations(doc: Mapping, key: str) -> tuple[float, ...]:
    raw = _require(doc, key, "")
    if not isinstance(raw, list):
        raise ScenarioError(key, "expected an array")
    out = []
    for k, v in enumerate(raw):
        val = _number(v, f"{key}[{k}]")
        if val < 0:
            raise ScenarioError(f"{key}[{k}]", "negative duration")
        out.append(val)
    return tuple(out)


def parse_scenario(document: Mapping[str, Any] | str) -> Scenario:
    """Build a :class:`Scenario` from a parsed JSON object or JSON text.

    Raises :class:`ScenarioError` naming the offending path on schema problems.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ScenarioError("<document>", f"invalid JSON: {exc}") from None
    if not isinstance(document, Mapping):
        raise ScenarioError("<document>", "top level must be an object")

    series = _offers(document, "suppliers_series", _SERIES_KEYS, SupplierOfferSeries)
    parallel = _offers(document, "suppliers_parallel", _PARALLEL_KEYS, SupplierOfferParallel)
    if len(series) != len(parallel):
        raise ScenarioError(
            "suppliers_parallel",
            f"expected {len(series)} offers to match suppliers_series, got {len(parallel)}",
        )

    econ = _require(document, "economics", "")
    if not isinstance(econ, Mapping):
        raise ScenarioError("economics", "expected an object")
    values: dict[str, Any] = {}
    for key in _ECONOMICS_REQUIRED:
        values[key] = _number(_require(econ, key, "economics"), f"economics.{key}")
    for key in _ECONOMICS_OPTIONAL:
        if econ.get(key) is not None:
            values[key] = _number(econ[key], f"economics.{key}")
    for key in _NONNEGATIVE_ECONOMICS:
        if values[key] < 0:
            raise ScenarioError(f"economics.{key}", "must be nonnegative")
    unknown = set(econ) - set(_ECONOMICS_REQUIRED) - set(_ECONOMICS_OPTIONAL)
    if unknown:
        raise ScenarioError(f"economics.{sorted(unknown)[0]}", "unknown key")

    policy = document.get("policy") or {}
    if not isinstance(policy, Mapping):
        raise ScenarioError("policy", "expected an object")
    if "lead_policy" in policy:
        values["lead_policy"] = _lead_policy(policy["lead_policy"], "policy.lead_policy")
    if "discount_enabled" in policy:
        flag = policy["discount_enabled"]
        if not isinstance(flag, bool):
            raise ScenarioError("policy.discount_enabled", f"expected a boolean, got {flag!r}")
        values["discount_enabled"] = flag

    return Scenario(
        series_catalog=series,
        parallel_catalog=parallel,
        process_times_series=_durations(document, "process_times_series"),
        process_times_parallel=_durations(document, "process_times_parallel"),
        **values,
    )


def _lead_policy(value: Any, path: str) -> str:
    if isinstance(value, str):
        norm = value.strip().lower().replace("-", "_")
        if norm == "max":
            norm = "max_over_groups"
        if norm in LEAD_POLICIES:
            return norm
    raise ScenarioError(path, f"expected one of {', '.join(LEAD_POLICIES)}, got {value!r}")


def load_scenario(path: str | Path) -> Scenario:
    text = Path(path).read_text(encoding="utf-8")
    return parse_scenario(text)


def paper_scenario() -> Scenario:
    """The bundled Tables I-IV instance (three suppliers)."""
    text = resources.files("supplier_alloc").joinpath("data/paper.json").read_text("utf-8")
    return parse_scenario(text)


def serialize_scenario(s: Scenario) -> dict[str, Any]:
    """Inverse of :func:`parse_scenario`; the result is JSON-serializable."""
    series_inv = {v: k for k, v in _SERIES_KEYS.items()}
    parallel_inv = {v: k for k, v in _PARALLEL_KEYS.items()}
    econ = {k: getattr(s, k) for k in _ECONOMICS_REQUIRED}
    econ["hours_per_year"] = s.hours_per_year
    for k in ("daily_cost_shutdown", "daily_cost_half_capacity"):
        if getattr(s, k) is not None:
            econ[k] = getattr(s, k)
    return {
        "suppliers_series": [
            {series_inv[f.name]: getattr(o, f.name) for f in fields(o)} for o in s.series_catalog
        ],
        "suppliers_parallel": [
            {parallel_inv[f.name]: getattr(o, f.name) for f in fields(o)}
            for o in s.parallel_catalog
        ],
        "process_times_series": list(s.process_times_series),
        "process_times_parallel": list(s.process_times_parallel),
        "economics": econ,
        "policy": {"lead_policy": s.lead_policy, "discount_enabled": s.discount_enabled},
    }


# --- validation --------------------------------------------------------------

def validate_scenario(s: Scenario, notes: bool = False) -> list[Violation]:
    """Check invariants. Hard problems are ``error``; order-size monotonicity
    breaks are ``warning``. With ``notes=True`` informational findings (inert
    fields) are appended as well.
    """
    out: list[Violation] = []

    def err(path: str, msg: str) -> None:
        out.append(Violation("error", path, msg))

    if s.n_suppliers < 1:
        err("suppliers_series", "at least one supplier is required")
    if len(s.parallel_catalog) != len(s.series_catalog):
        err("suppliers_parallel", "catalog lengths differ")

    for j, o in enumerate(s.series_catalog):
        p = f"suppliers_series[{j}]"
        if o.price < 0:
            err(f"{p}.price", "negative price")
        if o.lead_days < 0:
            err(f"{p}.lead_days", "negative lead time")
        if o.failure_rate < 0:
            err(f"{p}.lambda", "negative failure rate")
        if not o.repair_rate > 0:
            err(f"{p}.mu", "repair rate must be positive")
        if not 0 <= o.nominal_reliability <= 1:
            err(f"{p}.reliability", "must lie in [0, 1]")

    for j, o in enumerate(s.parallel_catalog):
        p = f"suppliers_parallel[{j}]"
        for name in ("price_single", "price_pair", "price_triple"):
            if getattr(o, "unit_" + name) < 0:
                err(f"{p}.{name}", "negative price")
        for name in ("lead_single", "lead_pair", "lead_triple"):
            if getattr(o, name) < 0:
                err(f"{p}.{name}", "negative lead time")
        if o.failure_rate < 0:
            err(f"{p}.lambda", "negative failure rate")
        if not o.repair_rate > 0:
            err(f"{p}.mu", "repair rate must be positive")
        if not 0 <= o.nominal_reliability <= 1:
            err(f"{p}.reliability", "must lie in [0, 1]")
        if not (o.unit_price_triple <= o.unit_price_pair <= o.unit_price_single):
            out.append(Violation(
                "warning", f"{p}.price_pair",
                "quantity discount is not monotone (expected triple <= pair <= single)",
            ))
        if not (o.lead_single <= o.lead_pair <= o.lead_triple):
            out.append(Violation(
                "warning", f"{p}.lead_pair",
                "lead times do not grow with order size (expected single <= pair <= triple)",
            ))

    for name, seq in (("process_times_series", s.process_times_series),
                      ("process_times_parallel", s.process_times_parallel)):
        for k, v in enumerate(seq):
            if v < 0:
                err(f"{name}[{k}]", "negative duration")

    for key in _NONNEGATIVE_ECONOMICS:
        if getattr(s, key) < 0:
            err(f"economics.{key}", "must be nonnegative")
    if not s.marr > 0:
        err("economics.marr", "must be positive")
    if not 0 <= s.min_reliability <= 1:
        err("economics.min_reliability", "must lie in [0, 1]")
    if not s.hours_per_year > 0:
        err("economics.hours_per_year", "must be positive")
    if s.lead_policy not in LEAD_POLICIES:
        err("policy.lead_policy", f"unknown policy {s.lead_policy!r}")

    if notes:
        for key in ("daily_cost_shutdown", "daily_cost_half_capacity"):
            if getattr(s, key) is not None:
                out.append(Violation(
                    "note", f"economics.{key}",
                    "retained but unused; operating costs use the hourly alpha/beta rates",
                ))
    return out


def hard_violations(findings: Iterable[Violation]) -> list[Violation]:
    return [v for v in findings if v.severity == "error"]


# --- overrides ---------------------------------------------------------------

_SCALAR_KEYS = set(_ECONOMICS_REQUIRED) | set(_ECONOMICS_OPTIONAL) | {
    "lead_policy", "discount_enabled",
}


def _coerce(key: str, value: Any) -> Any:
    if key == "lead_policy":
        return _lead_policy(value, key)
    if key == "discount_enabled":
        if isinstance(value, bool):
            return value
        if isinstance(value, str) and value.lower() in ("true", "1", "yes", "on"):
            return True
        if isinstance(value, str) and value.lower() in ("false", "0", "no", "off"):
            return False
        raise ScenarioError(key, f"expected a boolean, got {value!r}")
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            raise ScenarioError(key, f"expected a number, got {value!r}") from None
    return _number(value, key)


def _override_catalog(s: Scenario, key: str, value: Any) -> Scenario:
    # "suppliers_parallel.2.price_pair": supplier index is 1-based
    parts = key.split(".")
    if len(parts) != 3 or parts[0] not in ("suppliers_series", "suppliers_parallel"):
        raise ScenarioError(key, "unknown key")
    series = parts[0] == "suppliers_series"
    keymap = _SERIES_KEYS if series else _PARALLEL_KEYS
    catalog = s.series_catalog if series else s.parallel_catalog
    try:
        j = int(parts[1])
    except ValueError:
        raise ScenarioError(key, "supplier index must be an integer") from None
    if not 1 <= j <= len(catalog) or parts[2] not in keymap:
        raise ScenarioError(key, "unknown key")
    new = list(catalog)
    new[j - 1] = replace(new[j - 1], **{keymap[parts[2]]: _coerce(key, value)})
    if series:
        return replace(s, series_catalog=tuple(new))
    return replace(s, parallel_catalog=tuple(new))


def remove_discounts(s: Scenario) -> Scenario:
    """Price pairs and triples at the single-unit price."""
    return replace(s, parallel_catalog=tuple(
        replace(o, unit_price_pair=o.unit_price_single, unit_price_triple=o.unit_price_single)
        for o in s.parallel_catalog
    ))


def fix_lead_times(s: Scenario) -> Scenario:
    """Make parallel-unit lead time independent of order size."""
    return replace(s, parallel_catalog=tuple(
        replace(o, lead_pair=o.lead_single, lead_triple=o.lead_single)
        for o in s.parallel_catalog
    ))


_NAMED_TRANSFORMS = {"no_discount": remove_discounts, "fixed_lead": fix_lead_times}


def apply_override(
    s: Scenario, override: str | Mapping[str, Any] | Iterable[Any] | None = None
) -> Scenario:
    """Return a modified copy of ``s``.

    ``override`` may be a named transform (``"no_discount"``, ``"fixed_lead"``),
    a mapping of keys to values, or a sequence mixing both. Keys are the
    economics/policy field names or catalog paths such as
    ``suppliers_parallel.2.price_pair`` (1-based supplier index).
    """
    if override is None:
        return s
    if isinstance(override, str):
        if override not in _NAMED_TRANSFORMS:
            raise ScenarioError(override, "unknown transform")
        return _NAMED_TRANSFORMS[override](s)
    if isinstance(override, Mapping):
        for key, value in override.items():
            if key in _SCALAR_KEYS:
                s = replace(s, **{key: _coerce(key, value)})
            else:
                s = _override_catalog(s, key, value)
        return s
    for item in override:
        s = apply_override(s, item)
    return s


def parse_key_value(text: str) -> tuple[str, str]:
    """Split a ``key=value`` command-line override."""
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise ScenarioError(text, "expected key=value")
    return key.strip(), value.strip()
