"""Configuration documents for sweeps and comparison maps.

Configs are JSON or TOML files with identical schemas. Unknown keys are
rejected everywhere so typos fail loudly instead of silently running a
different sweep.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .dv import Protocol
from .errors import ConfigError
from .link import DEFAULT_ATTENUATION_DB_PER_KM

AXIS_NAMES = ("eta", "distance_km", "nth", "sigma2")
COMPARE_KINDS = ("kmap", "noise-frontier", "loss-frontier")
DEFAULT_K0S = (1e-10, 1e-6, 1e-3)
DEFAULT_MU_MAX_DB = 15.0


@dataclass(frozen=True)
class AxisSpec:
    """One sweep axis: name, range, point count, spacing."""

    name: str
    minimum: float
    maximum: float
    count: int
    scale: str = "linear"

    def __post_init__(self) -> None:
        if self.name not in AXIS_NAMES:
            raise ConfigError(
                f"unknown axis {self.name!r}; expected one of {AXIS_NAMES}"
            )
        if self.count < 2:
            raise ConfigError(f"axis {self.name}: count {self.count} < 2")
        if not self.minimum < self.maximum:
            raise ConfigError(
                f"axis {self.name}: need min < max, got [{self.minimum}, {self.maximum}]"
            )
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"axis {self.name}: scale {self.scale!r}")
        if self.scale == "log" and self.minimum <= 0.0:
            raise ConfigError(f"axis {self.name}: log scale requires min > 0")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.minimum, self.maximum, self.count)
        return np.linspace(self.minimum, self.maximum, self.count)


@dataclass(frozen=True)
class CvPolicy:
    """Source policy for CV protocols inside sweeps and maps.

    Default: optimize the modulation up to mu_max_db. optimize_va left as
    None means "optimize unless squeezing_db is given".
    """

    squeezing_db: Optional[float] = None
    optimize_va: Optional[bool] = None
    mu_max_db: float = DEFAULT_MU_MAX_DB

    def __post_init__(self) -> None:
        if self.squeezing_db is not None and self.optimize_va:
            raise ConfigError("cv policy: pass squeezing_db or optimize_va, not both")
        if self.squeezing_db is None and self.optimize_va is False:
            raise ConfigError("cv policy: need squeezing_db when optimize_va is false")
        if self.mu_max_db <= 0.0:
            raise ConfigError(f"cv policy: mu_max_db {self.mu_max_db} must be positive")

    @property
    def mu_max(self) -> float:
        return 10.0 ** (self.mu_max_db / 10.0)

    def rate_options(self) -> dict:
        if self.squeezing_db is not None:
            return {"squeezing_db": self.squeezing_db}
        return {"optimize_va": True, "mu_max": self.mu_max}


@dataclass(frozen=True)
class SweepConfig:
    axes: tuple[AxisSpec, ...]
    protocols: tuple[Protocol, ...]
    fixed: Mapping[str, float]
    cv: CvPolicy
    attenuation_db_per_km: float
    output_csv: str
    output_metadata: str
    document: Mapping[str, Any] = field(repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        _validate_cell_coordinates(self.axes, self.fixed)
        if not self.protocols:
            raise ConfigError("no protocols listed")


@dataclass(frozen=True)
class CompareConfig:
    kind: str
    axes: tuple[AxisSpec, ...]
    fixed: Mapping[str, float]
    k0: float
    cv: CvPolicy
    attenuation_db_per_km: float
    output_csv: str
    output_metadata: str
    document: Mapping[str, Any] = field(repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in COMPARE_KINDS:
            raise ConfigError(f"unknown comparison kind {self.kind!r}")
        required = {
            "kmap": ("distance_km", "nth"),
            "noise-frontier": ("sigma2", "distance_km"),
            "loss-frontier": ("sigma2", "nth"),
        }[self.kind]
        names = tuple(axis.name for axis in self.axes)
        if names != required:
            raise ConfigError(
                f"{self.kind} needs axes {required} in that order, got {names}"
            )
        if self.k0 <= 0.0:
            raise ConfigError(f"k0 {self.k0} must be positive")


def _validate_cell_coordinates(
    axes: tuple[AxisSpec, ...], fixed: Mapping[str, float]
) -> None:
    axis_names = [axis.name for axis in axes]
    if len(set(axis_names)) != len(axis_names):
        raise ConfigError(f"duplicate axes in {axis_names}")
    for name in fixed:
        if name not in AXIS_NAMES:
            raise ConfigError(f"unknown fixed parameter {name!r}")
        if name in axis_names:
            raise ConfigError(f"{name!r} is both an axis and fixed")
    have_eta = "eta" in axis_names or "eta" in fixed
    have_distance = "distance_km" in axis_names or "distance_km" in fixed
    if have_eta and have_distance:
        raise ConfigError("specify eta or distance_km, not both")
    if not have_eta and not have_distance:
        raise ConfigError("one of eta or distance_km must be an axis or fixed")


def load_document(path: str | Path) -> dict:
    """Parse a JSON or TOML config file into a plain dict."""
    p = Path(path)
    data = p.read_bytes()
    if p.suffix.lower() == ".toml":
        try:
            return tomllib.loads(data.decode("utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{p}: {exc}") from exc
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        if p.suffix.lower() == ".json":
            raise ConfigError(f"{p}: {exc}") from exc
    try:
        return tomllib.loads(data.decode("utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{p}: not valid JSON or TOML ({exc})") from exc


def _take(doc: Mapping[str, Any], context: str, **spec: bool) -> dict:
    """Extract keys per spec {name: required}; reject anything else."""
    if not isinstance(doc, Mapping):
        raise ConfigError(f"{context}: expected a table/object")
    unknown = sorted(set(doc) - set(spec))
    if unknown:
        raise ConfigError(f"{context}: unknown keys {unknown}")
    missing = sorted(name for name, required in spec.items() if required and name not in doc)
    if missing:
        raise ConfigError(f"{context}: missing keys {missing}")
    return dict(doc)


def _parse_axes(raw: Any, context: str) -> tuple[AxisSpec, ...]:
    if not isinstance(raw, (list, tuple)) or not raw:
        raise ConfigError(f"{context}: axes must be a non-empty list")
    axes = []
    for index, item in enumerate(raw):
        fields = _take(
            item, f"{context}.axes[{index}]",
            name=True, min=True, max=True, count=True, scale=False,
        )
        axes.append(
            AxisSpec(
                name=fields["name"],
                minimum=float(fields["min"]),
                maximum=float(fields["max"]),
                count=int(fields["count"]),
                scale=fields.get("scale", "linear"),
            )
        )
    return tuple(axes)


def _parse_fixed(raw: Any, context: str) -> dict[str, float]:
    if raw is None:
        return {}
    if not isinstance(raw, Mapping):
        raise ConfigError(f"{context}: fixed must be a table/object")
    return {key: float(value) for key, value in raw.items()}


def _parse_cv(raw: Any, context: str) -> CvPolicy:
    if raw is None:
        return CvPolicy()
    fields = _take(
        raw, f"{context}.cv",
        squeezing_db=False, optimize_va=False, mu_max_db=False,
    )
    squeezing = fields.get("squeezing_db")
    return CvPolicy(
        squeezing_db=None if squeezing is None else float(squeezing),
        optimize_va=fields.get("optimize_va"),
        mu_max_db=float(fields.get("mu_max_db", DEFAULT_MU_MAX_DB)),
    )


def _parse_output(raw: Any, context: str) -> tuple[str, str]:
    fields = _take(raw, f"{context}.output", csv=True, metadata=False)
    csv_path = str(fields["csv"])
    metadata = str(fields.get("metadata", ""))
    if not metadata:
        metadata = str(Path(csv_path).with_suffix(".meta.json"))
    return csv_path, metadata


def _parse_protocols(raw: Any, context: str) -> tuple[Protocol, ...]:
    if not isinstance(raw, (list, tuple)) or not raw:
        raise ConfigError(f"{context}: protocols must be a non-empty list")
    by_value = {p.value: p for p in Protocol}
    out = []
    for name in raw:
        if name not in by_value:
            raise ConfigError(
                f"{context}: unknown protocol {name!r}; expected {sorted(by_value)}"
            )
        out.append(by_value[name])
    return tuple(out)


def parse_sweep_config(doc: Mapping[str, Any], context: str = "sweep") -> SweepConfig:
    fields = _take(
        doc, context,
        kind=False, axes=True, protocols=True, fixed=False, cv=False,
        attenuation_db_per_km=False, output=True,
    )
    if fields.get("kind", "sweep") != "sweep":
        raise ConfigError(f"{context}: kind {fields['kind']!r} is not 'sweep'")
    csv_path, metadata_path = _parse_output(fields["output"], context)
    return SweepConfig(
        axes=_parse_axes(fields["axes"], context),
        protocols=_parse_protocols(fields["protocols"], context),
        fixed=_parse_fixed(fields.get("fixed"), context),
        cv=_parse_cv(fields.get("cv"), context),
        attenuation_db_per_km=float(
            fields.get("attenuation_db_per_km", DEFAULT_ATTENUATION_DB_PER_KM)
        ),
        output_csv=csv_path,
        output_metadata=metadata_path,
        document=dict(doc),
    )


def parse_compare_config(
    doc: Mapping[str, Any], kind: str, context: str = "compare"
) -> CompareConfig:
    fields = _take(
        doc, context,
        kind=False, axes=True, fixed=False, k0=False, cv=False,
        attenuation_db_per_km=False, output=True,
    )
    declared = fields.get("kind", kind)
    if declared != kind:
        raise ConfigError(
            f"{context}: config kind {declared!r} does not match requested {kind!r}"
        )
    csv_path, metadata_path = _parse_output(fields["output"], context)
    return CompareConfig(
        kind=kind,
        axes=_parse_axes(fields["axes"], context),
        fixed=_parse_fixed(fields.get("fixed"), context),
        k0=float(fields.get("k0", DEFAULT_K0S[-1])),
        cv=_parse_cv(fields.get("cv"), context),
        attenuation_db_per_km=float(
            fields.get("attenuation_db_per_km", DEFAULT_ATTENUATION_DB_PER_KM)
        ),
        output_csv=csv_path,
        output_metadata=metadata_path,
        document=dict(doc),
    )


def config_hash(doc: Mapping[str, Any]) -> str:
    """SHA-256 of the canonical JSON serialization of a config document."""
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
