"""Parameter sweeps over the closed-form quantities, with stable serialization.

A sweep is a declarative :class:`SweepSpec`: a model, one or more named
parameter ranges (outer ranges vary slowest -- rows come out row-major in
declaration order), fixed values for the remaining parameters, and the list
of quantity columns to evaluate.  Points that sit beyond the instability
threshold produce empty quantity cells and a raised ``beyond_threshold``
flag instead of failing the whole sweep.

Serialization is bit-stable: floats are written with ``repr`` (the shortest
string that round-trips to the same double), so parsing a file and writing
it back reproduces it byte for byte, and rerunning a sweep with timestamps
suppressed reproduces the previous file exactly.  CSV uses comma separators,
'.' decimal points, a mandatory header, UTF-8, and LF line endings; JSON
carries the spec alongside the rows.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Callable, Mapping, Sequence

from . import dicke, driven, rabi
from .errors import BeyondThreshold, InvalidSpec
from .params import DerivativeConvention, DickeParams, DriveParams, RabiParams


@dataclass(frozen=True)
class RangeSpec:
    """One swept axis: ``count`` points from ``start`` to ``stop`` inclusive.

    Linear spacing uses start + (stop - start) * k/(count - 1), which lands
    exactly on rational grid anchors; ``log=True`` spaces the points
    geometrically (both endpoints must then be positive).
    """

    name: str
    start: float
    stop: float
    count: int
    log: bool = False

    def __post_init__(self) -> None:
        if not self.name.isidentifier():
            raise InvalidSpec(f"range name must be an identifier, got {self.name!r}")
        if self.count < 1:
            raise InvalidSpec(f"range count must be >= 1, got {self.count}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise InvalidSpec(f"range endpoints must be finite, got {self!r}")
        if self.log and (self.start <= 0.0 or self.stop <= 0.0):
            raise InvalidSpec("log-spaced ranges need positive endpoints")

    def values(self) -> list[float]:
        if self.count == 1:
            return [self.start]
        n = self.count - 1
        if self.log:
            ratio = self.stop / self.start
            return [self.start * ratio ** (k / n) for k in range(self.count)]
        return [
            self.start + (self.stop - self.start) * (k / n)
            for k in range(self.count)
        ]


@dataclass(frozen=True)
class SweepSpec:
    """Declarative sweep: model, ranges (slowest first), fixed values, columns."""

    model: str
    ranges: tuple[RangeSpec, ...]
    quantities: tuple[str, ...] = ()
    fixed: Mapping[str, float] = field(default_factory=dict)
    convention: str = "tracked"

    def __post_init__(self) -> None:
        if self.model not in QUANTITIES:
            raise InvalidSpec(
                f"unknown model {self.model!r}; expected one of {sorted(QUANTITIES)}"
            )
        if not self.ranges:
            raise InvalidSpec("a sweep needs at least one range")
        allowed = ALLOWED_PARAMS[self.model]
        seen: set[str] = set()
        for r in self.ranges:
            if r.name not in allowed:
                raise InvalidSpec(
                    f"parameter {r.name!r} does not belong to model "
                    f"{self.model!r} (allowed: {sorted(allowed)})"
                )
            if r.name in seen:
                raise InvalidSpec(f"parameter {r.name!r} swept twice")
            seen.add(r.name)
        for name in self.fixed:
            if name not in allowed:
                raise InvalidSpec(
                    f"parameter {name!r} does not belong to model {self.model!r}"
                )
            if name in seen:
                raise InvalidSpec(f"parameter {name!r} both swept and fixed")
        object.__setattr__(
            self,
            "quantities",
            tuple(self.quantities) or DEFAULT_QUANTITIES[self.model],
        )
        for q in self.quantities:
            if q not in QUANTITIES[self.model]:
                raise InvalidSpec(
                    f"unknown quantity {q!r} for model {self.model!r} "
                    f"(available: {sorted(QUANTITIES[self.model])})"
                )
        if self.convention not in ("tracked", "fixed"):
            raise InvalidSpec(
                f"convention must be 'tracked' or 'fixed', got {self.convention!r}"
            )


@dataclass
class SweepResult:
    """Evaluated sweep: column names, one dict per row, and the spec echoed back."""

    spec: SweepSpec
    columns: list[str]
    rows: list[dict]


# ---------------------------------------------------------------------------
# parameter resolution and quantity registry
# ---------------------------------------------------------------------------

ALLOWED_PARAMS = {
    "dicke": frozenset(
        {"omega", "Omega", "g", "g_over_gc", "kappa", "eta", "delta", "t",
         "alpha", "xi_r"}
    ),
    "rabi": frozenset(
        {"omega", "Omega", "g", "g_over_gc", "t", "alpha", "xi_r"}
    ),
}


def _coupling(v: Mapping[str, float], omega: float, Omega: float) -> float:
    if "g" in v and "g_over_gc" in v:
        raise InvalidSpec("give either g or g_over_gc, not both")
    if "g" in v:
        return float(v["g"])
    return float(v.get("g_over_gc", 0.5)) * math.sqrt(omega * Omega)


def _dicke_params(v: Mapping[str, float]) -> DickeParams:
    omega = float(v.get("omega", 1.0))
    Omega = float(v.get("Omega", omega))
    return DickeParams(omega=omega, Omega=Omega, g=_coupling(v, omega, Omega))


def _rabi_params(v: Mapping[str, float]) -> RabiParams:
    omega = float(v.get("omega", 1.0))
    Omega = float(v.get("Omega", 1.0e4 * omega))
    return RabiParams(omega=omega, Omega=Omega, g=_coupling(v, omega, Omega))


def _drive_params(v: Mapping[str, float]) -> DriveParams:
    return DriveParams(
        kappa=float(v.get("kappa", 1.0)),
        eta=float(v.get("eta", 1.0)),
        delta=float(v.get("delta", 0.0)),
        t=float(v.get("t", 1.0)),
    )


def _convention(name: str) -> DerivativeConvention:
    return (
        DerivativeConvention.TRACKED_RESONANCE
        if name == "tracked"
        else DerivativeConvention.FIXED_PARTNER
    )


def _alpha(v: Mapping[str, float]) -> float:
    return float(v.get("alpha", 1.0))


def _t(v: Mapping[str, float]) -> float:
    return float(v.get("t", 1.0))


def _xi_r(v: Mapping[str, float]) -> float:
    return float(v.get("xi_r", 0.0))


# Each quantity maps the resolved point values (plus the sweep convention)
# to one float.
Quantity = Callable[[Mapping[str, float], str], float]

_DICKE_QUANTITIES: dict[str, Quantity] = {
    "xi_minus": lambda v, c: dicke.squeezing_parameters(_dicke_params(v)).xi_minus,
    "xi_plus": lambda v, c: dicke.squeezing_parameters(_dicke_params(v)).xi_plus,
    "omega_minus": lambda v, c: dicke.normal_frequencies(_dicke_params(v)).omega_minus,
    "omega_plus": lambda v, c: dicke.normal_frequencies(_dicke_params(v)).omega_plus,
    "n_bare": lambda v, c: dicke.bare_mode_occupation(
        dicke.squeezing_parameters(_dicke_params(v))
    ),
    "n_soft": lambda v, c: dicke.virtual_mode_occupation(_dicke_params(v))[0],
    "n_stiff": lambda v, c: dicke.virtual_mode_occupation(_dicke_params(v))[1],
    "ground_qfi": lambda v, c: dicke.ground_state_qfi(_dicke_params(v), _convention(c)),
    "ground_qfi_near_threshold": lambda v, c: dicke.ground_state_qfi_near_threshold(
        _dicke_params(v)
    ),
    "dfreq_lower": lambda v, c: dicke.dfreq_lower(_dicke_params(v)),
    "coherent_qfi": lambda v, c: dicke.coherent_qfi(
        _dicke_params(v), _alpha(v), _t(v)
    ).exact,
    "coherent_qfi_asymptote": lambda v, c: dicke.coherent_qfi(
        _dicke_params(v), _alpha(v), _t(v)
    ).asymptote,
    "real_squeezing_qfi": lambda v, c: dicke.real_squeezing_qfi(
        _dicke_params(v), _alpha(v), _t(v)
    ),
    "snr_amplitude": lambda v, c: driven.snr_amplitude(
        _dicke_params(v), _drive_params(v)
    ),
    "snr_amplitude_near_threshold": lambda v, c: driven.snr_amplitude_near_threshold(
        _dicke_params(v), _drive_params(v)
    ),
    "snr_phase": lambda v, c: driven.snr_phase(_dicke_params(v), _drive_params(v)),
    "driven_qfi_total": lambda v, c: driven.driven_qfi_total(
        _dicke_params(v), _drive_params(v)
    ),
    "amp_intracavity": lambda v, c: driven.steady_state_response(
        _drive_params(v)
    ).amp_intracavity,
    "amp_output": lambda v, c: driven.steady_state_response(
        _drive_params(v)
    ).amp_output,
    "response_phase": lambda v, c: driven.steady_state_response(
        _drive_params(v)
    ).phase,
    "output_flux": lambda v, c: driven.steady_state_response(
        _drive_params(v)
    ).output_flux,
    "homodyne_variance": lambda v, c: driven.homodyne_variance(_t(v), _xi_r(v)),
}

_RABI_QUANTITIES: dict[str, Quantity] = {
    "rabi_xi": lambda v, c: rabi.rabi_effective(_rabi_params(v)).xi,
    "rabi_n_virtual": lambda v, c: rabi.rabi_effective(_rabi_params(v)).n_virtual,
    "rabi_omega_eff": lambda v, c: rabi.rabi_effective(_rabi_params(v)).omega_eff,
    "n_virtual_near_threshold": lambda v, c: rabi.n_virtual_near_threshold(
        _rabi_params(v)
    ),
    "effective_gap_derivative": lambda v, c: rabi.effective_gap_derivative(
        _rabi_params(v)
    ),
    "rabi_ground_qfi": lambda v, c: rabi.rabi_ground_qfi(_rabi_params(v)),
    "rabi_coherent_qfi": lambda v, c: rabi.rabi_coherent_qfi(
        _rabi_params(v), _alpha(v), _t(v)
    ),
    "extract_static": lambda v, c: rabi.strategy_extract_static(
        _rabi_params(v)
    ).envelope,
    "extract_evolved": lambda v, c: rabi.strategy_extract_evolved(
        _rabi_params(v), _t(v)
    ),
    "displaced_snr": lambda v, c: rabi.strategy_displaced(
        _rabi_params(v), _alpha(v)
    ).snr_of_t(_t(v)),
    "normal_mode_snr": lambda v, c: rabi.strategy_normal_mode(
        _rabi_params(v), _alpha(v)
    ).snr_of_t(_t(v)),
    "synergy_snr": lambda v, c: rabi.strategy_synergy(
        _rabi_params(v), _alpha(v), _xi_r(v)
    ).snr_of_t(_t(v)),
    "displaced_envelope": lambda v, c: rabi.strategy_displaced(
        _rabi_params(v), _alpha(v)
    ).envelope,
    "normal_mode_envelope": lambda v, c: rabi.strategy_normal_mode(
        _rabi_params(v), _alpha(v)
    ).envelope,
    "synergy_envelope": lambda v, c: rabi.strategy_synergy(
        _rabi_params(v), _alpha(v), _xi_r(v)
    ).envelope,
}

QUANTITIES: dict[str, dict[str, Quantity]] = {
    "dicke": _DICKE_QUANTITIES,
    "rabi": _RABI_QUANTITIES,
}

DEFAULT_QUANTITIES = {
    "dicke": ("xi_minus", "xi_plus", "omega_minus", "omega_plus", "n_soft",
              "n_stiff", "n_bare", "ground_qfi"),
    "rabi": ("rabi_xi", "rabi_n_virtual", "rabi_omega_eff", "rabi_ground_qfi"),
}


def evaluate_point(
    model: str,
    values: Mapping[str, float],
    quantities: Sequence[str],
    convention: str = "tracked",
) -> tuple[dict, bool]:
    """Evaluate the named quantities at one parameter point.

    Returns (results, beyond_threshold); quantities that hit the instability
    threshold come back as None with the flag raised, everything else fails
    loudly.
    """
    registry = QUANTITIES[model]
    out: dict = {}
    beyond = False
    for q in quantities:
        try:
            out[q] = float(registry[q](values, convention))
        except BeyondThreshold:
            out[q] = None
            beyond = True
    return out, beyond


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate a sweep row-major over the declared ranges.

    The evaluation is a deterministic single pass; grid points are
    independent of each other, so the rows could equally be computed by a
    worker pool -- the serialized output depends only on the spec.
    """
    axes = [r.values() for r in spec.ranges]
    names = [r.name for r in spec.ranges]
    columns = names + list(spec.quantities) + ["beyond_threshold"]
    rows: list[dict] = []
    for point in itertools.product(*axes):
        values = dict(spec.fixed)
        values.update(zip(names, point))
        results, beyond = evaluate_point(
            spec.model, values, spec.quantities, spec.convention
        )
        row = {name: float(val) for name, val in zip(names, point)}
        row.update(results)
        row["beyond_threshold"] = beyond
        rows.append(row)
    return SweepResult(spec=spec, columns=columns, rows=rows)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return str(value)
    return str(value)


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def to_csv(
    columns: Sequence[str], rows: Sequence[Mapping], timestamp: bool = True
) -> str:
    """Render a table as CSV text (comma, '.', header, LF; repr floats)."""
    lines = []
    if timestamp:
        lines.append(f"# generated {_timestamp()}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_cell(row.get(c)) for c in columns))
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> tuple[list[str], list[dict]]:
    """Parse CSV produced by :func:`to_csv` back into columns and typed rows."""
    lines = [ln for ln in text.split("\n") if ln and not ln.startswith("#")]
    if not lines:
        raise InvalidSpec("CSV text has no header")
    columns = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != len(columns):
            raise InvalidSpec(
                f"row has {len(cells)} cells, header has {len(columns)}"
            )
        row: dict = {}
        for name, cell in zip(columns, cells):
            if cell == "":
                row[name] = None
            elif cell in ("true", "false"):
                row[name] = cell == "true"
            else:
                try:
                    row[name] = float(cell)
                except ValueError:
                    row[name] = cell
        rows.append(row)
    return columns, rows


def spec_as_dict(spec: SweepSpec) -> dict:
    d = asdict(spec)
    d["fixed"] = dict(spec.fixed)
    return d


def to_json(
    columns: Sequence[str],
    rows: Sequence[Mapping],
    spec: Mapping | None = None,
    timestamp: bool = True,
) -> str:
    """Render a table as a JSON document with the generating spec alongside."""
    doc: dict = {"spec": dict(spec) if spec is not None else {}}
    doc["columns"] = list(columns)
    if timestamp:
        doc["generated"] = _timestamp()
    doc["rows"] = [dict(r) for r in rows]
    return json.dumps(doc, indent=2) + "\n"


def write_table(
    columns: Sequence[str],
    rows: Sequence[Mapping],
    path: str,
    fmt: str,
    spec: Mapping | None = None,
    timestamp: bool = True,
) -> None:
    """Write a table to ``path`` as ``fmt`` ('csv' or 'json'), UTF-8, LF."""
    if fmt == "csv":
        text = to_csv(columns, rows, timestamp)
    elif fmt == "json":
        text = to_json(columns, rows, spec, timestamp)
    else:
        raise InvalidSpec(f"unknown format {fmt!r}; expected 'csv' or 'json'")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_result(result: SweepResult, path: str, fmt: str, timestamp: bool = True) -> None:
    """Write a :class:`SweepResult` with its spec echoed into JSON output."""
    write_table(
        result.columns,
        result.rows,
        path,
        fmt,
        spec=spec_as_dict(result.spec),
        timestamp=timestamp,
    )
