"""Model-potential parameter sets and isotope data.

Parameter files are JSON (schema documented in the README and enforced
here).  Everything downstream consumes only the validated records, which
are immutable and safe to share across threads.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, asdict
from importlib import resources
from pathlib import Path

from .errors import ParseError, SchemaError

SCHEMA_VERSION = 1

# Channels with a spin-orbit cutoff use a fixed fraction of r_c(l).
R_SO_OVER_R_C = {1: 0.0286294, 2: 0.0585394, 3: 0.135464}


@dataclass(frozen=True)
class ChannelParams:
    """Per-l coefficient set of the model potential.

    a1, a2 are inverse lengths (1/a_B), a3 an inverse length, a4 an inverse
    length squared; r_c and r_so are radii in a_B.  a3_scale is a
    dimensionless multiplier applied to a3 (empirical fine tuning).
    """

    l: int
    a1: float
    a2: float
    a3: float
    a4: float
    r_c: float
    r_so: float = 0.0
    a3_scale: float = 1.0


@dataclass(frozen=True)
class PotentialParams:
    """Validated parametrization of the effective core potential of one element."""

    element: str
    Z: int
    alpha_c: float
    channels: tuple[ChannelParams, ...]
    provenance: str = ""

    @property
    def l_max(self) -> int:
        return self.channels[-1].l

    def channel(self, l: int) -> ChannelParams:
        """Coefficients for orbital momentum l; l beyond the table reuses the last row."""
        if l < 0:
            raise SchemaError("l must be >= 0")
        return self.channels[min(l, self.l_max)]


@dataclass(frozen=True)
class IsotopeData:
    """Nuclear data entering the hyperfine contact interaction."""

    label: str
    spin: float          # nuclear spin I
    g_tilde_I: float     # nuclear g-factor scaled by m_e/m_p
    g_s: float           # electron g-factor


_ISOTOPES = (
    IsotopeData("87Rb", 1.5, -0.0009951414, 2.0023193043622),
    IsotopeData("85Rb", 2.5, -0.00029364000, 2.0023193043622),
)

_TOP_KEYS = {"schema_version", "element", "Z", "alpha_c", "channels", "provenance"}
_CHANNEL_KEYS = {"l", "a1", "a2", "a3", "a4", "r_c", "r_so", "a3_scale"}


def builtin_isotopes() -> list[IsotopeData]:
    return list(_ISOTOPES)


def get_isotope(label: str) -> IsotopeData:
    for iso in _ISOTOPES:
        if iso.label == label:
            return iso
    raise KeyError(f"unknown isotope {label!r}; available: "
                   + ", ".join(i.label for i in _ISOTOPES))


def builtin_params_path(element: str) -> Path:
    """Path of a parameter file shipped with the package ('Rb', 'Cs', 'H')."""
    names = {"rb": "rubidium.json", "cs": "cesium.json", "h": "hydrogen.json"}
    try:
        name = names[element.lower()]
    except KeyError:
        raise KeyError(f"no builtin parameter set for {element!r}") from None
    return Path(resources.files("rydcheb") / "data" / name)


def _require(cond: bool, field: str, message: str) -> None:
    if not cond:
        raise SchemaError(f"{field}: {message}")


def _as_number(obj: dict, field: str) -> float:
    v = obj.get(field)
    _require(isinstance(v, (int, float)) and not isinstance(v, bool),
             field, "must be a number")
    return float(v)


def load_params(path) -> PotentialParams:
    """Load and validate a potential-parameter file.

    Raises ParseError for malformed JSON and SchemaError (naming the failing
    field) for any schema or invariant violation.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: top level must be an object")

    unknown = set(raw) - _TOP_KEYS
    _require(not unknown, ", ".join(sorted(unknown)), "unknown key(s)")
    _require(raw.get("schema_version") == SCHEMA_VERSION,
             "schema_version", f"must be {SCHEMA_VERSION}")
    element = raw.get("element")
    _require(isinstance(element, str) and element != "", "element", "must be a non-empty string")
    Z = raw.get("Z")
    _require(isinstance(Z, int) and not isinstance(Z, bool) and Z >= 1,
             "Z", "must be an integer >= 1")
    alpha_c = _as_number(raw, "alpha_c")
    _require(alpha_c >= 0, "alpha_c", "must be >= 0")

    rows = raw.get("channels")
    _require(isinstance(rows, list) and rows, "channels", "must be a non-empty list")
    channels = []
    for i, row in enumerate(rows):
        where = f"channels[{i}]"
        _require(isinstance(row, dict), where, "must be an object")
        unknown = set(row) - _CHANNEL_KEYS
        _require(not unknown, f"{where}.{'/'.join(sorted(unknown))}", "unknown key(s)")
        l = row.get("l")
        _require(isinstance(l, int) and not isinstance(l, bool) and l == i,
                 f"{where}.l", f"entries must be contiguous from l=0 (expected {i})")
        ch = ChannelParams(
            l=l,
            a1=_as_number(row, "a1"),
            a2=_as_number(row, "a2"),
            a3=_as_number(row, "a3"),
            a4=_as_number(row, "a4"),
            r_c=_as_number(row, "r_c"),
            r_so=_as_number(row, "r_so") if "r_so" in row else 0.0,
            a3_scale=_as_number(row, "a3_scale") if "a3_scale" in row else 1.0,
        )
        _require(ch.r_c > 0, f"{where}.r_c", "must be > 0")
        _require(ch.a3_scale > 0, f"{where}.a3_scale", "must be > 0")
        _require(ch.r_so >= 0, f"{where}.r_so", "must be >= 0")
        if l == 0 or l >= 4:
            _require(ch.r_so == 0.0, f"{where}.r_so",
                     "spin-orbit cutoff applies only to l = 1, 2, 3")
        channels.append(ch)
    _require(len(channels) >= 4, "channels", "entries for l = 0..3 are required")

    for ch in channels:
        ratio = R_SO_OVER_R_C.get(ch.l)
        if ratio is not None and ch.r_so > 0:
            if abs(ch.r_so / ch.r_c - ratio) > 1e-3 * ratio:
                warnings.warn(
                    f"channel l={ch.l}: r_so/r_c = {ch.r_so / ch.r_c:.6f} deviates "
                    f"from the reference fraction {ratio} by more than 0.1%",
                    stacklevel=2,
                )

    return PotentialParams(
        element=element,
        Z=Z,
        alpha_c=alpha_c,
        channels=tuple(channels),
        provenance=raw.get("provenance", ""),
    )


def write_params(params: PotentialParams, path) -> None:
    """Serialize a parameter set; load_params(write_params(p)) is bit-exact."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "element": params.element,
        "Z": params.Z,
        "alpha_c": params.alpha_c,
        "provenance": params.provenance,
        "channels": [asdict(ch) for ch in params.channels],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
