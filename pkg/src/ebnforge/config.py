"""Experiment config files: flat `key = value` text, one setting per line.

`#` starts a comment and blank lines are skipped. Each experiment has a fixed
key set; unknown or repeated keys are rejected with the offending line number
so a typo never silently falls back to a default. The literal value `auto`
asks the runner to derive a setting at run time (omega_step from the decoder
norms, i_leak_target from i_reset).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError

EXPERIMENTS = ("network", "single-synapse", "two-synapse")


@dataclass(frozen=True)
class ConfigKey:
    name: str
    kind: str  # "int" | "float" | "str"
    default: object
    allow_auto: bool = False


def _schema(*keys):
    return {k.name: k for k in keys}


_NETWORK_SCHEMA = _schema(
    ConfigKey("experiment", "str", "network"),
    ConfigKey("seed", "int", 1),
    ConfigKey("output_dir", "str", "out/network"),
    ConfigKey("n_neurons", "int", 20),
    ConfigKey("n_inputs", "int", 2),
    ConfigKey("n_iterations", "int", 50),
    ConfigKey("dt", "float", 1e-4),
    ConfigKey("lam", "float", 50.0),
    ConfigKey("v_rest", "float", 0.0),
    ConfigKey("omega_step", "float", 0.025, allow_auto=True),
    ConfigKey("duration", "float", 0.4),
    ConfigKey("noise_sigma", "float", 30.0),
    ConfigKey("kernel_sigma", "float", 5e-3),
    ConfigKey("initial_code_range", "int", 48),
)

_HW_COMMON = (
    ConfigKey("seed", "int", 1),
    ConfigKey("i_rest", "float", 5e-8),
    ConfigKey("i_reset", "float", 5e-9),
    ConfigKey("i_sl", "float", 5e-9),
    ConfigKey("i_unit", "float", 1.25e-10),
    ConfigKey("pulse_width", "float", 1e-3),
    ConfigKey("tau_dpi", "float", 1e-2),
    ConfigKey("tau_mem", "float", 2e-2),
    ConfigKey("gain", "float", 300.0),
    ConfigKey("dt", "float", 1e-5),
    ConfigKey("i_leak_target", "float", None, allow_auto=True),
    ConfigKey("rate_hz", "float", 100.0),
    ConfigKey("duration", "float", 2.0),
    ConfigKey("initial_code", "int", 0),
)

_SINGLE_SCHEMA = _schema(
    ConfigKey("experiment", "str", "single-synapse"),
    *_HW_COMMON,
    ConfigKey("output_dir", "str", "out/single-synapse"),
)

_TWO_SCHEMA = _schema(
    ConfigKey("experiment", "str", "two-synapse"),
    *_HW_COMMON,
    ConfigKey("fixed_code", "int", 40),
    ConfigKey("output_dir", "str", "out/two-synapse"),
)

SCHEMAS = {
    "network": _NETWORK_SCHEMA,
    "single-synapse": _SINGLE_SCHEMA,
    "two-synapse": _TWO_SCHEMA,
}


def schema_for(experiment: str):
    try:
        return SCHEMAS[experiment]
    except KeyError:
        raise ConfigurationError(
            f"unknown experiment {experiment!r}; expected one of {', '.join(EXPERIMENTS)}"
        ) from None


def defaults(experiment: str) -> dict:
    return {k.name: k.default for k in schema_for(experiment).values()}


def _parse_value(key: ConfigKey, token: str, label: str, lineno: int):
    if key.allow_auto and token == "auto":
        return None
    if key.kind == "str":
        return token
    if key.kind == "int":
        try:
            return int(token)
        except ValueError:
            raise ConfigurationError(
                f"{label}:{lineno}: key '{key.name}' expects an integer, got {token!r}"
            ) from None
    try:
        return float(token)
    except ValueError:
        hint = " (or 'auto')" if key.allow_auto else ""
        raise ConfigurationError(
            f"{label}:{lineno}: key '{key.name}' expects a number{hint}, got {token!r}"
        ) from None


def parse_config_text(text: str, experiment: str, label: str = "config") -> dict:
    """Parse one config file's text against the experiment's schema.

    Returns the full effective mapping (defaults overlaid with the file's
    settings). All errors carry `label:lineno:`.
    """
    schema = schema_for(experiment)
    values = defaults(experiment)
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(
                f"{label}:{lineno}: expected 'key = value', got {raw.strip()!r}"
            )
        name, token = (part.strip() for part in line.split("=", 1))
        if name not in schema:
            raise ConfigurationError(f"{label}:{lineno}: unknown key {name!r}")
        if name in seen:
            raise ConfigurationError(f"{label}:{lineno}: duplicate key {name!r}")
        seen.add(name)
        values[name] = _parse_value(schema[name], token, label, lineno)
    if values["experiment"] != experiment:
        raise ConfigurationError(
            f"{label}: experiment is {values['experiment']!r} but the "
            f"'{experiment}' command was invoked"
        )
    return values


def load_config(path, experiment: str) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as err:
        raise ConfigurationError(f"cannot read config {path}: {err}") from None
    return parse_config_text(text, experiment, label=str(path))


def _format_value(value) -> str:
    if value is None:
        return "auto"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_config(values: dict, experiment: str) -> str:
    """Render an effective config in schema order; parsing it back is lossless."""
    schema = schema_for(experiment)
    missing = set(schema) - set(values)
    if missing:
        raise ConfigurationError(f"config missing keys: {sorted(missing)}")
    lines = [f"{name} = {_format_value(values[name])}" for name in schema]
    return "\n".join(lines) + "\n"


def dump_defaults(experiment: str) -> str:
    return format_config(defaults(experiment), experiment)
