""" Perisol
    Configuration file parsers (system descriptions and run settings)
"""

from dataclasses import dataclass, field, asdict

import yaml

import cerberus

from perisol.exceptions import ConfigError
from perisol.utils.logging import get_perisol_logger

# pylint: disable=logging-fstring-interpolation

# A periodic coefficient is either a bare number or a truncated Fourier series
COEFFICIENT = {
    "oneof": [
        {"type": "number"},
        {
            "type": "dict",
            "schema": {
                "mean": {"type": "number", "required": True},
                "cos": {"type": "list", "schema": {"type": "number"}},
                "sin": {"type": "list", "schema": {"type": "number"}},
            },
        },
    ]
}

NONLINEARITY_KINDS = [
    "nicholson_discrete",
    "nicholson_distributed",
    "nicholson_mixed",
    "hematopoiesis_distributed",
    "hematopoiesis_discrete",
    "mackey_glass_distributed",
    "custom_table",
]

IMPULSE_KINDS = ["none", "linear", "bounded_slope", "saturating"]

TABLE = {"type": "list", "schema": {"type": "list", "schema": {"type": "number"}}}

SYSTEM_SCHEMA = {
    "name": {"type": "string"},
    "period": {"type": "number", "required": True},
    "dimension": {"type": "integer", "min": 1, "required": True},
    "death": {"type": "list", "required": True, "schema": COEFFICIENT},
    "coupling": {"type": "list", "schema": {"type": "list", "schema": COEFFICIENT}},
    "nonlinearity": {
        "type": "list",
        "required": True,
        "schema": {
            "type": "dict",
            "schema": {
                "kind": {"type": "string", "allowed": NONLINEARITY_KINDS, "required": True},
                "terms": {
                    "type": "list",
                    "required": True,
                    "schema": {
                        "type": "dict",
                        "schema": {
                            "beta": {**COEFFICIENT, "required": True},
                            "tau": {**COEFFICIENT, "required": True},
                            "c": COEFFICIENT,
                            "gamma": COEFFICIENT,
                            "theta": COEFFICIENT,
                            "alpha": {"type": "number"},
                            "table": TABLE,
                        },
                    },
                },
            },
        },
    },
    "impulses": {
        "type": "dict",
        "schema": {
            "instants": {"type": "list", "schema": {"type": "number"}},
            "maps": {
                "type": "list",
                "schema": {
                    "type": "list",
                    "schema": {
                        "type": "dict",
                        "schema": {
                            "kind": {"type": "string", "allowed": IMPULSE_KINDS},
                            "eta": {"type": "number"},
                            "alpha": {"type": "number"},
                            "scale": {"type": "number"},
                            "table": TABLE,
                            "j0": {"type": "number"},
                        },
                    },
                },
            },
        },
    },
    "envelopes": {
        "type": "dict",
        "schema": {
            "b1": {"type": "list", "required": True, "schema": COEFFICIENT},
            "b2": {"type": "list", "required": True, "schema": COEFFICIENT},
            "r0": {"type": "number"},
            "R0": {"type": "number"},
        },
    },
    "limits": {
        "type": "dict",
        "schema": {
            key: {"type": "list", "required": True, "schema": {"type": "number"}}
            for key in ("f0", "F0", "finf", "Finf")
        },
    },
    "meta": {"type": "dict"},
}

SETTINGS_SCHEMA = {
    "grid_points": {"type": "integer", "min": 16},
    "tolerance": {"type": "number", "min": 0},
    "max_iter": {"type": "integer", "min": 1},
    "damping": {"type": "number", "min": 0, "max": 1},
    "max_step": {"type": "number", "min": 0},
    "eps_sweep": {"type": "list", "schema": {"type": "number", "min": 0, "max": 1}},
    "t_end": {"type": "number", "min": 0},
}


@dataclass
class RunSettings:
    """Numerical defaults shared by every command (overridable from a settings file)"""

    grid_points: int = 512
    tolerance: float = 1e-8
    max_iter: int = 2000
    damping: float = 0.5
    max_step: float = 1e-2
    eps_sweep: list = field(default_factory=lambda: [0.2, 0.1, 0.05, 0.01, 0.001])
    t_end: float = 200.0

    def to_dict(self):
        """Export settings to dict format"""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict):
        """Create settings from a (validated) dictionnary, missing keys keep defaults"""
        return cls(**data)


def validate_config(config: dict, schema: dict = None):
    """Validate an already parsed configuration against a cerberus schema"""

    log = get_perisol_logger()
    validator = cerberus.Validator(schema if schema is not None else SYSTEM_SCHEMA)

    if not isinstance(config, dict) or not validator.validate(config):
        errors = validator.errors if isinstance(config, dict) else {"root": "not a mapping"}
        log.error(f"Schema validation failed for config : {errors}")
        raise ConfigError(f"Configuration loading failed (schema has error(s) : {errors}", errors)

    return config


def config_from_yaml(path: str, schema: dict = None):
    """Load a perisol configuration from a given YAML file"""

    log = get_perisol_logger()
    config = {}

    try:
        with open(path, "r", encoding="utf-8") as yaml_stream:
            config = yaml.safe_load(yaml_stream)
    except (FileNotFoundError, PermissionError) as exc:
        log.error(f"Unable to open configuration file : {exc}")
        raise
    except yaml.YAMLError as exc:
        log.error(f"Unable to parse configuration file : {exc}")
        raise ConfigError(f"Configuration file {path} is not valid YAML : {exc}") from exc

    return validate_config(config, schema)


def load_settings(path: str = None) -> RunSettings:
    """Run settings from an optional YAML file"""

    if path is None:
        return RunSettings()
    return RunSettings.from_dict(config_from_yaml(path, SETTINGS_SCHEMA))
