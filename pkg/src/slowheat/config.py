"""Experiment configuration: schema, validation, defaults, and overrides.

A run is described by a single YAML file.  Validation walks the document
against the declarative schema below, fills defaults, rejects unknown keys,
and reports failures with the dotted path of the offending field, so a typo
like ``magnus.q_mx`` dies at load time with its exact location instead of
surfacing as a misconfigured computation.

Sections beyond ``lattice`` and ``hamiltonian`` are optional at load time;
each subcommand checks for the sections it needs.  Command-line overrides
(``--set key.sub=value``) are YAML-parsed scalars spliced into the raw
document before validation, so they obey the same schema as the file.
"""

from __future__ import annotations

import copy

import yaml

from .errors import SchemaError
from .lr_bounds import BOUND_KINDS
from .models import DEFAULT_G, DEFAULT_HX, DEFAULT_HZ, DEFAULT_J

SCHEMA_VERSION = 1

_REQUIRED = object()


class _Scalar:
    """Leaf field: accepted types, default, choice set, value predicate."""

    def __init__(self, types, default=_REQUIRED, choices=None, check=None,
                 check_msg=""):
        self.types = types if isinstance(types, tuple) else (types,)
        self.default = default
        self.choices = choices
        self.check = check
        self.check_msg = check_msg

    def validate(self, value, path):
        # bool passes isinstance checks against int; keep them apart
        if isinstance(value, bool) and bool not in self.types:
            raise SchemaError(path, "expected a number, got a boolean")
        if float in self.types and isinstance(value, int) \
                and not isinstance(value, bool):
            value = float(value)
        if not isinstance(value, self.types):
            names = "/".join(t.__name__ for t in self.types)
            raise SchemaError(path, f"expected {names}, got "
                                    f"{type(value).__name__}")
        if self.choices is not None and value not in self.choices:
            raise SchemaError(path, f"must be one of {self.choices}, "
                                    f"got {value!r}")
        if self.check is not None and not self.check(value):
            raise SchemaError(path, self.check_msg or "invalid value")
        return value


class _ListOf:
    """Homogeneous list of scalar leaves."""

    def __init__(self, item: _Scalar, default=_REQUIRED, min_len=1):
        self.item = item
        self.default = default
        self.min_len = min_len

    def validate(self, value, path):
        if not isinstance(value, list):
            raise SchemaError(path, f"expected a list, got "
                                    f"{type(value).__name__}")
        if len(value) < self.min_len:
            raise SchemaError(path, f"needs at least {self.min_len} entries")
        return [self.item.validate(v, f"{path}[{i}]")
                for i, v in enumerate(value)]


class _Section:
    """Mapping with a fixed key set; unknown keys are rejected by path."""

    def __init__(self, children: dict, default=_REQUIRED):
        self.children = children
        self.default = default

    def validate(self, value, path):
        if not isinstance(value, dict):
            raise SchemaError(path, f"expected a mapping, got "
                                    f"{type(value).__name__}")
        for key in value:
            if key not in self.children:
                raise SchemaError(f"{path}.{key}" if path else str(key),
                                  "unknown key")
        out = {}
        for key, node in self.children.items():
            sub = f"{path}.{key}" if path else key
            if key in value and value[key] is not None:
                out[key] = node.validate(value[key], sub)
            elif node.default is _REQUIRED:
                raise SchemaError(sub, "required key is missing")
            else:
                out[key] = node.default
        return out


def _pos(name):
    return dict(check=lambda v: v > 0, check_msg=f"{name} must be positive")


_INT_OR_AUTO = _Scalar((int, str), default="auto",
                       check=lambda v: v == "auto" if isinstance(v, str)
                       else v >= 1,
                       check_msg='must be an integer >= 1 or "auto"')

_SCHEMA = _Section({
    "schema_version": _Scalar(int, check=lambda v: v == SCHEMA_VERSION,
                              check_msg=f"this build reads schema version "
                                        f"{SCHEMA_VERSION}"),
    "seed": _Scalar(int, default=7, check=lambda v: v >= 0,
                    check_msg="seed must be >= 0"),
    "out_dir": _Scalar(str, default="runs"),
    "lattice": _Section({
        "kind": _Scalar(str, default="chain", choices=("chain",)),
        "n_sites": _Scalar(int, check=lambda v: v >= 2,
                           check_msg="need at least 2 sites"),
        "boundary": _Scalar(str, default="open",
                            choices=("open", "periodic")),
    }),
    "hamiltonian": _Section({
        "family": _Scalar(str, default="powerlaw_ising",
                          choices=("powerlaw_ising",)),
        "alpha": _Scalar(float, **_pos("alpha")),
        "couplings": _Section({
            "J": _Scalar(float, default=DEFAULT_J),
            "hx": _Scalar(float, default=DEFAULT_HX),
            "hz": _Scalar(float, default=DEFAULT_HZ),
        }, default={"J": DEFAULT_J, "hx": DEFAULT_HX, "hz": DEFAULT_HZ}),
    }),
    "drive": _Section({
        "g": _Scalar(float, default=DEFAULT_G),
        "omega": _Scalar(float, default=None, **_pos("omega")),
        "period": _Scalar(float, default=None, **_pos("period")),
        "operator": _Scalar(str, default="X", choices=("X", "Y", "Z")),
    }, default=None),
    "magnus": _Section({
        "q_max": _INT_OR_AUTO,
        "report_orders": _Scalar(int, default=None,
                                 check=lambda v: v >= 1,
                                 check_msg="report_orders must be >= 1"),
        "kappa": _Scalar(float, default=1.0),
        "c": _Scalar(float, default=10.0, **_pos("c")),
    }, default=None),
    "lr_scan": _Section({
        "kinds": _Scalar((str, list), default="applicable",
                         check=lambda v: v == "applicable"
                         if isinstance(v, str)
                         else all(k in BOUND_KINDS for k in v),
                         check_msg='must be "applicable" or a list drawn '
                                   f"from {BOUND_KINDS}"),
        "mu": _Scalar(float, default=0.5),
        "t_max": _Scalar(float, default=3.0, **_pos("t_max")),
        "n_times": _Scalar(int, default=13, check=lambda v: v >= 2,
                           check_msg="need at least 2 time points"),
        "radii": _ListOf(_Scalar(float, **_pos("radius"))),
        "measure": _Scalar(bool, default=True),
    }, default=None),
    "response": _Section({
        "beta": _Scalar(float, default=1.0, check=lambda v: v >= 0,
                        check_msg="beta must be >= 0"),
        "observable": _Scalar(str, default="X", choices=("X", "Y", "Z")),
        "bins": _Section({
            "lo": _Scalar(float),
            "hi": _Scalar(float),
            "n": _Scalar(int, check=lambda v: v >= 1,
                         check_msg="need at least 1 bin"),
        }),
        "k_grid": _ListOf(_Scalar(int, check=lambda v: v >= 0,
                                  check_msg="k must be >= 0"),
                          default=[0, 1, 2, 3, 4]),
    }, default=None),
    "heat_scan": _Section({
        "beta": _Scalar(float, default=1.0, check=lambda v: v >= 0,
                        check_msg="beta must be >= 0"),
        "omegas": _ListOf(_Scalar(float, **_pos("omega")), min_len=4),
        "n_periods": _Scalar((int, list), check=lambda v: (
            v >= 1 if isinstance(v, int)
            else all(isinstance(n, int) and n >= 1 for n in v)),
            check_msg="n_periods must be a positive integer or a list "
                      "of them (one per omega)"),
        "fraction": _Scalar(float, default=0.5,
                            check=lambda v: 0.0 < v < 1.0,
                            check_msg="fraction must lie in (0, 1)"),
        "steps": _Scalar(int, default=32, check=lambda v: v >= 4,
                         check_msg="steps must be >= 4"),
    }, default=None),
    "delta": _Section({
        "n_periods": _Scalar(int, check=lambda v: v >= 1,
                             check_msg="n_periods must be >= 1"),
        "site": _Scalar(int, default=0, check=lambda v: v >= 0,
                        check_msg="site must be >= 0"),
        "operator": _Scalar(str, default="X", choices=("X", "Y", "Z")),
        "envelopes": _ListOf(_Scalar(str), default=["gong", "conjectured"]),
        "beta_cone": _Scalar(float, default=1.0,
                             check=lambda v: v >= 1.0,
                             check_msg="beta_cone must be >= 1"),
        "sigma": _Scalar(float, default=None,
                         check=lambda v: 0.0 < v < 1.0,
                         check_msg="sigma must lie in (0, 1)"),
        "calibration_level": _Scalar(float, default=1e-3,
                                     **_pos("calibration_level")),
        "steps": _Scalar(int, default=32, check=lambda v: v >= 4,
                         check_msg="steps must be >= 4"),
    }, default=None),
    "lemmas": _Section({
        "seed": _Scalar(int, default=7, check=lambda v: v >= 0,
                        check_msg="seed must be >= 0"),
    }, default={"seed": 7}),
})


def validate(raw: dict) -> dict:
    """Validated copy of a raw config mapping, defaults filled."""
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise SchemaError("<root>", "config document must be a mapping")
    return _SCHEMA.validate(raw, "")


def default_config() -> dict:
    """Minimal valid config: a 2-site chain placeholder for system-free runs."""
    return validate({"schema_version": SCHEMA_VERSION,
                     "lattice": {"n_sites": 2},
                     "hamiltonian": {"alpha": 3.0}})


def load_raw(path: str) -> dict:
    """Parse a config file to a raw mapping without validating it."""
    try:
        with open(path) as f:
            raw = yaml.safe_load(f)
    except OSError as exc:
        raise SchemaError(str(path), f"cannot read config: {exc}")
    except yaml.YAMLError as exc:
        raise SchemaError(str(path), f"not valid YAML: {exc}")
    return raw


def load_config(path: str) -> dict:
    return validate(load_raw(path))


def apply_overrides(raw: dict, assignments) -> dict:
    """Splice ``key.sub=value`` strings into a raw mapping, then revalidate.

    Values are YAML-parsed, so ``--set lr_scan.radii=[3,4,5]`` and
    ``--set magnus.q_max=auto`` both work.
    """
    out = copy.deepcopy(raw) if raw else {}
    for text in assignments:
        if "=" not in text:
            raise SchemaError(text, "override must look like key.path=value")
        key, _, val_text = text.partition("=")
        key = key.strip()
        if not key:
            raise SchemaError(text, "override must name a key")
        try:
            value = yaml.safe_load(val_text)
        except yaml.YAMLError as exc:
            raise SchemaError(key, f"override value is not valid YAML: {exc}")
        node = out
        parts = key.split(".")
        for part in parts[:-1]:
            child = node.get(part)
            if child is None:
                child = {}
                node[part] = child
            elif not isinstance(child, dict):
                raise SchemaError(key, f"{part} is not a section")
            node = child
        node[parts[-1]] = value
    return validate(out)
