"""Run configuration: INI-style file with sectioned key=value pairs,
command-line overrides, and a stable hash for run manifests."""

import configparser
import hashlib
import copy

from .errors import ParseError

DEFAULTS = {
    "physics": {
        "c": 1484.0,       # m/s
        "mu": 1.0e-3,      # kg/(m s)
        "sigma": 7.25e-2,  # N/m
        "rho": 1.0e3,      # kg/m^3
        "p_v": 2330.0,     # Pa
        "r0": 1.0e-3,      # m
        "p0": 1.0e5,       # Pa
        "kappa": 4.0 / 3.0,
        "alpha": 2.0e4,    # Pa, melody/step drive amplitude
        "f_p": 100.0,      # Hz
    },
    "encoding": {
        "duty": 0.5,
        "articulation": 0.1,
        "polarity": 1,
        "dt": 3.0e-6,      # s
    },
    "solver": {
        "dtau": 0.0,       # 0 = auto (~100 steps per natural period)
        "h": 100.0,        # far-field distance in units of r0
        "drive_derivative": False,
        "csv_decimate": 16,
    },
    "reservoir": {
        "n_virtual": 20,
        "c_tau": 1.0,      # symbol slot length in units of the relaxation time
        "beta": 1.0e-8,
        "k_max": 15,
        "seed": 1234,
        "n_bits": 2000,
        "alpha": 1.0e4,    # Pa, binary drive amplitude (0.1 * p0)
    },
    "audio": {
        "rate": 44100,
        "peak": 0.9,
    },
}

_INT_KEYS = {("encoding", "polarity"), ("solver", "csv_decimate"),
             ("reservoir", "n_virtual"), ("reservoir", "k_max"),
             ("reservoir", "seed"), ("reservoir", "n_bits"),
             ("audio", "rate")}
_BOOL_KEYS = {("solver", "drive_derivative")}


def _coerce(section, key, raw):
    if isinstance(raw, (bool, int, float)):
        return raw
    raw = raw.strip()
    if (section, key) in _BOOL_KEYS:
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ParseError(f"{section}.{key}: expected a boolean, got {raw!r}")
    try:
        if (section, key) in _INT_KEYS:
            return int(raw)
        return float(raw)
    except ValueError:
        raise ParseError(f"{section}.{key}: expected a number, got {raw!r}") from None


def load_config(path=None, overrides=()):
    """Defaults, optionally updated from an INI file, then from
    'section.key=value' override strings."""
    cfg = copy.deepcopy(DEFAULTS)
    if path is not None:
        parser = configparser.ConfigParser()
        read = parser.read(str(path))
        if not read:
            raise ParseError(f"config file not found: {path}")
        for section in parser.sections():
            if section not in cfg:
                raise ParseError(f"unknown config section [{section}]")
            for key, raw in parser.items(section):
                if key not in cfg[section]:
                    raise ParseError(f"unknown config key {section}.{key}")
                cfg[section][key] = _coerce(section, key, raw)
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ParseError(f"override must look like section.key=value: {item!r}")
        target, value = item.split("=", 1)
        section, _, key = target.partition(".")
        if section not in cfg or key not in cfg[section]:
            raise ParseError(f"unknown config key {section}.{key}")
        cfg[section][key] = _coerce(section, key, value)
    return cfg


def config_hash(cfg) -> str:
    """Stable hash of a resolved configuration."""
    canon = ";".join(f"{s}.{k}={cfg[s][k]!r}"
                     for s in sorted(cfg) for k in sorted(cfg[s]))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]
