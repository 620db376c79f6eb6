"""Flat key = value experiment configuration.

Three sections — [scenario], [params], [experiment] — with every key
optional; missing keys take the stock operating point (4 transmit
antennas, 4 surfaces of 20 elements, 34 dBm budget, -80 dBW noise,
chi = 0.8, mu = 1e-6 W, 1.5 bits/s/Hz protection floor, Rician factor 3,
half-wavelength spacing).  dB-valued keys are converted to linear watts
here so the rest of the package never sees decibels.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

import numpy as np

from .channel import Scenario
from .exceptions import ParseError, ValidationError

SWEEP_VARS = ("none", "K", "P_dbm", "N", "M", "r_th")
SCHEME_NAMES = ("proposed", "sud", "tdma", "proposed_2bit")

_SCENARIO_KEYS = {"n_pt_antennas", "n_ris", "elements_per_ris", "rician_kappa",
                  "beta0_db", "spacing_ratio"}
_PARAM_KEYS = {"p_dbm", "sigma2_dbw", "chi", "mu_w", "r_th", "weights"}
_EXPERIMENT_KEYS = {"schemes", "sweep_var", "sweep_values", "n_drops",
                    "master_seed", "output_path"}


def dbm_to_watts(dbm):
    return 10.0 ** ((dbm - 30.0) / 10.0)


def dbw_to_watts(dbw):
    return 10.0 ** (dbw / 10.0)


@dataclass
class ExperimentConfig:
    scenario: Scenario
    params: object
    schemes: list = field(default_factory=lambda: ["proposed"])
    sweep_var: str = "none"
    sweep_values: list = field(default_factory=list)
    n_drops: int = 1
    master_seed: int = 1
    output_path: str = "results.csv"


def parse_scheme(token):
    """Scheme token, either a plain name or aa_noma@<transmit dBm>."""
    token = token.strip()
    if token in SCHEME_NAMES:
        return token
    if token.startswith("aa_noma@"):
        try:
            float(token.split("@", 1)[1])
        except ValueError:
            raise ValidationError(f"bad active-antenna power in scheme {token!r}") from None
        return token
    raise ValidationError(f"unknown scheme {token!r}")


def parse_config(path):
    """Read the file (missing file = all defaults are a ValidationError for
    the path, an empty file is fine) and return a validated config."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cp.read_file(fh, source=str(path))
    except FileNotFoundError:
        raise ParseError(f"config file not found: {path}") from None
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", None)
        if lineno is None and getattr(exc, "errors", None):
            lineno = exc.errors[0][0]
        raise ParseError(str(exc).splitlines()[0], lineno=lineno) from None

    problems = []
    for section in cp.sections():
        known = {"scenario": _SCENARIO_KEYS, "params": _PARAM_KEYS,
                 "experiment": _EXPERIMENT_KEYS}.get(section)
        if known is None:
            problems.append(f"unknown section [{section}]")
            continue
        for key in cp[section]:
            if key not in known:
                problems.append(f"unknown key {key!r} in [{section}]")

    def get(section, key, conv, default):
        if not cp.has_option(section, key):
            return default
        raw = cp.get(section, key)
        try:
            return conv(raw)
        except ValueError:
            problems.append(f"[{section}] {key} = {raw!r} is not a {conv.__name__}")
            return default

    n = get("scenario", "n_pt_antennas", int, 4)
    m = get("scenario", "n_ris", int, 4)
    k = get("scenario", "elements_per_ris", int, 20)
    kappa = get("scenario", "rician_kappa", float, 3.0)
    beta0 = get("scenario", "beta0_db", float, -20.0)
    spacing = get("scenario", "spacing_ratio", float, 0.5)

    p_dbm = get("params", "p_dbm", float, 34.0)
    sigma2_dbw = get("params", "sigma2_dbw", float, -80.0)
    chi = get("params", "chi", float, 0.8)
    mu = get("params", "mu_w", float, 1e-6)
    r_th = get("params", "r_th", float, 1.5)
    weights = None
    if cp.has_option("params", "weights"):
        try:
            weights = np.array([float(x) for x in cp.get("params", "weights").split(",")])
        except ValueError:
            problems.append("[params] weights must be a comma-separated float list")

    schemes = ["proposed"]
    if cp.has_option("experiment", "schemes"):
        schemes = []
        for tok in cp.get("experiment", "schemes").split(","):
            try:
                schemes.append(parse_scheme(tok))
            except ValidationError as exc:
                problems.append(str(exc))
    sweep_var = get("experiment", "sweep_var", str, "none").strip()
    sweep_values = []
    if cp.has_option("experiment", "sweep_values"):
        try:
            sweep_values = [float(x) for x in cp.get("experiment", "sweep_values").split(",")]
        except ValueError:
            problems.append("[experiment] sweep_values must be a comma-separated float list")
    n_drops = get("experiment", "n_drops", int, 1)
    master_seed = get("experiment", "master_seed", int, 1)
    output_path = get("experiment", "output_path", str, "results.csv")

    if n < 1:
        problems.append("n_pt_antennas must be >= 1")
    if m < 1:
        problems.append("n_ris must be >= 1")
    if k < 1:
        problems.append("elements_per_ris must be >= 1")
    if kappa < 0:
        problems.append("rician_kappa must be >= 0")
    if spacing <= 0:
        problems.append("spacing_ratio must be > 0")
    if not 0.0 < chi <= 1.0:
        problems.append("chi must be in (0, 1]")
    if mu < 0:
        problems.append("mu_w must be >= 0")
    if r_th < 0:
        problems.append("r_th must be >= 0")
    if weights is not None and (len(weights) != m or np.any(weights <= 0)):
        problems.append(f"weights must be {m} positive values")
    if sweep_var not in SWEEP_VARS:
        problems.append(f"sweep_var must be one of {SWEEP_VARS}")
    if sweep_var != "none" and not sweep_values:
        problems.append("sweep_values required when sweep_var is set")
    if sweep_var in ("K", "N", "M") and any(v != int(v) or v < 1 for v in sweep_values):
        problems.append(f"sweep_values for {sweep_var} must be positive integers")
    if n_drops < 1:
        problems.append("n_drops must be >= 1")
    if not 0 <= master_seed < 2 ** 64:
        problems.append("master_seed must fit in 64 bits")
    if not output_path:
        problems.append("output_path must be nonempty")
    if not schemes:
        problems.append("schemes must be nonempty")
    if problems:
        raise ValidationError("; ".join(problems))

    from .network import SystemParams  # local to avoid import cycles at module load

    scenario = Scenario(n_pt_antennas=n, n_ris=m, elements_per_ris=k,
                        rician_kappa=kappa, beta0_db=beta0, spacing_ratio=spacing)
    params = SystemParams(p=dbm_to_watts(p_dbm), sigma2=dbw_to_watts(sigma2_dbw),
                          chi=chi, mu=mu, r_th=r_th,
                          weights=weights if weights is not None else np.ones(m))
    return ExperimentConfig(scenario=scenario, params=params, schemes=schemes,
                            sweep_var=sweep_var, sweep_values=sweep_values,
                            n_drops=n_drops, master_seed=master_seed,
                            output_path=output_path)
