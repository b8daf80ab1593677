"""Problem definitions, built-in test problems, and config file ingestion."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .gegenbauer import LAMBDA_MIN_GUARD

COMPAT_TOL = 1e-12

DEFAULT_LAMBDA = -0.4

# Terminal times used by the built-in problems.
_DEFAULT_T = {1: 0.2, 2: 1.0, 3: 0.1}


class ConfigError(ValueError):
    """Raised for unreadable, malformed, or invalid configuration files."""


@dataclass(frozen=True)
class ADProblem:
    """Periodic advection-diffusion problem data.

    u_t + mu u_x = nu u_xx on [0, L] x [0, T], initial data u0, boundary
    value g(t) = u(0, t) = u(L, t), and optionally the exact solution and
    its spatial derivative.
    """

    mu: float
    nu: float
    L: float
    T: float
    u0: Callable
    g: Callable
    exact: Optional[Callable] = None
    exact_dx: Optional[Callable] = None

    def __post_init__(self):
        if self.mu < 0 or self.nu < 0:
            raise ValueError("mu and nu must be nonnegative")
        if not self.L > 0:
            raise ValueError(f"L must be positive; got {self.L}")
        if not self.T > 0:
            raise ValueError(f"T must be positive; got {self.T}")
        gap = abs(float(self.u0(0.0)) - float(self.g(0.0)))
        if gap > COMPAT_TOL:
            raise ValueError(
                f"initial and boundary data incompatible: |u0(0) - g(0)| = {gap:.3e}"
            )

    def with_horizon(self, T: float) -> "ADProblem":
        return replace(self, T=T)


@dataclass(frozen=True)
class SolverConfig:
    """Discretization parameters: N spatial modes, M + 1 time nodes, index lam."""

    N: int
    M: int
    N0: int = 0  # 0 means "default to N + 2"
    lam: float = DEFAULT_LAMBDA

    def __post_init__(self):
        if self.N < 2 or self.N % 2:
            raise ValueError(f"N must be even and >= 2; got {self.N}")
        if self.N0 == 0:
            object.__setattr__(self, "N0", self.N + 2)
        if self.N0 <= self.N or self.N0 % 2:
            raise ValueError(
                f"N0 must be even and > N = {self.N}; got {self.N0}"
            )
        if self.M < 1:
            raise ValueError(f"M must be >= 1; got {self.M}")
        if not self.lam > -0.5 + LAMBDA_MIN_GUARD:
            raise ValueError(
                f"lambda must exceed {-0.5 + LAMBDA_MIN_GUARD}; got {self.lam}"
            )


def test_problem(pid: int) -> ADProblem:
    """Return one of the three built-in problems with known exact solutions."""
    if pid == 1:
        return ADProblem(
            mu=0.0, nu=1.0, L=2.0, T=_DEFAULT_T[1],
            u0=lambda x: np.sin(np.pi * x),
            g=lambda t: 0.0 * np.asarray(t),
            exact=lambda x, t: np.exp(-np.pi ** 2 * t) * np.sin(np.pi * x),
            exact_dx=lambda x, t: np.pi * np.exp(-np.pi ** 2 * t) * np.cos(np.pi * x),
        )
    if pid == 2:
        return ADProblem(
            mu=0.0, nu=1.0 / np.pi ** 2, L=2.0, T=_DEFAULT_T[2],
            u0=lambda x: np.sin(np.pi * x),
            g=lambda t: 0.0 * np.asarray(t),
            exact=lambda x, t: np.exp(-t) * np.sin(np.pi * x),
            exact_dx=lambda x, t: np.pi * np.exp(-t) * np.cos(np.pi * x),
        )
    if pid == 3:
        mu, nu = 0.01, 0.1
        return ADProblem(
            mu=mu, nu=nu, L=2.0, T=_DEFAULT_T[3],
            u0=lambda x: np.sin(np.pi * x),
            g=lambda t: -np.exp(-np.pi ** 2 * nu * t) * np.sin(np.pi * mu * t),
            exact=lambda x, t: -np.exp(-np.pi ** 2 * nu * t) * np.sin(np.pi * (mu * t - x)),
            exact_dx=lambda x, t: np.pi * np.exp(-np.pi ** 2 * nu * t) * np.cos(np.pi * (mu * t - x)),
        )
    raise ValueError(f"unknown problem id {pid}; expected 1, 2 or 3")


# Named samplers available to custom (non-built-in) problems.
_U0_SAMPLERS = {
    "first_harmonic": lambda L: (lambda x: np.sin(2.0 * np.pi * x / L)),
}
_G_SAMPLERS = {
    "zero": lambda L: (lambda t: 0.0 * np.asarray(t)),
}

# Core keys per the config file contract, plus run-level extras consumed by
# the command line front end.
KNOWN_KEYS = {
    "problem_id", "mu", "nu", "L", "T", "N", "N0", "M", "lambda", "t_final",
    "u0", "g", "N_range", "M_range", "lambda_list", "M_list", "repeats",
}


def parse_config_pairs(path) -> dict:
    """Read a flat key=value file (one pair per line, # comments, UTF-8)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
        if key in pairs:
            raise ConfigError(f"{path}:{lineno}: duplicate key '{key}'")
        if not value:
            raise ConfigError(f"{path}:{lineno}: empty value for key '{key}'")
        pairs[key] = value
    return pairs


def _get(pairs: dict, key: str, cast, required: bool = False, default=None):
    if key not in pairs:
        if required:
            raise ConfigError(f"missing required key '{key}'")
        return default
    try:
        return cast(pairs[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid value for key '{key}': {pairs[key]!r}") from exc


def load_config(path) -> tuple[ADProblem, SolverConfig]:
    """Build the problem and solver configuration described by a config file.

    Built-in problems are selected with problem_id (T may be overridden);
    custom problems give mu, nu, L, T plus u0/g chosen from the named
    samplers. Run-level extras (t_final, sweep ranges, repeats) are read
    separately with parse_config_pairs.
    """
    pairs = parse_config_pairs(path)

    if "problem_id" in pairs:
        forbidden = {"mu", "nu", "L", "u0", "g"} & pairs.keys()
        if forbidden:
            raise ConfigError(
                f"keys {sorted(forbidden)} not allowed together with problem_id"
            )
        problem = test_problem(_get(pairs, "problem_id", int, required=True))
        T = _get(pairs, "T", float)
        if T is not None:
            if not T > 0:
                raise ConfigError(f"invalid value for key 'T': must be positive")
            problem = problem.with_horizon(T)
    else:
        mu = _get(pairs, "mu", float, required=True)
        nu = _get(pairs, "nu", float, required=True)
        L = _get(pairs, "L", float, required=True)
        T = _get(pairs, "T", float, required=True)
        u0_name = _get(pairs, "u0", str, required=True)
        g_name = _get(pairs, "g", str, required=True)
        if u0_name not in _U0_SAMPLERS:
            raise ConfigError(
                f"invalid value for key 'u0': {u0_name!r} "
                f"(known: {sorted(_U0_SAMPLERS)})"
            )
        if g_name not in _G_SAMPLERS:
            raise ConfigError(
                f"invalid value for key 'g': {g_name!r} "
                f"(known: {sorted(_G_SAMPLERS)})"
            )
        try:
            problem = ADProblem(mu=mu, nu=nu, L=L, T=T,
                                u0=_U0_SAMPLERS[u0_name](L),
                                g=_G_SAMPLERS[g_name](L))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    N = _get(pairs, "N", int, required=True)
    M = _get(pairs, "M", int, required=True)
    N0 = _get(pairs, "N0", int, default=0)
    lam = _get(pairs, "lambda", float, default=DEFAULT_LAMBDA)
    try:
        config = SolverConfig(N=N, M=M, N0=N0, lam=lam)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    if "t_final" in pairs:
        t_final = _get(pairs, "t_final", float)
        if not t_final > 0:
            raise ConfigError("invalid value for key 't_final': must be positive")

    return problem, config
