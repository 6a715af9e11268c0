"""Model layer: scaling parameters, mesh, gravitational potentials,
the Darcy pressure law and its relatives, hydrostatic equilibria, and
the time-step weights of the semi-implicit update in explicit form.

Everything here is a pure function of its inputs; the dataclasses are
immutable value types shared freely across the solver modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

ArrayLike = Union[float, np.ndarray]


def _as_float_array(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


def _unwrap(x: np.ndarray):
    """Return a Python float for 0-d results, the array otherwise."""
    return float(x) if x.ndim == 0 else x


@dataclass(frozen=True)
class ModelParams:
    """Scaling and material parameters of the relaxed Euler system.

    epsilon is the relaxation parameter in (0, 1]; beta in [0, 1] selects
    the stiff scaling (beta < 1 relaxes to a transport equation, beta = 1
    to a porous-medium equation); gamma >= 1 is the pressure-law exponent;
    lambda_cfl in (0, 1) is the CFL safety factor.
    """

    epsilon: float = 1.0
    beta: float = 1.0
    gamma: float = 1.4
    lambda_cfl: float = 0.45

    def __post_init__(self):
        if not (0.0 < self.epsilon <= 1.0):
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if not (0.0 <= self.beta <= 1.0):
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")
        if self.gamma < 1.0:
            raise ValueError(f"gamma must be >= 1, got {self.gamma}")
        if not (0.0 < self.lambda_cfl < 1.0):
            raise ValueError(f"lambda_cfl must lie in (0, 1), got {self.lambda_cfl}")

    # Grouped powers of epsilon.  beta = 1 is short-circuited to exact
    # constants so those exponents carry no spurious rounding.
    @property
    def eps_1pb(self) -> float:
        """epsilon**(1 + beta), the friction/gravity stiffness scale."""
        return self.epsilon ** (1.0 + self.beta)

    @property
    def eps_1mb(self) -> float:
        """epsilon**(1 - beta); exactly 1 when beta = 1."""
        return 1.0 if self.beta == 1.0 else self.epsilon ** (1.0 - self.beta)

    @property
    def eps_bm1(self) -> float:
        """epsilon**(beta - 1); exactly 1 when beta = 1."""
        return 1.0 if self.beta == 1.0 else self.epsilon ** (self.beta - 1.0)

    @property
    def eps_b(self) -> float:
        """epsilon**beta, the acoustic stiffness scale."""
        return self.epsilon ** self.beta


@dataclass(frozen=True)
class Grid:
    """Uniform 1D cell-centered mesh on [a, b]."""

    a: float
    b: float
    n_cells: int

    def __post_init__(self):
        if self.n_cells < 1:
            raise ValueError(f"n_cells must be positive, got {self.n_cells}")
        if not self.b > self.a:
            raise ValueError(f"need b > a, got [{self.a}, {self.b}]")

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        return self.a + self.dx * (np.arange(self.n_cells) + 0.5)

    @property
    def centers_with_ghosts(self) -> np.ndarray:
        """Cell centers extended by one ghost cell on each side."""
        return self.a + self.dx * (np.arange(-1, self.n_cells + 1) + 0.5)


class PotentialKind(str, Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"
    SINUSOIDAL = "sine"


@dataclass(frozen=True)
class Potential:
    """Gravitational potential from one of the analytic families,
    sampled at the cell centers of a grid."""

    kind: PotentialKind
    grid: Grid

    def value(self, x: ArrayLike) -> ArrayLike:
        x = _as_float_array(x)
        if self.kind is PotentialKind.LINEAR:
            out = x.copy()
        elif self.kind is PotentialKind.QUADRATIC:
            out = 0.5 * x * x
        elif self.kind is PotentialKind.SINUSOIDAL:
            out = np.sin(2.0 * np.pi * x)
        else:  # pragma: no cover - enum is exhaustive
            raise ValueError(f"unknown potential kind {self.kind!r}")
        return _unwrap(out)

    @property
    def samples(self) -> np.ndarray:
        """phi at the interior cell centers."""
        return self.value(self.grid.centers)

    @property
    def samples_with_ghosts(self) -> np.ndarray:
        """phi at the analytically extended centers (one ghost per side)."""
        return self.value(self.grid.centers_with_ghosts)

    @property
    def max_abs_slope(self) -> float:
        """max |phi_{i+1} - phi_i| / dx over the interior interfaces."""
        phi = self.samples
        if phi.size < 2:
            return 0.0
        return float(np.max(np.abs(np.diff(phi)))) / self.grid.dx


@dataclass
class State:
    """Per-cell conserved fields: density rho and momentum q = rho*u.

    Non-finite entries are allowed; they mark a blown-up computation and
    are caught by the blow-up detector, not by this container.
    """

    rho: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        self.rho = _as_float_array(self.rho)
        self.q = _as_float_array(self.q)
        if self.rho.shape != self.q.shape:
            raise ValueError(
                f"rho and q must have equal shapes, got {self.rho.shape} vs {self.q.shape}"
            )

    @property
    def n_cells(self) -> int:
        return self.rho.size

    def copy(self) -> "State":
        return State(self.rho.copy(), self.q.copy())

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.rho)) and np.all(np.isfinite(self.q)))


@dataclass(frozen=True)
class StepCoefficients:
    """Per-step weights of the explicit incremental update.

    Each weight is formed as one grouped expression in (epsilon, beta, dt)
    so no factor like epsilon**(-2*beta) is ever materialized; the grouped
    forms stay bounded and reach their stiff limits without over/underflow.
    """

    c1: float  # eps^(1+b) / (eps^(1+b) + dt)
    a_hyp: float  # c1 * dt           : hyperbolic flux weight
    a_kin: float  # c1 * dt^2         : kinetic parabolic weight
    a_prs: float  # eps^(1-b) dt^2 / (eps^(1+b) + dt) : pressure parabolic weight
    a_grav: float  # dt^2 / (eps^(1+b) + dt)          : gravity flux weight
    a_fric: float  # dt / (eps^(1+b) + dt)            : friction weight
    a_src: float  # eps^(1-b) dt / (eps^(1+b) + dt)  : momentum source weight


def step_coefficients(params: ModelParams, dt: float) -> StepCoefficients:
    """Evaluate all seven update weights for one time step of size dt."""
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    e1pb = params.eps_1pb
    e1mb = params.eps_1mb
    denom = e1pb + dt
    c1 = e1pb / denom
    a_fric = dt / denom
    a_hyp = c1 * dt
    a_grav = dt * dt / denom
    return StepCoefficients(
        c1=c1,
        a_hyp=a_hyp,
        a_kin=a_hyp * dt,
        a_prs=e1mb * a_grav,
        a_grav=a_grav,
        a_fric=a_fric,
        a_src=e1mb * a_fric,
    )


def pressure(rho: ArrayLike, gamma: float) -> ArrayLike:
    """Darcy pressure law P(rho) = rho**gamma."""
    rho = _as_float_array(rho)
    if np.any(rho < 0.0):
        raise ValueError("density must be nonnegative")
    return _unwrap(np.power(rho, gamma))


def pressure_inverse(y: ArrayLike, gamma: float) -> ArrayLike:
    """Inverse pressure law: y**(1/gamma), valid for every gamma >= 1."""
    y = _as_float_array(y)
    if np.any(y < 0.0):
        raise ValueError("pressure must be nonnegative")
    return _unwrap(np.power(y, 1.0 / gamma))


def psi(rho: ArrayLike, gamma: float) -> ArrayLike:
    """Enthalpy-like potential gamma/(gamma-1) * rho**(gamma-1), gamma > 1.

    Unsupported at gamma = 1, where this potential degenerates (the
    energy-based interface reconstruction is unavailable there).
    """
    if gamma <= 1.0:
        raise ValueError("psi requires gamma > 1")
    rho = _as_float_array(rho)
    if np.any(rho < 0.0):
        raise ValueError("density must be nonnegative")
    return _unwrap((gamma / (gamma - 1.0)) * np.power(rho, gamma - 1.0))


def psi_inverse(y: ArrayLike, gamma: float) -> ArrayLike:
    """Inverse of psi on [0, inf): ((gamma-1) y / gamma)**(1/(gamma-1))."""
    if gamma <= 1.0:
        raise ValueError("psi_inverse requires gamma > 1")
    y = _as_float_array(y)
    if np.any(y < 0.0):
        raise ValueError("argument must be nonnegative")
    return _unwrap(np.power((gamma - 1.0) * y / gamma, 1.0 / (gamma - 1.0)))


def sound_speed(rho: ArrayLike, params: ModelParams) -> ArrayLike:
    """Scaled acoustic speed sqrt(gamma rho**(gamma-1)) / epsilon**beta."""
    rho = _as_float_array(rho)
    if np.any(rho <= 0.0):
        raise ValueError("density must be positive")
    c = np.sqrt(params.gamma * np.power(rho, params.gamma - 1.0))
    return _unwrap(c / params.eps_b)


def isothermal_equilibrium(
    phi_value: ArrayLike, C: float, params: ModelParams
) -> ArrayLike:
    """Hydrostatic density C * exp(eps**(beta-1) * phi) of the gamma = 1 law."""
    phi_value = _as_float_array(phi_value)
    return _unwrap(C * np.exp(params.eps_bm1 * phi_value))


def isentropic_equilibrium(
    phi_value: ArrayLike, C: float, params: ModelParams
) -> ArrayLike:
    """Hydrostatic density of the gamma > 1 law.

    Returns (((gamma-1)/gamma) eps**(beta-1) phi + C)**(1/(gamma-1)); a
    negative base means the equilibrium does not extend to that potential
    value and raises a domain error.
    """
    gamma = params.gamma
    if gamma <= 1.0:
        raise ValueError("isentropic equilibrium requires gamma > 1")
    phi_value = _as_float_array(phi_value)
    base = ((gamma - 1.0) / gamma) * params.eps_bm1 * phi_value + C
    if np.any(base < 0.0):
        raise ValueError("equilibrium does not exist: negative base")
    return _unwrap(np.power(base, 1.0 / (gamma - 1.0)))
