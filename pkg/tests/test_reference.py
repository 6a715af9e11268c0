import numpy as np
import pytest

from relaxeuler import (
    BCKind,
    BlowUpError,
    Grid,
    ModelParams,
    Potential,
    PotentialKind,
    ReconstructionKind,
    SchemeOptions,
    State,
    build_discrete_equilibrium,
    cfl_dt,
    step,
)
from relaxeuler.harness import run_density_reference
from relaxeuler.reference import (
    explicit_nonap_step,
    porous_medium_step,
    transport_limit_step,
    transport_upwind_step,
)


def wrap(rho):
    return np.concatenate(([rho[-1]], rho, [rho[0]]))


def test_porous_medium_constant_state():
    rho = np.full(7, 2.0)
    phi = np.full(7, 0.3)
    out = porous_medium_step(rho, phi, 1e-3, 0.1, 1.4)
    assert np.array_equal(out, rho[1:-1])


def test_porous_medium_stencil_value():
    # dt = dx^2 makes the center of [1, 2, 1] with periodic wrap hit zero
    dx = 0.1
    rho = wrap(np.array([1.0, 2.0, 1.0]))
    phi = np.zeros(5)
    out = porous_medium_step(rho, phi, dx * dx, dx, 1.0)
    assert out[1] == pytest.approx(0.0, abs=1e-14)
    assert out[0] == pytest.approx(2.0, abs=1e-14)


def test_transport_limit_constant_potential():
    rho = np.linspace(1.0, 2.0, 9)
    phi = np.full(9, 1.0)
    out = transport_limit_step(rho, phi, 1e-3, 0.1)
    assert np.array_equal(out, rho[1:-1])


def test_transport_limit_reduces_to_central_stencil_for_linear_phi():
    rng = np.random.default_rng(3)
    rho = rng.uniform(0.5, 2.0, 20)
    dx = 0.05
    phi = np.arange(20) * dx
    dt = 1e-3
    out = transport_limit_step(rho, phi, dt, dx)
    central = rho[1:-1] - (dt / (2 * dx)) * (rho[2:] - rho[:-2])
    np.testing.assert_allclose(out, central, rtol=1e-13, atol=1e-15)


def test_transport_upwind_donor_cell():
    rho = np.array([1.0, 2.0, 4.0, 8.0])
    dx = 0.1
    phi = np.arange(4) * dx  # v = +1 at every interface
    dt = 0.02
    out = transport_upwind_step(rho, phi, dt, dx)
    expected = rho[1:-1] - (dt / dx) * (rho[1:-1] - rho[:-2])
    np.testing.assert_allclose(out, expected, rtol=1e-14)
    phi_const = np.zeros(4)
    assert np.array_equal(transport_upwind_step(rho, phi_const, dt, dx), rho[1:-1])


def test_transport_upwind_max_principle_constant_drift():
    # a compressive velocity (phi_xx < 0) legitimately concentrates
    # density, so the min/max principle is checked for constant-slope
    # potentials, where pure advection holds it
    rng = np.random.default_rng(17)
    dx = 0.01
    for _ in range(100):
        rho = rng.uniform(0.1, 3.0, 30)
        slope = rng.uniform(-2.0, 2.0)
        if abs(slope) < 1e-3:
            slope = 1.0
        phi = slope * dx * np.arange(30)
        dt = 0.45 * dx / abs(slope)
        out = transport_upwind_step(rho, phi, dt, dx)
        assert out.min() >= rho.min() - 1e-13
        assert out.max() <= rho.max() + 1e-13


def test_transport_upwind_is_order_preserving():
    # Harten monotonicity: raising any input never lowers any output
    rng = np.random.default_rng(29)
    dx = 0.01
    for _ in range(100):
        rho = rng.uniform(0.1, 3.0, 30)
        sigma = rho + rng.uniform(0.0, 0.5, 30)
        phi = rng.uniform(-1.0, 1.0, 30)
        vmax = np.max(np.abs(np.diff(phi))) / dx
        dt = 0.45 * dx / vmax
        lo = transport_upwind_step(rho, phi, dt, dx)
        hi = transport_upwind_step(sigma, phi, dt, dx)
        assert np.all(hi >= lo - 1e-13)


def test_porous_medium_preserves_discrete_equilibrium():
    params = ModelParams(epsilon=1.0, beta=1.0, gamma=1.4)
    grid = Grid(0.0, 1.0, 50)
    pot = Potential(PotentialKind.SINUSOIDAL, grid)
    phi_ext = pot.samples_with_ghosts
    rho = build_discrete_equilibrium(phi_ext, 1.0, params)
    out = porous_medium_step(rho, phi_ext, 1e-4, grid.dx, params.gamma)
    assert np.max(np.abs(out - rho[1:-1])) <= 1e-12


def test_density_steps_conserve_mass_periodically():
    # beta = 1 keeps the shared CFL step inside the porous stability bound
    params = ModelParams(epsilon=0.1, beta=1.0, gamma=1.4, lambda_cfl=0.3)
    grid = Grid(-0.5, 0.5, 64)
    pot = Potential(PotentialKind.SINUSOIDAL, grid)
    x = grid.centers
    rho0 = 1.5 + 0.5 * np.cos(2 * np.pi * x)
    for kind in ("porous", "transport-limit", "transport-upwind"):
        rho = run_density_reference(kind, rho0, pot, 0.01, params, bc=BCKind.PERIODIC)
        assert abs(rho.sum() - rho0.sum()) / rho0.sum() <= 1e-12


def test_explicit_nonap_constant_state():
    params = ModelParams(epsilon=0.5, beta=0.5, gamma=1.4)
    rho = np.full(8, 1.2)
    q = np.zeros(8)
    phi = np.full(8, 0.7)
    out = explicit_nonap_step(State(rho, q), phi, 1e-4, 0.1, params)
    assert np.array_equal(out.rho, rho[1:-1])
    assert np.array_equal(out.q, q[1:-1])


def test_explicit_nonap_agrees_with_unified_at_small_dt():
    # same spatial discretisation (raw states, pointwise source); the time
    # discretisations differ at O(dt^2)
    params = ModelParams(epsilon=1.0, beta=1.0, gamma=1.4)
    grid = Grid(0.0, 1.0, 50)
    pot = Potential(PotentialKind.LINEAR, grid)
    x = grid.centers
    s0 = State(1.0 + 0.2 * np.sin(2 * np.pi * x), 0.1 * np.cos(2 * np.pi * x))
    opts = SchemeOptions(bc=BCKind.PERIODIC, reconstruction=ReconstructionKind.NONE)
    diffs = []
    for dt in (1e-6, 5e-7):
        unified = step(s0, pot, dt, params, opts)
        from relaxeuler.scheme import apply_bc

        rho_ext, q_ext, phi_ext = apply_bc(s0, pot, opts, params)
        nonap = explicit_nonap_step(State(rho_ext, q_ext), phi_ext, dt, grid.dx, params)
        diffs.append(
            max(np.max(np.abs(unified.rho - nonap.rho)), np.max(np.abs(unified.q - nonap.q)))
        )
    assert diffs[0] <= 1e-8
    # halving dt shrinks the gap by about four: second-order in dt
    assert diffs[0] / diffs[1] == pytest.approx(4.0, rel=0.3)


def test_explicit_nonap_blows_up_on_underresolved_mesh():
    params = ModelParams(epsilon=1e-3, beta=1.0, gamma=1.0, lambda_cfl=0.45)
    grid = Grid(-0.5, 0.5, 100)
    pot = Potential(PotentialKind.SINUSOIDAL, grid)
    x = grid.centers
    rho = np.where(np.abs(x) < 0.2, 1.0, 2.0)
    q = np.zeros(100)
    dt = cfl_dt(grid, pot, params)
    phi_ext = pot.samples_with_ghosts
    state = State(rho, q)
    with pytest.raises(BlowUpError):
        for k in range(2000):
            ext = State(wrap(state.rho), wrap(state.q))
            state = explicit_nonap_step(ext, np.concatenate(([pot.samples[-1]], pot.samples, [pot.samples[0]])), dt, grid.dx, params)
