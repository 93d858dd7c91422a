########################################################################################################################
# Copyright 2024 the authors (see AUTHORS file for full list).                                                         #
#                                                                                                                      #
#                                                                                                                      #
# This file is part of OpenChemo.                                                                                      #
#                                                                                                                      #
#                                                                                                                      #
# OpenChemo is free software: you can redistribute it and/or modify it under the terms of the GNU Lesser General       #
# Public License as published by the Free Software Foundation, either version 2.1 of the License, or (at your option)  #
# any later version.                                                                                                   #
#                                                                                                                      #
# OpenChemo is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY; without even the implied      #
# warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.                                                     #
# See the GNU Lesser General Public License for more details.                                                          #
#                                                                                                                      #
# You should have received a copy of the GNU Lesser General Public License along with OpenChemo. If not, see           #
# <https://www.gnu.org/licenses/>.                                                                                     #
########################################################################################################################


import numpy as np
import pytest

from openchemo.grids import bracket, build_spatial_grid, build_velocity_grid
from openchemo.system_solvers import InflowData, KellerSegelRunner, KineticRunner, KineticState, OddEvenRunner, \
                                     ParityState, ReactionParams, Trajectory, explicit_kinetic_step, \
                                     initialize_kinetic, initialize_parity, ks_step, odd_even_step, \
                                     parity_reconstruct, parity_transform
from openchemo.system_solvers.kinetic_system import centered_gradient
from openchemo.system_solvers.odd_even_system import check_parity_model, collision_substep, diffusion_substep, \
                                                    one_sided_gradient, transport_substep
from openchemo.turning_models import RelaxationModel, TurningModel, uniform_equilibrium


def relaxation_model(Nv: int) -> RelaxationModel:
    grid = build_velocity_grid(-1.0, 1.0, Nv)
    return RelaxationModel(grid, uniform_equilibrium(grid), 1.0)


@pytest.mark.parametrize('Nv', [8, 9])
def test_parity_transform_round_trip(Nv):
    np.random.seed(0)
    grid = build_velocity_grid(-1.0, 1.0, Nv)
    f = np.random.rand(12, grid.num_nodes)
    eps = 0.01

    r, j = parity_transform(f, grid, eps)

    np.testing.assert_allclose(parity_reconstruct(r, j, grid, eps), f, rtol=1e-13, atol=1e-15)
    np.testing.assert_allclose(ParityState(r, j, np.zeros(12), 0.0, eps).density(grid), bracket(f, grid), rtol=1e-13)


def test_collision_keeps_equilibrium():
    x_grid = build_spatial_grid(-1.0, 1.0, 20)
    model = relaxation_model(8)
    eps = 1e-3
    half = len(model.grid.half_indices)
    state = ParityState(np.full((x_grid.num_nodes, half), 0.7), np.zeros((x_grid.num_nodes, half)),
                        np.zeros(x_grid.num_nodes), 0.0, eps)

    r_star, j_star = collision_substep(state, x_grid, model, 0.01)

    np.testing.assert_allclose(r_star, 0.7, rtol=1e-13)
    np.testing.assert_allclose(j_star, 0.0, atol=1e-13)


def test_transport_keeps_uniform_interior():
    x_grid = build_spatial_grid(-1.0, 1.0, 20)
    grid = build_velocity_grid(-1.0, 1.0, 8)
    half = len(grid.half_indices)
    r = np.full((x_grid.num_nodes, half), 0.4)
    j = np.zeros_like(r)
    eps = 0.1

    r_new, j_new = transport_substep(r, j, x_grid, grid, x_grid.dx / 2, eps)

    np.testing.assert_allclose(r_new[1:-1], 0.4, rtol=1e-14)
    np.testing.assert_allclose(j_new[1:-1], 0.0, atol=1e-14)
    # Robin closure at both ends
    v = grid.nodes[grid.half_indices]
    np.testing.assert_allclose(r_new[0], eps * v * r_new[1] / (x_grid.dx + eps * v), rtol=1e-14)
    np.testing.assert_allclose(r_new[-1], eps * v * r_new[-2] / (x_grid.dx + eps * v), rtol=1e-14)


def test_odd_even_zero_state_stays_zero():
    x_grid = build_spatial_grid(-1.0, 1.0, 20)
    model = relaxation_model(8)
    state = initialize_parity(1e-2, x_grid, model, 1.0)
    zero = ParityState(np.zeros_like(state.r), np.zeros_like(state.j), np.zeros(x_grid.num_nodes), 0.0, 1e-2)

    new_state = odd_even_step(zero, x_grid, model, x_grid.dx / 40, ReactionParams())

    np.testing.assert_array_equal(new_state.r, 0.0)
    np.testing.assert_array_equal(new_state.j, 0.0)
    np.testing.assert_array_equal(new_state.S, 0.0)


def test_odd_even_model_requirements():
    grid = build_velocity_grid(-1.0, 1.0, 8)
    check_parity_model(RelaxationModel(grid, uniform_equilibrium(grid), 1.0))

    general = TurningModel(grid, uniform_equilibrium(grid), 1.0, lambda v, vp: 0.5 * (1 + v**2 * vp**2))
    with pytest.raises(ValueError):
        check_parity_model(general)

    x_grid = build_spatial_grid(-1.0, 1.0, 10)
    with pytest.raises(ValueError):
        OddEvenRunner(initialize_parity(0.1, x_grid, general, 1.0), x_grid, general, ReactionParams())


@pytest.mark.parametrize('Nx', [50, 200])
def test_odd_even_runner_is_stable_in_the_diffusive_regime(Nx):
    x_grid = build_spatial_grid(-1.0, 1.0, Nx)
    model = relaxation_model(16)
    runner = OddEvenRunner(initialize_parity(1e-6, x_grid, model, 2 * np.pi), x_grid, model, ReactionParams())
    peak = runner.magnitude()
    dt = x_grid.dx / 40
    num_steps = int(round(0.5 / dt))

    for _ in range(num_steps):
        runner.advance(dt)

    assert np.isfinite(runner.magnitude())
    assert runner.magnitude() < 10 * peak
    assert runner.time == pytest.approx(0.5)


def test_diffusion_substep_decays_a_sine_mode():
    x_grid = build_spatial_grid(0.0, 1.0, 40)
    grid = build_velocity_grid(-1.0, 1.0, 8)
    v = grid.nodes[grid.half_indices]
    x, dx = x_grid.nodes, x_grid.dx
    dt = 0.05
    r = np.tile(np.sin(np.pi * x)[:, np.newaxis], (1, len(v)))
    r[[0, -1]] = 0.0
    beta = -np.ones_like(r)

    # ε small enough for the Robin closure to be a Dirichlet condition
    r_new, j_new = diffusion_substep(r, np.zeros_like(r), beta, x_grid, grid, dt, 1e-14)

    lam = 4 * np.sin(np.pi * dx / 2)**2
    factor = 1 / (1 + dt * v**2 / dx**2 * lam)
    np.testing.assert_allclose(r_new, factor * r, atol=1e-12)
    np.testing.assert_allclose(j_new, -v * one_sided_gradient(r_new, dx), atol=1e-12)

    # Without coupling the stage leaves the state alone
    r_same, j_same = diffusion_substep(r, np.ones_like(r), np.zeros_like(r), x_grid, grid, dt, 1e-14)
    np.testing.assert_allclose(r_same, r, atol=1e-12)
    np.testing.assert_array_equal(j_same, 1.0)

    with pytest.raises(ValueError):
        diffusion_substep(r, np.zeros_like(r), -beta, x_grid, grid, dt, 1e-14)


def test_collision_reaches_the_diffusive_limit():
    x_grid = build_spatial_grid(-1.0, 1.0, 40)
    model = relaxation_model(8)
    grid = model.grid
    v = grid.nodes[grid.half_indices]
    x = x_grid.nodes[:, np.newaxis]
    eps = 1e-8
    r = np.cos(np.pi * x / 2) * (1 + 0.3 * v**2)
    state = ParityState(r, np.sin(np.pi * x) * v, 0.5 * np.cos(np.pi * x_grid.nodes), 0.0, eps)

    r_star, j_star = collision_substep(state, x_grid, model, 0.01)

    n = state.density(grid)[:, np.newaxis]
    dS = centered_gradient(state.S, x_grid.dx)[:, np.newaxis]
    limit = (0.5 * v * dS * n - v * one_sided_gradient(r, x_grid.dx)) / model.sigma
    np.testing.assert_allclose(j_star, limit, rtol=1e-6, atol=1e-6)
    np.testing.assert_allclose(r_star, model.M[0] * n * np.ones_like(r), rtol=1e-6, atol=1e-6)


def test_odd_even_step_is_unchanged_by_the_diffusion_stage_at_unit_eps():
    x_grid = build_spatial_grid(-1.0, 1.0, 30)
    model = relaxation_model(8)
    state = initialize_parity(1.0, x_grid, model, 2 * np.pi)
    state.S = 0.2 * np.cos(np.pi * x_grid.nodes)
    dt = x_grid.dx / 2

    new_state = odd_even_step(state, x_grid, model, dt, ReactionParams())

    r_star, j_star = collision_substep(state, x_grid, model, dt)
    r_new, j_new = transport_substep(r_star, j_star, x_grid, model.grid, dt, 1.0)
    np.testing.assert_allclose(new_state.r, r_new, rtol=1e-14, atol=1e-15)
    np.testing.assert_allclose(new_state.j, j_new, rtol=1e-14, atol=1e-15)


@pytest.mark.parametrize('diffusion_mode, amplification', [
    ('implicit', lambda c, lam: 1 / (1 + c * lam)),
    ('explicit', lambda c, lam: 1 - c * lam),
])
def test_keller_segel_eigenmode_decay(diffusion_mode, amplification):
    x_grid = build_spatial_grid(0.0, 1.0, 40)
    x, dx = x_grid.nodes, x_grid.dx
    D, dt = 0.5, 0.4 * dx**2
    n = np.sin(np.pi * x)
    n[[0, -1]] = 0.0
    S = np.zeros_like(n)
    params = ReactionParams(a=0.0, b=0.0)

    lam = 4 * np.sin(np.pi * dx / 2)**2
    factor = amplification(dt * D / dx**2, lam)
    for _ in range(10):
        n, S = ks_step(n, S, x_grid, dt, D, 1 / 3, params, diffusion_mode)

    np.testing.assert_allclose(n, factor**10 * np.sin(np.pi * x), atol=1e-12)


def test_keller_segel_rejects_unknown_mode():
    x_grid = build_spatial_grid(0.0, 1.0, 10)
    with pytest.raises(ValueError):
        ks_step(np.zeros(11), np.zeros(11), x_grid, 0.01, 1.0, 1.0, ReactionParams(), 'crank_nicolson')


def test_keller_segel_runner_reports():
    x_grid = build_spatial_grid(-1.0, 1.0, 40)
    n0 = np.exp(-80 * x_grid.nodes**2)
    runner = KellerSegelRunner(n0.copy(), np.zeros_like(n0), x_grid, 1 / 3, 1 / 3, ReactionParams())

    report = runner.advance(x_grid.dx / 2)

    assert np.isnan(report.boundary_flux)
    assert report.mass_after <= report.mass_before
    assert runner.time == pytest.approx(x_grid.dx / 2)
    assert runner.snapshot().f is None


def test_kinetic_constant_state_is_preserved():
    x_grid = build_spatial_grid(-1.0, 1.0, 20)
    model = relaxation_model(8)
    f = 1.3 * np.tile(model.M, (x_grid.num_nodes, 1))
    inflow = InflowData(model.grid, 1.3 * model.M, 1.3 * model.M)
    state = KineticState(f, np.zeros(x_grid.num_nodes), 0.0, 1.0)

    for _ in range(5):
        state, report = explicit_kinetic_step(state, x_grid, model, x_grid.dx / 2, ReactionParams(), inflow)

    np.testing.assert_allclose(state.f, f, rtol=1e-13)
    assert report.boundary_flux == pytest.approx(0.0, abs=1e-14)


def test_kinetic_mass_audit():
    x_grid = build_spatial_grid(-1.0, 1.0, 40)
    model = relaxation_model(16)
    v = model.grid.nodes
    inflow = InflowData(model.grid, 0.2 * np.exp(-v**2), 0.1 * np.ones_like(v))
    eps = 1.0
    dt = eps * x_grid.dx / 2
    runner = KineticRunner(initialize_kinetic(eps, x_grid, model, 2 * np.pi), x_grid, model, ReactionParams(), inflow)

    trajectory = Trajectory(runner.name, dt)
    for _ in range(100):
        trajectory.reports.append(runner.advance(dt))

    audit = trajectory.mass_audit()
    assert abs(audit['boundary_flux']) > 1e-6
    assert abs(audit['mismatch']) <= 1e-10 * audit['mass_initial']


def test_kinetic_initial_projection():
    x_grid = build_spatial_grid(-1.0, 1.0, 20)
    model = relaxation_model(8)

    projected = initialize_kinetic(1.0, x_grid, model, 1.0, at_equilibrium=True)
    full = initialize_kinetic(1.0, x_grid, model, 1.0)

    np.testing.assert_allclose(projected.f / model.M, np.tile(projected.density(model)[:, np.newaxis],
                                                              (1, model.grid.num_nodes)), rtol=1e-13)
    np.testing.assert_allclose(full.density(model), projected.density(model), rtol=1e-12, atol=1e-14)


def test_kinetic_step_matches_brute_force_transcription():
    np.random.seed(3)
    x_grid = build_spatial_grid(-1.0, 1.0, 8)
    model = relaxation_model(4)
    v, dv, dx = model.grid.nodes, model.grid.dv, x_grid.dx
    v_bar = 0.5 * (v[:-1] + v[1:])
    w = np.full(len(v), dv)
    w[[0, -1]] *= 0.5
    eps, dt, sigma = 0.7, 0.01, model.sigma
    params = ReactionParams(a=1.3, b=0.7, D_S=0.4)
    f = np.random.rand(x_grid.num_nodes, len(v))
    S = np.random.rand(x_grid.num_nodes)
    inflow = InflowData(model.grid, np.random.rand(len(v)), np.random.rand(len(v)))

    new_state, _ = explicit_kinetic_step(KineticState(f, S, 0.0, eps), x_grid, model, dt, params, inflow)

    Nx = x_grid.Nx
    f_new = np.zeros_like(f)
    for i in range(Nx + 1):
        dS = 0.0 if i in (0, Nx) else (S[i + 1] - S[i - 1]) / (2 * dx)
        n = sum(w[k] * f[i, k] for k in range(len(v)))
        turning_out = sum(dv * max(v_bar[l] * dS, 0.0) for l in range(len(v_bar)))
        for k in range(len(v)):
            left  = f[i - 1, k] if i > 0 else inflow.f_left[k]
            right = f[i + 1, k] if i < Nx else inflow.f_right[k]
            transport = max(v[k], 0.0) * (f[i, k] - left) + min(v[k], 0.0) * (right - f[i, k])
            T0 = sigma * (model.M[k] * n - f[i, k])
            T1 = max(v[k] * dS, 0.0) * n - f[i, k] * turning_out
            f_new[i, k] = f[i, k] - dt / (eps * dx) * transport + dt / eps**2 * (T0 + eps * T1)

    n_new = f_new @ w
    c = dt * params.D_S / dx**2
    A = np.zeros((Nx + 1, Nx + 1))
    for i in range(Nx + 1):
        A[i, i] = 1 + 2 * c + params.b * dt
        # Neumann: the mirrored ghost doubles the inner neighbour
        if i == 0:
            A[i, 1] = -2 * c
        elif i == Nx:
            A[i, Nx - 1] = -2 * c
        else:
            A[i, i - 1] = A[i, i + 1] = -c
    S_new = np.linalg.solve(A, S + params.a * dt * n_new)

    np.testing.assert_allclose(new_state.f, f_new, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(new_state.S, S_new, rtol=1e-12, atol=1e-12)
