import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catwell import (
    Basis,
    Mixture,
    ModelParams,
    State,
    analytic_cat_parity,
    basis_state,
    beam_splitter,
    cat_state,
    ground_and_gap,
    mixture_parity,
    parity_derivative,
    parity_stats,
    perturbative_parity,
    phase_imprint,
    run_pipeline,
    scan,
    sy_extreme_eigenstates,
    thermal_cat_mixture,
    theta_grid,
)
from catwell.interferometer import (
    FLAG_LIMIT,
    FLAG_OK,
    FLAG_SINGULAR,
    mixture_pipeline,
)


def test_theta_grid():
    grid = theta_grid(0.0, 1.0, 5)
    assert np.allclose(grid, [0.0, 0.25, 0.5, 0.75, 1.0], atol=1e-15)
    assert grid[0] == 0.0 and grid[-1] == 1.0
    with pytest.raises(ValueError, match="at least 2"):
        theta_grid(0.0, 1.0, 1)
    with pytest.raises(ValueError, match="exceed"):
        theta_grid(1.0, 1.0, 3)


def test_phase_imprint_phases():
    psi = cat_state(6, 0.7)
    assert np.array_equal(phase_imprint(psi, 0.0).amps, psi.amps)

    theta = 0.31
    out = phase_imprint(psi, theta)
    # only the extreme components are populated; they pick up e^{-+ i N theta / 2}
    assert out.amps[6] == pytest.approx(math.sqrt(0.5) * np.exp(-3j * theta), abs=1e-15)
    assert out.amps[0] == pytest.approx(
        math.sqrt(0.5) * np.exp(0.7j) * np.exp(3j * theta), abs=1e-15
    )
    assert out.norm() == pytest.approx(1.0, abs=1e-15)

    # a full turn is the identity for even N and a global sign for odd N
    even = phase_imprint(cat_state(6, 0.0), 2.0 * math.pi)
    odd = phase_imprint(cat_state(5, 0.0), 2.0 * math.pi)
    assert np.abs(even.amps - cat_state(6, 0.0).amps).max() <= 1e-14
    assert np.abs(odd.amps + cat_state(5, 0.0).amps).max() <= 1e-14


def test_beam_splitter_maps_number_extremes_onto_y_extremes():
    for n in (2, 5, 8):
        plus, minus = sy_extreme_eigenstates(n)
        top = beam_splitter(basis_state(Basis(n), n))
        bot = beam_splitter(basis_state(Basis(n), 0))
        assert abs(abs(minus.overlap(top)) - 1.0) <= 1e-10
        assert abs(abs(plus.overlap(bot)) - 1.0) <= 1e-10
        assert top.norm() == pytest.approx(1.0, abs=1e-12)


def test_parity_stats_on_simple_states():
    basis = Basis(6)
    for k in range(7):
        parity, sigma = parity_stats(basis_state(basis, k))
        assert parity == (-1.0) ** k
        assert sigma == 0.0
    amps = np.zeros(7, dtype=complex)
    amps[2] = amps[3] = math.sqrt(0.5)
    parity, sigma = parity_stats(State(basis, amps))
    assert parity == pytest.approx(0.0, abs=1e-15)
    assert sigma == pytest.approx(1.0, abs=1e-15)


def test_cat_parity_curve_and_derivative():
    n = 9
    psi = cat_state(n, 0.0)
    for theta in theta_grid(0.0, 2.0 * math.pi, 41):
        row = run_pipeline(psi, float(theta))
        assert row.parity == pytest.approx(analytic_cat_parity(n, theta), abs=1e-10)
        expected_deriv = -n * math.sin(n * (theta + math.pi / 2.0))
        assert row.parity_deriv == pytest.approx(expected_deriv, abs=1e-9)


def test_derivative_matches_finite_differences():
    psi = ground_and_gap(ModelParams(7, 1.0, -1.0)).psi0
    theta, delta = 0.3, 1e-5
    deriv = run_pipeline(psi, theta).parity_deriv
    fd = (
        run_pipeline(psi, theta + delta).parity
        - run_pipeline(psi, theta - delta).parity
    ) / (2.0 * delta)
    assert abs(deriv - fd) <= 1e-6 * abs(fd)


def test_derivative_vanishes_at_fringe_extrema():
    # extrema of the N = 4 cat fringe sit at multiples of pi / 4
    psi = cat_state(4, 0.0)
    for k in range(4):
        out = beam_splitter(phase_imprint(psi, k * math.pi / 4.0))
        assert abs(parity_derivative(out)) <= 1e-12


def test_ok_rows_propagate_errors():
    psi = ground_and_gap(ModelParams(7, 1.0, -1.0)).psi0
    row = run_pipeline(psi, 0.3)
    assert row.flag == FLAG_OK
    assert row.sigma_theta == row.sigma_parity / abs(row.parity_deriv)
    assert row.precision_norm == pytest.approx(1.0 / (7 * row.sigma_theta), rel=1e-15)


def test_cat_extremum_rows_take_the_limit():
    # at a fringe extremum both sigma_P and the slope vanish; the removable
    # ratio is 1 / N, saturating the Heisenberg bound
    row = run_pipeline(cat_state(4, 0.0), 0.0)
    assert row.flag == FLAG_LIMIT
    assert row.parity == pytest.approx(1.0, abs=1e-12)
    assert row.sigma_theta == pytest.approx(0.25, abs=1e-8)
    assert row.precision_norm == pytest.approx(1.0, abs=1e-7)

    row = run_pipeline(cat_state(7, 0.0), math.pi / 2.0)
    assert row.flag == FLAG_LIMIT
    assert row.sigma_theta == pytest.approx(1.0 / 7.0, abs=1e-8)


def test_noninteracting_ground_is_singular_at_zero_phase():
    # the x-polarized ground state has parity ~ 0 with a flat slope at
    # theta = 0: the variance stays at 1 so no limit exists
    psi = ground_and_gap(ModelParams(9, 1.0, 0.0)).psi0
    row = run_pipeline(psi, 0.0)
    assert row.flag == FLAG_SINGULAR
    assert abs(row.parity) <= 1e-12
    assert row.sigma_parity == pytest.approx(1.0, abs=1e-12)
    assert math.isinf(row.sigma_theta)
    assert row.precision_norm == 0.0


def test_extremum_pinning_across_the_interaction_range():
    for n in range(3, 13):
        for u in (0.0, -0.1, -0.25, -1.0, -10.0):
            psi = ground_and_gap(ModelParams(n, 1.0, u)).psi0
            for theta in (math.pi / 2.0, 3.0 * math.pi / 2.0):
                row = run_pipeline(psi, theta)
                assert abs(abs(row.parity) - 1.0) <= 1e-9, (n, u, theta)


def test_scan_grid_validation_and_dispatch():
    psi = cat_state(3, 0.0)
    with pytest.raises(ValueError, match="ascending"):
        scan(psi, [0.0, 0.5, 0.5])
    with pytest.raises(ValueError, match="non-empty"):
        scan(psi, [])
    with pytest.raises(ValueError, match="1d"):
        scan(psi, [[0.0, 1.0]])

    grid = [0.1, 0.4]
    pure = scan(psi, grid)
    assert [r.theta for r in pure] == grid
    assert pure[0] == run_pipeline(psi, 0.1)

    mix = Mixture(((1.0, psi),))
    mixed = scan(mix, grid)
    assert mixed[1] == mixture_pipeline(mix, 0.4)
    # a single-component mixture is just the pure state
    assert mixed[0].parity == pytest.approx(pure[0].parity, abs=1e-14)
    assert mixed[0].sigma_parity == pytest.approx(pure[0].sigma_parity, abs=1e-14)


def test_mixture_validation():
    a = cat_state(4, 0.0)
    b = cat_state(4, math.pi)
    with pytest.raises(ValueError, match="at least one"):
        Mixture(())
    with pytest.raises(ValueError, match="non-negative"):
        Mixture(((1.5, a), (-0.5, b)))
    with pytest.raises(ValueError, match="sum to 1"):
        Mixture(((0.5, a), (0.4, b)))
    with pytest.raises(ValueError, match="share one basis"):
        Mixture(((0.5, a), (0.5, cat_state(5, 0.0))))


def test_thermal_mixture_has_no_fringe():
    mix = thermal_cat_mixture(5)
    assert [w for w, _ in mix.components] == [0.5, 0.5]
    for theta in (0.0, 0.3, 1.1):
        assert abs(mixture_parity(mix, theta)) <= 1e-10
        row = mixture_pipeline(mix, theta)
        assert row.flag == FLAG_SINGULAR
        assert row.sigma_parity == pytest.approx(1.0, abs=1e-12)
        assert row.precision_norm == 0.0


def test_mixture_parity_of_single_component_is_pure():
    psi = cat_state(6, 0.3)
    mix = Mixture(((1.0, psi),))
    for theta in (0.2, 1.7):
        assert mixture_parity(mix, theta) == run_pipeline(psi, theta).parity


def test_perturbative_parity():
    # J = 0 removes the correction entirely
    params = ModelParams(9, 0.0, -1.0)
    for theta in (0.0, 0.37, 2.0):
        assert perturbative_parity(params, theta) == analytic_cat_parity(9, theta)

    with pytest.raises(ValueError, match="n_atoms > 2"):
        perturbative_parity(ModelParams(2, 1.0, -1.0), 0.1)
    with pytest.raises(ValueError, match="nonzero interaction"):
        perturbative_parity(ModelParams(5, 1.0, 0.0), 0.1)

    params = ModelParams(9, 1.0, -1.0)
    for theta in theta_grid(0.0, 2.0 * math.pi, 61):
        assert abs(perturbative_parity(params, float(theta))) <= 1.0 + 1e-12


def test_perturbative_parity_tracks_the_exact_signal():
    params = ModelParams(5, 1.0, -50.0)
    psi = ground_and_gap(params).psi0
    for theta in (0.0, 0.4, 1.3):
        exact = run_pipeline(psi, theta).parity
        assert abs(perturbative_parity(params, theta) - exact) <= 1e-5


@st.composite
def normalized_states(draw):
    n = draw(st.integers(min_value=2, max_value=10))
    elements = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
    re = draw(st.lists(elements, min_size=n + 1, max_size=n + 1))
    im = draw(st.lists(elements, min_size=n + 1, max_size=n + 1))
    amps = np.array(re, dtype=float) + 1j * np.array(im)
    if np.linalg.norm(amps) < 1e-3:
        amps[0] += 1.0
    return State(Basis(n), amps).normalized()


@settings(max_examples=60, deadline=None)
@given(normalized_states(), st.floats(min_value=-7.0, max_value=7.0, allow_nan=False))
def test_pipeline_invariants_for_arbitrary_states(psi, theta):
    out = beam_splitter(phase_imprint(psi, theta))
    assert out.norm() == pytest.approx(1.0, abs=1e-12)
    parity, sigma = parity_stats(out)
    assert abs(parity) <= 1.0 + 1e-12
    assert abs(parity**2 + sigma**2 - 1.0) <= 1e-10

    row = run_pipeline(psi, theta)
    assert row.flag in (FLAG_OK, FLAG_LIMIT, FLAG_SINGULAR)
    if row.flag == FLAG_OK:
        assert row.sigma_theta == row.sigma_parity / abs(row.parity_deriv)
    if math.isinf(row.sigma_theta):
        assert row.precision_norm == 0.0
    else:
        assert row.precision_norm == pytest.approx(
            1.0 / (psi.n_atoms * row.sigma_theta), rel=1e-12
        )
