"""Phase imprint, beam splitter and parity readout.

The measurement sequence is: imprint a relative phase exp(-i S_z theta),
mix the wells with the pi/2 pulse exp(-i (pi/2) S_x), then read out the
parity of the left-well occupation.  Error propagation gives the phase
uncertainty sigma_theta = sigma_P / |dP/dtheta|, with the derivative
evaluated directly as the expectation value of -i[S_y, P] in the state
after the splitter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import model
from .eigen import apply_unitary, rotation_about_x
from .spin import build_spin_operators, cat_state, parity_operator
from .states import State

FLAG_OK = "ok"
FLAG_LIMIT = "limit"
FLAG_SINGULAR = "singular"

# |dP/dtheta| below DERIV_EPS counts as a vanishing derivative; if sigma_P
# vanishes with it the 0/0 is removable and is evaluated at theta +/- LIMIT_OFFSET
DERIV_EPS = 1e-12
SIGMA_EPS = 1e-9
LIMIT_OFFSET = 1e-6

_HALF_PI = math.pi / 2.0


class ResidualError(RuntimeError):
    """A quantity that must be real came out with a large imaginary part."""


@dataclass(frozen=True)
class ScanRow:
    """One grid point of a parity scan.

    sigma_theta is math.inf on singular rows (derivative vanishes while the
    parity variance does not, so the readout carries no phase information);
    precision_norm = 1/(N sigma_theta) is 0 there.  Rows where sigma_theta
    was obtained as a removable 0/0 limit are flagged "limit".
    """

    theta: float
    parity: float
    sigma_parity: float
    parity_deriv: float
    sigma_theta: float
    precision_norm: float
    flag: str


@dataclass(frozen=True)
class Mixture:
    """Statistical mixture of pure states with fixed weights."""

    components: tuple[tuple[float, State], ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("mixture needs at least one component")
        components = tuple((float(w), psi) for w, psi in self.components)
        basis = components[0][1].basis
        for w, psi in components:
            if w < 0.0:
                raise ValueError(f"weights must be non-negative, got {w}")
            if psi.basis != basis:
                raise ValueError("all components must share one basis")
        total = sum(w for w, _ in components)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {total}")
        object.__setattr__(self, "components", components)

    @property
    def n_atoms(self) -> int:
        return self.components[0][1].n_atoms


@lru_cache(maxsize=None)
def _splitter_matrix(n_atoms: int) -> np.ndarray:
    u = rotation_about_x(n_atoms, _HALF_PI)
    u.setflags(write=False)
    return u


@lru_cache(maxsize=None)
def _parity_rate_matrix(n_atoms: int) -> np.ndarray:
    # -i [S_y, P], the Hermitian operator whose expectation value is dP/dtheta
    ops = build_spin_operators(n_atoms)
    p = parity_operator(n_atoms).signs
    k = -1j * (ops.sy * p[np.newaxis, :] - p[:, np.newaxis] * ops.sy)
    k.setflags(write=False)
    return k


def phase_imprint(psi: State, theta: float) -> State:
    """exp(-i S_z theta) applied componentwise; the norm is untouched."""
    phases = np.exp(-1j * psi.basis.m_z() * theta)
    return State(psi.basis, phases * psi.amps)


def beam_splitter(psi: State) -> State:
    """The pi/2 well-mixing pulse exp(-i (pi/2) S_x)."""
    return apply_unitary(_splitter_matrix(psi.n_atoms), psi)


def parity_stats(psi: State) -> tuple[float, float]:
    """Mean parity and its standard deviation sqrt(1 - parity^2).

    P squares to the identity, so <P^2> = 1 for any normalized state and the
    variance is fixed by the mean.  With even and odd weights accumulated
    separately, 1 - parity^2 = 4 * even * odd holds without cancellation, so
    the deviation stays accurate down to the scale of the amplitudes even
    when |parity| is within machine epsilon of 1.
    """
    weights = psi.amps.real**2 + psi.amps.imag**2
    even = float(np.sum(weights[0::2]))
    odd = float(np.sum(weights[1::2]))
    return even - odd, 2.0 * math.sqrt(even * odd)


def parity_derivative(psi: State) -> float:
    """dP/dtheta as the expectation value of -i[S_y, P] in the given state."""
    val = complex(np.vdot(psi.amps, _parity_rate_matrix(psi.n_atoms) @ psi.amps))
    if abs(val.imag) > 1e-8:
        raise ResidualError(
            f"parity derivative expectation has imaginary residual {val.imag:.3e}"
        )
    return val.real


def _even_odd_deriv(psi: State, theta: float) -> tuple[float, float, float]:
    out = beam_splitter(phase_imprint(psi, theta))
    weights = out.amps.real**2 + out.amps.imag**2
    return float(np.sum(weights[0::2])), float(np.sum(weights[1::2])), parity_derivative(out)


def _measure(psi: State, theta: float) -> tuple[float, float, float]:
    even, odd, deriv = _even_odd_deriv(psi, theta)
    return even - odd, 2.0 * math.sqrt(even * odd), deriv


def _measure_mixture(mix: Mixture, theta: float) -> tuple[float, float, float]:
    # parity, its derivative and the even/odd weights are all linear in the
    # density matrix, and <P^2> = 1 holds for mixtures as well
    even = 0.0
    odd = 0.0
    deriv = 0.0
    for w, psi in mix.components:
        e, o, d = _even_odd_deriv(psi, theta)
        even += w * e
        odd += w * o
        deriv += w * d
    return even - odd, 2.0 * math.sqrt(even * odd), deriv


def _build_row(measure, theta: float, n_atoms: int) -> ScanRow:
    parity, sigma_p, deriv = measure(theta)
    if abs(deriv) >= DERIV_EPS:
        sigma_theta = sigma_p / abs(deriv)
        flag = FLAG_OK
    elif sigma_p < SIGMA_EPS:
        # removable 0/0: both the signal variance and the slope vanish, so
        # evaluate the ratio just off the point and average the two sides
        sides = []
        for offset in (-LIMIT_OFFSET, LIMIT_OFFSET):
            p_off, s_off, d_off = measure(theta + offset)
            sides.append(s_off / abs(d_off) if d_off != 0.0 else math.inf)
        sigma_theta = 0.5 * (sides[0] + sides[1])
        flag = FLAG_LIMIT
    else:
        sigma_theta = math.inf
        flag = FLAG_SINGULAR
    if flag == FLAG_SINGULAR or math.isinf(sigma_theta):
        precision = 0.0
    else:
        precision = 1.0 / (n_atoms * sigma_theta)
    return ScanRow(theta, parity, sigma_p, deriv, sigma_theta, precision, flag)


def run_pipeline(psi0: State, theta: float) -> ScanRow:
    """Imprint, split and read out a pure state at one phase value."""
    return _build_row(lambda th: _measure(psi0, th), theta, psi0.n_atoms)


def mixture_pipeline(mix: Mixture, theta: float) -> ScanRow:
    """Same readout for a statistical mixture of pure states."""
    return _build_row(lambda th: _measure_mixture(mix, th), theta, mix.n_atoms)


def scan(initial: State | Mixture, thetas) -> list[ScanRow]:
    """Pipeline rows over an ascending phase grid."""
    grid = np.asarray(thetas, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("theta grid must be a non-empty 1d array")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("theta grid must be strictly ascending")
    if isinstance(initial, Mixture):
        return [mixture_pipeline(initial, float(t)) for t in grid]
    return [run_pipeline(initial, float(t)) for t in grid]


def theta_grid(start: float, stop: float, count: int) -> np.ndarray:
    """Inclusive linear grid with `count` points."""
    if count < 2:
        raise ValueError(f"grid needs at least 2 points, got {count}")
    if not stop > start:
        raise ValueError("grid stop must exceed start")
    return np.linspace(start, stop, count)


def analytic_cat_parity(n_atoms: int, theta: float) -> float:
    """Ideal parity signal cos[N theta + N pi/2] of the balanced cat state."""
    return math.cos(n_atoms * theta + n_atoms * _HALF_PI)


def perturbative_parity(params: model.ModelParams, theta: float) -> float:
    """Parity signal of the near-degenerate ground state to second order in
    the tunneling over interaction ratio.

    The first-order state correction drops out of the signal; the leading
    deviation from the ideal cat fringe is the N-2 harmonic with weight
    N J^2 / (4 (N-1)^2 U^2).  Requires N > 2 and U != 0.
    """
    n = params.n_atoms
    if n <= 2:
        raise ValueError(f"perturbative signal needs n_atoms > 2, got {n}")
    if params.interaction == 0.0:
        raise ValueError("perturbative signal needs a nonzero interaction")
    coef = (
        n
        * params.tunneling**2
        / (4.0 * (n - 1) ** 2 * params.interaction**2)
    )
    base = math.cos(n * theta + n * _HALF_PI)
    correction = math.cos((n - 2) * theta + n * _HALF_PI)
    return (1.0 - coef) * base - coef * correction


def mixture_parity(mix: Mixture, theta: float) -> float:
    """Weighted average of the component parity signals."""
    return sum(w * run_pipeline(psi, theta).parity for w, psi in mix.components)


def thermal_cat_mixture(n_atoms: int) -> Mixture:
    """Equal-weight mixture of the two lowest near-degenerate cat states.

    This is the zero-temperature limit when the gap between the symmetric
    and antisymmetric cats is far below any achievable temperature; the
    parity signal of this mixture vanishes identically.
    """
    return Mixture(((0.5, cat_state(n_atoms, 0.0)), (0.5, cat_state(n_atoms, math.pi))))
