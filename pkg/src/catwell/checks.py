"""Named self-checks over every module, at desk scale (N <= 15).

Each check returns (passed, detail) and is registered with a flag saying
whether it belongs to the quick subset.  The `verify` CLI command runs the
registry; the acceptance test suite runs the same functions one by one and
holds them to their runtime budgets.

`spin_builder` is a module attribute so a test harness can swap in a broken
operator factory and confirm that the algebra check actually fails.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from time import perf_counter

import numpy as np

from . import interferometer as itf
from . import model
from .eigen import Tridiag, jacobi_eigen, rotation_about_x, sturm_count_below, tridiag_eigen
from .spin import (
    build_spin_operators,
    cat_state,
    neg_i_power,
    parity_operator,
    pos_i_power,
    sy_extreme_eigenstates,
)
from .states import Basis, State
from .wigner import wigner_d_matrix

TWO_PI = 2.0 * math.pi

# mutation hook for the test harness; the algebra check goes through this
spin_builder = build_spin_operators

_ORACLE_SEED = 20250114
_DERIV_SEED = 20250207
_SWAP_SEED = 20250320
_STURM_SEED = 20250431


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _grid_721() -> np.ndarray:
    return itf.theta_grid(0.0, TWO_PI, 721)


def _ground(n_atoms: int, tunneling: float, interaction: float) -> State:
    return model.ground_and_gap(model.ModelParams(n_atoms, tunneling, interaction)).psi0


def check_spin_algebra() -> tuple[bool, str]:
    """su(2) commutators, Casimir, parity conjugation and lowering phases."""
    worst = 0.0
    for n in range(2, 16):
        ops = spin_builder(n)
        sx = ops.sx_dense().astype(complex)
        sy = ops.sy
        sz = np.diag(ops.sz).astype(complex)
        eye = np.eye(n + 1)
        worst = max(worst, float(np.abs(sx @ sy - sy @ sx - 1j * sz).max()))
        worst = max(worst, float(np.abs(sy @ sz - sz @ sy - 1j * sx).max()))
        worst = max(worst, float(np.abs(sz @ sx - sx @ sz - 1j * sy).max()))
        s = n / 2.0
        worst = max(
            worst, float(np.abs(sx @ sx + sy @ sy + sz @ sz - s * (s + 1.0) * eye).max())
        )
        p = parity_operator(n).matrix()
        worst = max(worst, float(np.abs(p @ sx @ p + sx).max()))
        worst = max(worst, float(np.abs(p @ sy @ p + sy).max()))
        if not np.array_equal(ops.sz, np.arange(n + 1) - n / 2.0):
            return False, f"S_z diagonal wrong at N={n}"
        lowering = sx - 1j * sy
        sub = np.diag(lowering, 1)
        expected = np.sqrt(np.arange(1.0, n + 1.0) * np.arange(float(n), 0.0, -1.0))
        worst = max(worst, float(np.abs(sub - expected).max()))
        off_part = lowering - np.diag(sub, 1)
        worst = max(worst, float(np.abs(off_part).max()))
    return worst <= 1e-12, f"max algebra residual {worst:.2e} (tol 1e-12)"


def check_sy_extreme_states() -> tuple[bool, str]:
    """Binomial S_y extremes: eigenvalue residuals, flip identity, forbidden elements."""
    worst = 0.0
    for n in range(2, 16):
        ops = build_spin_operators(n)
        plus, minus = sy_extreme_eigenstates(n)
        worst = max(worst, float(np.linalg.norm(ops.sy @ plus.amps - (n / 2.0) * plus.amps)))
        worst = max(worst, float(np.linalg.norm(ops.sy @ minus.amps + (n / 2.0) * minus.amps)))
        worst = max(worst, abs(plus.norm() - 1.0), abs(minus.norm() - 1.0))
        worst = max(worst, abs(plus.overlap(minus)))
        flipped = parity_operator(n).signs * minus.amps
        worst = max(worst, float(np.abs(flipped - neg_i_power(n) * plus.amps).max()))
        sx = ops.sx_dense()
        worst = max(worst, abs(np.vdot(plus.amps, sx @ plus.amps)))
        worst = max(worst, abs(np.vdot(plus.amps, sx @ minus.amps)))
    return worst <= 1e-12, f"max S_y-state residual {worst:.2e} (tol 1e-12)"


def check_rotation_identities() -> tuple[bool, str]:
    """Frame rotation identities of exp(-i angle S_x) against the spin algebra."""
    worst = 0.0
    for n in range(2, 13):
        ops = build_spin_operators(n)
        sy = ops.sy
        sz = ops.sz_dense().astype(complex)
        u = rotation_about_x(n, math.pi / 2.0)
        # each z column rotates onto an S_y eigenvector with the opposite m
        m = Basis(n).m_z()
        for i in range(n + 1):
            col = u[:, i]
            worst = max(worst, float(np.linalg.norm(sy @ col + m[i] * col)))
        worst = max(worst, float(np.abs(u @ sz + sy @ u).max()))
        _, minus = sy_extreme_eigenstates(n)
        worst = max(worst, float(np.abs(u[:, n] - minus.amps).max()))
        for angle in (math.pi / 6.0, math.pi / 2.0, 1.0):
            ua = rotation_about_x(n, angle)
            rotated = ua @ sz @ ua.conj().T
            target = math.cos(angle) * sz - math.sin(angle) * sy
            worst = max(worst, float(np.abs(rotated - target).max()))
    return worst <= 1e-10, f"max rotation-identity residual {worst:.2e} (tol 1e-10)"


def check_sturm_crosscheck() -> tuple[bool, str]:
    """Sturm sign counts agree with the computed spectrum."""
    rng = np.random.default_rng(_STURM_SEED)
    for _ in range(30):
        d = int(rng.integers(2, 17))
        t = Tridiag(rng.uniform(-1.0, 1.0, d), rng.uniform(-1.0, 1.0, d - 1))
        values = tridiag_eigen(t).values
        probes = [(values[0] - 0.5, 0), (values[-1] + 0.5, d)]
        for k in range(d - 1):
            probes.append((0.5 * (values[k] + values[k + 1]), k + 1))
        for x, expected in probes:
            got = sturm_count_below(t, x)
            if got != expected:
                return False, f"count below {x:.3f} gave {got}, spectrum says {expected}"
    return True, "30 random matrices, all sign counts match"


def check_swap_block_consistency() -> tuple[bool, str]:
    """Sector-blocked solve agrees with the full matrix; limit cases exact."""
    rng = np.random.default_rng(_SWAP_SEED)
    worst = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for n in range(2, 16):
            tunneling, interaction = rng.uniform(-2.0, 2.0, 2)
            p = model.ModelParams(n, float(tunneling), float(interaction))
            h = model.build_hamiltonian(p)
            full = tridiag_eigen(h).values
            merged = np.sort(
                np.concatenate(
                    [
                        tridiag_eigen(block).values
                        for block in model._swap_sector_blocks(h, n).values()
                    ]
                )
            )
            radius = float(np.abs(full).max())
            worst = max(worst, float(np.abs(merged - full).max()) / max(1.0, radius))
            sol = model.ground_and_gap(p)
            for psi, sector in ((sol.psi0, sol.sectors[0]), (sol.psi1, sol.sectors[1])):
                sign = 1.0 if sector == model.SYMMETRIC else -1.0
                worst = max(worst, float(np.abs(psi.amps - sign * psi.amps[::-1]).max()))
            worst = max(worst, abs(sol.psi0.overlap(sol.psi1)))
            worst = max(worst, abs(sol.psi0.norm() - 1.0), abs(sol.psi1.norm() - 1.0))
            if sol.e1 < sol.e0 or sol.gap < 0.0:
                return False, f"level ordering broken at N={n}"
    # U = 0: ground level is -N J with a coherent ground state
    for n in (3, 6, 9):
        p = model.ModelParams(n, 1.0, 0.0)
        sol = model.ground_and_gap(p)
        worst = max(worst, abs(sol.e0 + n) / n)
        h = model.build_hamiltonian(p)
        worst = max(
            worst, float(np.linalg.norm(h.matvec(sol.psi0.amps.real) - sol.e0 * sol.psi0.amps.real))
        )
    # J = 0: exact two-fold degeneracy spanned by the extreme number states
    sol = model.ground_and_gap(model.ModelParams(5, 0.0, -1.0))
    if sol.gap != 0.0:
        return False, f"J=0 gap is {sol.gap!r}, expected exactly 0"
    span = np.abs(sol.psi0.amps) + np.abs(sol.psi1.amps)
    if abs(span[0] - math.sqrt(2.0)) > 1e-12 or abs(span[5] - math.sqrt(2.0)) > 1e-12:
        return False, "J=0 ground pair does not span the two extreme number states"
    return worst <= 1e-10, f"max blocking residual {worst:.2e} (tol 1e-10)"


def check_pipeline_basics() -> tuple[bool, str]:
    """Phase imprint phases, norms and the parity variance identity."""
    worst = 0.0
    theta = 0.7
    psi = itf.phase_imprint(cat_state(4, 0.0), theta)
    worst = max(worst, abs(psi.amps[0] - np.exp(2j * theta) / math.sqrt(2.0)))
    worst = max(worst, abs(psi.amps[4] - np.exp(-2j * theta) / math.sqrt(2.0)))
    worst = max(worst, abs(psi.norm() - 1.0))
    # a 2 pi imprint is the identity for even N and a global sign for odd N
    even = itf.phase_imprint(cat_state(4, 0.3), TWO_PI)
    worst = max(worst, float(np.abs(even.amps - cat_state(4, 0.3).amps).max()))
    odd = itf.phase_imprint(cat_state(5, 0.3), TWO_PI)
    worst = max(worst, float(np.abs(odd.amps + cat_state(5, 0.3).amps).max()))
    if worst > 1e-12:
        return False, f"imprint residual {worst:.2e} exceeds 1e-12"
    # parity^2 + sigma^2 = 1 along a ground-state scan
    psi0 = _ground(6, 1.0, -0.5)
    for row in itf.scan(psi0, itf.theta_grid(0.0, TWO_PI, 41)):
        worst = max(worst, abs(row.parity**2 + row.sigma_parity**2 - 1.0))
    # flag logic on cat inputs: even N hits a removable 0/0 at theta = 0
    if itf.run_pipeline(cat_state(4, 0.0), 0.0).flag != itf.FLAG_LIMIT:
        return False, "expected a limit row for the even-N cat at theta=0"
    row9 = itf.run_pipeline(cat_state(9, 0.0), 0.0)
    if row9.flag != itf.FLAG_OK:
        return False, "expected an ok row for the odd-N cat at theta=0"
    worst = max(worst, abs(row9.sigma_theta - 1.0 / 9.0))
    return worst <= 1e-10, f"max pipeline residual {worst:.2e} (tol 1e-10)"


def check_cat_heisenberg_limit() -> tuple[bool, str]:
    """N sigma_theta = 1 for balanced cats, N = 3..12, over the standard grid."""
    grid = _grid_721()
    worst_main = 0.0
    worst_quarter = 0.0
    for n in range(3, 13):
        rows = itf.scan(cat_state(n, 0.0), grid)
        for idx, row in enumerate(rows):
            if row.flag == itf.FLAG_SINGULAR:
                return False, f"singular row at N={n}, theta={row.theta:.6f}"
            dev = abs(n * row.sigma_theta - 1.0)
            if idx % 180 == 0:  # multiples of pi/2 on this grid
                worst_quarter = max(worst_quarter, dev)
            else:
                worst_main = max(worst_main, dev)
    passed = worst_main <= 1e-7 and worst_quarter <= 1e-4
    return passed, (
        f"max |N sigma_theta - 1| = {worst_main:.2e} off quarter points (tol 1e-7), "
        f"{worst_quarter:.2e} at quarter points (tol 1e-4)"
    )


def check_cat_parity_curve() -> tuple[bool, str]:
    """Pipeline parity of the cat equals the closed-form fringe cos[N(theta+pi/2)]."""
    grid = _grid_721()
    worst = 0.0
    for n in range(3, 13):
        rows = itf.scan(cat_state(n, 0.0), grid)
        for row in rows:
            worst = max(worst, abs(row.parity - itf.analytic_cat_parity(n, row.theta)))
    return worst <= 1e-10, f"max |parity - fringe| = {worst:.2e} (tol 1e-10)"


def check_groundstate_scan_features() -> tuple[bool, str]:
    """Qualitative scan anatomy at N=9: pinned zeros, pinned extrema, precision order."""
    n = 9
    grid = _grid_721()
    scans = {"cat": itf.scan(cat_state(n, 0.0), grid)}
    for u in (-1.0, -0.25, 0.0):
        scans[f"U={u}"] = itf.scan(_ground(n, 1.0, u), grid)
    worst_zero = 0.0
    worst_extremum = 0.0
    for label in ("U=-1.0", "U=-0.25"):
        for idx in (0, 360, 720):  # theta = 0, pi, 2 pi
            worst_zero = max(worst_zero, abs(scans[label][idx].parity))
    for label, rows in scans.items():
        for idx in (180, 540):  # theta = pi/2, 3 pi/2
            worst_extremum = max(worst_extremum, abs(abs(rows[idx].parity) - 1.0))
    p_cat = scans["cat"][0].precision_norm
    p_u1 = scans["U=-1.0"][0].precision_norm
    p_u25 = scans["U=-0.25"][0].precision_norm
    ordered = p_cat > p_u1 > p_u25
    passed = worst_zero <= 1e-9 and worst_extremum <= 1e-9 and ordered
    return passed, (
        f"zero pinning {worst_zero:.2e}, extremum pinning {worst_extremum:.2e} (tol 1e-9), "
        f"precision at 0: cat {p_cat:.4f} > U=-1 {p_u1:.4f} > U=-0.25 {p_u25:.4f}: {ordered}"
    )


def check_perturbative_agreement() -> tuple[bool, str]:
    """Second-order fringe formula against the exact pipeline deep in the cat regime."""
    n = 5
    grid = _grid_721()
    params = model.ModelParams(n, 1.0, -50.0)
    rows = itf.scan(model.ground_and_gap(params).psi0, grid)
    worst = max(
        abs(row.parity - itf.perturbative_parity(params, row.theta)) for row in rows
    )
    # the deviation from the ideal fringe must scale as (J/U)^2
    deviations = []
    ratios = []
    for u in (-30.0, -100.0, -300.0):
        rows_u = itf.scan(_ground(n, 1.0, u), grid)
        dev = max(abs(r.parity - itf.analytic_cat_parity(n, r.theta)) for r in rows_u)
        deviations.append(math.log(dev))
        ratios.append(math.log(1.0 / abs(u)))
    slope = float(np.polyfit(ratios, deviations, 1)[0])
    passed = worst <= 1e-5 and abs(slope - 2.0) <= 0.1
    return passed, (
        f"max |pipeline - 2nd order| = {worst:.2e} at U=-50 (tol 1e-5), "
        f"fringe-deviation slope {slope:.3f} (want 2 +/- 0.1)"
    )


def check_sx_parity_sx_element() -> tuple[bool, str]:
    """<-N/2| S_x P S_x |N/2>_y = -(i)^N N/4 for N = 3..15."""
    worst = 0.0
    for n in range(3, 16):
        plus, minus = sy_extreme_eigenstates(n)
        sx = build_spin_operators(n).sx_dense()
        signs = parity_operator(n).signs
        val = complex(np.vdot(minus.amps, sx @ (signs * (sx @ plus.amps))))
        expected = -pos_i_power(n) * n / 4.0
        worst = max(worst, abs(val - expected))
    return worst <= 1e-12, f"max matrix-element deviation {worst:.2e} (tol 1e-12)"


def check_gap_limits_and_trend() -> tuple[bool, str]:
    """Gap limits at J=0 and U=0, and the near-exponential fall with N at chi=1."""
    sol = model.ground_and_gap(model.ModelParams(5, 0.0, -1.0))
    if not sol.gap <= 1e-12 * abs(sol.e0):
        return False, f"J=0 gap {sol.gap:.2e} not degenerate against |E0|={abs(sol.e0):.2e}"
    worst_u0 = 0.0
    for n, tunneling in ((4, 1.0), (5, 1.0), (6, 2.0)):
        got = model.ground_and_gap(model.ModelParams(n, tunneling, 0.0)).gap
        worst_u0 = max(worst_u0, abs(got - 2.0 * tunneling))
    if worst_u0 > 1e-12:
        return False, f"U=0 gap deviates from 2J by {worst_u0:.2e} (tol 1e-12)"
    n_list = (3, 6, 9, 12, 15)
    gaps = []
    for n in n_list:
        u = model.interaction_for_chi(n, 1.0, 1.0)
        gaps.append(model.ground_and_gap(model.ModelParams(n, 1.0, u)).gap)
    decreasing = all(a > b for a, b in zip(gaps, gaps[1:]))
    # near-exponential fall: the local slopes of log(gap) vs N stay within
    # a factor 3 of each other
    slopes = [math.log(a / b) for a, b in zip(gaps, gaps[1:])]
    spread = max(slopes) / min(slopes)
    passed = decreasing and spread <= 3.0
    gap_text = ", ".join(f"{g:.3e}" for g in gaps)
    return passed, (
        f"chi=1 gaps over N={n_list}: {gap_text}; strictly decreasing: {decreasing}, "
        f"log-slope spread {spread:.2f} (tol 3)"
    )


def check_thermal_mixture_null() -> tuple[bool, str]:
    """The equal cat mixture carries no parity signal anywhere on the grid."""
    mix = itf.thermal_cat_mixture(9)
    rows = itf.scan(mix, _grid_721())
    worst = max(abs(row.parity) for row in rows)
    if any(row.precision_norm != 0.0 for row in rows):
        return False, "thermal mixture claims nonzero phase information"
    for theta in (0.3, 1.1):
        worst = max(worst, abs(itf.mixture_parity(mix, theta)))
    return worst <= 1e-9, f"max |thermal parity| = {worst:.2e} (tol 1e-9)"


def check_derivative_identity() -> tuple[bool, str]:
    """Commutator form of dP/dtheta against a central finite difference."""
    rng = np.random.default_rng(_DERIV_SEED)
    delta = 1e-5
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(3, 13))
        theta = float(rng.uniform(0.0, TWO_PI))
        amps = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        psi = State(Basis(n), amps).normalized()
        comm = itf.run_pipeline(psi, theta).parity_deriv
        plus = itf.run_pipeline(psi, theta + delta).parity
        minus = itf.run_pipeline(psi, theta - delta).parity
        fd = (plus - minus) / (2.0 * delta)
        worst = max(worst, abs(comm - fd) / max(abs(comm), abs(fd)))
    return worst <= 1e-6, f"max relative mismatch {worst:.2e} over 50 states (tol 1e-6)"


def check_eigensolver_oracle() -> tuple[bool, str]:
    """QL eigenvalues against dense Jacobi; splitter unitarity and Wigner magnitudes."""
    rng = np.random.default_rng(_ORACLE_SEED)
    worst_vals = 0.0
    for _ in range(100):
        d = int(rng.integers(2, 17))
        t = Tridiag(rng.uniform(-1.0, 1.0, d), rng.uniform(-1.0, 1.0, d - 1))
        values = tridiag_eigen(t).values
        reference, _ = jacobi_eigen(t.to_dense())
        worst_vals = max(worst_vals, float(np.abs(values - reference).max()))
    worst_unitary = 0.0
    worst_wigner = 0.0
    for n in range(2, 13):
        u = rotation_about_x(n, math.pi / 2.0)
        eye = np.eye(n + 1)
        worst_unitary = max(worst_unitary, float(np.abs(u @ u.conj().T - eye).max()))
        d_ref = wigner_d_matrix(n / 2.0, math.pi / 2.0)
        worst_wigner = max(worst_wigner, float(np.abs(np.abs(u) - np.abs(d_ref)).max()))
    passed = worst_vals <= 1e-12 and worst_unitary <= 1e-11 and worst_wigner <= 1e-10
    return passed, (
        f"eigenvalues vs Jacobi {worst_vals:.2e} (tol 1e-12), unitarity "
        f"{worst_unitary:.2e} (tol 1e-11), Wigner magnitudes {worst_wigner:.2e} (tol 1e-10)"
    )


# (name, function, part of the quick subset)
_REGISTRY = [
    ("spin_algebra", check_spin_algebra, True),
    ("sy_extreme_states", check_sy_extreme_states, True),
    ("rotation_identities", check_rotation_identities, True),
    ("sturm_crosscheck", check_sturm_crosscheck, True),
    ("swap_block_consistency", check_swap_block_consistency, True),
    ("pipeline_basics", check_pipeline_basics, True),
    ("cat_heisenberg_limit", check_cat_heisenberg_limit, False),
    ("cat_parity_curve", check_cat_parity_curve, False),
    ("groundstate_scan_features", check_groundstate_scan_features, False),
    ("perturbative_agreement", check_perturbative_agreement, False),
    ("sx_parity_sx_element", check_sx_parity_sx_element, True),
    ("gap_limits_and_trend", check_gap_limits_and_trend, False),
    ("thermal_mixture_null", check_thermal_mixture_null, False),
    ("derivative_identity", check_derivative_identity, False),
    ("eigensolver_oracle", check_eigensolver_oracle, False),
]

CHECKS_BY_NAME = {name: fn for name, fn, _ in _REGISTRY}


def run_checks(quick: bool = False) -> list[CheckResult]:
    results = []
    for name, fn, in_quick in _REGISTRY:
        if quick and not in_quick:
            continue
        start = perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(CheckResult(name, passed, detail, perf_counter() - start))
    return results
