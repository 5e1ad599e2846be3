"""Collective spin operators, parity, and the reference states.

The two modes map onto a spin S = N/2 via S_x = (bl+ br + br+ bl)/2,
S_y = (bl+ br - br+ bl)/2i and S_z = (bl+ bl - br+ br)/2.  In the number
basis of states.Basis this makes S_z diagonal with entries m_z(i) = i - N/2
and S_x real tridiagonal.  The phase convention is fixed by the lowering
operator S_- = S_x - i S_y = br+ bl, whose matrix elements are non-negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .eigen import Tridiag, spin_x_tridiag
from .states import Basis, State

# powers of (-1j) and (+1j) cycle with period four; table lookup keeps the
# phases exact instead of round-tripping through exp/log
_NEG_I_POW = (1.0 + 0.0j, -1.0j, -1.0 + 0.0j, 1.0j)
_POS_I_POW = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


def neg_i_power(k: int) -> complex:
    """(-i)**k evaluated exactly."""
    return _NEG_I_POW[k % 4]


def pos_i_power(k: int) -> complex:
    """(+i)**k evaluated exactly."""
    return _POS_I_POW[k % 4]


@dataclass(frozen=True)
class SpinOperators:
    """S_x (tridiagonal), S_y (dense complex) and S_z (diagonal entries)."""

    n_atoms: int
    sx: Tridiag
    sy: np.ndarray
    sz: np.ndarray

    def sx_dense(self) -> np.ndarray:
        return self.sx.to_dense()

    def sz_dense(self) -> np.ndarray:
        return np.diag(self.sz)


def build_spin_operators(n_atoms: int) -> SpinOperators:
    """Collective spin operators for N atoms in the left-occupancy basis."""
    basis = Basis(n_atoms)
    sx = spin_x_tridiag(n_atoms)
    sy = np.zeros((basis.dim, basis.dim), dtype=complex)
    rows = np.arange(n_atoms)
    sy[rows + 1, rows] = -1j * sx.offdiag
    sy[rows, rows + 1] = 1j * sx.offdiag
    return SpinOperators(n_atoms, sx, sy, basis.m_z())


@dataclass(frozen=True)
class ParityOperator:
    """Parity of the left-well occupation, diagonal with entries (-1)**i."""

    signs: np.ndarray

    def matrix(self) -> np.ndarray:
        return np.diag(self.signs)

    def apply(self, psi: State) -> State:
        return State(psi.basis, self.signs * psi.amps)

    def expectation(self, psi: State) -> float:
        return float(np.sum(self.signs * (psi.amps.real**2 + psi.amps.imag**2)))


def parity_operator(n_atoms: int) -> ParityOperator:
    Basis(n_atoms)  # validates the atom count
    signs = np.where(np.arange(n_atoms + 1) % 2 == 0, 1.0, -1.0)
    return ParityOperator(signs)


def cat_state(n_atoms: int, phi: float = 0.0) -> State:
    """(|N,0> + e^{i phi} |0,N>)/sqrt(2), all atoms left plus all atoms right."""
    basis = Basis(n_atoms)
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.n_atoms] = 1.0 / math.sqrt(2.0)
    amps[0] = complex(math.cos(phi), math.sin(phi)) / math.sqrt(2.0)
    return State(basis, amps)


def _binomial_amplitudes(n_atoms: int) -> np.ndarray:
    # sqrt(C(N,i) / 2^N), evaluated through exact rationals so only the final
    # rounding to float remains
    return np.array(
        [math.sqrt(Fraction(math.comb(n_atoms, i), 2**n_atoms)) for i in range(n_atoms + 1)]
    )


def sy_extreme_eigenstates(n_atoms: int) -> tuple[State, State]:
    """The m_y = +N/2 and m_y = -N/2 eigenstates of S_y.

    In the number basis the amplitudes are binomial,
    sqrt(C(N,i)/2^N) (-i)^i for m_y = +N/2 and
    (-i)^N sqrt(C(N,i)/2^N) (+i)^i for m_y = -N/2.
    """
    basis = Basis(n_atoms)
    mags = _binomial_amplitudes(n_atoms)
    idx = np.arange(basis.dim)
    plus = mags * np.array([neg_i_power(i) for i in idx])
    minus = neg_i_power(n_atoms) * mags * np.array([pos_i_power(i) for i in idx])
    return State(basis, plus), State(basis, minus)
