"""Two-mode number basis and state vectors.

For N atoms split between a left and a right well the Hilbert space has
dimension N+1.  Basis index i labels the number state |n_left=i, n_right=N-i>,
so the z projection of the equivalent S=N/2 spin is m_z(i) = i - N/2.  Index N
is |N,0>, the m_z=+N/2 state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Basis:
    """Index convention for N atoms in two modes."""

    n_atoms: int

    def __post_init__(self):
        if not isinstance(self.n_atoms, (int, np.integer)) or isinstance(self.n_atoms, bool):
            raise ValueError(f"n_atoms must be an integer, got {self.n_atoms!r}")
        if self.n_atoms < 2:
            raise ValueError(
                f"n_atoms must be >= 2, got {self.n_atoms}: with a single atom there is "
                "no pair interaction and the two-mode formulas degenerate"
            )

    @property
    def dim(self) -> int:
        return self.n_atoms + 1

    @property
    def spin(self) -> float:
        """Total spin S = N/2 of the equivalent angular momentum problem."""
        return self.n_atoms / 2

    def m_z(self) -> np.ndarray:
        """z projections m_z(i) = i - N/2 for all basis indices."""
        return np.arange(self.dim, dtype=float) - self.n_atoms / 2


@dataclass(frozen=True)
class State:
    """Complex amplitudes over a two-mode basis."""

    basis: Basis
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (self.basis.dim,):
            raise ValueError(f"expected {self.basis.dim} amplitudes, got shape {amps.shape}")
        if not np.isfinite(amps).all():
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "amps", amps)

    @property
    def n_atoms(self) -> int:
        return self.basis.n_atoms

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> State:
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return State(self.basis, self.amps / n)

    def overlap(self, other: State) -> complex:
        """<self|other> with the conjugate on self."""
        if other.basis != self.basis:
            raise ValueError("overlap requires a common basis")
        return complex(np.vdot(self.amps, other.amps))


def basis_state(basis: Basis, index: int) -> State:
    """The number state |n_left=index, n_right=N-index>."""
    if not 0 <= index < basis.dim:
        raise ValueError(f"basis index {index} out of range for N={basis.n_atoms}")
    amps = np.zeros(basis.dim, dtype=complex)
    amps[index] = 1.0
    return State(basis, amps)
