"""Closed-form Wigner rotation coefficients d^j_{m'm}(beta).

Direct factorial sum, exact integer combinatorics with one final rounding.
Serves as an independent reference for the spectrally constructed rotation
matrices: the entries of exp(-i beta S_x) agree with d^{N/2}(beta) up to
diagonal phase factors, so their magnitudes must match entry by entry.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


def _half_int(x: float, name: str) -> int:
    """Value doubled and validated to be an integer."""
    two_x = round(2 * x)
    if abs(2 * x - two_x) > 1e-9:
        raise ValueError(f"{name} must be integer or half-integer, got {x}")
    return two_x


def wigner_little_d(j: float, m_row: float, m_col: float, beta: float) -> float:
    """d^j_{m_row, m_col}(beta) = <j m_row| exp(-i beta S_y) |j m_col>."""
    two_j = _half_int(j, "j")
    two_mr = _half_int(m_row, "m_row")
    two_mc = _half_int(m_col, "m_col")
    if two_j < 0 or abs(two_mr) > two_j or abs(two_mc) > two_j:
        raise ValueError("require |m| <= j")
    if (two_j - two_mr) % 2 or (two_j - two_mc) % 2:
        raise ValueError("m and j must differ by integers")

    a = (two_j + two_mr) // 2  # j + m'
    b = (two_j - two_mr) // 2  # j - m'
    c = (two_j + two_mc) // 2  # j + m
    d = (two_j - two_mc) // 2  # j - m
    delta = (two_mr - two_mc) // 2  # m' - m

    cos_half = math.cos(beta / 2.0)
    sin_half = math.sin(beta / 2.0)
    norm = math.sqrt(
        Fraction(
            math.factorial(a) * math.factorial(b) * math.factorial(c) * math.factorial(d)
        )
    )

    total = 0.0
    for s in range(max(0, -delta), min(b, c) + 1):
        denom = (
            math.factorial(c - s)
            * math.factorial(s)
            * math.factorial(delta + s)
            * math.factorial(b - s)
        )
        sign = -1.0 if (delta + s) % 2 else 1.0
        total += sign / denom * cos_half ** (two_j - delta - 2 * s) * sin_half ** (delta + 2 * s)
    return float(norm) * total


def wigner_d_matrix(j: float, beta: float) -> np.ndarray:
    """Matrix of d^j_{m'm}(beta) with m ascending along both axes.

    Index i maps to m = i - j, matching the two-mode basis convention
    m_z(i) = i - N/2 with j = N/2.
    """
    two_j = _half_int(j, "j")
    dim = two_j + 1
    out = np.empty((dim, dim))
    for r in range(dim):
        for c in range(dim):
            out[r, c] = wigner_little_d(j, r - two_j / 2, c - two_j / 2, beta)
    return out
