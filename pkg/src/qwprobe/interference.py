"""
Degree of interference in position space.

For a pure walk state the coin-off-diagonal blocks of the density matrix
have diagonals ``rho_ud(x, x) = A_x conj(B_x)`` and ``rho_du = conj(rho_ud)``.
The degree of interference at time ``t+1`` is

    mu[x, t+1] = | sc (rho_ud(x+1) - rho_ud(x-1)) + sc (rho_du(x+1) - rho_du(x-1)) |

with ``sc = sin θ cos θ``; the two terms add to a real number, so
``mu = |2 sc Re[AB*(x+1) - AB*(x-1)]|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .walk import PLUS, InitialSpin, Topology, Unbounded, WalkState, new_walk, step

__all__ = ["InterferenceMap", "mu_at", "mu_field", "mu_map", "first_divergence"]


@dataclass(frozen=True)
class InterferenceMap:
    """``mu[t, i]`` is the degree of interference at time ``t`` and site ``sites[i]``.

    Row 0 is all zeros: mu is only defined from ``t = 1`` on.
    """

    theta: float
    sites: NDArray[np.int64]
    mu: NDArray[np.float64]

    @property
    def t_max(self) -> int:
        return self.mu.shape[0] - 1

    def restrict(self, lo: int, hi: int) -> NDArray[np.float64]:
        """Columns for sites ``lo..hi``; sites off the lattice read as zero."""
        out = np.zeros((self.mu.shape[0], hi - lo + 1))
        keep = (self.sites >= lo) & (self.sites <= hi)
        out[:, self.sites[keep] - lo] = self.mu[:, keep]
        return out


def _rho_ud(state: WalkState) -> NDArray[np.complex128]:
    return state.up * state.down.conj()


def mu_at(state: WalkState, theta: float, x: int) -> float:
    """mu at site ``x`` and time ``state.t + 1``, evaluated term by term."""
    rud = _rho_ud(state)
    n = state.topology.n

    def diag(r, y):
        return r[y + n] if -n <= y <= n else 0.0

    rdu = rud.conj()
    sc = math.sin(theta) * math.cos(theta)
    val = sc * (diag(rud, x + 1) - diag(rud, x - 1)) + sc * (diag(rdu, x + 1) - diag(rdu, x - 1))
    return float(abs(val))


def mu_field(state: WalkState, theta: float) -> NDArray[np.float64]:
    """mu over the whole lattice at time ``state.t + 1``."""
    c = _rho_ud(state).real
    diff = np.zeros_like(c)
    diff[1:-1] = c[2:] - c[:-2]
    diff[0] = c[1]
    diff[-1] = -c[-2]
    return np.abs(2 * math.sin(theta) * math.cos(theta) * diff)


def mu_map(
    theta: float,
    t_max: int,
    topology: Topology | None = None,
    init: InitialSpin = PLUS,
) -> InterferenceMap:
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    topology = Unbounded(t_max) if topology is None else topology
    state = new_walk(init, topology)
    mu = np.zeros((t_max + 1, topology.size))
    for t in range(1, t_max + 1):
        mu[t] = mu_field(state, theta)
        if t < t_max:
            state = step(state, theta)
    return InterferenceMap(theta, topology.sites, mu)


def first_divergence(a: InterferenceMap, b: InterferenceMap, tol: float = 1e-9) -> int | None:
    """First time at which two maps differ by more than ``tol`` at any site.

    Both maps are compared on the union of their sites, with missing
    sites read as zero.
    """
    lo = int(min(a.sites[0], b.sites[0]))
    hi = int(max(a.sites[-1], b.sites[-1]))
    rows = min(a.mu.shape[0], b.mu.shape[0])
    gap = np.abs(a.restrict(lo, hi)[:rows] - b.restrict(lo, hi)[:rows]).max(axis=1)
    hits = np.flatnonzero(gap > tol)
    return int(hits[0]) if hits.size else None
