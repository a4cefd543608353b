"""
Fisher information and quantum Fisher information of walk states.

Quantities (all in rad^-2):

``full_qfi``
    QFI of the pure coin+position state, ``4(<dPsi|dPsi> - |<Psi|dPsi>|^2)``.
``position_qfi_paper``
    Approximate QFI of the coin-traced position state,
    ``4 Tr[(d rho_w)^2 (I - rho_w)]``.
``position_qfi_exact``
    Spectral QFI of the same state from the eigendecomposition of rho_w.
``classical_fi`` / ``limited_fi``
    Fisher information of a position measurement, over all sites or only
    the sites covered by a detector window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from numpy.typing import NDArray

from .tangent import TangentState
from .walk import PositionDistribution

__all__ = [
    "PositionDensity",
    "DetectorWindow",
    "full_qfi",
    "reduce_position",
    "position_qfi_paper",
    "position_qfi_exact",
    "probability_derivative",
    "classical_fi",
    "limited_fi",
    "cramer_rao_bound",
]

P_CUTOFF = 1e-15
EIG_EPS = 1e-12


@dataclass(frozen=True)
class PositionDensity:
    """Position-space density matrix and its theta-derivative.

    Both matrices are restricted to ``sites``, the smallest contiguous block
    of sites carrying amplitude.
    """

    t: int
    sites: NDArray[np.int64]
    rho: NDArray[np.complex128]
    drho: NDArray[np.complex128]

    def check(self, tol: float = 1e-10) -> None:
        if abs(np.trace(self.rho) - 1) > tol:
            raise ValueError(f"trace(rho) = {np.trace(self.rho)}")
        if abs(np.trace(self.drho)) > tol:
            raise ValueError(f"trace(drho) = {np.trace(self.drho)}")
        for name, m in (("rho", self.rho), ("drho", self.drho)):
            if np.max(np.abs(m - m.conj().T), initial=0.0) > 1e-12:
                raise ValueError(f"{name} is not Hermitian")
        if np.linalg.eigvalsh(self.rho).min() < -tol:
            raise ValueError("rho is not positive semidefinite")


@dataclass(frozen=True)
class DetectorWindow:
    sites: frozenset[int]

    def __init__(self, sites: Iterable[int]):
        sites = frozenset(int(x) for x in sites)
        if not sites:
            raise ValueError("detector window must contain at least one site")
        object.__setattr__(self, "sites", sites)

    @classmethod
    def interval(cls, lo: int, hi: int) -> "DetectorWindow":
        return cls(range(lo, hi + 1))

    def mask(self, sites: NDArray[np.int64]) -> NDArray[np.bool_]:
        return np.isin(sites, np.fromiter(self.sites, dtype=np.int64))


def _check_normalized(ts: TangentState, tol: float = 1e-10) -> None:
    norm = ts.base.norm()
    if abs(norm - 1) > tol:
        raise ValueError(f"state is not normalized (norm = {norm!r})")


def full_qfi(ts: TangentState) -> float:
    """QFI of the full pure state."""
    _check_normalized(ts)
    d = ts.d_vector()
    dd = np.vdot(d, d).real
    ov = ts.overlap()
    return float(4 * (dd - abs(ov) ** 2))


def _support(ts: TangentState) -> slice:
    occupied = (
        (ts.base.up != 0) | (ts.base.down != 0) | (ts.d_up != 0) | (ts.d_down != 0)
    )
    idx = np.flatnonzero(occupied)
    return slice(idx[0], idx[-1] + 1)


def reduce_position(ts: TangentState) -> PositionDensity:
    """Trace out the coin from ``|Psi><Psi|`` and from its derivative."""
    sl = _support(ts)
    up, down = ts.base.up[sl], ts.base.down[sl]
    du, dd = ts.d_up[sl], ts.d_down[sl]
    rho = np.outer(up, up.conj()) + np.outer(down, down.conj())
    cross = np.outer(du, up.conj()) + np.outer(dd, down.conj())
    drho = cross + cross.conj().T
    return PositionDensity(ts.t, ts.base.sites[sl], rho, drho)


def position_qfi_paper(pd: PositionDensity) -> float:
    """``4 Tr[(drho)^2 (I - rho)]``, the small-mixedness approximation."""
    d2 = pd.drho @ pd.drho
    return float(4 * (np.trace(d2) - np.sum(d2 * pd.rho.T)).real)


def position_qfi_exact(pd: PositionDensity, eps: float = EIG_EPS) -> float:
    """Spectral QFI ``sum 2|<i|drho|j>|^2 / (l_i + l_j)`` over ``l_i + l_j > eps``."""
    evals, evecs = np.linalg.eigh(pd.rho)
    d = evecs.conj().T @ pd.drho @ evecs
    denom = evals[:, None] + evals[None, :]
    keep = denom > eps
    return float(np.sum(2 * np.abs(d[keep]) ** 2 / denom[keep]))


def probability_derivative(ts: TangentState) -> NDArray[np.float64]:
    """Exact ``dP(x)/dtheta = 2 Re(conj(A) dA + conj(B) dB)`` per site."""
    up, down = ts.base.up, ts.base.down
    return 2 * (up.conj() * ts.d_up + down.conj() * ts.d_down).real


def classical_fi(
    dist: PositionDistribution,
    ddist: NDArray[np.float64],
    p_cutoff: float = P_CUTOFF,
) -> float:
    """Fisher information ``sum (dp)^2 / p`` of a position measurement.

    Sites with ``p <= p_cutoff`` are skipped (``0^2/0`` counts as 0).
    """
    p = np.asarray(dist.probs)
    if p.min() < -1e-12:
        raise ValueError(f"negative probability {p.min()!r}")
    keep = p > p_cutoff
    return float(np.sum(ddist[keep] ** 2 / p[keep]))


def limited_fi(
    dist: PositionDistribution,
    ddist: NDArray[np.float64],
    window: DetectorWindow,
    p_cutoff: float = P_CUTOFF,
) -> float:
    """Fisher information of a position measurement seeing only ``window``."""
    inside = window.mask(dist.sites)
    p = np.asarray(dist.probs)
    if p.min() < -1e-12:
        raise ValueError(f"negative probability {p.min()!r}")
    keep = inside & (p > p_cutoff)
    return float(np.sum(ddist[keep] ** 2 / p[keep]))


def cramer_rao_bound(fisher: float, repetitions: int = 1) -> float:
    """Smallest variance reachable with ``repetitions`` independent shots.

    Returns ``inf`` when the Fisher information is not positive, i.e. the
    measurement carries no information about the parameter.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be a positive integer")
    if not fisher > 0:
        return math.inf
    return 1.0 / (repetitions * fisher)
