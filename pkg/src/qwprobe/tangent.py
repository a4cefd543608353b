"""
Exact propagation of the derivative state d|Psi>/d(theta).

The derivative obeys the product rule applied to one step,

    |dPsi(t)> = S C |dPsi(t-1)> + S (dC) |Psi(t-1)>,

so it can be carried along with the walk at the cost of a second pair of
amplitude arrays. The shift is parameter-free, which means the derivative
field reuses the same shift (and the same wall reflection) as the walk.

For the split step there are two parameters; each one gets its own
:class:`TangentState`, selected by ``tag``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from .walk import (
    Bounded,
    InitialSpin,
    PLUS,
    SplitStepSpec,
    Topology,
    Unbounded,
    WalkState,
    _check_capacity,
    apply_coin,
    coin_derivative,
    half_shift_minus,
    half_shift_plus,
    new_walk,
    shift,
)

__all__ = [
    "TangentState",
    "new_tangent",
    "step_with_tangent",
    "split_step_with_tangent",
    "evolve_tangent",
    "evolve_split_tangent",
    "fd_check",
]

TAGS = ("theta", "theta1", "theta2")


@dataclass(frozen=True)
class TangentState:
    base: WalkState
    d_up: NDArray[np.complex128]
    d_down: NDArray[np.complex128]
    tag: str = "theta"

    @property
    def t(self) -> int:
        return self.base.t

    @property
    def topology(self) -> Topology:
        return self.base.topology

    def d_vector(self) -> NDArray[np.complex128]:
        return np.concatenate([self.d_up, self.d_down])

    def overlap(self) -> complex:
        """<Psi|dPsi>."""
        return complex(np.vdot(self.base.up, self.d_up) + np.vdot(self.base.down, self.d_down))


def new_tangent(
    init: InitialSpin = PLUS,
    topology: Topology = Unbounded(100),
    x0: int = 0,
    tag: str = "theta",
) -> TangentState:
    """Initial state with a zero derivative field (the start is parameter-free)."""
    if tag not in TAGS:
        raise ValueError(f"unknown parameter tag {tag!r}; expected one of {TAGS}")
    base = new_walk(init, topology, x0)
    return TangentState(base, np.zeros_like(base.up), np.zeros_like(base.down), tag)


def step_with_tangent(
    ts: TangentState,
    theta: float,
    topology: Topology | None = None,
    injection_scale: float = 1.0,
) -> TangentState:
    """Advance the walk and its theta-derivative by one standard step.

    ``injection_scale`` multiplies the ``(dC) Psi`` source term; it is 1 for
    the true derivative and exists so the linearity of the propagation can
    be probed.
    """
    topology = ts.topology if topology is None else topology
    _check_capacity(ts.base, topology)
    up, down = apply_coin(theta, ts.base.up, ts.base.down)
    du, dd = apply_coin(theta, ts.d_up, ts.d_down)
    su, sd = apply_coin(injection_scale * coin_derivative(theta), ts.base.up, ts.base.down)
    up, down = shift(up, down, topology)
    du, dd = shift(du + su, dd + sd, topology)
    return TangentState(WalkState(ts.t + 1, up, down, topology), du, dd, ts.tag)


def split_step_with_tangent(
    ts: TangentState,
    spec: SplitStepSpec,
    topology: Topology | None = None,
) -> TangentState:
    """Advance a split-step walk and its derivative along ``ts.tag``."""
    topology = ts.topology if topology is None else topology
    if isinstance(topology, Bounded):
        raise ValueError("split-step walks are only defined on Unbounded lattices")
    if ts.tag not in ("theta1", "theta2"):
        raise ValueError(f"split-step tangent needs tag 'theta1' or 'theta2', got {ts.tag!r}")
    _check_capacity(ts.base, topology)

    up, down = ts.base.up, ts.base.down
    du, dd = ts.d_up, ts.d_down

    if ts.tag == "theta1":
        su, sd = apply_coin(coin_derivative(spec.theta1), up, down)
    up, down = apply_coin(spec.theta1, up, down)
    du, dd = apply_coin(spec.theta1, du, dd)
    if ts.tag == "theta1":
        du, dd = du + su, dd + sd

    up, down = half_shift_minus(up, down)
    du, dd = half_shift_minus(du, dd)

    if ts.tag == "theta2":
        su, sd = apply_coin(coin_derivative(spec.theta2), up, down)
    up, down = apply_coin(spec.theta2, up, down)
    du, dd = apply_coin(spec.theta2, du, dd)
    if ts.tag == "theta2":
        du, dd = du + su, dd + sd

    up, down = half_shift_plus(up, down)
    du, dd = half_shift_plus(du, dd)
    return TangentState(WalkState(ts.t + 1, up, down, topology), du, dd, ts.tag)


def evolve_tangent(
    theta: float,
    steps: int,
    topology: Topology | None = None,
    init: InitialSpin = PLUS,
    x0: int = 0,
) -> TangentState:
    topology = Unbounded(max(steps, 1)) if topology is None else topology
    ts = new_tangent(init, topology, x0)
    for _ in range(steps):
        ts = step_with_tangent(ts, theta)
    return ts


def evolve_split_tangent(
    spec: SplitStepSpec,
    steps: int,
    tag: str,
    topology: Unbounded | None = None,
    init: InitialSpin = PLUS,
) -> TangentState:
    topology = Unbounded(max(steps, 1)) if topology is None else topology
    ts = new_tangent(init, topology, tag=tag)
    for _ in range(steps):
        ts = split_step_with_tangent(ts, spec)
    return ts


def fd_check(
    builder: Callable[[float], TangentState],
    theta: float,
    h: float = 1e-5,
) -> float:
    """Max-norm gap between the propagated derivative and a central difference.

    ``builder(theta)`` must run a complete simulation and return the final
    :class:`TangentState`. The walk is rerun at ``theta ± h``; only the base
    states of those runs are used.
    """
    if h < 1e-7:
        raise ValueError("h below 1e-7 loses too many digits to cancellation")
    ts = builder(theta)
    plus = builder(theta + h).base.vector()
    minus = builder(theta - h).base.vector()
    fd = (plus - minus) / (2 * h)
    return float(np.max(np.abs(fd - ts.d_vector())))
