"""
One-dimensional discrete-time quantum walks.

The walker lives on ``coin ⊗ position``. A state is stored as two dense
complex arrays, ``up`` and ``down``, indexed by lattice site. One step of
the standard walk applies the coin

    C(θ) = [[cos θ, -i sin θ], [-i sin θ, cos θ]]

and then the coin-conditioned shift (up moves left, down moves right).

Two topologies are supported:

- ``Unbounded(halfwidth)``: a finite array that is exact as long as the
  walk never outruns its light cone (``t <= halfwidth``).
- ``Bounded(a)``: sites ``[-a, a]`` with spin-flip reflection at the walls.
  An up-mover on ``-a`` turns into a down-mover on ``-a`` and a down-mover
  on ``a`` turns into an up-mover on ``a``.

The split-step walk ``U = S+ C(θ2) S- C(θ1)`` is supported on unbounded
lattices only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "CapacityError",
    "InitialSpin",
    "SplitStepSpec",
    "Unbounded",
    "Bounded",
    "Topology",
    "WalkState",
    "PositionDistribution",
    "PLUS",
    "coin_matrix",
    "coin_derivative",
    "new_walk",
    "step",
    "split_step",
    "apply_coin",
    "shift",
    "half_shift_minus",
    "half_shift_plus",
    "evolve",
    "evolve_split",
    "probability",
    "std_dev",
]

NORM_TOL = 1e-12


class CapacityError(RuntimeError):
    """The walk would leave the lattice that was allocated for it."""


@dataclass(frozen=True)
class InitialSpin:
    """Coin amplitudes ``alpha|up> + beta|down>`` of the initial state."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(
                f"initial spin must be normalized, |alpha|^2+|beta|^2 = {norm!r}"
            )


PLUS = InitialSpin(1 / math.sqrt(2), 1 / math.sqrt(2))


@dataclass(frozen=True)
class SplitStepSpec:
    theta1: float
    theta2: float


@dataclass(frozen=True)
class Unbounded:
    """Infinite line, realized as sites ``[-halfwidth, halfwidth]``."""

    halfwidth: int

    def __post_init__(self):
        if self.halfwidth < 1:
            raise ValueError("Unbounded.halfwidth must be >= 1")

    @property
    def n(self) -> int:
        return self.halfwidth

    @property
    def size(self) -> int:
        return 2 * self.n + 1

    @property
    def sites(self) -> NDArray[np.int64]:
        return np.arange(-self.n, self.n + 1)


@dataclass(frozen=True)
class Bounded:
    """Interval ``[-a, a]`` with reflecting walls."""

    a: int

    def __post_init__(self):
        if self.a < 1:
            raise ValueError("Bounded.a must be >= 1")

    @property
    def n(self) -> int:
        return self.a

    @property
    def size(self) -> int:
        return 2 * self.n + 1

    @property
    def sites(self) -> NDArray[np.int64]:
        return np.arange(-self.n, self.n + 1)


Topology = Union[Unbounded, Bounded]


@dataclass(frozen=True)
class WalkState:
    """Coin-resolved amplitudes at step ``t``.

    ``up[i]`` and ``down[i]`` hold the amplitudes at site
    ``topology.sites[i]``. Instances are treated as immutable; every
    operation returns a new state.
    """

    t: int
    up: NDArray[np.complex128]
    down: NDArray[np.complex128]
    topology: Topology = field(repr=False)

    @property
    def sites(self) -> NDArray[np.int64]:
        return self.topology.sites

    def index(self, x: int) -> int:
        n = self.topology.n
        if not -n <= x <= n:
            raise IndexError(f"site {x} is outside [-{n}, {n}]")
        return x + n

    def norm(self) -> float:
        return float(np.vdot(self.up, self.up).real + np.vdot(self.down, self.down).real)

    def vector(self) -> NDArray[np.complex128]:
        """Flattened state, coin-major: ``[up..., down...]``."""
        return np.concatenate([self.up, self.down])


@dataclass(frozen=True)
class PositionDistribution:
    t: int
    sites: NDArray[np.int64]
    probs: NDArray[np.float64]

    def __getitem__(self, x: int) -> float:
        return float(self.probs[x - self.sites[0]])

    def as_dict(self, tol: float = 0.0) -> dict[int, float]:
        return {int(x): float(p) for x, p in zip(self.sites, self.probs) if p > tol}


def coin_matrix(theta: float) -> NDArray[np.complex128]:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -1j * s], [-1j * s, c]])


def coin_derivative(theta: float) -> NDArray[np.complex128]:
    """Elementwise derivative of :func:`coin_matrix` with respect to theta."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[-s, -1j * c], [-1j * c, -s]])


def new_walk(
    init: InitialSpin = PLUS,
    topology: Topology = Unbounded(100),
    x0: int = 0,
) -> WalkState:
    """Place the walker at site ``x0`` with coin state ``init``."""
    if not isinstance(init, InitialSpin):
        init = InitialSpin(*init)
    up = np.zeros(topology.size, dtype=np.complex128)
    down = np.zeros(topology.size, dtype=np.complex128)
    state = WalkState(0, up, down, topology)
    i = state.index(x0)
    up[i] = init.alpha
    down[i] = init.beta
    return state


def apply_coin(theta_or_matrix, up, down):
    """Apply a 2x2 coin (an angle or an explicit matrix) at every site."""
    m = (
        coin_matrix(theta_or_matrix)
        if np.isscalar(theta_or_matrix)
        else theta_or_matrix
    )
    return m[0, 0] * up + m[0, 1] * down, m[1, 0] * up + m[1, 1] * down


def shift(up, down, topology: Topology):
    """Coin-conditioned shift of the standard walk.

    On an unbounded lattice the caller must make sure the edge sites are
    empty (see :func:`_check_capacity`); otherwise their amplitude would be
    dropped.
    """
    new_up = np.empty_like(up)
    new_down = np.empty_like(down)
    new_up[:-1] = up[1:]
    new_down[1:] = down[:-1]
    if isinstance(topology, Bounded):
        # spin-flip reflection at the walls
        new_up[-1] = down[-1]
        new_down[0] = up[0]
    else:
        new_up[-1] = 0.0
        new_down[0] = 0.0
    return new_up, new_down


def half_shift_minus(up, down):
    """``S-``: up moves one site left, down stays."""
    new_up = np.empty_like(up)
    new_up[:-1] = up[1:]
    new_up[-1] = 0.0
    return new_up, down.copy()


def half_shift_plus(up, down):
    """``S+``: down moves one site right, up stays."""
    new_down = np.empty_like(down)
    new_down[1:] = down[:-1]
    new_down[0] = 0.0
    return up.copy(), new_down


def _check_capacity(state: WalkState, topology: Topology) -> None:
    # exact zeros: sites outside the light cone are never written
    if isinstance(topology, Unbounded) and (
        state.up[0] or state.down[0] or state.up[-1] or state.down[-1]
    ):
        raise CapacityError(
            f"walk reached the edge of Unbounded(halfwidth={topology.halfwidth}) "
            f"at t={state.t}; allocate a wider lattice"
        )


def step(state: WalkState, theta: float, topology: Topology | None = None) -> WalkState:
    """Advance ``state`` by one coin-then-shift step.

    Away from the walls this is the usual amplitude recursion::

        A[x, t] = cos θ A[x+1, t-1] - i sin θ B[x+1, t-1]
        B[x, t] = -i sin θ A[x-1, t-1] + cos θ B[x-1, t-1]
    """
    topology = state.topology if topology is None else topology
    _check_capacity(state, topology)
    up, down = apply_coin(theta, state.up, state.down)
    up, down = shift(up, down, topology)
    return WalkState(state.t + 1, up, down, topology)


def split_step(
    state: WalkState, spec: SplitStepSpec, topology: Topology | None = None
) -> WalkState:
    """Advance ``state`` by one split step ``S+ C(θ2) S- C(θ1)``."""
    topology = state.topology if topology is None else topology
    if isinstance(topology, Bounded):
        raise ValueError("split-step walks are only defined on Unbounded lattices")
    _check_capacity(state, topology)
    up, down = apply_coin(spec.theta1, state.up, state.down)
    up, down = half_shift_minus(up, down)
    up, down = apply_coin(spec.theta2, up, down)
    up, down = half_shift_plus(up, down)
    return WalkState(state.t + 1, up, down, topology)


def evolve(
    theta: float,
    steps: int,
    topology: Topology | None = None,
    init: InitialSpin = PLUS,
    x0: int = 0,
) -> WalkState:
    """Run a standard walk from ``init`` at ``x0`` for ``steps`` steps."""
    topology = Unbounded(max(steps, 1)) if topology is None else topology
    state = new_walk(init, topology, x0)
    for _ in range(steps):
        state = step(state, theta)
    return state


def evolve_split(
    spec: SplitStepSpec,
    steps: int,
    topology: Unbounded | None = None,
    init: InitialSpin = PLUS,
) -> WalkState:
    topology = Unbounded(max(steps, 1)) if topology is None else topology
    state = new_walk(init, topology)
    for _ in range(steps):
        state = split_step(state, spec)
    return state


def probability(state: WalkState) -> PositionDistribution:
    probs = state.up.real**2 + state.up.imag**2 + state.down.real**2 + state.down.imag**2
    if not probs.sum() > 0:
        raise ValueError("state has zero norm")
    return PositionDistribution(state.t, state.sites, probs)


def std_dev(dist: PositionDistribution) -> float:
    """Standard deviation of the position, in lattice sites."""
    x = dist.sites.astype(float)
    mean = np.dot(x, dist.probs)
    var = np.dot(x**2, dist.probs) - mean**2
    return math.sqrt(max(var, 0.0))
