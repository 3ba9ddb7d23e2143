"""Single-carrier purification round and its closed-form fidelity recursion.

One round: Alice SUMs her half of the pair into a fresh carrier, the carrier
crosses the channel, Bob subtracts his half, and the pair is kept when the
carrier reads 0.  For a shared error ``(n, j)`` and carrier error ``(x, z)`` the
carrier reads ``x - n``, and a kept pair ends in ``Phi^{n, j+z}``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import ZeroSuccessError
from .state_model import BellTable, Marginals, marginals

# exp() clamp for ratio powers
_LOG_CLAMP = 700.0


@dataclass(frozen=True)
class RoundOutcome:
    success_probability: float
    posterior: BellTable
    label: str = ""

    @property
    def fidelity(self) -> float:
        return self.posterior.fidelity


@dataclass(frozen=True)
class Trajectory:
    outcomes: tuple[RoundOutcome, ...]
    converged_fidelity: float
    initial: BellTable | None = field(default=None, compare=False)
    # protocol rounds represented; may exceed len(outcomes) for sampled checkpoints
    rounds: int | None = None

    def __post_init__(self):
        if not self.outcomes:
            raise ValueError("a trajectory needs at least one round")
        if any(o.success_probability <= 0.0 for o in self.outcomes):
            raise ValueError("reported rounds must have positive success probability")
        if self.rounds is None:
            object.__setattr__(self, "rounds", len(self.outcomes))

    def __len__(self) -> int:
        return len(self.outcomes)

    @property
    def fidelities(self) -> np.ndarray:
        return np.array([o.fidelity for o in self.outcomes])

    @property
    def success_probabilities(self) -> np.ndarray:
        return np.array([o.success_probability for o in self.outcomes])

    @property
    def cumulative_success(self) -> np.ndarray:
        return np.cumprod(self.success_probabilities)

    @property
    def final(self) -> BellTable:
        return self.outcomes[-1].posterior


def _posterior_weights(shared: np.ndarray, channel: np.ndarray) -> np.ndarray:
    d = shared.shape[0]
    W = np.zeros((d, d))
    for j in range(d):
        # np.roll(c, j)[m'] == c[m' - j]
        W += shared[:, j : j + 1] * np.roll(channel, j, axis=1)
    return W


def round_update(shared: BellTable, channel: BellTable) -> RoundOutcome:
    """One round with a carrier drawn fresh through ``channel``."""
    if shared.d != channel.d:
        raise ValueError(f"dimension mismatch: {shared.d} != {channel.d}")
    W = _posterior_weights(shared.p, channel.p)
    total = W.sum()
    if total <= 0.0:
        raise ZeroSuccessError("carrier outcome 0 has probability zero")
    return RoundOutcome(float(total), BellTable(shared.d, W / total))


def _shift_marginal(u) -> np.ndarray:
    if isinstance(u, Marginals):
        return np.asarray(u.u, dtype=float)
    return np.asarray(u, dtype=float)


def closed_form_fidelity(p0: float, u: Marginals | Sequence[float], N: int) -> float:
    """Fidelity after ``N`` kept rounds when the channel has no pure phase errors.

    ``F_N = [1 + sum_{x != 0} (u_x / p0)^(N+1)]^-1``, summed in the log domain.
    """
    if p0 <= 0.0:
        raise ValueError("p0 must be positive")
    if N < 0:
        raise ValueError("N must be non-negative")
    u = _shift_marginal(u)
    total = 0.0
    for ux in u[1:]:
        if ux <= 0.0:
            continue
        expo = (N + 1) * (math.log(ux) - math.log(p0))
        total += math.exp(min(max(expo, -_LOG_CLAMP), _LOG_CLAMP))
    return 1.0 / (1.0 + total)


def satisfies_hypothesis(channel: BellTable, atol: float = 0.0) -> bool:
    """True when the identity row has no phase-only errors (``p_0m = 0`` for m != 0)."""
    return bool(np.all(channel.p[0, 1:] <= atol))


def converges(channel: BellTable) -> bool:
    """Whether repeated rounds drive the fidelity to 1: ``p00 > max_{x != 0} u_x``.

    Exact only when :func:`satisfies_hypothesis` holds; otherwise a
    ``RuntimeWarning`` is issued and the marginal test is still applied.
    """
    if not satisfies_hypothesis(channel):
        warnings.warn(
            "channel has phase-only errors; the marginal test is not exact here",
            RuntimeWarning,
            stacklevel=2,
        )
    u = marginals(channel).u
    return bool(channel.fidelity > u[1:].max())


def limit_fidelity(channel: BellTable) -> float | None:
    """Large-N fidelity, or ``None`` when the channel is outside the closed form."""
    if not satisfies_hypothesis(channel):
        return None
    p0 = channel.fidelity
    u = marginals(channel).u[1:]
    if p0 <= 0.0:
        return 0.0
    if np.any(u > p0):
        return 0.0
    ties = int(np.sum(u == p0))
    return 1.0 / (1.0 + ties)


def trajectory(channel: BellTable, rounds: int, shared: BellTable | None = None) -> Trajectory:
    """Iterate :func:`round_update`; the shared pair starts as the channel's Choi state."""
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    state = channel if shared is None else shared
    initial = state
    outcomes = []
    for k in range(rounds):
        out = round_update(state, channel)
        outcomes.append(RoundOutcome(out.success_probability, out.posterior, f"round:{k + 1}"))
        state = out.posterior
    limit = limit_fidelity(channel) if shared is None else None
    return Trajectory(tuple(outcomes), outcomes[-1].fidelity if limit is None else limit, initial)
