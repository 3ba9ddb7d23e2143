"""MUB preprocessing and the alternating-basis multi-carrier schedule.

The channel is first relabelled so that its heaviest line through the origin
sits on the pure-phase axis ``{(0, k)}``.  Checks then suppress shift errors,
a bilateral Fourier relabel turns the surviving phase errors into shifts, and
further checks suppress those.  A final Pauli correction moves the dominant
Bell label to ``(0, 0)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import ZeroSuccessError
from .mcaepp import round_update_general
from .phase_space import PhasePoint, SymplecticMap, axis_swap, is_prime, phase_axis, rotation_between
from .single_carrier import RoundOutcome, Trajectory
from .state_model import ATOL, BellTable, marginals, mub_weights, relabel, translate

CHECK_MODELS = ("star", "ideal")


@dataclass(frozen=True, eq=False)
class EpsilonTracker:
    """Relative weights ``eps[x, z] = p[x, z] / p[0, 0]``, with ``eps[0, 0] = 1``."""

    eps: np.ndarray

    @classmethod
    def from_table(cls, t: BellTable) -> EpsilonTracker:
        if t.fidelity <= 0.0:
            raise ValueError("relative weights need p00 > 0")
        return cls(t.p / t.fidelity)

    @property
    def fidelity(self) -> float:
        return float(1.0 / self.eps.sum())

    def contraction(self, later: EpsilonTracker) -> np.ndarray:
        """Per-entry ratio ``eps_later / eps``; ``nan`` where ``eps`` is zero."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.eps > 0, later.eps / np.where(self.eps > 0, self.eps, 1.0), np.nan)


@dataclass(frozen=True)
class Phase:
    kind: str  # "check", "rotate" or "correct"
    m: int | None = None

    def __str__(self) -> str:
        return f"check:{self.m}" if self.kind == "check" else self.kind


@dataclass(frozen=True)
class Schedule:
    phases: tuple[Phase, ...]

    def __post_init__(self):
        if not self.phases:
            raise ValueError("empty schedule")
        if self.phases[-1].kind != "correct":
            raise ValueError("a schedule must end with 'correct'")
        if any(p.kind == "correct" for p in self.phases[:-1]):
            raise ValueError("'correct' may only appear last")
        for p in self.phases:
            if p.kind not in ("check", "rotate", "correct"):
                raise ValueError(f"unknown phase {p.kind!r}")
            if p.kind == "check" and (p.m is None or p.m < 1):
                raise ValueError("check phases need m >= 1")

    @classmethod
    def parse(cls, text: str) -> Schedule:
        """Read ``check:8,rotate,check:8,correct``; a missing trailing ``correct`` is an error."""
        phases = []
        for raw in text.split(","):
            tok = raw.strip().lower()
            if tok in ("rotate", "correct"):
                phases.append(Phase(tok))
            elif tok.startswith("check:"):
                try:
                    m = int(tok.split(":", 1)[1])
                except ValueError:
                    raise ValueError(f"bad carrier count in {raw!r}") from None
                phases.append(Phase("check", m))
            else:
                raise ValueError(f"unknown schedule token {raw!r}")
        return cls(tuple(phases))

    @classmethod
    def default(cls, m: int, k: int = 3) -> Schedule:
        """``k`` checks, one rotate, ``k`` checks, correct."""
        checks = tuple(Phase("check", m) for _ in range(k))
        return cls(checks + (Phase("rotate"),) + checks + (Phase("correct"),))

    @classmethod
    def interleaved(cls, m: int, checks: int = 6) -> Schedule:
        """Checks separated by rotates: ``check, rotate, check, ..., check, correct``."""
        phases: list[Phase] = []
        for i in range(checks):
            if i:
                phases.append(Phase("rotate"))
            phases.append(Phase("check", m))
        return cls(tuple(phases) + (Phase("correct"),))

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.phases)


def mub_preprocess(t: BellTable) -> tuple[SymplecticMap, BellTable]:
    """Rotate the heaviest MUB line onto ``{(0, k)}``, so the identity row holds ``Lmax``."""
    if not is_prime(t.d):
        raise ValueError(f"MUB preprocessing needs prime d, got {t.d}")
    w = mub_weights(t)
    S = rotation_between(w.best_line, phase_axis(t.d))
    return S, relabel(t, S)


def hadamard_relabel(t: BellTable) -> BellTable:
    """Bilateral Fourier transform on Bell labels: ``(x, z) -> (z, -x)``."""
    return relabel(t, axis_swap(t.d))


def epsilon_decay_model(eps0: float, ratio: float, k: int, m: int) -> float:
    """Idealized suppression ``eps0 * ratio^(k m)`` after ``k`` checks of ``m`` carriers."""
    if ratio < 0 or eps0 < 0:
        raise ValueError("eps0 and ratio must be non-negative")
    return float(eps0 * ratio ** (k * m))


def decay_excess(before: BellTable, after: BellTable, carrier: BellTable, m: int) -> float:
    """Largest observed-to-model ratio of the ``eps[x, z]`` contraction over ``x != 0``.

    The model ratio is ``(u_x / u_0)^m`` with ``u`` the carrier shift marginal.
    Values above one mean a check suppressed that entry less than the model says.
    """
    u = marginals(carrier).u
    e0, e1 = EpsilonTracker.from_table(before), EpsilonTracker.from_table(after)
    worst = 0.0
    for x in range(1, before.d):
        model = (u[x] / u[0]) ** m
        for z in range(before.d):
            if e0.eps[x, z] == 0.0:
                continue
            seen = e1.eps[x, z] / e0.eps[x, z]
            worst = max(worst, float("inf") if model == 0.0 and seen > 0 else seen / model if model else 0.0)
    return worst


def final_pauli_correction(t: BellTable) -> BellTable:
    """Translate labels so the largest entry lands on ``(0, 0)``.

    Ties go to the smallest row-major index.
    """
    flat = t.p.reshape(-1)
    idx = int(np.flatnonzero(flat >= flat.max() - ATOL)[0])
    x, z = divmod(idx, t.d)
    return translate(t, PhasePoint(-x, -z, t.d))


def ideal_check(q: BellTable, carrier: BellTable, m: int) -> RoundOutcome:
    """Per-carrier shift filter: weight ``q[x, z] * u_x^m`` with ``u`` the carrier shift marginal.

    This is the model behind :func:`epsilon_decay_model`, not a circuit.
    """
    u = marginals(carrier).u
    W = q.p * (u[:, None] ** m)
    total = W.sum()
    if total <= 0.0:
        raise ZeroSuccessError("ideal filter rejects every label")
    return RoundOutcome(float(total), BellTable(q.d, W / total))


def run_adaptive(
    channel: BellTable,
    m: int | None,
    schedule: Schedule | str,
    check: str = "star",
    preprocess: bool = True,
) -> Trajectory:
    """Run a schedule on the Choi state of ``channel``.

    Carriers always see the (rotated) original channel.  ``check="star"`` uses the
    exact star-stabilizer round, ``check="ideal"`` the per-carrier shift filter.
    ``m`` overrides the carrier count of every check phase when given.
    """
    if check not in CHECK_MODELS:
        raise ValueError(f"check must be one of {CHECK_MODELS}, got {check!r}")
    if isinstance(schedule, str):
        schedule = Schedule.parse(schedule)
    if preprocess:
        _, q = mub_preprocess(channel)
    else:
        q = channel
    carrier = q
    initial = q
    outcomes = []
    for phase in schedule.phases:
        if phase.kind == "check":
            mm = phase.m if m is None else m
            try:
                if check == "star":
                    out = round_update_general(q, carrier, mm, permute=False)
                else:
                    out = ideal_check(q, carrier, mm)
            except ZeroSuccessError as exc:
                raise ZeroSuccessError(f"phase {len(outcomes) + 1} ({phase}): {exc}") from exc
            q = out.posterior
            outcomes.append(RoundOutcome(out.success_probability, q, str(phase)))
        elif phase.kind == "rotate":
            q = hadamard_relabel(q)
            outcomes.append(RoundOutcome(1.0, q, "rotate"))
        else:
            q = final_pauli_correction(q)
            outcomes.append(RoundOutcome(1.0, q, "correct"))
    return Trajectory(tuple(outcomes), q.fidelity, initial)


@dataclass(frozen=True)
class ThresholdReport:
    distillable: bool
    spectral_dominance: bool
    average_bound: bool


def threshold_predicates(p00: float, d: int) -> ThresholdReport:
    """``p00 > 1/d``, ``p00 > (d-1)/(2d)`` and ``(d p00 + 1)/(d + 1) > 1/2``.

    The last two are the same inequality; exact rational arithmetic on the
    binary value of ``p00`` keeps them equal at the boundary too.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    f = Fraction(p00)
    return ThresholdReport(
        f > Fraction(1, d),
        f > Fraction(d - 1, 2 * d),
        (d * f + 1) / (d + 1) > Fraction(1, 2),
    )
