"""Random comparison of the closed-form rounds with the oracles."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..mcaepp import preprocess_permutation, round_update_depolarizing, round_update_general
from ..single_carrier import round_update
from ..state_model import BellTable, depolarizing, random_table
from .enumeration import EnumerationResult, enumerate_multi_round, enumerate_single_round
from .statevector import statevector_round

# dense runs are added only below this Hilbert-space dimension
DENSE_LIMIT = 729


@dataclass
class CrossCheck:
    d: int
    m: int
    samples: int
    deviations: dict[str, float] = field(default_factory=dict)

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values(), default=0.0)

    def record(self, kind: str, a, b) -> None:
        dev = max(abs(a.success_probability - b.success_probability), float(np.abs(a.posterior.p - b.posterior.p).max()))
        self.deviations[kind] = max(self.deviations.get(kind, 0.0), dev)


def _dep_enum(q: BellTable, p: float, m: int) -> EnumerationResult:
    return enumerate_multi_round(preprocess_permutation(q), depolarizing(3, p), m)


def cross_check(d: int, m: int, samples: int, seed: int) -> CrossCheck:
    """Largest deviation per comparison kind over ``samples`` random draws."""
    rng = np.random.default_rng(seed)
    report = CrossCheck(d, m, samples)
    dense = d ** (m + 2) <= DENSE_LIMIT
    for _ in range(samples):
        shared = random_table(d, rng)
        channel = random_table(d, rng)
        report.record("single/enumeration", round_update(shared, channel), enumerate_single_round(shared, channel))
        general = round_update_general(shared, channel, m, permute=False)
        report.record("general/enumeration", general, enumerate_multi_round(shared, channel, m))
        if d == 3:
            p = float(rng.uniform(1 / 3, 1))
            report.record("depolarizing/enumeration", round_update_depolarizing(shared, p, m), _dep_enum(shared, p, m))
        if dense:
            report.record("general/dense", general, statevector_round(d, m, shared, channel, "star"))
            if m == 1:
                report.record(
                    "single/dense", round_update(shared, channel), statevector_round(d, 1, shared, channel, "sum")
                )
    return report
