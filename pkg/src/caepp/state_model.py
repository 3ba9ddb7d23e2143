"""Bell-diagonal probability tables and the predicates built on them.

A table ``p[n, m]`` (shift ``n``, phase ``m``) describes both the state
``sum p_nm |Phi^{n,m}><Phi^{n,m}|`` and the Pauli channel applying
``Z^m X^n`` with probability ``p_nm``; the second is the Choi state of the first.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from os import PathLike
from typing import Callable, Sequence

import numpy as np

from .phase_space import (
    MubLine,
    PhasePoint,
    SymplecticMap,
    all_points,
    is_prime,
    mub_lines,
)

ATOL = 1e-12
RENORM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class BellTable:
    """Validated, read-only ``d x d`` probability table.

    Build through :func:`make_bell_table` (which renormalizes small drift) rather
    than directly.
    """

    d: int
    p: np.ndarray

    def __post_init__(self):
        arr = np.array(self.p, dtype=float)
        if arr.shape != (self.d, self.d):
            raise ValueError(f"expected a {self.d}x{self.d} table, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("table has non-finite entries")
        if arr.min() < 0:
            raise ValueError(f"negative probability {arr.min()!r}")
        if abs(arr.sum() - 1.0) > ATOL:
            raise ValueError(f"probabilities sum to {arr.sum()!r}, not 1")
        arr.flags.writeable = False
        object.__setattr__(self, "p", arr)

    @property
    def fidelity(self) -> float:
        return float(self.p[0, 0])

    def __getitem__(self, idx):
        return self.p[idx]

    def __eq__(self, other):
        return isinstance(other, BellTable) and self.d == other.d and np.array_equal(self.p, other.p)

    def __hash__(self):
        return hash((self.d, self.p.tobytes()))

    def allclose(self, other: BellTable, atol: float = ATOL) -> bool:
        return self.d == other.d and bool(np.allclose(self.p, other.p, rtol=0, atol=atol))

    def prob(self, point: PhasePoint) -> float:
        return float(self.p[point.x, point.z])

    def to_dict(self) -> dict:
        return {"d": self.d, "p": self.p.tolist()}

    def __repr__(self):
        return f"BellTable(d={self.d}, fidelity={self.fidelity:.6g})"


def make_bell_table(d: int, entries) -> BellTable:
    """Validate ``entries`` as a ``d x d`` table.

    Sums within ``1e-9`` of one are renormalized; anything further off, or any
    negative entry, raises ``ValueError``.
    """
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be >= 2, got {d!r}")
    arr = np.array(entries, dtype=float)
    if arr.size == d * d:
        arr = arr.reshape(d, d)
    if arr.shape != (d, d):
        raise ValueError(f"expected {d * d} entries, got shape {arr.shape}")
    if arr.min() < 0:
        raise ValueError(f"negative probability {arr.min()!r}")
    total = arr.sum()
    if abs(total - 1.0) > RENORM_TOL:
        raise ValueError(f"probabilities sum to {total!r}, not 1")
    return BellTable(int(d), arr / total)


def pure_target(d: int) -> BellTable:
    p = np.zeros((d, d))
    p[0, 0] = 1.0
    return BellTable(d, p)


def uniform(d: int) -> BellTable:
    return BellTable(d, np.full((d, d), 1.0 / (d * d)))


def depolarizing(d: int, p: float) -> BellTable:
    """Mass ``p`` on the identity, ``(1 - p)/(d^2 - 1)`` on each other error."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing parameter must lie in [0, 1], got {p}")
    arr = np.full((d, d), (1.0 - p) / (d * d - 1))
    arr[0, 0] = p
    return make_bell_table(d, arr)


def from_marginal_params(p0: float, A: float, phase_split=None) -> BellTable:
    """Qutrit table with ``p00 = p0``, ``p01 = p02 = 0`` and shift rows split by ``A``.

    Row 1 carries ``A (1 - p0)``, row 2 carries ``(1 - A)(1 - p0)``.  Within a row
    the mass is spread by ``phase_split``: ``None`` for uniform, a length-3 weight
    vector used for both rows, or a 2 x 3 array with one weight vector per row.
    """
    if not 0.0 < p0 <= 1.0:
        raise ValueError(f"p0 must lie in (0, 1], got {p0}")
    if not 0.0 <= A <= 1.0:
        raise ValueError(f"A must lie in [0, 1], got {A}")
    if phase_split is None:
        split = np.full((2, 3), 1.0 / 3)
    else:
        split = np.array(phase_split, dtype=float)
        if split.shape == (3,):
            split = np.vstack([split, split])
        if split.shape != (2, 3) or split.min() < 0 or np.any(split.sum(axis=1) <= 0):
            raise ValueError("phase_split must be non-negative with shape (3,) or (2, 3)")
        split = split / split.sum(axis=1, keepdims=True)
    arr = np.zeros((3, 3))
    arr[0, 0] = p0
    arr[1] = A * (1.0 - p0) * split[0]
    arr[2] = (1.0 - A) * (1.0 - p0) * split[1]
    return make_bell_table(3, arr)


@dataclass(frozen=True, eq=False)
class Marginals:
    """Shift marginal ``u[x] = sum_z p[x, z]`` and phase marginal ``v[z]``."""

    u: np.ndarray
    v: np.ndarray


def marginals(t: BellTable) -> Marginals:
    return Marginals(t.p.sum(axis=1), t.p.sum(axis=0))


@dataclass(frozen=True, eq=False)
class MubWeights:
    L: np.ndarray
    argmax: int
    lines: tuple[MubLine, ...]

    @property
    def Lmax(self) -> float:
        return float(self.L[self.argmax])

    @property
    def best_line(self) -> MubLine:
        return self.lines[self.argmax]


def line_weight(t: BellTable, line: MubLine) -> float:
    return float(sum(t.p[pt.x, pt.z] for pt in line.points))


def mub_weights(t: BellTable) -> MubWeights:
    """Probability mass on each MUB line, argmax with smallest-index tie-break."""
    if not is_prime(t.d):
        raise ValueError(f"MUB weights need prime d, got {t.d}")
    lines = tuple(mub_lines(t.d))
    L = np.array([line_weight(t, ln) for ln in lines])
    # np.argmax returns the first maximum; near-ties within rounding count as ties
    best = int(np.flatnonzero(L >= L.max() - ATOL)[0])
    return MubWeights(L, best, lines)


def relabel(t: BellTable, mapping: SymplecticMap | Callable[[PhasePoint], PhasePoint]) -> BellTable:
    """Move the mass at ``(n, m)`` to ``mapping((n, m))``; the map must be a bijection."""
    d = t.d
    out = np.zeros((d, d))
    seen = set()
    for pt in all_points(d):
        img = mapping(pt)
        if img.d != d:
            raise ValueError("mapping changes the dimension")
        seen.add((img.x, img.z))
        out[img.x, img.z] += t.p[pt.x, pt.z]
    if len(seen) != d * d:
        raise ValueError("mapping is not a bijection of Z_d x Z_d")
    return BellTable(d, out)


def translate(t: BellTable, shift: PhasePoint) -> BellTable:
    """Pauli correction: ``p'[(n, m) + shift] = p[n, m]``."""
    return relabel(t, lambda pt: pt + shift)


def is_one_distillable(t: BellTable) -> bool:
    """Fidelity above ``1/d``: violates the reduction criterion."""
    return t.fidelity > 1.0 / t.d


def random_table(d: int, rng: np.random.Generator, alpha: float = 1.0) -> BellTable:
    return make_bell_table(d, rng.dirichlet(np.full(d * d, alpha)))


# -- channel file format -----------------------------------------------------

def table_from_json(doc: dict | str) -> BellTable:
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, dict) or "d" not in doc or "p" not in doc:
        raise ValueError('channel document must be {"d": int, "p": [[...], ...]}')
    d = doc["d"]
    rows: Sequence = doc["p"]
    if not isinstance(d, int) or len(rows) != d or any(len(r) != d for r in rows):
        raise ValueError(f"table rows do not match d={d!r}")
    return make_bell_table(d, rows)


def table_to_json(t: BellTable) -> str:
    return json.dumps(t.to_dict())


def load_table(path: str | PathLike) -> BellTable:
    with open(path) as fh:
        return table_from_json(json.load(fh))


def save_table(t: BellTable, path: str | PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(t.to_dict(), fh)
        fh.write("\n")
