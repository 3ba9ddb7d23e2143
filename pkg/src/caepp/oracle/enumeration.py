"""Exhaustive Pauli-frame enumeration of every error string.

Nothing here reuses the closed forms: a single round is pushed through the
gate-level frame rules, a multi-carrier round is filtered by stabilizer
syndromes.  Weights are exact products of table entries.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..exceptions import SizeGuardError, ZeroSuccessError
from ..phase_space import WeylString, star_generators
from ..state_model import BellTable

# largest string space enumerated (3^14 = 9^7: d = 3 with six carriers)
MAX_STRINGS = 3**14
_CHUNK = 3**12


@dataclass(frozen=True)
class EnumerationResult:
    success_probability: float
    posterior: BellTable
    strings: int


def sum_frame(xs: np.ndarray, zs: np.ndarray, control: int, target: int, power: int, d: int) -> None:
    """Conjugate frame labels in place by ``SUM^power`` (``|j, k> -> |j, k + power j>``).

    ``X_c -> X_c X_t^power`` and ``Z_t -> Z_c^-power Z_t``.
    """
    xs[..., target] = (xs[..., target] + power * xs[..., control]) % d
    zs[..., control] = (zs[..., control] - power * zs[..., target]) % d


def _finish(W: np.ndarray, strings: int) -> EnumerationResult:
    total = W.sum()
    if total <= 0.0:
        raise ZeroSuccessError("every error string was rejected")
    return EnumerationResult(float(total), BellTable(W.shape[0], W / total), strings)


def enumerate_single_round(shared: BellTable, channel: BellTable) -> EnumerationResult:
    """All ``d^2 * d^2`` (pair error, carrier error) combinations of one round.

    Sites are (A, B, T).  The pair error sits on B from the start, the carrier
    error hits T after Alice's SUM, then Bob applies ``SUM^-1`` from B to T and
    T is read in the computational basis.
    """
    d = shared.d
    if channel.d != d:
        raise ValueError("dimension mismatch")
    n, j, x, z = (a.reshape(-1) for a in np.indices((d, d, d, d)))
    xs = np.zeros((n.size, 3), dtype=np.int64)
    zs = np.zeros_like(xs)
    xs[:, 1], zs[:, 1] = n, j
    # Alice's SUM(A -> T) acts before any error has reached A or T
    xs[:, 2], zs[:, 2] = x, z
    sum_frame(xs, zs, 1, 2, -1, d)
    accept = xs[:, 2] == 0
    w = shared.p[n, j] * channel.p[x, z]
    W = np.zeros((d, d))
    np.add.at(W, (xs[accept, 1], zs[accept, 1]), w[accept])
    return _finish(W, n.size)


def _syndromes_ok(x: np.ndarray, z: np.ndarray, generators: Sequence[WeylString], d: int) -> np.ndarray:
    ok = np.ones(x.shape[0], dtype=bool)
    for g in generators:
        gx = np.array(g.x_exponents())
        gz = np.array(g.z_exponents())
        # sum over sites of commutation_phase(error, generator)
        phase = (x @ gz - z @ gx) % d
        ok &= phase == 0
    return ok


def enumerate_multi_round(
    shared: BellTable,
    channel: BellTable,
    m: int,
    generators: Sequence[WeylString] | None = None,
) -> EnumerationResult:
    """Every string ``E_0 (x) E_1 ... E_m``, kept when all syndromes vanish.

    The kept pair is labelled ``(x_0, z_0 - z_1)``.  ``generators`` defaults to
    the star set.
    """
    d = shared.d
    if channel.d != d:
        raise ValueError("dimension mismatch")
    if m < 1:
        raise ValueError("need at least one carrier")
    total_strings = d ** (2 * (m + 1))
    if total_strings > MAX_STRINGS:
        raise SizeGuardError(f"{total_strings} strings exceeds the limit of {MAX_STRINGS}")
    gens = star_generators(m, d) if generators is None else list(generators)
    for g in gens:
        if len(g) != m + 1 or g.d != d:
            raise ValueError("generator does not act on m + 1 qudits of dimension d")

    carrier_idx = np.indices((d * d,) * m).reshape(m, -1).T  # each row: carrier labels
    cx, cz = np.divmod(carrier_idx, d)
    cw = np.prod(channel.p.reshape(-1)[carrier_idx], axis=1)
    W = np.zeros((d, d))
    for start in range(0, cx.shape[0], _CHUNK):
        bx, bz, bw = cx[start : start + _CHUNK], cz[start : start + _CHUNK], cw[start : start + _CHUNK]
        for e0 in range(d * d):
            x0, z0 = divmod(e0, d)
            if shared.p[x0, z0] == 0.0:
                continue
            x = np.column_stack([np.full(bx.shape[0], x0), bx])
            z = np.column_stack([np.full(bz.shape[0], z0), bz])
            ok = _syndromes_ok(x, z, gens, d)
            if not ok.any():
                continue
            t = (z0 - bz[ok, 0]) % d
            np.add.at(W[x0], t, shared.p[x0, z0] * bw[ok])
    return _finish(W, total_strings)
