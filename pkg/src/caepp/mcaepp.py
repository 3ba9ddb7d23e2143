"""Multi-carrier round with star stabilizers and its fixed point.

With carriers ``1..m`` and the shared qudit at site 0, a round is kept when all
carriers carry the same phase error and the shift errors of all ``m + 1`` sites
sum to zero.  A kept pair is relabelled ``(s, t) = (x_0, z_0 - z_1)``.
"""
from __future__ import annotations

import decimal
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import NonConvergenceError, ZeroSuccessError
from .single_carrier import RoundOutcome, Trajectory
from .state_model import BellTable, depolarizing, make_bell_table

# swaps (0,1)<->(2,1) and (0,2)<->(2,2), row-major over (n, m)
_PERMUTATION = np.array([0, 7, 8, 3, 4, 5, 6, 1, 2])
_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class DecayParams:
    A: float
    B: float
    C: float
    m: int
    p: float


def _require_qutrit(t: BellTable) -> None:
    if t.d != 3:
        raise ValueError(f"this closed form is for d = 3, got d = {t.d}")


def preprocess_permutation(q: BellTable) -> BellTable:
    """Fixed index bijection applied to the shared table before a depolarizing round."""
    _require_qutrit(q)
    return BellTable(3, q.p.reshape(9)[_PERMUTATION].reshape(3, 3))


def decay_params(p: float, m: int) -> DecayParams:
    if not 1.0 / 9.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [1/9, 1], got {p}")
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    return DecayParams(
        ((3 * p + 1) / 4) ** m,
        ((9 * p - 1) / 8) ** m,
        (3 * (1 - p) / 8) ** m,
        int(m),
        float(p),
    )


def success_probability(r: BellTable, p: float, m: int) -> float:
    """Acceptance probability for an already permuted table ``r``."""
    _require_qutrit(r)
    k = decay_params(p, m)
    R0 = float(r.p[0].sum())
    P = (k.A + (3 * R0 - 1) * k.B + 2 * k.C) / 3
    assert P > 0.0, f"non-positive success probability {P}"
    return P


def _transfer_matrix(p: float, m: int) -> np.ndarray:
    """Unnormalized linear map on the row-major 9-vector, permutation included."""
    k = decay_params(p, m)
    K = np.full((9, 9), 0.0)
    for s in range(3):
        alpha = k.A + 2 * k.B if s == 0 else k.A - k.B
        block = np.full((3, 3), k.C)
        np.fill_diagonal(block, alpha)
        K[3 * s : 3 * s + 3, 3 * s : 3 * s + 3] = block
    P = np.eye(9)[_PERMUTATION]
    return K @ P / 3


def round_update_depolarizing(q: BellTable, p: float, m: int) -> RoundOutcome:
    _require_qutrit(q)
    r = preprocess_permutation(q)
    P = success_probability(r, p, m)
    W = (_transfer_matrix(p, m) @ q.p.reshape(9)).reshape(3, 3)
    return RoundOutcome(P, BellTable(3, W / W.sum()))


@dataclass(frozen=True, eq=False)
class SpectralComponents:
    """Characteristic-function data of a carrier channel.

    ``C[c]`` is the phase marginal, ``phi[c, k]`` the characteristic function of
    the shift conditioned on phase ``c`` (rows with ``C[c] = 0`` are left at
    ``phi(0) = 1``, zero elsewhere), ``phi_shared[k]`` that of the shared shift.
    """

    C: np.ndarray
    phi: np.ndarray
    phi_shared: np.ndarray


def _characteristic(weights: np.ndarray) -> np.ndarray:
    # phi(k) = sum_x w_x omega^{k x}; that is d * ifft
    d = weights.shape[-1]
    return np.fft.ifft(weights, axis=-1) * d


def spectral_components(shared: BellTable, channel: BellTable) -> SpectralComponents:
    d = channel.d
    C = channel.p.sum(axis=0)
    cond = np.zeros((d, d))
    cond[:, 0] = 1.0
    nz = C > 0
    cond[nz] = channel.p[:, nz].T / C[nz, None]
    return SpectralComponents(C, _characteristic(cond), _characteristic(shared.p.sum(axis=1)))


def round_update_general(q: BellTable, channel: BellTable, m: int, permute: bool = True) -> RoundOutcome:
    """Star-check round with i.i.d. carriers drawn from an arbitrary ``channel``.

    ``permute`` applies :func:`preprocess_permutation` first and needs ``d = 3``.
    """
    if q.d != channel.d:
        raise ValueError(f"dimension mismatch: {q.d} != {channel.d}")
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    d = q.d
    r = preprocess_permutation(q) if permute else q
    sc = spectral_components(r, channel)
    omega = np.exp(2j * np.pi * np.arange(d) / d)
    k = np.arange(d)
    W = np.zeros((d, d), dtype=complex)
    scale = np.zeros((d, d))
    P = 0.0 + 0.0j
    for g in range(d):
        if sc.C[g] == 0.0:
            continue
        phim = sc.phi[g] ** m
        weight = sc.C[g] ** m
        P += weight * np.sum(sc.phi_shared * phim) / d
        # probability that the carrier shifts sum to -s, for each s
        shift_ok = np.array([np.sum(omega[(k * s) % d] * phim) for s in range(d)]) / d
        W += weight * shift_ok[:, None] * np.roll(r.p, -g, axis=1)
        scale += weight * np.abs(phim).sum() * np.roll(r.p, -g, axis=1)
    assert abs(P.imag) < _IMAG_TOL and np.abs(W.imag).max() < _IMAG_TOL, "complex residue"
    # entries at rounding level of the Fourier sums are exact zeros
    W = np.where(np.abs(W.real) <= 64 * np.finfo(float).eps * scale, 0.0, W.real)
    total = W.sum()
    if total <= 0.0:
        raise ZeroSuccessError("every error string is rejected by the star check")
    assert abs(P.real - total) < 1e-10, f"success probability mismatch {P.real} vs {total}"
    W = np.clip(W, 0.0, None)
    return RoundOutcome(float(total), BellTable(d, W / W.sum()))


def _decimal_matrix(p: float, m: int) -> list[list[decimal.Decimal]]:
    D = decimal.Decimal
    pd = D(p)
    A = ((3 * pd + 1) / 4) ** m
    B = ((9 * pd - 1) / 8) ** m
    C = (3 * (1 - pd) / 8) ** m
    K = [[D(0)] * 9 for _ in range(9)]
    for s in range(3):
        alpha = A + 2 * B if s == 0 else A - B
        for t in range(3):
            for u in range(3):
                K[3 * s + t][3 * s + u] = (alpha if t == u else C) / 3
    # fold in the permutation: column j of K @ P is column perm^-1(j) of K
    inv = [0] * 9
    for i, j in enumerate(_PERMUTATION):
        inv[j] = i
    return [[row[inv[j]] for j in range(9)] for row in K]


def _decimal_square(M):
    n = len(M)
    out = [[sum(M[i][k] * M[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    scale = max(abs(x) for row in out for x in row)
    return [[x / scale for x in row] for row in out]


def stationary_table(p: float, m: int) -> BellTable:
    """Limit of infinitely many depolarizing rounds started from ``depolarizing(3, p)``.

    The slow mode of the round decays like ``1 - (B_1/A_1)^m`` per round, far
    below double precision for large ``m``, so the power is taken in
    ``decimal`` arithmetic with enough digits to resolve it.
    """
    k = decay_params(p, 1)
    small = min(x for x in (k.B, k.C, k.A - k.B) if x > 0) if k.C > 0 else k.A
    gap_digits = m * max(math.log10(k.A / small), 0.0) if small > 0 else 0.0
    digits = int(min(60 + 2 * gap_digits, 4000))
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        D = decimal.Decimal
        M = _decimal_matrix(p, m)
        q0 = [D(x) for x in depolarizing(3, p).p.reshape(9)]
        eps = D(10) ** (-(digits - 20))
        prev = None
        for _ in range(4 * digits + 64):
            v = [sum(M[i][j] * q0[j] for j in range(9)) for i in range(9)]
            total = sum(v)
            v = [x / total for x in v]
            if prev is not None and max(abs(a - b) for a, b in zip(v, prev)) < eps:
                break
            prev = v
            M = _decimal_square(M)
        else:
            raise NonConvergenceError(f"stationary table not resolved (p={p}, m={m})")
        # defect summed in high precision so tiny infidelities keep their digits
        defect = sum(v[1:])
        out = np.array([float(x) for x in v])
        out[0] = float(1 - defect)
    return make_bell_table(3, out.reshape(3, 3))


def fixed_point(p: float, m: int, tol: float = 1e-12, max_rounds: int = 2**64) -> Trajectory:
    """Iterate the depolarizing round from ``depolarizing(3, p)`` until it settles.

    The round is linear up to normalization, so ``N`` rounds equal the ``N``-th
    power of one transfer matrix.  Powers are built by squaring, and the
    trajectory holds checkpoints after ``1, 2, 4, ...`` rounds.  Each
    checkpoint's success probability is that of one further round from its
    table.  A checkpoint counts as converged once it lies within ``tol`` of
    :func:`stationary_table`; near threshold this takes ``2^30`` rounds and
    beyond, hence the large default budget.
    """
    if not 1.0 / 9.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [1/9, 1], got {p}")
    if tol <= 0 or max_rounds < 1:
        raise ValueError("tol must be positive and max_rounds >= 1")
    q0 = depolarizing(3, p)
    target = stationary_table(p, m)
    step = _transfer_matrix(p, m)
    rounds = 1
    outcomes = []
    while True:
        v = step @ q0.p.reshape(9)
        table = BellTable(3, (v / v.sum()).reshape(3, 3))
        nxt = success_probability(preprocess_permutation(table), p, m)
        outcomes.append(RoundOutcome(nxt, table, f"round:{rounds}"))
        if np.abs(table.p - target.p).max() < tol:
            return Trajectory(tuple(outcomes), target.fidelity, q0, rounds)
        if 2 * rounds > max_rounds:
            raise NonConvergenceError(
                f"no fixed point within {max_rounds} rounds (p={p}, m={m})",
                Trajectory(tuple(outcomes), table.fidelity, q0, rounds),
            )
        step = step @ step
        step /= np.abs(step).max()
        rounds *= 2


def fixed_point_infidelity(p: float, m: int) -> float:
    # summing the off-target entries keeps digits that 1 - p00 would lose
    return float(stationary_table(p, m).p.reshape(9)[1:].sum())


def infidelity_bound(p: float, m: int) -> float:
    """Large-m envelope ``2 (C_1/B_1)^m`` for the fixed-point infidelity."""
    k = decay_params(p, 1)
    if k.B <= 0.0:
        return float("inf")
    return 2.0 * (k.C / k.B) ** m
