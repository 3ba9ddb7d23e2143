"""Dense state-vector checks of the gate conventions.

Everything here works with explicit amplitudes, so it pins down the signs that
the Pauli-frame code takes for granted: Weyl commutation phases, SUM-gate
conjugation, the bilateral Clifford behind each Bell relabelling, and the
circuits behind the single- and multi-carrier rounds.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

import numpy as np

from ..exceptions import SizeGuardError, ZeroSuccessError
from ..phase_space import PhasePoint, SymplecticMap, all_points, commutation_phase
from ..state_model import BellTable
from .enumeration import EnumerationResult

MAX_DIM = 2187
NORM_TOL = 1e-10


def omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def shift_matrix(d: int) -> np.ndarray:
    return np.roll(np.eye(d), 1, axis=0)  # X|j> = |j+1>


def clock_matrix(d: int) -> np.ndarray:
    return np.diag(omega(d) ** np.arange(d))


def weyl_matrix(d: int, x: int, z: int) -> np.ndarray:
    """``Z^z X^x``."""
    return np.linalg.matrix_power(clock_matrix(d), z % d) @ np.linalg.matrix_power(shift_matrix(d), x % d)


def fourier_matrix(d: int) -> np.ndarray:
    j = np.arange(d)
    return omega(d) ** np.outer(j, j) / np.sqrt(d)


@dataclass(eq=False)
class DenseState:
    """Batch of pure states of ``n_sites`` qudits, shape ``(batch, d, ..., d)``.

    Site order is (A, B, carrier 1, ..., carrier m).
    """

    amplitudes: np.ndarray
    d: int
    n_sites: int

    def __post_init__(self):
        if self.d**self.n_sites > MAX_DIM:
            raise SizeGuardError(f"dimension {self.d ** self.n_sites} exceeds {MAX_DIM}")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape((-1,) + (self.d,) * self.n_sites)
        norms = np.sum(np.abs(self.amplitudes.reshape(self.amplitudes.shape[0], -1)) ** 2, axis=1)
        if np.any(np.abs(norms - 1.0) > NORM_TOL):
            raise ValueError("state is not normalized")

    def apply_local(self, site: int, U: np.ndarray) -> None:
        a = np.moveaxis(self.amplitudes, site + 1, -1)
        a = a @ U.T
        self.amplitudes = np.moveaxis(a, -1, site + 1)

    def apply_local_batch(self, site: int, Us: np.ndarray) -> None:
        """Different single-site unitary per batch element, ``Us`` of shape (batch, d, d)."""
        a = np.moveaxis(self.amplitudes, site + 1, -1)
        shape = a.shape
        a = a.reshape(shape[0], -1, self.d)
        a = np.einsum("bij,bkj->bki", Us, a)
        self.amplitudes = np.moveaxis(a.reshape(shape), -1, site + 1)

    def apply_sum(self, control: int, target: int, power: int = 1) -> None:
        """``|j>_c |k>_t -> |j>_c |k + power j>_t``."""
        d = self.d
        out = np.empty_like(self.amplitudes)
        for j in range(d):
            src = [slice(None)] * (self.n_sites + 1)
            src[control + 1] = j
            moved = self.amplitudes[tuple(src)]
            t_axis = target if target < control else target - 1
            out[tuple(src)] = np.roll(moved, power * j, axis=t_axis + 1)
        self.amplitudes = out


def bell_vector(d: int, n: int, m: int) -> np.ndarray:
    """``(I (x) Z^m X^n) |Phi^{00}>`` as a d x d amplitude array."""
    phi = np.eye(d) / np.sqrt(d)
    return phi @ weyl_matrix(d, n, m).T


def bell_label(pair: np.ndarray, d: int, tol: float = 1e-9) -> tuple[int, int] | None:
    """Bell label of a d x d pair amplitude, or ``None`` if it is not (proportional to) one."""
    norm = np.sum(np.abs(pair) ** 2)
    if norm < tol:
        return None
    for n, m in itertools.product(range(d), repeat=2):
        ov = np.vdot(bell_vector(d, n, m), pair)
        if abs(abs(ov) ** 2 - norm) < tol * max(norm, 1.0):
            return (n, m)
    return None


# -- conventions ----------------------------------------------------------------

def check_commutation_convention(d: int) -> bool:
    """``W(a) W(b) = w^t W(b) W(a)`` with ``t = commutation_phase(a, b)`` for all pairs."""
    w = omega(d)
    for a in all_points(d):
        Wa = weyl_matrix(d, a.x, a.z)
        for b in all_points(d):
            Wb = weyl_matrix(d, b.x, b.z)
            if not np.allclose(Wa @ Wb, w ** commutation_phase(a, b) * Wb @ Wa, atol=1e-12):
                return False
    return True


def sum_matrix(d: int, power: int = 1) -> np.ndarray:
    """Two-qudit ``SUM^power`` with the control first."""
    U = np.zeros((d * d, d * d))
    for j, k in itertools.product(range(d), repeat=2):
        U[j * d + (k + power * j) % d, j * d + k] = 1.0
    return U


def check_sum_frame_rules(d: int) -> bool:
    """The conjugation rules used by the frame enumerator, against dense matrices."""
    I = np.eye(d)
    X, Z = shift_matrix(d), clock_matrix(d)
    for power in (1, -1):
        U = sum_matrix(d, power)
        Zc_inv = np.linalg.matrix_power(Z, (-power) % d)
        Xt_pow = np.linalg.matrix_power(X, power % d)
        rules = [
            (np.kron(X, I), np.kron(X, Xt_pow)),
            (np.kron(I, Z), np.kron(Zc_inv, Z)),
            (np.kron(Z, I), np.kron(Z, I)),
            (np.kron(I, X), np.kron(I, X)),
        ]
        for before, after in rules:
            if not np.allclose(U @ before @ U.conj().T, after, atol=1e-12):
                return False
    return True


def bilateral_label_map(U: np.ndarray) -> dict[tuple[int, int], tuple[int, int]] | None:
    """Label permutation induced by ``U (x) conj(U)`` on Bell states, if it is one."""
    d = U.shape[0]
    out = {}
    for n, m in itertools.product(range(d), repeat=2):
        pair = U @ bell_vector(d, n, m) @ U.conj().T  # (U (x) conj U) on a d x d amplitude
        lab = bell_label(pair, d)
        if lab is None:
            return None
        out[(n, m)] = lab
    return out


def _as_symplectic(mapping: dict, d: int) -> SymplecticMap | None:
    a, c = mapping[(1, 0)]
    b, e = mapping[(0, 1)]
    try:
        S = SymplecticMap(a, b, c, e, d)
    except ValueError:
        return None
    for (n, m), img in mapping.items():
        if S(PhasePoint(n, m, d)).as_tuple() != img:
            return None
    return S


def bilateral_cliffords(d: int) -> dict[SymplecticMap, np.ndarray]:
    """One unitary ``U`` per symplectic map, found by search over Fourier and shear words.

    ``U (x) conj(U)`` relabels Bell states by the key map.  Odd prime ``d``.
    """
    if d % 2 == 0:
        raise ValueError("the quadratic shear needs odd d")
    half = pow(2, -1, d)
    shear = np.diag(omega(d) ** (half * np.arange(d) ** 2 % d))
    gens = [fourier_matrix(d), shear]
    found: dict[SymplecticMap, np.ndarray] = {}
    queue = deque([np.eye(d, dtype=complex)])
    while queue:
        U = queue.popleft()
        mp = bilateral_label_map(U)
        S = None if mp is None else _as_symplectic(mp, d)
        if S is None or S in found:
            continue
        found[S] = U
        for G in gens:
            queue.append(G @ U)
    return found


def check_bilateral_relabel(S: SymplecticMap) -> bool:
    """Some bilateral Clifford realises ``S`` on Bell labels exactly."""
    return S in bilateral_cliffords(S.d)


# -- propagation lemmas ----------------------------------------------------------

@dataclass(frozen=True)
class LemmaReport:
    """Outcome of conjugating ``Z`` on every carrier through the fan-out of SUMs.

    ``literal``: the control picks up ``Z^claimed_exponent``.  ``per_carrier``:
    each single-carrier ``Z_i`` maps to ``Z_0^-1 Z_i``.  ``actual_exponent`` is the
    control exponent that really appears.  ``mismatch`` is the first basis state
    where the literal claim fails.
    """

    d: int
    m: int
    claimed_exponent: int
    literal: bool
    per_carrier: bool
    actual_exponent: int
    mismatch: tuple[int, ...] | None

    def __bool__(self) -> bool:
        return self.literal


def _fanout_phases(d: int, m: int, z_on: list[int]) -> np.ndarray:
    """Phase exponents of ``U (prod Z_i^{z_i}) U^dagger`` on each basis state, ``U = prod_i SUM(0 -> i)``."""
    states = np.indices((d,) * (m + 1)).reshape(m + 1, -1).T
    # U^dagger |b> = |b_0, b_i - b_0>, Z contributes w^{sum z_i (b_i - b_0)}, U maps back
    return ((states[:, 1:] - states[:, :1]) % d @ np.array(z_on)) % d


def verify_propagation_lemmas(d: int = 3, m: int = 1, control_exponent: int | None = None) -> LemmaReport:
    """Check the SUM fan-out rule for ``Z`` on every carrier on all basis states.

    The claim tested is ``U (I (x) Z^(x)m) U^dagger = Z^k (x) Z^(x)m`` with
    ``k = control_exponent`` (default ``d - 1``).  The dense fan-out is built
    explicitly for ``m + 1 <= 7`` qudits and cross-checked against the
    basis-state formula.
    """
    if m < 1:
        raise ValueError("m >= 1")
    if d ** (m + 1) > MAX_DIM:
        raise SizeGuardError(f"dimension {d ** (m + 1)} exceeds {MAX_DIM}")
    k = d - 1 if control_exponent is None else control_exponent % d
    w = omega(d)
    # dense construction
    dim = d ** (m + 1)
    U = np.eye(dim)
    for i in range(1, m + 1):
        U = _embed_sum(d, m + 1, 0, i) @ U
    Z = clock_matrix(d)
    I = np.eye(d)

    def kron_all(ops):
        out = np.ones((1, 1))
        for op in ops:
            out = np.kron(out, op)
        return out

    lhs = U @ kron_all([I] + [Z] * m) @ U.conj().T
    claim = kron_all([np.linalg.matrix_power(Z, k)] + [Z] * m)
    diff = np.abs(lhs - claim).max(axis=0)
    bad = np.flatnonzero(diff > 1e-10)
    mismatch = tuple(int(v) for v in np.unravel_index(bad[0], (d,) * (m + 1))) if bad.size else None

    actual = None
    for kk in range(d):
        if np.allclose(lhs, kron_all([np.linalg.matrix_power(Z, kk)] + [Z] * m), atol=1e-10):
            actual = kk
    if actual is None:
        raise AssertionError("fan-out of Z is not a Weyl operator")
    # basis-state formula agrees with the dense matrices
    expo = _fanout_phases(d, m, [1] * m)
    if not np.allclose(np.diag(lhs), w**expo, atol=1e-10):
        raise AssertionError("dense fan-out disagrees with the basis-state phases")

    per_carrier = True
    for i in range(1, m + 1):
        ops = [I] * (m + 1)
        ops[i] = Z
        lhs_i = U @ kron_all(ops) @ U.conj().T
        ops[0] = np.linalg.matrix_power(Z, d - 1)
        per_carrier &= bool(np.allclose(lhs_i, kron_all(ops), atol=1e-10))
    return LemmaReport(d, m, k, mismatch is None, per_carrier, actual, mismatch)


def _embed_sum(d: int, n: int, control: int, target: int, power: int = 1) -> np.ndarray:
    dim = d**n
    U = np.zeros((dim, dim))
    for idx in range(dim):
        digits = list(np.unravel_index(idx, (d,) * n))
        digits[target] = (digits[target] + power * digits[control]) % d
        U[np.ravel_multi_index(digits, (d,) * n), idx] = 1.0
    return U


# -- full rounds -------------------------------------------------------------------

def _encode_zero_logical(state: DenseState, carriers: list[int], inverse: bool = False) -> None:
    """Map ``|0...0>`` on the carriers to the uniform superposition over strings summing to 0."""
    d = state.d
    F = fourier_matrix(d)
    last = carriers[-1]
    if not inverse:
        for c in carriers[:-1]:
            state.apply_local(c, F)
        for c in carriers[:-1]:
            state.apply_sum(c, last, -1)
    else:
        for c in carriers[:-1]:
            state.apply_sum(c, last, 1)
        for c in carriers[:-1]:
            state.apply_local(c, F.conj().T)


def statevector_round(
    d: int,
    m: int,
    shared: BellTable,
    channel: BellTable,
    scheme: str = "star",
    chunk: int = 4096,
) -> EnumerationResult:
    """Simulate one round on explicit amplitudes for every error branch.

    ``scheme="sum"`` (``m = 1``): Alice SUMs A into the carrier, Bob subtracts B.
    ``scheme="star"``: the carriers start in the all-zero-sum code state, Alice
    subtracts A from carrier 1, Bob adds B to it, and the encoder is undone.
    Branches are kept when every carrier reads 0, and the pair is labelled by
    projection onto the Bell basis.
    """
    if shared.d != d or channel.d != d:
        raise ValueError("dimension mismatch")
    if scheme not in ("star", "sum"):
        raise ValueError(f"unknown scheme {scheme!r}")
    if scheme == "sum" and m != 1:
        raise ValueError("the plain SUM scheme has one carrier")
    n_sites = m + 2
    if d**n_sites > MAX_DIM:
        raise SizeGuardError(f"dimension {d ** n_sites} exceeds {MAX_DIM}")
    carriers = list(range(2, n_sites))
    weyl = np.array([weyl_matrix(d, x, z) for x in range(d) for z in range(d)])
    carrier_strings = np.indices((d * d,) * m).reshape(m, -1).T
    carrier_w = np.prod(channel.p.reshape(-1)[carrier_strings], axis=1)
    bells = np.array([bell_vector(d, n, z) for n in range(d) for z in range(d)])

    W = np.zeros((d, d))
    strings = 0
    for e0 in range(d * d):
        w0 = shared.p.reshape(-1)[e0]
        strings += carrier_strings.shape[0]
        if w0 == 0.0:
            continue
        for start in range(0, carrier_strings.shape[0], chunk):
            cs = carrier_strings[start : start + chunk]
            cw = carrier_w[start : start + chunk]
            keep = cw > 0
            if not keep.any():
                continue
            cs, cw = cs[keep], cw[keep]
            batch = cs.shape[0]
            amp = np.zeros((batch,) + (d,) * n_sites, dtype=complex)
            pair = bells[e0]
            idx = (slice(None), slice(None), slice(None)) + (0,) * m
            amp[idx] = pair[None]
            state = DenseState(amp, d, n_sites)
            if scheme == "sum":
                state.apply_sum(0, 2, 1)
            else:
                _encode_zero_logical(state, carriers)
                state.apply_sum(0, carriers[0], -1)
            for i, c in enumerate(carriers):
                state.apply_local_batch(c, weyl[cs[:, i]])
            if scheme == "sum":
                state.apply_sum(1, 2, -1)
            else:
                state.apply_sum(1, carriers[0], 1)
                _encode_zero_logical(state, carriers, inverse=True)
            kept = state.amplitudes[idx]  # carriers projected on |0...0>
            ov = np.abs(np.einsum("lab,kab->kl", bells.conj(), kept)) ** 2
            W += (ov * cw[:, None] * w0).sum(axis=0).reshape(d, d)
    total = W.sum()
    if total <= 0.0:
        raise ZeroSuccessError("no branch survived")
    return EnumerationResult(float(total), BellTable(d, W / total), strings)
