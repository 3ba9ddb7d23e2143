"""Weyl (generalized Pauli) labels over Z_d, symplectic index maps and MUB lines.

A phase point ``(x, z)`` labels the operator ``Z^z X^x`` with
``X|j> = |j+1>`` and ``Z|j> = w^j |j>``, ``w = exp(2 pi i / d)``.  For these
matrices ``W(a) W(b) = w^t W(b) W(a)`` with ``t = x_b z_a - x_a z_b (mod d)``;
in particular ``Z X = w X Z``.  The dense oracle checks this sign against the
explicit matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _check_dim(d: int) -> None:
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")


@dataclass(frozen=True)
class PhasePoint:
    """Shift/phase exponent pair ``(x, z)`` in ``Z_d x Z_d``.

    Exponents are reduced mod ``d`` on construction, so ``PhasePoint(-1, 0, 3)``
    equals ``PhasePoint(2, 0, 3)``.
    """

    x: int
    z: int
    d: int

    def __post_init__(self):
        _check_dim(self.d)
        object.__setattr__(self, "x", int(self.x) % self.d)
        object.__setattr__(self, "z", int(self.z) % self.d)

    def __add__(self, other: PhasePoint) -> PhasePoint:
        _same_dim(self, other)
        return PhasePoint(self.x + other.x, self.z + other.z, self.d)

    def __neg__(self) -> PhasePoint:
        return PhasePoint(-self.x, -self.z, self.d)

    def scale(self, k: int) -> PhasePoint:
        return PhasePoint(k * self.x, k * self.z, self.d)

    @property
    def index(self) -> int:
        """Row-major position ``x*d + z`` in a flattened d x d table."""
        return self.x * self.d + self.z

    def as_tuple(self) -> tuple[int, int]:
        return (self.x, self.z)


def _same_dim(a, b) -> None:
    if a.d != b.d:
        raise ValueError(f"dimension mismatch: {a.d} != {b.d}")


def all_points(d: int) -> list[PhasePoint]:
    return [PhasePoint(x, z, d) for x in range(d) for z in range(d)]


def commutation_phase(a: PhasePoint, b: PhasePoint) -> int:
    """Exponent ``t`` with ``W(a) W(b) = w^t W(b) W(a)``.

    ``commutation_phase(Z, X) == 1`` and ``commutation_phase(X, Z) == d - 1``.
    """
    _same_dim(a, b)
    return (b.x * a.z - a.x * b.z) % a.d


@dataclass(frozen=True)
class WeylString:
    """Tensor product of single-site Weyl labels.

    Site 0 is the shared qudit, sites ``1..m`` are carriers.
    """

    d: int
    labels: tuple[PhasePoint, ...]

    def __post_init__(self):
        _check_dim(self.d)
        labels = tuple(self.labels)
        if not labels:
            raise ValueError("a Weyl string needs at least one site")
        for p in labels:
            if p.d != self.d:
                raise ValueError("all sites of a Weyl string must share d")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def identity(cls, d: int, n_sites: int) -> WeylString:
        return cls(d, tuple(PhasePoint(0, 0, d) for _ in range(n_sites)))

    @classmethod
    def from_sites(cls, d: int, n_sites: int, ops: dict[int, tuple[int, int]]) -> WeylString:
        """Build from a sparse ``{site: (x, z)}`` mapping; other sites are identity."""
        labels = [PhasePoint(0, 0, d) for _ in range(n_sites)]
        for site, (x, z) in ops.items():
            labels[site] = PhasePoint(x, z, d)
        return cls(d, tuple(labels))

    def __len__(self) -> int:
        return len(self.labels)

    def __mul__(self, other: WeylString) -> WeylString:
        # label of the product, global phase dropped
        if len(self) != len(other):
            raise ValueError("length mismatch")
        _same_dim(self, other)
        return WeylString(self.d, tuple(a + b for a, b in zip(self.labels, other.labels)))

    def x_exponents(self) -> tuple[int, ...]:
        return tuple(p.x for p in self.labels)

    def z_exponents(self) -> tuple[int, ...]:
        return tuple(p.z for p in self.labels)


def syndrome_exponents(error: WeylString, generator: WeylString) -> int:
    """Exponent ``k`` with ``E S = w^k S E``; ``k != 0`` means the error is detected."""
    if len(error) != len(generator):
        raise ValueError(f"length mismatch: {len(error)} != {len(generator)}")
    _same_dim(error, generator)
    return sum(commutation_phase(e, s) for e, s in zip(error.labels, generator.labels)) % error.d


def is_detected(error: WeylString, generators: Iterable[WeylString]) -> bool:
    return any(syndrome_exponents(error, g) != 0 for g in generators)


def star_generators(m: int, d: int = 3) -> list[WeylString]:
    """Star stabilizers ``X_i X_m^{-1}`` (i < m) and ``Z_0 Z_1 ... Z_m`` on m+1 sites."""
    if m < 1:
        raise ValueError("need at least one carrier")
    n = m + 1
    gens = [WeylString.from_sites(d, n, {i: (1, 0), m: (-1, 0)}) for i in range(1, m)]
    gens.append(WeylString(d, tuple(PhasePoint(0, 1, d) for _ in range(n))))
    return gens


def two_carrier_generators(d: int = 3) -> list[WeylString]:
    """The pair ``{X_1 X_2^2, Z_0 Z_1 Z_2}`` used for the two-carrier code."""
    return [
        WeylString.from_sites(d, 3, {1: (1, 0), 2: (2, 0)}),
        WeylString(d, tuple(PhasePoint(0, 1, d) for _ in range(3))),
    ]


@dataclass(frozen=True)
class SymplecticMap:
    """Unit-determinant matrix ``[[a, b], [c, e]]`` over Z_d acting on ``(x, z)^T``."""

    a: int
    b: int
    c: int
    e: int
    d: int

    def __post_init__(self):
        _check_dim(self.d)
        for name in "abce":
            object.__setattr__(self, name, int(getattr(self, name)) % self.d)
        if (self.a * self.e - self.b * self.c) % self.d != 1:
            raise ValueError(
                f"determinant {(self.a * self.e - self.b * self.c) % self.d} != 1 mod {self.d}"
            )

    @classmethod
    def identity(cls, d: int) -> SymplecticMap:
        return cls(1, 0, 0, 1, d)

    @classmethod
    def from_matrix(cls, mat: Sequence[Sequence[int]], d: int) -> SymplecticMap:
        (a, b), (c, e) = mat
        return cls(a, b, c, e, d)

    def as_matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.e))

    def __call__(self, p: PhasePoint) -> PhasePoint:
        return symplectic_apply(self, p)

    def __matmul__(self, other: SymplecticMap) -> SymplecticMap:
        """Composition ``self @ other`` applies ``other`` first."""
        _same_dim(self, other)
        return SymplecticMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.e,
            self.c * other.a + self.e * other.c,
            self.c * other.b + self.e * other.e,
            self.d,
        )

    def inverse(self) -> SymplecticMap:
        return SymplecticMap(self.e, -self.b, -self.c, self.a, self.d)

    def is_identity(self) -> bool:
        return (self.a, self.b, self.c, self.e) == (1, 0, 0, 1)


def symplectic_apply(S: SymplecticMap, p: PhasePoint) -> PhasePoint:
    _same_dim(S, p)
    return PhasePoint(S.a * p.x + S.b * p.z, S.c * p.x + S.e * p.z, p.d)


# Fourier-type map sending phase errors to shift errors: (0, z) -> (z, 0).
def axis_swap(d: int) -> SymplecticMap:
    return SymplecticMap(0, 1, -1, 0, d)


@dataclass(frozen=True)
class MubLine:
    """A line through the origin of the prime-dimensional phase space.

    ``slope`` is ``None`` for the vertical line ``{(0, k)}``, otherwise the line is
    ``{(k, slope*k)}``.
    """

    d: int
    slope: int | None
    points: tuple[PhasePoint, ...] = field(compare=False)

    @property
    def kind(self) -> str:
        return "vertical" if self.slope is None else f"slope({self.slope})"

    def __contains__(self, p: PhasePoint) -> bool:
        return p in self.points


def _line(d: int, slope: int | None) -> MubLine:
    if slope is None:
        pts = tuple(PhasePoint(0, k, d) for k in range(d))
    else:
        pts = tuple(PhasePoint(k, slope * k, d) for k in range(d))
    return MubLine(d, slope, pts)


def mub_lines(d: int) -> list[MubLine]:
    """The ``d + 1`` lines through the origin, in canonical order.

    Order: slope 0 (pure shifts), vertical (pure phases), then slopes ``1..d-1``.
    For ``d = 3`` this is ``{(k,0)}, {(0,k)}, {(k,k)}, {(k,2k)}``.
    """
    _check_dim(d)
    if not is_prime(d):
        raise ValueError(f"complete MUB line set requires prime d, got {d}")
    return [_line(d, 0), _line(d, None)] + [_line(d, a) for a in range(1, d)]


def shift_axis(d: int) -> MubLine:
    return _line(d, 0)


def phase_axis(d: int) -> MubLine:
    return _line(d, None)


def rotation_to_primary(line: MubLine) -> SymplecticMap:
    """Unit-determinant map sending every point of ``line`` onto ``{(k, 0)}``."""
    d = line.d
    if line.slope is None:
        return axis_swap(d)
    return SymplecticMap(1, 0, -line.slope, 1, d)


def rotation_between(line: MubLine, target: MubLine) -> SymplecticMap:
    """Map carrying ``line`` onto ``target``; identity when they coincide."""
    if line.d != target.d:
        raise ValueError("dimension mismatch")
    if line.slope == target.slope:
        return SymplecticMap.identity(line.d)
    return rotation_to_primary(target).inverse() @ rotation_to_primary(line)
