"""Dense tensors over a fixed frame, with exact-rational or float entries.

A ``FrameTensor`` stores a dense array of scalars indexed by ``rank`` frame
indices, each running over ``0..dim-1`` (indices are 1-based in files and
reports, 0-based here).  Every axis carries a variance flag: ``"u"``
(contravariant) or ``"d"`` (covariant).  Tensors are immutable; all
operations return new tensors.

Scalars are ``int``/``fractions.Fraction`` in rational mode and ``float``
in float mode.  Rational arithmetic is exact, so identity residuals in
rational mode are compared against literal zero; float residuals are
compared against ``FLOAT_RTOL * (1 + scale)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

Scalar = Union[int, Fraction, float]

RATIONAL = "rational"
FLOAT = "float"

#: Relative tolerance for float-mode residuals.
FLOAT_RTOL = 1e-9

UP = "u"
DOWN = "d"


def scalar_zero(mode: str) -> Scalar:
    return 0.0 if mode == FLOAT else 0


def is_zero(value: Scalar, mode: str, scale: Scalar = 0) -> bool:
    """Mode-aware zero test: exact in rational mode, relative in float mode."""
    if mode == RATIONAL:
        return value == 0
    return abs(value) <= FLOAT_RTOL * (1.0 + abs(scale))


class FrameTensor:
    """Dense tensor of fixed valence over a ``dim``-dimensional frame."""

    __slots__ = ("dim", "variance", "entries")

    def __init__(self, dim: int, variance: Sequence[str], entries: Iterable[Scalar]):
        variance = tuple(variance)
        entries = tuple(entries)
        if dim <= 0:
            raise ValueError("dimension must be positive")
        if any(v not in (UP, DOWN) for v in variance):
            raise ValueError(f"bad variance flags {variance!r}")
        if len(entries) != dim ** len(variance):
            raise ValueError(
                f"expected {dim ** len(variance)} entries for rank "
                f"{len(variance)} in dim {dim}, got {len(entries)}"
            )
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "variance", variance)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("FrameTensor is immutable")

    # -- construction ------------------------------------------------------

    @classmethod
    def build(cls, dim: int, variance: Sequence[str],
              fn: Callable[..., Scalar]) -> "FrameTensor":
        """Tensor with entry ``fn(*idx)`` at each multi-index."""
        rank = len(variance)
        entries = [fn(*idx) for idx in itertools.product(range(dim), repeat=rank)]
        return cls(dim, variance, entries)

    @classmethod
    def zeros(cls, dim: int, variance: Sequence[str],
              mode: str = RATIONAL) -> "FrameTensor":
        z = scalar_zero(mode)
        return cls(dim, variance, [z] * dim ** len(variance))

    @classmethod
    def identity(cls, dim: int, mode: str = RATIONAL) -> "FrameTensor":
        one = 1.0 if mode == FLOAT else 1
        z = scalar_zero(mode)
        return cls.build(dim, (UP, DOWN), lambda i, j: one if i == j else z)

    # -- basic queries -----------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.variance)

    @property
    def con_rank(self) -> int:
        return sum(1 for v in self.variance if v == UP)

    @property
    def cov_rank(self) -> int:
        return sum(1 for v in self.variance if v == DOWN)

    def _offset(self, idx: tuple[int, ...]) -> int:
        off = 0
        for i in idx:
            off = off * self.dim + i
        return off

    def __getitem__(self, idx) -> Scalar:
        if isinstance(idx, int):
            idx = (idx,)
        if len(idx) != self.rank:
            raise IndexError(f"rank-{self.rank} tensor indexed with {len(idx)} indices")
        return self.entries[self._offset(tuple(idx))]

    def __eq__(self, other) -> bool:
        return (isinstance(other, FrameTensor)
                and self.dim == other.dim
                and self.variance == other.variance
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.dim, self.variance, self.entries))

    def __repr__(self) -> str:
        sig = "".join(self.variance)
        return f"FrameTensor(dim={self.dim}, variance='{sig}')"

    # -- entrywise algebra ---------------------------------------------------

    def _check_compatible(self, other: "FrameTensor"):
        if self.dim != other.dim or self.variance != other.variance:
            raise ValueError("tensors have different shape or variance")

    def __add__(self, other: "FrameTensor") -> "FrameTensor":
        self._check_compatible(other)
        return FrameTensor(self.dim, self.variance,
                           [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "FrameTensor") -> "FrameTensor":
        self._check_compatible(other)
        return FrameTensor(self.dim, self.variance,
                           [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "FrameTensor":
        return FrameTensor(self.dim, self.variance, [-a for a in self.entries])

    def scale(self, c: Scalar) -> "FrameTensor":
        return FrameTensor(self.dim, self.variance, [c * a for a in self.entries])

    def max_abs(self) -> Scalar:
        return max((abs(a) for a in self.entries), default=0)

    def is_finite(self) -> bool:
        """False when any float entry is NaN or infinite."""
        for a in self.entries:
            if isinstance(a, float) and (a != a or a in (float("inf"), float("-inf"))):
                return False
        return True

    def to_float(self) -> "FrameTensor":
        return FrameTensor(self.dim, self.variance, [float(a) for a in self.entries])

    def to_exact(self) -> "FrameTensor":
        """Lift float entries to exact dyadic rationals."""
        return FrameTensor(self.dim, self.variance,
                           [a if not isinstance(a, float) else Fraction(a)
                            for a in self.entries])

    def transpose(self, perm: Sequence[int]) -> "FrameTensor":
        """Reorder axes: result[idx] = self[idx[perm[0]], idx[perm[1]], ...]."""
        perm = tuple(perm)
        if sorted(perm) != list(range(self.rank)):
            raise ValueError(f"bad permutation {perm!r}")
        inv = [perm.index(p) for p in range(self.rank)]
        return FrameTensor.build(
            self.dim, tuple(self.variance[p] for p in perm),
            lambda *idx: self[tuple(idx[q] for q in inv)])


def max_abs_diff(a: FrameTensor, b: FrameTensor) -> Scalar:
    a._check_compatible(b)
    return max((abs(x - y) for x, y in zip(a.entries, b.entries)), default=0)


# ---------------------------------------------------------------------------
# Metric pair
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricPair:
    """A nondegenerate symmetric (0,2) metric with its cached inverse.

    ``g_tilde`` is the associated metric g̃(x,y) = g(x, Jy); it is attached
    via :meth:`with_structure` once J is known.
    """

    g: FrameTensor
    g_inv: FrameTensor
    g_tilde: FrameTensor | None = None

    @classmethod
    def from_metric(cls, g: FrameTensor, mode: str = RATIONAL) -> "MetricPair":
        from . import linalg  # local import: linalg has no tensor dependency

        if g.variance != (DOWN, DOWN):
            raise ValueError("metric must be a (0,2) tensor")
        d = g.dim
        for i in range(d):
            for j in range(i + 1, d):
                if g[i, j] != g[j, i]:
                    raise ValueError(f"metric not symmetric at ({i + 1},{j + 1})")
        rows = [[g[i, j] for j in range(d)] for i in range(d)]
        inv = linalg.invert(rows, mode)
        g_inv = FrameTensor.build(d, (UP, UP), lambda i, j: inv[i][j])
        pair = cls(g=g, g_inv=g_inv)
        resid = pair.inverse_residual()
        if not is_zero(resid, mode, scale=g.max_abs()):
            raise ValueError(f"metric inversion residual {resid} too large")
        return pair

    def inverse_residual(self) -> Scalar:
        """max |g·g⁻¹ − id| over all entries."""
        d = self.g.dim
        worst = 0
        for i in range(d):
            for j in range(d):
                acc = sum(self.g[i, m] * self.g_inv[m, j] for m in range(d))
                target = 1 if i == j else 0
                worst = max(worst, abs(acc - target))
        return worst

    def with_structure(self, J: FrameTensor) -> "MetricPair":
        d = self.g.dim
        g = self.g
        g_tilde = FrameTensor.build(
            d, (DOWN, DOWN),
            lambda i, j: sum(g[i, m] * J[m, j] for m in range(d)))
        return MetricPair(g=self.g, g_inv=self.g_inv, g_tilde=g_tilde)

    def to_float(self) -> "MetricPair":
        return MetricPair(
            g=self.g.to_float(), g_inv=self.g_inv.to_float(),
            g_tilde=None if self.g_tilde is None else self.g_tilde.to_float())


# ---------------------------------------------------------------------------
# Index operations
# ---------------------------------------------------------------------------

def _strides(dim: int, rank: int) -> list[int]:
    return [dim ** (rank - 1 - p) for p in range(rank)]


def contract(t: FrameTensor, axis_a: int, axis_b: int,
             metric: MetricPair | None = None) -> FrameTensor:
    """Contract two axes of ``t``, reducing the rank by 2.

    Mixed variance (one up, one down) is a plain trace.  Two covariant axes
    are paired through g⁻¹, two contravariant axes through g; both require
    ``metric``.
    """
    if t.rank < 2:
        raise ValueError("cannot contract a tensor of rank < 2")
    if axis_a == axis_b:
        raise ValueError("contraction axes must differ")
    for ax in (axis_a, axis_b):
        if not 0 <= ax < t.rank:
            raise ValueError(f"axis {ax} out of range for rank {t.rank}")
    va, vb = t.variance[axis_a], t.variance[axis_b]
    if va == vb:
        if metric is None:
            raise ValueError("metric required to contract two same-variance axes")
        weight = metric.g_inv if va == DOWN else metric.g
    else:
        weight = None

    d = t.dim
    keep = [p for p in range(t.rank) if p not in (axis_a, axis_b)]
    out_variance = tuple(t.variance[p] for p in keep)

    def entry(*idx):
        full = [0] * t.rank
        for pos, p in enumerate(keep):
            full[p] = idx[pos]
        if weight is None:
            acc = 0
            for m in range(d):
                full[axis_a] = m
                full[axis_b] = m
                acc += t[tuple(full)]
            return acc
        acc = 0
        for m in range(d):
            full[axis_a] = m
            for q in range(d):
                full[axis_b] = q
                acc += weight[m, q] * t[tuple(full)]
        return acc

    if not keep:
        # Full contraction to a scalar: return a rank-0 tensor is awkward;
        # keep the dense representation with a single entry.
        return FrameTensor(d, (), [entry()])
    return FrameTensor.build(d, out_variance, entry)


def cyclic_sum(t: FrameTensor, axes: Sequence[int] = (0, 1, 2)) -> FrameTensor:
    """Cyclic sum over three axes:  t(x,y,z,…) + t(y,z,x,…) + t(z,x,y,…)."""
    a, b, c = axes
    if len({a, b, c}) != 3:
        raise ValueError("cycled axes must be distinct")
    if t.rank < 3:
        raise ValueError("cyclic sum needs rank >= 3")
    for ax in (a, b, c):
        if not 0 <= ax < t.rank:
            raise ValueError(f"axis {ax} out of range for rank {t.rank}")

    def entry(*idx):
        second = list(idx)
        second[a], second[b], second[c] = idx[b], idx[c], idx[a]
        third = list(idx)
        third[a], third[b], third[c] = idx[c], idx[a], idx[b]
        return t[idx] + t[tuple(second)] + t[tuple(third)]

    return FrameTensor.build(t.dim, t.variance, entry)


def raise_lower(t: FrameTensor, axis: int, direction: str,
                metric: MetricPair) -> FrameTensor:
    """Raise or lower one axis with g⁻¹ / g, keeping its slot position."""
    if not 0 <= axis < t.rank:
        raise ValueError(f"axis {axis} out of range for rank {t.rank}")
    if direction == "up":
        if t.variance[axis] != DOWN:
            raise ValueError(f"axis {axis} is already contravariant")
        weight = metric.g_inv
        new_flag = UP
    elif direction == "down":
        if t.variance[axis] != UP:
            raise ValueError(f"axis {axis} is already covariant")
        weight = metric.g
        new_flag = DOWN
    else:
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")

    d = t.dim
    out_variance = t.variance[:axis] + (new_flag,) + t.variance[axis + 1:]

    def entry(*idx):
        full = list(idx)
        acc = 0
        for m in range(d):
            full[axis] = m
            acc += weight[idx[axis], m] * t[tuple(full)]
        return acc

    return FrameTensor.build(d, out_variance, entry)


def compose(t: FrameTensor, axis: int, endo: FrameTensor) -> FrameTensor:
    """Substitute one argument of ``t`` through an endomorphism.

    For a covariant axis this realizes t(…, Jx, …): the axis is contracted
    with the upper index of ``endo``.  For a contravariant axis the
    endomorphism is applied to the output: result = J ∘ t on that axis.
    """
    if endo.variance != (UP, DOWN):
        raise ValueError("endomorphism must be a (1,1) tensor")
    if not 0 <= axis < t.rank:
        raise ValueError(f"axis {axis} out of range for rank {t.rank}")
    d = t.dim

    if t.variance[axis] == DOWN:
        def entry(*idx):
            full = list(idx)
            acc = 0
            for m in range(d):
                full[axis] = m
                acc += t[tuple(full)] * endo[m, idx[axis]]
            return acc
    else:
        def entry(*idx):
            full = list(idx)
            acc = 0
            for m in range(d):
                full[axis] = m
                acc += endo[idx[axis], m] * t[tuple(full)]
            return acc

    return FrameTensor.build(d, t.variance, entry)
