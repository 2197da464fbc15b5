"""Frame structures: Lie algebra data plus a compatible (g, J) pair.

The manifold stand-in is a Lie group with left-invariant metric and
almost complex structure, represented by its Lie algebra: structure
constants C^k_ij with [e_i, e_j] = C^k_ij e_k, a symmetric nondegenerate
g of signature (n, n), and an endomorphism J with

    J² = -id,        g(Jx, Jy) = -g(x, y).

``validate`` is total: it either returns a ``NordenStructure`` or raises
the first violated invariant with witness indices (1-based).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import (BrokenAntisymmetry, DegenerateMetric, JacobiViolation,
                     NotAlmostComplex, NotNorden, OddDimension, WrongSignature)
from .fileformat import RawStructure
from .tensor import (DOWN, FLOAT, RATIONAL, FrameTensor, MetricPair, Scalar,
                     UP, is_zero)


@dataclass(frozen=True)
class LieFrameSpec:
    """Frame dimension and structure constants C (1,2): C[k, i, j] = C^k_ij."""

    dim: int
    C: FrameTensor

    def bracket_residuals(self) -> tuple[Scalar, tuple[int, ...], Scalar, tuple[int, ...]]:
        """(antisymmetry residual, witness, Jacobi residual, witness)."""
        d, C = self.dim, self.C
        anti, anti_at = 0, ()
        for k in range(d):
            for i in range(d):
                for j in range(d):
                    r = abs(C[k, i, j] + C[k, j, i])
                    if r > anti:
                        anti, anti_at = r, (i + 1, j + 1, k + 1)
        jac, jac_at = 0, ()
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    for l in range(d):
                        acc = 0
                        for m in range(d):
                            acc += (C[m, i, j] * C[l, m, k]
                                    + C[m, j, k] * C[l, m, i]
                                    + C[m, k, i] * C[l, m, j])
                        if abs(acc) > jac:
                            jac, jac_at = abs(acc), (i + 1, j + 1, k + 1, l + 1)
        return anti, anti_at, jac, jac_at


@dataclass(frozen=True)
class NordenStructure:
    """A validated frame: Lie algebra plus Norden-compatible (g, J)."""

    frame: LieFrameSpec
    J: FrameTensor
    metric: MetricPair
    mode: str = RATIONAL

    @property
    def dim(self) -> int:
        return self.frame.dim

    def to_float(self) -> "NordenStructure":
        return NordenStructure(
            frame=LieFrameSpec(self.frame.dim, self.frame.C.to_float()),
            J=self.J.to_float(),
            metric=self.metric.to_float().with_structure(self.J.to_float()),
            mode=FLOAT)

    def to_exact(self) -> "NordenStructure":
        C = self.frame.C.to_exact()
        g = self.metric.g.to_exact()
        J = self.J.to_exact()
        return build_structure(self.dim, C, g, J, mode=RATIONAL)


def validate(raw: RawStructure | None = None, *, dim: int | None = None,
             C: FrameTensor | None = None, g: FrameTensor | None = None,
             J: FrameTensor | None = None, mode: str = RATIONAL) -> NordenStructure:
    """Check all structure invariants and assemble a ``NordenStructure``.

    Accepts either a parsed ``RawStructure`` or the tensors directly.
    Raises, in order of checking: OddDimension, BrokenAntisymmetry,
    JacobiViolation, NotAlmostComplex, NotNorden, DegenerateMetric,
    WrongSignature.
    """
    if raw is not None:
        dim, mode = raw.dim, raw.mode
        C, g, J = raw.tensors()
    if dim is None or C is None or g is None or J is None:
        raise ValueError("validate needs a RawStructure or dim, C, g, J")

    if dim <= 0 or dim % 2 != 0:
        raise OddDimension(f"dimension must be a positive even integer, got {dim}")
    n = dim // 2

    frame = LieFrameSpec(dim, C)
    scale_c = 1 + C.max_abs()
    anti, anti_at, jac, jac_at = frame.bracket_residuals()
    if not is_zero(anti, mode, scale=scale_c):
        raise BrokenAntisymmetry(f"C^k_ij + C^k_ji = {anti}", anti_at)
    if not is_zero(jac, mode, scale=scale_c * scale_c):
        raise JacobiViolation(f"Jacobi sum = {jac}", jac_at)

    scale_j = 1 + J.max_abs()
    for i in range(dim):
        for j in range(dim):
            acc = sum(J[i, m] * J[m, j] for m in range(dim))
            acc += 1 if i == j else 0
            if not is_zero(acc, mode, scale=scale_j * scale_j):
                raise NotAlmostComplex(f"(J² + id)^{i + 1}_{j + 1} = {acc}",
                                       (i + 1, j + 1))

    scale_g = 1 + g.max_abs()
    for i in range(dim):
        for j in range(dim):
            if g[i, j] != g[j, i]:
                raise NotNorden(f"g not symmetric: g_{i+1}{j+1} != g_{j+1}{i+1}",
                                (i + 1, j + 1))
            acc = sum(g[a, b] * J[a, i] * J[b, j]
                      for a in range(dim) for b in range(dim))
            acc += g[i, j]
            if not is_zero(acc, mode, scale=scale_g * scale_j * scale_j):
                raise NotNorden(f"g(Je_{i+1}, Je_{j+1}) + g(e_{i+1}, e_{j+1}) = {acc}",
                                (i + 1, j + 1))

    rows = [[g[i, j] for j in range(dim)] for i in range(dim)]
    pos, neg, zero = linalg.inertia(rows, mode)
    if zero > 0:
        raise DegenerateMetric(f"metric has {zero}-dimensional radical")
    if (pos, neg) != (n, n):
        raise WrongSignature(f"inertia is ({pos},{neg}), expected ({n},{n})")

    metric = MetricPair.from_metric(g, mode).with_structure(J)
    return NordenStructure(frame=frame, J=J, metric=metric, mode=mode)


def build_structure(dim: int, C: FrameTensor, g: FrameTensor, J: FrameTensor,
                    mode: str = RATIONAL) -> NordenStructure:
    return validate(dim=dim, C=C, g=g, J=J, mode=mode)


def signature(g: FrameTensor, mode: str = RATIONAL) -> tuple[int, int, int]:
    """Sylvester inertia (n_pos, n_neg, n_zero) of the metric."""
    d = g.dim
    rows = [[g[i, j] for j in range(d)] for i in range(d)]
    return linalg.inertia(rows, mode)


def associated_metric(s: NordenStructure) -> FrameTensor:
    """The metric g̃(x,y) = g(x, Jy); itself Norden-compatible with J."""
    assert s.metric.g_tilde is not None
    return s.metric.g_tilde
