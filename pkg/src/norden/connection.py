"""Connections on a left-invariant frame and the fundamental tensor.

On left-invariant data every covariant derivative is finite algebra: the
directional-derivative terms vanish, so the Levi-Civita connection comes
from the reduced Koszul formula

    2 g(∇_x y, z) = g([x,y], z) - g([y,z], x) + g([z,x], y)

and (∇_x J)y = ∇_x(Jy) - J(∇_x y) needs only the Γ-symbols.  Conventions:
gamma[l, i, j] = Γ^l_ij means ∇_{e_i} e_j = Γ^l_ij e_l.

The fundamental (0,3) tensor is F(x,y,z) = g((∇_x J)y, z) with the
symmetries F(x,y,z) = F(x,z,y) = F(x,Jy,Jz).  The quasi-Kähler class is
cut out by the vanishing cyclic sum of F; the Kähler class by F = 0.

The canonical connection preserving both g and J is

    D_x y = ∇_x y + ½ (∇_x J) Jy,

with torsion T(x,y) = D_x y - D_y x - [x,y] satisfying
T(x,y,Jz) = ½ {F(x,y,z) - F(y,x,z)}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NaturalityViolation
from .structure import NordenStructure
from .tensor import (DOWN, FLOAT, RATIONAL, FrameTensor, Scalar, UP, compose,
                     cyclic_sum, is_zero, max_abs_diff)

LEVI_CIVITA = "levi-civita"
B_CONNECTION = "b-connection"
GENERIC = "generic"


def _half(mode: str) -> Scalar:
    return 0.5 if mode == FLOAT else Fraction(1, 2)


@dataclass(frozen=True)
class ConnectionCoeffs:
    """Γ-symbols of a linear connection in the frame."""

    gamma: FrameTensor  # (1,2): gamma[l, i, j] = Γ^l_ij
    flavor: str = GENERIC


@dataclass(frozen=True)
class FundamentalTensor:
    F: FrameTensor  # (0,3)


@dataclass(frozen=True)
class ClassFlags:
    """Membership in the Kähler (F = 0) and quasi-Kähler (S F = 0) classes."""

    is_w0: bool
    is_w3: bool
    w0_residual: Scalar
    w3_residual: Scalar


# ---------------------------------------------------------------------------
# Levi-Civita connection
# ---------------------------------------------------------------------------

def levi_civita(s: NordenStructure) -> ConnectionCoeffs:
    """Koszul solve for the torsion-free metric connection of g."""
    d = s.dim
    C, g, g_inv = s.frame.C, s.metric.g, s.metric.g_inv
    half = _half(s.mode)

    def c_low(i, j, k):  # g([e_i, e_j], e_k)
        return sum(C[m, i, j] * g[m, k] for m in range(d))

    def gamma(l, i, j):
        acc = 0
        for k in range(d):
            acc += g_inv[k, l] * (c_low(i, j, k) - c_low(j, k, i) + c_low(k, i, j))
        return half * acc

    conn = ConnectionCoeffs(FrameTensor.build(d, (UP, DOWN, DOWN), gamma),
                            flavor=LEVI_CIVITA)
    scale = 1 + conn.gamma.max_abs() + g.max_abs()
    assert is_zero(metric_compat_residual(conn, s), s.mode, scale), \
        "Levi-Civita connection failed metric compatibility"
    assert is_zero(torsion_free_residual(conn, s), s.mode, scale), \
        "Levi-Civita connection failed torsion-freeness"
    return conn


def metric_compat_residual(conn: ConnectionCoeffs, s: NordenStructure) -> Scalar:
    """max |g(∇_i e_j, e_k) + g(e_j, ∇_i e_k)| — zero iff ∇g = 0."""
    d, g, gamma = s.dim, s.metric.g, conn.gamma
    worst = 0
    for i in range(d):
        for j in range(d):
            for k in range(d):
                acc = sum(gamma[m, i, j] * g[m, k] + gamma[m, i, k] * g[j, m]
                          for m in range(d))
                worst = max(worst, abs(acc))
    return worst


def torsion_free_residual(conn: ConnectionCoeffs, s: NordenStructure) -> Scalar:
    """max |Γ^l_ij - Γ^l_ji - C^l_ij|."""
    d, C, gamma = s.dim, s.frame.C, conn.gamma
    worst = 0
    for l in range(d):
        for i in range(d):
            for j in range(d):
                worst = max(worst, abs(gamma[l, i, j] - gamma[l, j, i] - C[l, i, j]))
    return worst


# ---------------------------------------------------------------------------
# ∇J and the fundamental tensor
# ---------------------------------------------------------------------------

def nabla_j(s: NordenStructure, nabla: ConnectionCoeffs) -> FrameTensor:
    """(∇J)[l, i, j] = component of (∇_{e_i} J) e_j along e_l."""
    d, J, gamma = s.dim, s.J, nabla.gamma

    def entry(l, i, j):
        return sum(gamma[l, i, m] * J[m, j] - J[l, m] * gamma[m, i, j]
                   for m in range(d))

    return FrameTensor.build(d, (UP, DOWN, DOWN), entry)


def fundamental_tensor(s: NordenStructure, nabla: ConnectionCoeffs) -> FundamentalTensor:
    """F(x,y,z) = g((∇_x J)y, z), with both defining symmetries asserted."""
    d, g = s.dim, s.metric.g
    nj = nabla_j(s, nabla)
    F = FrameTensor.build(
        d, (DOWN, DOWN, DOWN),
        lambda i, j, k: sum(nj[l, i, j] * g[l, k] for l in range(d)))
    scale = 1 + F.max_abs()
    assert is_zero(max_abs_diff(F, F.transpose((0, 2, 1))), s.mode, scale), \
        "F(x,y,z) != F(x,z,y)"
    assert is_zero(max_abs_diff(F, compose(compose(F, 1, s.J), 2, s.J)),
                   s.mode, scale), "F(x,y,z) != F(x,Jy,Jz)"
    return FundamentalTensor(F)


def classify(s: NordenStructure, F: FundamentalTensor) -> ClassFlags:
    w0_res = F.F.max_abs()
    w3_res = cyclic_sum(F.F, (0, 1, 2)).max_abs()
    scale = 1 + w0_res
    return ClassFlags(
        is_w0=is_zero(w0_res, s.mode, scale=1),
        is_w3=is_zero(w3_res, s.mode, scale=scale),
        w0_residual=w0_res,
        w3_residual=w3_res)


# ---------------------------------------------------------------------------
# The canonical (g, J)-preserving connection
# ---------------------------------------------------------------------------

def b_connection_coeffs(s: NordenStructure, nabla: ConnectionCoeffs) -> ConnectionCoeffs:
    """D_x y = ∇_x y + ½ (∇_x J) Jy, without the naturality verification."""
    d, J = s.dim, s.J
    nj = nabla_j(s, nabla)
    half = _half(s.mode)

    def entry(l, i, j):
        return nabla.gamma[l, i, j] + half * sum(
            nj[l, i, m] * J[m, j] for m in range(d))

    return ConnectionCoeffs(FrameTensor.build(d, (UP, DOWN, DOWN), entry),
                            flavor=B_CONNECTION)


def b_connection(s: NordenStructure, nabla: ConnectionCoeffs) -> ConnectionCoeffs:
    """D_x y = ∇_x y + ½ (∇_x J) Jy; verifies Dg = DJ = 0 entrywise."""
    conn = b_connection_coeffs(s, nabla)
    scale = 1 + conn.gamma.max_abs() + s.metric.g.max_abs()
    dg = metric_compat_residual(conn, s)
    dj = dj_residual(conn, s)
    if not is_zero(dg, s.mode, scale) or not is_zero(dj, s.mode, scale):
        raise NaturalityViolation(
            f"canonical connection failed to preserve g or J "
            f"(Dg residual {dg}, DJ residual {dj})")
    return conn


def dj_residual(conn: ConnectionCoeffs, s: NordenStructure) -> Scalar:
    """max |(D_x J) e_j| components — zero iff DJ = 0."""
    d, J, gamma = s.dim, s.J, conn.gamma
    worst = 0
    for l in range(d):
        for i in range(d):
            for j in range(d):
                acc = sum(gamma[l, i, m] * J[m, j] - J[l, m] * gamma[m, i, j]
                          for m in range(d))
                worst = max(worst, abs(acc))
    return worst


def q_tensor(s: NordenStructure, nabla: ConnectionCoeffs) -> FrameTensor:
    """Q(y,z,w) = ½ F(y, Jz, w); antisymmetric in its last two arguments."""
    F = fundamental_tensor(s, nabla).F
    Q = compose(F, 1, s.J).scale(_half(s.mode))
    scale = 1 + Q.max_abs()
    assert is_zero(max_abs_diff(Q, -Q.transpose((0, 2, 1))), s.mode, scale), \
        "Q(y,z,w) != -Q(y,w,z)"
    return Q


def q_tensor_from_derivative(s: NordenStructure, nabla: ConnectionCoeffs) -> FrameTensor:
    """Q by the direct route: Q(y,z) = ½ (∇_y J) Jz, lowered with g."""
    d, J, g = s.dim, s.J, s.metric.g
    nj = nabla_j(s, nabla)
    half = _half(s.mode)

    def q_up(l, y, z):
        return half * sum(nj[l, y, m] * J[m, z] for m in range(d))

    return FrameTensor.build(
        d, (DOWN, DOWN, DOWN),
        lambda y, z, w: sum(q_up(l, y, z) * g[l, w] for l in range(d)))


def torsion(s: NordenStructure, D: ConnectionCoeffs) -> FrameTensor:
    """T(x,y,z) = g(D_x y - D_y x - [x,y], z) as a (0,3) tensor."""
    d, C, g, gamma = s.dim, s.frame.C, s.metric.g, D.gamma

    def entry(i, j, k):
        return sum((gamma[l, i, j] - gamma[l, j, i] - C[l, i, j]) * g[l, k]
                   for l in range(d))

    return FrameTensor.build(d, (DOWN, DOWN, DOWN), entry)


def torsion_f_residual(T: FrameTensor, F: FrameTensor, J: FrameTensor) -> Scalar:
    """max |T(x,y,Jz) - ½{F(x,y,z) - F(y,x,z)}|."""
    lhs = compose(T, 2, J)
    half = 0.5 if isinstance(T.entries[0], float) else Fraction(1, 2)
    rhs = (F - F.transpose((1, 0, 2))).scale(half)
    return max_abs_diff(lhs, rhs)


def torsion_cyclic_residual(T: FrameTensor, J: FrameTensor) -> Scalar:
    """max |S_{x,y,z} T(x,y,Jz)| — vanishes on quasi-Kähler structures."""
    return cyclic_sum(compose(T, 2, J), (0, 1, 2)).max_abs()
