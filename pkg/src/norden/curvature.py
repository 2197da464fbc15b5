"""Curvature tensors of ∇ and of the canonical connection D, with the
identities tying them together.

All (0,4) tensors use argument order (x, y, z, w), i.e.
L[i,j,k,l] = L(e_i, e_j, e_k, e_l) and R(x,y,z,w) = g(R(x,y)z, w).
On a left-invariant frame the curvature has no derivative term:

    R^m_ijk = Γ^m_ia Γ^a_jk - Γ^m_ja Γ^a_ik - C^a_ij Γ^m_ak.

Key cross-check: on a quasi-Kähler structure the curvature K of D equals

    K(x,y,z,w) = ¼ {2R(x,y,z,w) - 2R(x,y,Jz,Jw) + P(x,y,z,w)},

where P(x,y,z,w) = g((∇_x J)z, (∇_y J)w) - g((∇_y J)z, (∇_x J)w).  Both
routes are computed independently and compared entrywise.

A (0,4) tensor is *curvature-like* when it is antisymmetric in each of
its first and last argument pairs and satisfies the first Bianchi
identity; it is a *Kähler tensor* when additionally
L(x,y,Jz,Jw) = -L(x,y,z,w).  The pair symmetry L(x,y,z,w) = L(z,w,x,y)
is never assumed or imposed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .connection import ConnectionCoeffs, FundamentalTensor, nabla_j
from .errors import BiconditionalViolation
from .structure import NordenStructure
from .tensor import (DOWN, FLOAT, FrameTensor, MetricPair, Scalar, compose,
                     cyclic_sum, is_zero, max_abs_diff)


def curvature_of(conn: ConnectionCoeffs, C: FrameTensor,
                 metric: MetricPair) -> FrameTensor:
    """(0,4) curvature of a connection on a left-invariant frame."""
    gamma, g = conn.gamma, metric.g
    d = gamma.dim

    def r_up(m, i, j, k):
        acc = 0
        for a in range(d):
            acc += (gamma[m, i, a] * gamma[a, j, k]
                    - gamma[m, j, a] * gamma[a, i, k]
                    - C[a, i, j] * gamma[m, a, k])
        return acc

    up = [[[[r_up(m, i, j, k) for k in range(d)] for j in range(d)]
           for i in range(d)] for m in range(d)]
    return FrameTensor.build(
        d, (DOWN,) * 4,
        lambda i, j, k, l: sum(up[m][i][j][k] * g[m, l] for m in range(d)))


def nabla_f(s: NordenStructure, nabla: ConnectionCoeffs,
            F: FundamentalTensor) -> FrameTensor:
    """(∇_{e_i} F)(e_j, e_k, e_l); only Γ-terms survive left-invariance."""
    d, gamma, f = s.dim, nabla.gamma, F.F

    def entry(i, j, k, l):
        acc = 0
        for m in range(d):
            acc -= (gamma[m, i, j] * f[m, k, l]
                    + gamma[m, i, k] * f[j, m, l]
                    + gamma[m, i, l] * f[j, k, m])
        return acc

    return FrameTensor.build(d, (DOWN,) * 4, entry)


def ricci_identity_residual(nabla_F: FrameTensor, R: FrameTensor,
                            J: FrameTensor) -> Scalar:
    """max |(∇_x F)(y,z,w) - (∇_y F)(x,z,w) - R(x,y,Jz,w) + R(x,y,z,Jw)|.

    This identity holds for every almost complex structure with a
    compatible anti-Hermitian metric, regardless of class.
    """
    lhs = nabla_F - nabla_F.transpose((1, 0, 2, 3))
    rhs = compose(R, 2, J) - compose(R, 3, J)
    return max_abs_diff(lhs, rhs)


def p_tensor(s: NordenStructure, nabla: ConnectionCoeffs) -> FrameTensor:
    """P(x,y,z,w) = g((∇_x J)z, (∇_y J)w) - g((∇_y J)z, (∇_x J)w)."""
    d, g = s.dim, s.metric.g
    nj = nabla_j(s, nabla)

    def inner(x, z, y, w):  # g((∇_x J)z, (∇_y J)w)
        return sum(g[a, b] * nj[a, x, z] * nj[b, y, w]
                   for a in range(d) for b in range(d))

    P = FrameTensor.build(
        d, (DOWN,) * 4,
        lambda i, j, k, l: inner(i, k, j, l) - inner(j, k, i, l))
    scale = 1 + P.max_abs()
    anti, _ = curvature_like_residuals(P)
    assert is_zero(anti, s.mode, scale), "P lost its pair antisymmetries"
    assert is_zero(kahler_residual(P, s.J), s.mode, scale), \
        "P(x,y,Jz,Jw) != -P(x,y,z,w)"
    return P


def k_via_formula(R: FrameTensor, P: FrameTensor, J: FrameTensor) -> FrameTensor:
    """K = ¼ {2R - 2R(·,·,J·,J·) + P}; valid on quasi-Kähler structures."""
    r_jj = compose(compose(R, 2, J), 3, J)
    return (R.scale(2) - r_jj.scale(2) + P).scale(Fraction(1, 4))


def curvature_like_residuals(L: FrameTensor) -> tuple[Scalar, Scalar]:
    """(antisymmetry residual, first-Bianchi residual) of a (0,4) tensor."""
    anti = max(max_abs_diff(L, -L.transpose((1, 0, 2, 3))),
               max_abs_diff(L, -L.transpose((0, 1, 3, 2))))
    bianchi = cyclic_sum(L, (0, 1, 2)).max_abs()
    return anti, bianchi


def kahler_residual(L: FrameTensor, J: FrameTensor) -> Scalar:
    """max |L(x,y,Jz,Jw) + L(x,y,z,w)|."""
    return max_abs_diff(compose(compose(L, 2, J), 3, J), -L)


def l2_residual(R: FrameTensor, J: FrameTensor) -> Scalar:
    """max |S_{x,y,z} R(x,y,Jz,Jw)| — zero on the L2 curvature class."""
    return cyclic_sum(compose(compose(R, 2, J), 3, J), (0, 1, 2)).max_abs()


def h_tensor(R: FrameTensor, J: FrameTensor) -> FrameTensor:
    """H(x,y,z,w) = R(x,y,z,w) - R(x,y,Jz,Jw)."""
    return R - compose(compose(R, 2, J), 3, J)


# ---------------------------------------------------------------------------
# Theorem-level biconditionals
# ---------------------------------------------------------------------------

def _both_or_neither(res_a: Scalar, scale_a: Scalar, res_b: Scalar,
                     scale_b: Scalar, mode: str) -> bool:
    """True when the two residuals vanish together.

    Float-mode heuristic: when both are nonzero they must also sit within
    two orders of magnitude of each other, so that a near-degenerate pair
    is not misread as agreeing.
    """
    za = is_zero(res_a, mode, scale_a)
    zb = is_zero(res_b, mode, scale_b)
    if za != zb:
        return False
    if mode == FLOAT and not za:
        hi, lo = max(abs(res_a), abs(res_b)), min(abs(res_a), abs(res_b))
        return hi <= 100.0 * lo
    return True


def thm23_check(R: FrameTensor, P: FrameTensor, J: FrameTensor,
                K_direct: FrameTensor, mode: str) -> tuple[Scalar, Scalar]:
    """K of D is a Kähler tensor iff 2 S R(x,y,Jz,Jw) = S P(x,y,z,w).

    Returns (Bianchi residual of K, residual of the displayed relation);
    raises BiconditionalViolation when one vanishes and the other does not.
    """
    _, k_bianchi = curvature_like_residuals(K_direct)
    r_jj = compose(compose(R, 2, J), 3, J)
    relation = cyclic_sum(r_jj, (0, 1, 2)).scale(2) - cyclic_sum(P, (0, 1, 2))
    relation_res = relation.max_abs()
    sk = 1 + K_direct.max_abs()
    sr = 1 + 2 * r_jj.max_abs() + P.max_abs()
    if not _both_or_neither(k_bianchi, sk, relation_res, sr, mode):
        raise BiconditionalViolation(
            f"Kähler criterion for K disagrees with its trace relation: "
            f"Bianchi(K) = {k_bianchi}, relation residual = {relation_res}")
    return k_bianchi, relation_res


def thm24_check(P: FrameTensor, K_direct: FrameTensor,
                mode: str) -> tuple[Scalar, Scalar]:
    """On W3 ∩ L2: K is Kählerian iff P is Kählerian.

    Both tensors carry the antisymmetries and the J-flip property
    unconditionally, so each reduces to its first Bianchi residual.
    """
    _, k_bianchi = curvature_like_residuals(K_direct)
    _, p_bianchi = curvature_like_residuals(P)
    if not _both_or_neither(k_bianchi, 1 + K_direct.max_abs(),
                            p_bianchi, 1 + P.max_abs(), mode):
        raise BiconditionalViolation(
            f"Kähler criteria for K and P disagree: Bianchi(K) = {k_bianchi}, "
            f"Bianchi(P) = {p_bianchi}")
    return k_bianchi, p_bianchi


# ---------------------------------------------------------------------------
# Bundle of everything curvature-shaped
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurvatureBundle:
    R: FrameTensor
    K_direct: FrameTensor
    K_formula: FrameTensor
    P: FrameTensor
    H: FrameTensor
    nabla_F: FrameTensor


def curvature_bundle(s: NordenStructure, nabla: ConnectionCoeffs,
                     D: ConnectionCoeffs, F: FundamentalTensor) -> CurvatureBundle:
    C, metric, J = s.frame.C, s.metric, s.J
    R = curvature_of(nabla, C, metric)
    P = p_tensor(s, nabla)
    return CurvatureBundle(
        R=R,
        K_direct=curvature_of(D, C, metric),
        K_formula=k_via_formula(R, P, J),
        P=P,
        H=h_tensor(R, J),
        nabla_F=nabla_f(s, nabla, F))
