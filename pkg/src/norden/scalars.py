"""Ricci tensors, scalar curvatures and trace identities.

For any (0,4) tensor L the Ricci tensor and scalar curvature are

    ρ(y,z) = g^{ij} L(e_i, y, z, e_j),        τ = g^{ij} ρ(e_i, e_j),

and the associated quantities

    ρ*(y,z) = g^{ij} L(e_i, y, z, Je_j),      τ* = g^{ij} ρ(e_i, Je_j).

τ* is written with ρ (not ρ*); both contractions are computed and
reported — for any tensor with the pair antisymmetries they agree.

The square norm of ∇J is

    ‖∇J‖² = g^{ij} g^{ks} g((∇_{e_i}J) e_k, (∇_{e_j}J) e_s),

and on a quasi-Kähler structure it also equals
-2 g^{ij} g^{ks} g((∇_{e_i}J) e_k, (∇_{e_s}J) e_j).  A structure with
‖∇J‖² = 0 is isotropic-Kähler; this does not force ∇J = 0 because g is
indefinite.

On a quasi-Kähler structure the following trace relations are checked
with K = curvature of D (direct route) and P as in the curvature module:

    ρ(y,z) - ρ*(y,Jz) = 2ρ(K)(y,z) - ½ρ(P)(y,z)
    τ - τ**           = 2τ(K) - ½τ(P),   τ** = g^{ij}g^{ks}R(e_i,e_k,Je_s,Je_j)
    ‖∇J‖²             = -2(τ + τ**)
    τ(P)              = -½ ‖∇J‖²
    τ                 = τ(K) - ⅛ ‖∇J‖²
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .connection import ConnectionCoeffs, nabla_j
from .curvature import CurvatureBundle
from .errors import BiconditionalViolation
from .structure import NordenStructure
from .tensor import (DOWN, FrameTensor, MetricPair, Scalar, compose, is_zero,
                     max_abs_diff)

HALF = Fraction(1, 2)
EIGHTH = Fraction(1, 8)


@dataclass(frozen=True)
class RicciScalars:
    """Traces of one (0,4) tensor."""

    rho: FrameTensor
    tau: Scalar
    rho_star: FrameTensor
    tau_star: Scalar            # g^{ij} ρ(e_i, Je_j), as displayed
    tau_star_from_rho_star: Scalar  # g^{ij} ρ*(e_i, e_j), the other reading


def ricci_and_scalar(L: FrameTensor, metric: MetricPair,
                     J: FrameTensor) -> RicciScalars:
    d = L.dim
    g_inv = metric.g_inv

    rho = FrameTensor.build(
        d, (DOWN, DOWN),
        lambda a, b: sum(g_inv[i, j] * L[i, a, b, j]
                         for i in range(d) for j in range(d)))
    tau = sum(g_inv[a, b] * rho[a, b] for a in range(d) for b in range(d))

    l_jw = compose(L, 3, J)  # L(x, y, z, Jw)
    rho_star = FrameTensor.build(
        d, (DOWN, DOWN),
        lambda a, b: sum(g_inv[i, j] * l_jw[i, a, b, j]
                         for i in range(d) for j in range(d)))
    rho_j = compose(rho, 1, J)  # ρ(x, Jy)
    tau_star = sum(g_inv[i, j] * rho_j[i, j] for i in range(d) for j in range(d))
    tau_star_alt = sum(g_inv[i, j] * rho_star[i, j]
                       for i in range(d) for j in range(d))
    return RicciScalars(rho=rho, tau=tau, rho_star=rho_star,
                        tau_star=tau_star, tau_star_from_rho_star=tau_star_alt)


def tau_star_star(R: FrameTensor, metric: MetricPair, J: FrameTensor) -> Scalar:
    """τ** = g^{ij} g^{ks} R(e_i, e_k, Je_s, Je_j)."""
    d = R.dim
    g_inv = metric.g_inv
    r_jj = compose(compose(R, 2, J), 3, J)
    return sum(g_inv[i, j] * g_inv[k, s] * r_jj[i, k, s, j]
               for i in range(d) for j in range(d)
               for k in range(d) for s in range(d))


def _nabla_j_traces(s: NordenStructure, nabla: ConnectionCoeffs) -> tuple[Scalar, Scalar]:
    """(straight, twisted) full g-traces of the Gram products of ∇J:

    straight = g^{ij} g^{ks} g((∇_{e_i}J) e_k, (∇_{e_j}J) e_s)
    twisted  = g^{ij} g^{ks} g((∇_{e_i}J) e_k, (∇_{e_s}J) e_j)
    """
    d, g, g_inv = s.dim, s.metric.g, s.metric.g_inv
    nj = nabla_j(s, nabla)
    # low[b][j][t] = Σ_a g_ab nj[a, j, t]
    low = [[[sum(g[a, b] * nj[a, j, t] for a in range(d)) for t in range(d)]
            for j in range(d)] for b in range(d)]
    # x[a][j][t] = Σ_{i,k} g^{ij} g^{kt} nj[a, i, k]
    x = [[[sum(g_inv[i, j] * g_inv[k, t] * nj[a, i, k]
               for i in range(d) for k in range(d))
           for t in range(d)] for j in range(d)] for a in range(d)]
    straight = sum(x[b][j][t] * low[b][j][t]
                   for b in range(d) for j in range(d) for t in range(d))
    twisted = sum(x[b][j][t] * low[b][t][j]
                  for b in range(d) for j in range(d) for t in range(d))
    return straight, twisted


def norm_nabla_j(s: NordenStructure, nabla: ConnectionCoeffs) -> Scalar:
    """‖∇J‖² = g^{ij} g^{ks} g((∇_{e_i}J) e_k, (∇_{e_j}J) e_s)."""
    return _nabla_j_traces(s, nabla)[0]


def w3_norm_identity_residual(s: NordenStructure, nabla: ConnectionCoeffs) -> Scalar:
    """|‖∇J‖² + 2 g^{ij} g^{ks} g((∇_{e_i}J) e_k, (∇_{e_s}J) e_j)|."""
    straight, twisted = _nabla_j_traces(s, nabla)
    return abs(straight + 2 * twisted)


@dataclass(frozen=True)
class ScalarReport:
    """All traces needed by the trace relations and the 4-dim decomposition."""

    tau: Scalar
    tau_star: Scalar
    tau_star_star: Scalar
    tau_K: Scalar
    tau_P: Scalar
    tau_star_K: Scalar
    tau_star_P: Scalar
    norm_nabla_J: Scalar
    rho: FrameTensor
    rho_star: FrameTensor
    rho_K: FrameTensor
    rho_P: FrameTensor
    tau_star_two_route_residual: Scalar


def scalar_report(s: NordenStructure, nabla: ConnectionCoeffs,
                  bundle: CurvatureBundle) -> ScalarReport:
    metric, J = s.metric, s.J
    of_r = ricci_and_scalar(bundle.R, metric, J)
    of_k = ricci_and_scalar(bundle.K_direct, metric, J)
    of_p = ricci_and_scalar(bundle.P, metric, J)
    return ScalarReport(
        tau=of_r.tau,
        tau_star=of_r.tau_star,
        tau_star_star=tau_star_star(bundle.R, metric, J),
        tau_K=of_k.tau,
        tau_P=of_p.tau,
        tau_star_K=of_k.tau_star,
        tau_star_P=of_p.tau_star,
        norm_nabla_J=norm_nabla_j(s, nabla),
        rho=of_r.rho,
        rho_star=of_r.rho_star,
        rho_K=of_k.rho,
        rho_P=of_p.rho,
        tau_star_two_route_residual=abs(of_r.tau_star - of_r.tau_star_from_rho_star))


def section3_residuals(s: NordenStructure, rep: ScalarReport) -> dict[str, Scalar]:
    """The five quasi-Kähler trace relations, as named residuals."""
    J = s.J
    rho_star_j = compose(rep.rho_star, 1, J)  # ρ*(y, Jz)
    lhs = rep.rho - rho_star_j
    rhs = rep.rho_K.scale(2) - rep.rho_P.scale(HALF)
    return {
        "rho-relation": max_abs_diff(lhs, rhs),
        "tau-relation": abs(rep.tau - rep.tau_star_star
                            - 2 * rep.tau_K + HALF * rep.tau_P),
        "norm-relation": abs(rep.norm_nabla_J
                             + 2 * (rep.tau + rep.tau_star_star)),
        "tau-p-relation": abs(rep.tau_P + HALF * rep.norm_nabla_J),
        "tau-k-relation": abs(rep.tau - rep.tau_K + EIGHTH * rep.norm_nabla_J),
    }


def isotropic_kahler_check(rep: ScalarReport, mode: str) -> bool:
    """‖∇J‖² = 0 iff τ = τ(K); returns the isotropic-Kähler flag.

    Raises BiconditionalViolation if the two sides disagree (that would
    contradict the trace relation τ = τ(K) - ⅛‖∇J‖²).
    """
    scale = 1 + abs(rep.tau) + abs(rep.tau_K) + abs(rep.norm_nabla_J)
    isotropic = is_zero(rep.norm_nabla_J, mode, scale)
    taus_match = is_zero(abs(rep.tau - rep.tau_K), mode, scale)
    if isotropic != taus_match:
        raise BiconditionalViolation(
            f"isotropic-Kähler flag disagrees with τ = τ(K): "
            f"‖∇J‖² = {rep.norm_nabla_J}, τ - τ(K) = {rep.tau - rep.tau_K}")
    return isotropic
