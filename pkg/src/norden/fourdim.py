"""The invariant (0,4) basis tensors and the 4-dim Kähler decomposition.

With g̃(x,y) = g(x, Jy):

    π₁(x,y,z,w) =  g(y,z) g(x,w) - g(x,z) g(y,w)
    π₂(x,y,z,w) =  g̃(y,z) g̃(x,w) - g̃(x,z) g̃(y,w)
    π₃(x,y,z,w) = -g(y,z) g̃(x,w) + g(x,z) g̃(y,w)
                  - g̃(y,z) g(x,w) + g̃(x,z) g(y,w)

π₁ - π₂ and π₃ are Kähler tensors in every even dimension.  In dimension
4 every Kähler tensor L decomposes as

    L = ν (π₁ - π₂) + ν* π₃,     ν = τ(L)/8,   ν* = τ*(L)/8,

which the decomposition certifies operationally through its entrywise
reconstruction residual rather than taking on faith.  The traces that
make /8 the right normalization (τ(π₁-π₂) = τ*(π₃) = 8 in dimension 4,
with the cross traces zero) are themselves pinned down by brute-force
contraction in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .curvature import CurvatureBundle, curvature_like_residuals, kahler_residual
from .errors import DimensionNotFour, NotApplicable, NotKahlerTensor
from .scalars import ScalarReport, ricci_and_scalar
from .structure import NordenStructure
from .tensor import DOWN, FrameTensor, Scalar, is_zero, max_abs_diff

SIXTEENTH = Fraction(1, 16)


@dataclass(frozen=True)
class PiBasis:
    pi1: FrameTensor
    pi2: FrameTensor
    pi3: FrameTensor
    dim_is_four: bool  # the decomposition below is only valid when True


def build_pi(s: NordenStructure) -> PiBasis:
    d = s.dim
    g = s.metric.g
    gt = s.metric.g_tilde
    assert gt is not None

    pi1 = FrameTensor.build(
        d, (DOWN,) * 4,
        lambda x, y, z, w: g[y, z] * g[x, w] - g[x, z] * g[y, w])
    pi2 = FrameTensor.build(
        d, (DOWN,) * 4,
        lambda x, y, z, w: gt[y, z] * gt[x, w] - gt[x, z] * gt[y, w])
    pi3 = FrameTensor.build(
        d, (DOWN,) * 4,
        lambda x, y, z, w: (- g[y, z] * gt[x, w] + g[x, z] * gt[y, w]
                            - gt[y, z] * g[x, w] + gt[x, z] * g[y, w]))
    return PiBasis(pi1=pi1, pi2=pi2, pi3=pi3, dim_is_four=(d == 4))


@dataclass(frozen=True)
class Decomposition:
    nu: Scalar
    nu_star: Scalar
    residual: Scalar


def decompose_kahler(L: FrameTensor, s: NordenStructure) -> Decomposition:
    """Split a Kähler tensor over (π₁ - π₂, π₃) and report the residual."""
    if s.dim != 4:
        raise DimensionNotFour(f"decomposition requires dim 4, got {s.dim}")
    scale = 1 + L.max_abs()
    anti, bianchi = curvature_like_residuals(L)
    kah = kahler_residual(L, s.J)
    if not (is_zero(anti, s.mode, scale) and is_zero(bianchi, s.mode, scale)
            and is_zero(kah, s.mode, scale)):
        raise NotKahlerTensor(
            f"not a Kähler tensor: antisymmetry residual {anti}, "
            f"Bianchi residual {bianchi}, J-flip residual {kah}")

    traces = ricci_and_scalar(L, s.metric, s.J)
    nu = Fraction(1, 8) * traces.tau
    nu_star = Fraction(1, 8) * traces.tau_star
    basis = build_pi(s)
    recon = (basis.pi1 - basis.pi2).scale(nu) + basis.pi3.scale(nu_star)
    return Decomposition(nu=nu, nu_star=nu_star,
                         residual=max_abs_diff(L, recon))


def prop32_residual(bundle: CurvatureBundle, rep: ScalarReport,
                    s: NordenStructure, is_w3: bool, is_l2: bool,
                    k_kahlerian: bool) -> Scalar:
    """Closed form of H on a 4-dim quasi-Kähler L2 structure with Kähler K:

        H = [(4τ(K) - τ(P))/16] (π₁ - π₂) + [(4τ*(K) - τ*(P))/16] π₃.

    Raises NotApplicable naming the first failing gate.
    """
    if s.dim != 4:
        raise NotApplicable("dim4")
    if not is_w3:
        raise NotApplicable("is_W3")
    if not is_l2:
        raise NotApplicable("is_L2")
    if not k_kahlerian:
        raise NotApplicable("kahler_K")
    basis = build_pi(s)
    coeff = SIXTEENTH * (4 * rep.tau_K - rep.tau_P)
    coeff_star = SIXTEENTH * (4 * rep.tau_star_K - rep.tau_star_P)
    recon = (basis.pi1 - basis.pi2).scale(coeff) + basis.pi3.scale(coeff_star)
    return max_abs_diff(bundle.H, recon)
