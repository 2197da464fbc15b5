"""The identity-check catalogue and its report.

``analyze`` runs the full geometric pipeline on a validated structure;
``run_checks`` evaluates the frozen catalogue of named checks in
dependency order and returns an ``IdentityReport``.  Check ids are
stable strings used by the CLI, the machine output protocol and the test
suite.

Statuses:
    pass / fail       the identity is asserted for this structure
    not-applicable    a gate (precondition flag) is false; the entry
                      names the gate and still shows the residual
    informational     a classification or measured value, never a failure

A module-level error inside one check becomes a ``fail`` entry rather
than aborting the run.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import connection, curvature, fourdim, scalars
from .connection import ClassFlags, ConnectionCoeffs, FundamentalTensor
from .curvature import CurvatureBundle
from .errors import NordenError
from .scalars import ScalarReport
from .structure import NordenStructure
from .tensor import FrameTensor, Scalar, compose, is_zero, max_abs_diff

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"
INFORMATIONAL = "informational"


@dataclass(frozen=True)
class Analysis:
    """Everything the catalogue needs, computed once per structure."""

    structure: NordenStructure
    nabla: ConnectionCoeffs
    F: FundamentalTensor
    flags: ClassFlags
    D: ConnectionCoeffs
    Q: FrameTensor
    Q_alt: FrameTensor
    T: FrameTensor
    bundle: CurvatureBundle
    scalars: ScalarReport
    is_l2: bool
    l2_res: Scalar
    k_bianchi: Scalar
    k_kahlerian: bool
    isotropic: bool


def analyze(s: NordenStructure) -> Analysis:
    nabla = connection.levi_civita(s)
    F = connection.fundamental_tensor(s, nabla)
    flags = connection.classify(s, F)
    D = connection.b_connection_coeffs(s, nabla)
    Q = connection.q_tensor(s, nabla)
    Q_alt = connection.q_tensor_from_derivative(s, nabla)
    T = connection.torsion(s, D)
    bundle = curvature.curvature_bundle(s, nabla, D, F)
    rep = scalars.scalar_report(s, nabla, bundle)

    l2_res = curvature.l2_residual(bundle.R, s.J)
    is_l2 = is_zero(l2_res, s.mode, scale=1 + bundle.R.max_abs())
    _, k_bianchi = curvature.curvature_like_residuals(bundle.K_direct)
    k_kahlerian = is_zero(k_bianchi, s.mode, scale=1 + bundle.K_direct.max_abs())
    isotropic = is_zero(rep.norm_nabla_J, s.mode,
                        scale=1 + abs(rep.tau) + abs(rep.tau_K))
    return Analysis(structure=s, nabla=nabla, F=F, flags=flags, D=D, Q=Q,
                    Q_alt=Q_alt, T=T, bundle=bundle, scalars=rep,
                    is_l2=is_l2, l2_res=l2_res, k_bianchi=k_bianchi,
                    k_kahlerian=k_kahlerian, isotropic=isotropic)


# ---------------------------------------------------------------------------
# Report types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReportEntry:
    check_id: str
    anchor: str
    status: str
    residual: Scalar | None
    gates: tuple[str, ...] = ()
    note: str = ""


@dataclass
class IdentityReport:
    dim: int
    mode: str
    entries: list[ReportEntry] = field(default_factory=list)
    is_w0: bool = False
    is_w3: bool = False
    is_l2: bool = False
    k_kahlerian: bool = False
    isotropic: bool = False

    def entry(self, check_id: str) -> ReportEntry:
        for e in self.entries:
            if e.check_id == check_id:
                return e
        raise KeyError(check_id)

    @property
    def failed(self) -> list[ReportEntry]:
        return [e for e in self.entries if e.status == FAIL]

    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def render_residual(self, value: Scalar | None) -> str:
        if value is None:
            return "-"
        if isinstance(value, float):
            return repr(value)
        return str(value)

    def to_machine(self) -> str:
        lines = [
            "\t".join((e.check_id, e.anchor, e.status,
                       self.render_residual(e.residual)))
            for e in self.entries
        ]
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        flags = (f"dim={self.dim} mode={self.mode} "
                 f"W0={_yn(self.is_w0)} W3={_yn(self.is_w3)} "
                 f"L2={_yn(self.is_l2)} kahler_K={_yn(self.k_kahlerian)} "
                 f"isotropic={_yn(self.isotropic)}")
        id_w = max(len(e.check_id) for e in self.entries)
        an_w = max(len(e.anchor) for e in self.entries)
        lines = [flags, "-" * len(flags)]
        for e in self.entries:
            line = (f"{e.check_id:<{id_w}}  {e.anchor:<{an_w}}  "
                    f"{e.status:<14}  residual={self.render_residual(e.residual)}")
            if e.gates:
                line += f"  gates={','.join(e.gates)}"
            if e.note:
                line += f"  [{e.note}]"
            lines.append(line)
        counts = {}
        for e in self.entries:
            counts[e.status] = counts.get(e.status, 0) + 1
        summary = ", ".join(f"{k}: {v}" for k, v in sorted(counts.items()))
        lines.extend(["-" * len(flags), summary])
        return "\n".join(lines) + "\n"


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


# ---------------------------------------------------------------------------
# The catalogue
# ---------------------------------------------------------------------------

def _verdict(residual: Scalar, scale: Scalar, mode: str) -> str:
    return PASS if is_zero(residual, mode, scale) else FAIL


def run_checks(a: Analysis, selected: list[str] | None = None) -> IdentityReport:
    s = a.structure
    mode = s.mode
    report = IdentityReport(dim=s.dim, mode=mode, is_w0=a.flags.is_w0,
                            is_w3=a.flags.is_w3, is_l2=a.is_l2,
                            k_kahlerian=a.k_kahlerian, isotropic=a.isotropic)

    def add(check_id, anchor, runner):
        if selected is not None and check_id not in selected:
            return
        try:
            entry = runner()
        except NordenError as err:
            entry = ReportEntry(check_id, anchor, FAIL, None,
                                note=f"{type(err).__name__}: {err}")
        report.entries.append(
            ReportEntry(check_id, anchor, *entry) if isinstance(entry, tuple)
            else entry)

    J, g = s.J, s.metric.g
    F, T, Q = a.F.F, a.T, a.Q
    bundle, rep = a.bundle, a.scalars
    w3_gate = () if a.flags.is_w3 else ("is_W3",)

    # --- structural axioms -------------------------------------------------
    def axioms():
        d = s.dim
        j2 = max(abs(sum(J[i, m] * J[m, j] for m in range(d))
                     + (1 if i == j else 0))
                 for i in range(d) for j in range(d))
        norden = max(abs(sum(g[p, q] * J[p, i] * J[q, j]
                             for p in range(d) for q in range(d)) + g[i, j])
                     for i in range(d) for j in range(d))
        res = max(j2, norden)
        scale = (1 + J.max_abs()) ** 2 * (1 + g.max_abs())
        return (_verdict(res, scale, mode), res, ())

    add("eq1.1-axioms", "Eq 1.1", axioms)

    def nabla_g():
        res = connection.metric_compat_residual(a.nabla, s)
        return (_verdict(res, 1 + a.nabla.gamma.max_abs() * g.max_abs(), mode),
                res, ())

    add("nabla-metric-compat", "§1", nabla_g)

    def nabla_torsion():
        res = connection.torsion_free_residual(a.nabla, s)
        return (_verdict(res, 1 + a.nabla.gamma.max_abs(), mode), res, ())

    add("nabla-torsion-free", "§1", nabla_torsion)

    # --- fundamental tensor and classes ------------------------------------
    def f_symmetry():
        sym = max_abs_diff(F, F.transpose((0, 2, 1)))
        jflip = max_abs_diff(F, compose(compose(F, 1, J), 2, J))
        res = max(sym, jflip)
        return (_verdict(res, 1 + F.max_abs(), mode), res, ())

    add("eq1.3-f-symmetry", "Eq 1.3", f_symmetry)

    add("eq1.4-w3-class", "Eq 1.4", lambda: (
        INFORMATIONAL, a.flags.w3_residual,
        (), f"is_W3={_yn(a.flags.is_w3)}"))
    add("w0-kahler-class", "§1", lambda: (
        INFORMATIONAL, a.flags.w0_residual,
        (), f"is_W0={_yn(a.flags.is_w0)}"))

    def ricci_identity():
        res = curvature.ricci_identity_residual(bundle.nabla_F, bundle.R, J)
        scale = 1 + bundle.nabla_F.max_abs() + bundle.R.max_abs() * J.max_abs()
        return (_verdict(res, scale, mode), res, ())

    add("eq1.5-ricci-identity", "Eq 1.5", ricci_identity)

    add("eq1.6-nabla-j-norm", "Eq 1.6", lambda: (
        INFORMATIONAL, rep.norm_nabla_J, (),
        f"isotropic={_yn(a.isotropic)}"))

    def w3_norm():
        res = scalars.w3_norm_identity_residual(s, a.nabla)
        scale = 1 + abs(rep.norm_nabla_J)
        if not a.flags.is_w3:
            return (NOT_APPLICABLE, res, ("is_W3",), "")
        return (_verdict(res, scale, mode), res, ())

    add("eq1.7-w3-norm", "Eq 1.7", w3_norm)

    # --- canonical connection ----------------------------------------------
    def naturality():
        dg = connection.metric_compat_residual(a.D, s)
        dj = connection.dj_residual(a.D, s)
        res = max(dg, dj)
        scale = 1 + a.D.gamma.max_abs() * (g.max_abs() + J.max_abs())
        return (_verdict(res, scale, mode), res, ())

    add("eq2.1-naturality", "Eq 2.1", naturality)

    def torsion_vs_f():
        res = connection.torsion_f_residual(T, F, J)
        return (_verdict(res, 1 + T.max_abs() + F.max_abs(), mode), res, ())

    add("eq2.2-torsion-vs-f", "Eq 2.2", torsion_vs_f)

    def torsion_cyclic():
        res = connection.torsion_cyclic_residual(T, J)
        scale = 1 + T.max_abs() * (1 + J.max_abs())
        if not a.flags.is_w3:
            return (INFORMATIONAL, res, (), "not asserted outside W3")
        return (_verdict(res, scale, mode), res, ())

    add("prop2.1-torsion-cyclic", "Prop 2.1 / Eq 2.3", torsion_cyclic)

    def q_antisym():
        res = max_abs_diff(Q, -Q.transpose((0, 2, 1)))
        return (_verdict(res, 1 + Q.max_abs(), mode), res, ())

    add("eq2.5-q-antisymmetry", "Eq 2.5", q_antisym)

    def q_two_routes():
        res = max_abs_diff(Q, a.Q_alt)
        return (_verdict(res, 1 + Q.max_abs(), mode), res, ())

    add("eq2.4-q-two-routes", "Eqs 2.4-2.5", q_two_routes)

    # --- curvature-like predicates ------------------------------------------
    def like(tensor):
        anti, bianchi = curvature.curvature_like_residuals(tensor)
        return anti, bianchi, 1 + tensor.max_abs()

    r_anti, r_bianchi, r_scale = like(bundle.R)
    add("eq1.10-r-antisym", "Eq 1.10",
        lambda: (_verdict(r_anti, r_scale, mode), r_anti, ()))
    add("eq1.11-r-bianchi", "Eq 1.11",
        lambda: (_verdict(r_bianchi, r_scale, mode), r_bianchi, ()))

    k_anti, _, k_scale = like(bundle.K_direct)
    add("eq1.10-k-antisym", "Eq 1.10",
        lambda: (_verdict(k_anti, k_scale, mode), k_anti, ()))
    add("eq1.12-k-kahler", "Eq 1.12", lambda: (
        _verdict(curvature.kahler_residual(bundle.K_direct, J), k_scale, mode),
        curvature.kahler_residual(bundle.K_direct, J), ()))
    add("eq1.11-k-bianchi", "Eq 1.11", lambda: (
        INFORMATIONAL, a.k_bianchi, (),
        f"kahler_K={_yn(a.k_kahlerian)}"))

    p_anti, p_bianchi, p_scale = like(bundle.P)
    add("eq1.10-p-antisym", "Eq 1.10",
        lambda: (_verdict(p_anti, p_scale, mode), p_anti, ()))
    add("eq1.12-p-kahler", "Eq 1.12", lambda: (
        _verdict(curvature.kahler_residual(bundle.P, J), p_scale, mode),
        curvature.kahler_residual(bundle.P, J), ()))
    add("eq1.11-p-bianchi", "Eq 1.11",
        lambda: (INFORMATIONAL, p_bianchi, (), ""))

    # --- the curvature of D, two routes -------------------------------------
    def k_crosscheck():
        res = max_abs_diff(bundle.K_direct, bundle.K_formula)
        scale = 1 + bundle.K_direct.max_abs() + bundle.K_formula.max_abs()
        if not a.flags.is_w3:
            return (INFORMATIONAL, res, (), "formula only claimed on W3")
        return (_verdict(res, scale, mode), res, ())

    add("thm2.2-k-crosscheck", "Thm 2.2 / Eq 2.7", k_crosscheck)

    add("eq2.10-l2-class", "Eq 2.10", lambda: (
        INFORMATIONAL, a.l2_res, (), f"is_L2={_yn(a.is_l2)}"))

    def thm23():
        if not a.flags.is_w3:
            return (NOT_APPLICABLE, None, ("is_W3",), "")
        k_b, rel = curvature.thm23_check(bundle.R, bundle.P, J,
                                         bundle.K_direct, mode)
        note = f"Bianchi(K)={report.render_residual(k_b)}"
        return (PASS, rel, (), note)

    add("thm2.3-biconditional", "Thm 2.3 / Eq 2.9", thm23)

    def thm24():
        gates = w3_gate + (() if a.is_l2 else ("is_L2",))
        if gates:
            return (NOT_APPLICABLE, None, gates[:1], "")
        k_b, p_b = curvature.thm24_check(bundle.P, bundle.K_direct, mode)
        note = (f"Bianchi(K)={report.render_residual(k_b)}, "
                f"Bianchi(P)={report.render_residual(p_b)}")
        return (PASS, max(k_b, p_b), (), note)

    add("thm2.4-biconditional", "Thm 2.4", thm24)

    def h_kahler():
        anti, bianchi = curvature.curvature_like_residuals(bundle.H)
        kah = curvature.kahler_residual(bundle.H, J)
        res = max(anti, bianchi, kah)
        for gate, ok in (("is_W3", a.flags.is_w3), ("is_L2", a.is_l2),
                         ("kahler_K", a.k_kahlerian)):
            if not ok:
                return (NOT_APPLICABLE, res, (gate,), "")
        return (_verdict(res, 1 + bundle.H.max_abs(), mode), res, ())

    add("cor2.5-h-kahler", "Cor 2.5 / Eq 2.11", h_kahler)

    # --- traces -------------------------------------------------------------
    add("eq1.9-tau-star-agreement", "Eq 1.9", lambda: (
        INFORMATIONAL, rep.tau_star_two_route_residual, (),
        "τ* via ρ vs via ρ*"))

    sec3 = scalars.section3_residuals(s, rep)
    sec3_scale = (1 + abs(rep.tau) + abs(rep.tau_star_star)
                  + abs(rep.tau_K) + abs(rep.tau_P) + abs(rep.norm_nabla_J))

    def sec3_entry(key, extra_scale=0):
        def runner():
            res = sec3[key]
            if not a.flags.is_w3:
                return (NOT_APPLICABLE, res, ("is_W3",), "")
            return (_verdict(res, sec3_scale + extra_scale, mode), res, ())
        return runner

    add("eq3.1-rho-relation", "Eq 3.1",
        sec3_entry("rho-relation",
                   extra_scale=rep.rho.max_abs() + rep.rho_K.max_abs()))
    add("eq3.2-tau-relation", "Eq 3.2", sec3_entry("tau-relation"))
    add("sec3-norm-relation", "§3", sec3_entry("norm-relation"))
    add("eq3.4-tau-p-relation", "Eq 3.4", sec3_entry("tau-p-relation"))
    add("eq3.5-tau-k-relation", "Eq 3.5", sec3_entry("tau-k-relation"))

    def prop31():
        if not a.flags.is_w3:
            return (NOT_APPLICABLE, None, ("is_W3",), "")
        isotropic = scalars.isotropic_kahler_check(rep, mode)
        res = abs(rep.tau - rep.tau_K)
        return (PASS, res, (), f"isotropic={_yn(isotropic)}")

    add("prop3.1-isotropic", "Prop 3.1", prop31)

    # --- dimension 4 --------------------------------------------------------
    def pi_basis():
        if s.dim != 4:
            return (NOT_APPLICABLE, None, ("dim4",), "")
        basis = fourdim.build_pi(s)
        res = 0
        for tensor in (basis.pi1 - basis.pi2, basis.pi3):
            anti, bianchi = curvature.curvature_like_residuals(tensor)
            res = max(res, anti, bianchi,
                      curvature.kahler_residual(tensor, J))
        scale = (1 + g.max_abs()) ** 2 * (1 + J.max_abs()) ** 2
        return (_verdict(res, scale, mode), res, ())

    add("eq3.6-pi-basis", "Eq 3.6", pi_basis)

    def prop32():
        try:
            res = fourdim.prop32_residual(bundle, rep, s, a.flags.is_w3,
                                          a.is_l2, a.k_kahlerian)
        except NotApplicable as gate:
            return (NOT_APPLICABLE, None, (gate.gate,), "")
        return (_verdict(res, 1 + bundle.H.max_abs(), mode), res, ())

    add("prop3.2-h-form", "Prop 3.2", prop32)

    if selected is None:
        assert tuple(e.check_id for e in report.entries) == CHECK_IDS
    return report


#: Frozen catalogue ids, in execution order.
CHECK_IDS = (
    "eq1.1-axioms",
    "nabla-metric-compat",
    "nabla-torsion-free",
    "eq1.3-f-symmetry",
    "eq1.4-w3-class",
    "w0-kahler-class",
    "eq1.5-ricci-identity",
    "eq1.6-nabla-j-norm",
    "eq1.7-w3-norm",
    "eq2.1-naturality",
    "eq2.2-torsion-vs-f",
    "prop2.1-torsion-cyclic",
    "eq2.5-q-antisymmetry",
    "eq2.4-q-two-routes",
    "eq1.10-r-antisym",
    "eq1.11-r-bianchi",
    "eq1.10-k-antisym",
    "eq1.12-k-kahler",
    "eq1.11-k-bianchi",
    "eq1.10-p-antisym",
    "eq1.12-p-kahler",
    "eq1.11-p-bianchi",
    "thm2.2-k-crosscheck",
    "eq2.10-l2-class",
    "thm2.3-biconditional",
    "thm2.4-biconditional",
    "cor2.5-h-kahler",
    "eq1.9-tau-star-agreement",
    "eq3.1-rho-relation",
    "eq3.2-tau-relation",
    "sec3-norm-relation",
    "eq3.4-tau-p-relation",
    "eq3.5-tau-k-relation",
    "prop3.1-isotropic",
    "eq3.6-pi-basis",
    "prop3.2-h-form",
)


def check_ids() -> list[str]:
    return list(CHECK_IDS)
