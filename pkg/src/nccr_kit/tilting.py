"""NCCR necessary checks, the depth condition, tilting certificates, the
Morita check in dimension two and the acyclicity diagnostic."""

import math
from dataclasses import dataclass, field
from typing import Optional

from .approximation import (NotInAddM, add_membership, build_approx_complex,
                            summand_modules, verify_hom_resolution)
from .modules import (NotCohenMacaulay, direct_sum, dual, hom, hom_left,
                      hom_right, homology_is_zero, homology_module,
                      is_finite_length, is_reflexive)

STRUCTURAL = "structural"
ASSERTED = "asserted"
UNCHECKED = "unchecked"


class WrongDimension(ValueError):
    pass


class DegenerateInput(ValueError):
    pass


def _require_cm(R, need_dim=2):
    if not R.is_cm:
        raise NotCohenMacaulay("ring is not Cohen-Macaulay: pd_S R = %d but n - d = %d"
                               % (R.pd_over_ambient, R.nvars - R.dim))
    if R.dim < need_dim:
        raise WrongDimension("ring dimension %d < %d" % (R.dim, need_dim))


@dataclass
class NccrReport:
    reflexive: list
    end_depth: object
    end_maximal_cm: bool
    nonsingularity: str = UNCHECKED

    @property
    def passed(self):
        return all(self.reflexive) and self.end_maximal_cm

    def to_dict(self):
        return {"reflexive": list(self.reflexive), "end_depth": self.end_depth,
                "end_maximal_cm": self.end_maximal_cm, "nonsingularity": self.nonsingularity,
                "passed": self.passed}


def check_nccr_necessary(M, nonsingularity=UNCHECKED):
    """Reflexivity of every summand and End(M) maximal CM.

    Non-singularity of End(M) is not computed; ``nonsingularity`` records
    where the claim comes from.
    """
    R = M.ring
    _require_cm(R)
    if M.is_zero():
        raise DegenerateInput("zero module")
    refl = [is_reflexive(Mk) for Mk in summand_modules(M)]
    E = hom(M, M)
    dep = E.depth()
    return NccrReport(refl, dep, dep == R.dim, nonsingularity)


@dataclass
class DepthEntry:
    index: int
    module: object
    depth: object
    bound: int
    automatic: bool

    @property
    def passed(self):
        return self.depth >= self.bound

    def to_dict(self):
        return {"index": self.index, "depth": self.depth, "bound": self.bound,
                "automatic": self.automatic, "passed": self.passed,
                "degrees": list(self.module.degrees) if self.module is not None else []}


@dataclass
class DepthConditionReport:
    d: int
    entries: list = field(default_factory=list)

    @property
    def vacuous(self):
        return self.d <= 3

    @property
    def passed(self):
        return all(e.passed for e in self.entries)

    @property
    def nontrivial_passed(self):
        return all(e.passed for e in self.entries if not e.automatic)

    def to_dict(self):
        return {"d": self.d, "vacuous": self.vacuous, "passed": self.passed,
                "entries": [e.to_dict() for e in self.entries]}


def depth_condition(M, N, complex=None):
    """depth Hom(M_i, N) >= d - i - 1 along the minimal approximation complex."""
    R = M.ring
    d = R.dim
    rep = DepthConditionReport(d)
    if d <= 2:
        return rep
    C = complex if complex is not None else build_approx_complex(M, N, d)
    for i in range(d - 1):
        if i < len(C.terms) and C.terms[i].parts:
            H = hom(C.terms[i].module, N)
            dep = H.depth()
        else:
            H, dep = None, math.inf
        rep.entries.append(DepthEntry(i, H, dep, d - i - 1, i in (d - 3, d - 2)))
    return rep


def dual_sum(M):
    """M* as the direct sum of the duals of the summands of M."""
    parts = []
    for base, twist, _ in M.base_summands():
        parts.append((dual(base), -twist))
    return direct_sum(parts, name="(%s)*" % (M.name or "M"))


@dataclass
class TiltingCertificate:
    d: int
    verdict: str = "FAILED(COMPLEX)"
    stage: Optional[str] = None
    message: str = ""
    T: object = None
    complex: object = None
    pd_bound: Optional[int] = None
    projres_exact: Optional[bool] = None
    depth_MN: object = None
    depth_dual: object = None
    x_complex: object = None
    x_positions: list = field(default_factory=list)
    x_exact: Optional[bool] = None
    cores_complex: object = None
    cores_positions: list = field(default_factory=list)
    cores_exact: Optional[bool] = None
    cores_witnesses: list = field(default_factory=list)
    dual_complex: object = None
    acyclicity: Optional[str] = None

    @property
    def passed(self):
        return self.verdict in ("TILTING", "MORITA_PROGENERATOR")


def x_complex(C, N):
    """0 -> End(N) -> Hom(M_0, N) -> ... -> Hom(M_L, N) -> 0."""
    return [hom_right(f, N) for f in C.maps]


def certify_tilting(M, N, reports=None):
    R = M.ring
    _require_cm(R)
    d = R.dim
    cert = TiltingCertificate(d)
    if reports is not None:
        for rep in reports:
            if not rep.passed:
                cert.verdict, cert.stage = "FAILED(NCCR)", "NCCR"
                cert.message = "an input fails the necessary NCCR checks"
                return cert
    T = hom(M, N)
    cert.T = T
    try:
        C = build_approx_complex(M, N, d)
    except NotInAddM as e:
        cert.verdict, cert.stage, cert.message = "FAILED(COMPLEX)", "COMPLEX", str(e)
        return cert
    cert.complex = C
    cert.pd_bound = C.length
    cert.projres_exact = verify_hom_resolution(C)
    if C.length > d - 2 or not cert.projres_exact:
        cert.verdict, cert.stage = "FAILED(COMPLEX)", "COMPLEX"
        cert.message = "induced Hom complex is not a projective resolution"
        return cert
    cert.depth_MN = depth_condition(M, N, C)
    # Ext vanishing: exactness of X
    X = x_complex(C, N)
    cert.x_complex = X
    cert.x_positions = homology_is_zero(X)
    cert.x_exact = all(cert.x_positions)
    cert.acyclicity = acyclicity_check(X, d).verdict if X else "EXACT"
    # coresolution of End(M) by add T, from the complex of M* over add N*
    Ms, Ns = dual_sum(M), dual_sum(N)
    try:
        D = build_approx_complex(Ns, Ms, d)
    except NotInAddM as e:
        cert.verdict, cert.stage, cert.message = "FAILED(CORES)", "CORES", str(e)
        return cert
    cert.dual_complex = D
    cert.depth_dual = depth_condition(Ns, Ms, D)
    ok, positions, witnesses, maps = _coresolution(M, D)
    cert.cores_complex = maps
    cert.cores_positions = positions
    cert.cores_exact = ok
    cert.cores_witnesses = witnesses
    if not cert.x_exact:
        cert.verdict, cert.stage = "FAILED(EXT)", "EXT"
        cert.message = "X is not exact: Ext^i(T, T) != 0 for some i > 0"
        return cert
    if not ok:
        cert.verdict, cert.stage = "FAILED(CORES)", "CORES"
        cert.message = "dual construction does not give an add T coresolution"
        return cert
    cert.verdict = "MORITA_PROGENERATOR" if d == 2 else "TILTING"
    return cert


def _coresolution(M, D):
    """Dualize 0 -> P_L -> ... -> P_0 -> M* and apply Hom(M, -)."""
    Rm = M.ring.unit_module()
    duals = [hom_right(f, Rm) for f in D.maps]   # (M*)* -> P_0*, P_0* -> P_1*, ...
    maps = [hom_left(M, g) for g in duals]
    positions = homology_is_zero(maps)
    witnesses = []
    # P_i = sum N_k*(t) gives T_i = Hom(M, P_i*) = sum Hom(M, N_k)(-t), via N_k = N_k**
    for i, obj in enumerate(D.terms):
        witnesses.append({"term": i, "summands_of_T": [{"summand": k, "twist": -t} for k, t in obj.multiset()]})
    return all(positions), positions, witnesses, maps


@dataclass
class MoritaReport:
    verdict: bool
    T: object
    m_in_add_n: list
    n_in_add_m: list


def morita_check(M, N):
    R = M.ring
    _require_cm(R)
    if R.dim != 2:
        raise WrongDimension("Morita check applies to dimension 2 (got %d)" % R.dim)
    a = [add_membership(N, X)[0] for X in summand_modules(M)]
    b = [add_membership(M, X)[0] for X in summand_modules(N)]
    return MoritaReport(all(a) and all(b), hom(M, N), a, b)


@dataclass
class DerivedEquivReport:
    verdict: str
    derived_equivalent: bool
    certificate: object = None
    morita: object = None
    nccr_reports: list = field(default_factory=list)


def derived_equiv(M, N, nonsingularity=(UNCHECKED, UNCHECKED)):
    R = M.ring
    _require_cm(R)
    reps = [check_nccr_necessary(M, nonsingularity[0]), check_nccr_necessary(N, nonsingularity[1])]
    if not all(r.passed for r in reps):
        return DerivedEquivReport("FAILED(NCCR)", False, nccr_reports=reps)
    if R.dim == 2:
        mo = morita_check(M, N)
        return DerivedEquivReport("MORITA_PROGENERATOR" if mo.verdict else "NOT_MORITA",
                                  mo.verdict, morita=mo, nccr_reports=reps)
    cert = certify_tilting(M, N)
    return DerivedEquivReport(cert.verdict, cert.verdict == "TILTING", certificate=cert, nccr_reports=reps)


# -- acyclicity -------------------------------------------------------------

@dataclass
class AcyclicityReport:
    term_depths: list
    homology_zero: list
    homology_finite_length: list
    depth_hypotheses: bool
    hypotheses: bool
    verdict: str

    @property
    def exact(self):
        return all(self.homology_zero)


def acyclicity_check(maps, d):
    """Depth/finite-length hypotheses of the acyclicity lemma against the
    computed homology of 0 -> X^0 -> ... -> X^k -> 0.

    Verdicts: EXACT, NOT_EXACT (hypotheses hold only partially or not at
    all), HYPOTHESES_UNMET, INCONSISTENT (hypotheses hold yet homology is
    nonzero, which cannot happen for a correct engine).
    """
    zero = homology_is_zero(maps)
    terms = [f.source for f in maps] + [maps[-1].target]
    depths = [X.depth() for X in terms]
    finite = []
    for pos, z in enumerate(zero):
        finite.append(True if z else is_finite_length(homology_module(maps, pos)))
    dep_ok = all(depths[i] >= d - i for i in range(len(terms)))
    high_ok = all(zero[i] for i in range(d, len(zero)))
    hyps = dep_ok and high_ok and all(finite)
    if hyps:
        verdict = "EXACT" if all(zero) else "INCONSISTENT"
    else:
        verdict = "HYPOTHESES_UNMET" if not all(zero) else "EXACT"
    return AcyclicityReport(depths, zero, finite, dep_ok, hyps, verdict)
