"""The acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import json
import math
import time
from pathlib import Path

import pytest

from nccr_kit.approximation import (NotInAddM, build_approx_complex, right_approximation,
                                    verify_hom_resolution)
from nccr_kit.builtins import a1_singularity, conifold, gen_cyclic_quotient
from nccr_kit.certificate import emit_certificate, replay_certificate
from nccr_kit.cli import EXIT_INPUT, EXIT_OK, execute
from nccr_kit.groebner import buchberger, syzygies
from nccr_kit.modules import (ModuleMap, NotCohenMacaulay, QuotientRing, canonical_module,
                              cokernel, depth_via_canonical, direct_sum, dual,
                              ext_module, hom, is_reflexive, kernel)
from nccr_kit.poly import GradedPolyRing
from nccr_kit.resolution import schreyer_resolution
from nccr_kit.tilting import certify_tilting, check_nccr_necessary, derived_equiv, dual_sum

from instances import combine, random_instance

SESSIONS = Path(__file__).resolve().parent.parent / "sessions"


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print("\nACCEPTANCE %d: %s  %s" % (number, "PASS" if ok else "FAIL", detail))
        assert ok, detail
    return emit


def poly3():
    S = GradedPolyRing(["x", "y", "z"])
    return QuotientRing(S, [], name="P")


def structural_pairs():
    """(label, M, N) for the bundled structural NCCRs with d <= 3."""
    R, m = conifold()
    A, am = a1_singularity()
    a2 = gen_cyclic_quotient(3, [1, 2])
    v3 = gen_cyclic_quotient(2, [1, 1, 1])
    M2 = a2.nccr_module()
    M3 = v3.nccr_module()
    return [("A1", am["M"], dual_sum(am["M"])),
            ("A2", M2, dual_sum(M2)),
            ("conifold", m["M"], m["N"]),
            ("veronese3", M3, M3),
            ("conifold swapped", m["N"], m["M"])]


def module_corpus():
    out = []
    R, m = conifold()
    k = R.residue_field()
    F = R.unit_module()
    u = ModuleMap(R.free([1]), F, [{(0, (1, 0, 0, 0)): R.K.one}])
    out += [("C", F), ("C:I", m["I"]), ("C:J", m["J"]), ("C:k", k),
            ("C:I+J", direct_sum([m["I"], m["J"]])),
            ("C:Hom(I,J)", hom(m["I"], m["J"])), ("C:Hom(J,I)", hom(m["J"], m["I"])),
            ("C:Hom(M,N)", hom(m["M"], m["N"])),
            ("C:Ext3(k,R)", ext_module(3, k, F)), ("C:Ext1(k,I)", ext_module(1, k, m["I"])),
            ("C:ker(R^2->I)", kernel(right_approximation(F, m["I"])[1])[0]),
            ("C:ker(M0->J)", kernel(right_approximation(m["M"], m["J"])[1])[0]),
            ("C:R/(u)", cokernel(u))]
    A, am = a1_singularity()
    kA = A.residue_field()
    out += [("A1", A.unit_module()), ("A1:I", am["I"]), ("A1:k", kA),
            ("A1:End(I)", hom(am["I"], am["I"])), ("A1:I*", dual(am["I"])),
            ("A1:Ext1(I,I)", ext_module(1, am["I"], am["I"])),
            ("A1:Ext2(k,R)", ext_module(2, kA, A.unit_module())),
            ("A1:ker(R^2->I)", kernel(right_approximation(A.unit_module(), am["I"])[1])[0])]
    a2 = gen_cyclic_quotient(3, [1, 2])
    E = a2.eigenmodules
    out += [("A2:E%d" % i, X) for i, X in enumerate(E)]
    out += [("A2:Hom(E1,E2)", hom(E[1], E[2])), ("A2:Ext1(E1,E2)", ext_module(1, E[1], E[2]))]
    v3 = gen_cyclic_quotient(2, [1, 1, 1])
    out += [("V3:E1", v3.eigenmodules[1]), ("V3:omega", canonical_module(v3.ring)),
            ("V3:End(E1)", hom(v3.eigenmodules[1], v3.eigenmodules[1])),
            ("V3:k", v3.ring.residue_field())]
    P = poly3()
    out += [("P:(x,y)", P.ideal(["x", "y"])), ("P:(x,y,z)", P.ideal(["x", "y", "z"])),
            ("P:k", P.residue_field()), ("P:(x^2,xy)", P.ideal(["x^2", "x*y"])),
            ("P:Ext2(k,P)", ext_module(2, P.residue_field(), P.unit_module()))]
    return out


def test_1_conifold_derived_equivalence(report):
    R, m = conifold()
    t0 = time.perf_counter()
    rep = derived_equiv(m["M"], m["N"])
    elapsed = time.perf_counter() - t0
    c = rep.certificate
    dep = c.depth_MN
    ok = (rep.verdict == "TILTING" and c.pd_bound <= 1 == R.dim - 2 and c.x_exact
          and c.dual_complex.length == 1 and c.cores_exact
          and dep.passed and all(e.automatic for e in dep.entries) and elapsed < 60)
    report(1, ok, "verdict=%s pd=%s X exact=%s coresolution length=%d time=%.2fs"
           % (rep.verdict, c.pd_bound, c.x_exact, c.dual_complex.length, elapsed))


def test_2_a1_morita(report):
    A, am = a1_singularity()
    t0 = time.perf_counter()
    res = execute((SESSIONS / "a1_morita.nccr").read_text())
    elapsed = time.perf_counter() - t0
    tc = res.certificate["tilting_certificate"]
    rep = derived_equiv(am["M"], dual_sum(am["M"]))
    T = hom(am["M"], dual_sum(am["M"]))
    recorded = [str(a) for a in tc["T"]["degrees"]]
    ok = (tc["verdict"] == "MORITA_PROGENERATOR" and rep.verdict == "MORITA_PROGENERATOR"
          and recorded == [str(a) for a in T.degrees] and elapsed < 10)
    report(2, ok, "verdict=%s progenerator degrees=%s time=%.2fs"
           % (tc["verdict"], tc["T"]["degrees"], elapsed))


def test_3_depth_route_agrees_with_x_exactness(report):
    rows = []
    disagreements = 0
    for label, M, N in structural_pairs():
        c = certify_tilting(M, N)
        a = c.depth_MN.passed
        b = bool(c.x_exact)
        rows.append("%s: depth=%s X=%s" % (label, a, b))
        if not (a and b):
            disagreements += 1
    report(3, disagreements == 0 and len(rows) >= 5, "; ".join(rows))


def test_4_depth_double_computation(report):
    corpus = module_corpus()
    bad = []
    for name, X in corpus:
        a, b = X.depth(), depth_via_canonical(X)
        if a != b:
            bad.append("%s (%s vs %s)" % (name, a, b))
    # a non-trivial corpus: several depths represented
    spread = sorted({str(X.depth()) for _, X in corpus})
    report(4, len(corpus) >= 25 and not bad,
           "%d modules, depths seen %s, mismatches %s" % (len(corpus), spread, bad or "none"))


def test_5_hom_depth_of_reflexive_pairs(report):
    families = []
    R, m = conifold()
    families.append([R.unit_module(), m["I"], m["J"], dual(m["I"])])
    A, am = a1_singularity()
    families.append([A.unit_module(), am["I"], dual(am["I"])])
    families.append(list(gen_cyclic_quotient(3, [1, 2]).eigenmodules))
    v3 = gen_cyclic_quotient(2, [1, 1, 1])
    families.append(list(v3.eigenmodules) + [canonical_module(v3.ring)])
    pairs, worst, bad = 0, math.inf, []
    for fam in families:
        assert all(is_reflexive(X) for X in fam)
        for X in fam:
            for Y in fam:
                d = hom(X, Y).depth()
                pairs += 1
                worst = min(worst, d)
                if d < 2:
                    bad.append((X.name, Y.name, d))
    report(5, not bad, "%d reflexive pairs, minimum Hom depth %s" % (pairs, worst))


def test_6_complex_length_bound(report):
    rows = []
    ok = True
    for label, M, N in structural_pairs():
        d = M.ring.dim
        C = build_approx_complex(M, N, d)
        good = C.length <= d - 2 and verify_hom_resolution(C)
        ok = ok and good
        rows.append("%s: length %d" % (label, C.length))
    R, m = conifold()
    try:
        build_approx_complex(R.unit_module(), m["I"], R.dim)
        negative = False
    except NotInAddM:
        negative = True
    res = execute((SESSIONS / "negative_control.nccr").read_text())
    negative = negative and any(t.get("verdict") == "NOT_ADD_M" for t in res.tasks)
    report(6, ok and negative, "; ".join(rows) + "; negative control NOT_ADD_M=%s" % negative)


def test_7_engine_soundness(report):
    n, failures = 0, []
    for seed in range(120):
        inst = random_instance(seed, max_vars=3)
        gb = buchberger(inst.gens, inst.order, inst.K)
        nf = all(gb.normal_form(g) == {} for g in inst.gens)
        idem = buchberger(gb.elements, inst.order, inst.K).elements == gb.elements
        ann = all(combine(s, inst.gens, inst.K) == {}
                  for s in syzygies(inst.gens, inst.order, inst.K))
        res = schreyer_resolution(inst.gens, inst.order, inst.K)
        comp = res.is_complex() and res.minimalize().is_complex()
        n += 1
        if not (nf and idem and ann and comp):
            failures.append(seed)
    report(7, n > 100 and not failures, "%d random instances, failures %s" % (n, failures or "none"))


def test_8_veronese4_run(report):
    text = (SESSIONS / "veronese4.nccr").read_text()
    t0 = time.perf_counter()
    res = execute(text)
    data = json.loads(emit_certificate(res.certificate))
    ok, results = replay_certificate(data)
    elapsed = time.perf_counter() - t0
    verdict = data["tilting_certificate"]["verdict"]
    report(8, res.code == EXIT_OK and ok and elapsed < 1800,
           "verdict=%s replay=%s stages=%d time=%.1fs"
           % (verdict, "MATCH" if ok else "MISMATCH", len(results), elapsed))


def test_9_cm_gatekeeping(report):
    S = GradedPolyRing(["x", "y"])
    B = QuotientRing(S, [S.parse("x^2"), S.parse("x*y")], name="B")
    msgs = []
    for call in (lambda: canonical_module(B),
                 lambda: certify_tilting(B.unit_module(), B.unit_module()),
                 lambda: check_nccr_necessary(B.unit_module())):
        try:
            call()
            msgs.append(None)
        except NotCohenMacaulay as e:
            msgs.append(str(e))
    res = execute((SESSIONS / "not_cm.nccr").read_text())
    cli_ok = (res.code == EXIT_INPUT
              and res.certificate["tilting_certificate"]["verdict"] == "REJECTED(NOT_CM)")
    ok = all(m and "Cohen-Macaulay" in m for m in msgs) and cli_ok and not B.is_cm
    report(9, ok, "diagnostic: %s; session exit code %d" % (msgs[0], res.code))
