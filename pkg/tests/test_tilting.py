import pytest

from nccr_kit.approximation import summand_modules
from nccr_kit.modules import (ModuleMap, NotAComplex, NotCohenMacaulay, QuotientRing, compose,
                              direct_sum, identity_map, zero_map, zero_module)
from nccr_kit.poly import GradedPolyRing
from nccr_kit.tilting import (ASSERTED, DegenerateInput, WrongDimension, acyclicity_check,
                              certify_tilting, check_nccr_necessary, depth_condition,
                              derived_equiv, dual_sum, morita_check)


def ring(names, weights=None, ideal=()):
    S = GradedPolyRing(names, weights)
    return QuotientRing(S, [S.parse(p) for p in ideal])


def v(R, *entries):
    out = {}
    for j, text in enumerate(entries):
        for e, a in R.S.parse(text).coeffs.items():
            out[(j, e)] = a
    return out


@pytest.fixture(scope="module")
def poly2():
    return ring(["x", "y"])


@pytest.fixture(scope="module")
def conifold_cert(cf):
    return certify_tilting(cf[1]["M"], cf[1]["N"])


# -- necessary NCCR checks -------------------------------------------------------

def test_nccr_free_module_over_polynomial_ring(poly2):
    rep = check_nccr_necessary(poly2.unit_module())
    assert rep.passed and rep.end_depth == 2


def test_nccr_a1(a1):
    R, m = a1
    rep = check_nccr_necessary(m["M"], ASSERTED)
    assert rep.reflexive == [True, True]
    assert rep.end_depth == 2 and rep.passed
    assert rep.to_dict()["nonsingularity"] == ASSERTED


def test_nccr_conifold(cf):
    R, m = cf
    for key in ("M", "N"):
        rep = check_nccr_necessary(m[key])
        assert rep.passed and rep.end_depth == 3


def test_nccr_fails_with_residue_field(poly2):
    M = direct_sum([poly2.unit_module(), poly2.residue_field()])
    rep = check_nccr_necessary(M)
    assert rep.reflexive == [True, False]
    assert not rep.end_maximal_cm and not rep.passed


def test_nccr_errors(poly2):
    bad = ring(["x", "y"], None, ["x^2", "x*y"])
    with pytest.raises(NotCohenMacaulay):
        check_nccr_necessary(bad.unit_module())
    with pytest.raises(WrongDimension):
        check_nccr_necessary(ring(["x"]).unit_module())
    with pytest.raises(DegenerateInput):
        check_nccr_necessary(zero_module(poly2))


# -- depth condition --------------------------------------------------------------

def test_depth_condition_empty_in_dimension_two(a1):
    R, m = a1
    rep = depth_condition(m["M"], m["M"])
    assert rep.entries == [] and rep.passed and rep.vacuous


def test_depth_condition_conifold(cf):
    R, m = cf
    rep = depth_condition(m["M"], m["N"])
    assert [e.index for e in rep.entries] == [0, 1]
    assert all(e.automatic for e in rep.entries)
    assert [e.bound for e in rep.entries] == [2, 1]
    assert rep.passed


# -- tilting certificates --------------------------------------------------------

def test_conifold_tilting(conifold_cert):
    c = conifold_cert
    assert c.verdict == "TILTING"
    assert c.pd_bound == 1 and c.projres_exact
    assert c.x_exact and c.x_positions == [True, True, True]
    assert c.cores_exact
    assert c.dual_complex.length == 1
    assert c.depth_MN.passed and c.depth_dual.passed
    assert c.acyclicity == "EXACT"


def test_conifold_swapped(cf):
    assert certify_tilting(cf[1]["N"], cf[1]["M"]).verdict == "TILTING"


def test_a1_is_progenerator(a1):
    R, m = a1
    c = certify_tilting(m["M"], m["M"])
    assert c.verdict == "MORITA_PROGENERATOR"
    assert c.pd_bound == 0


def test_non_generator_fails_at_complex(cf):
    R, m = cf
    c = certify_tilting(R.unit_module(), m["M"])
    assert c.verdict == "FAILED(COMPLEX)" and c.stage == "COMPLEX"
    assert "not in add M" in c.message


def test_failing_nccr_report_stops_early(cf, poly2):
    R, m = cf
    bad = check_nccr_necessary(direct_sum([poly2.unit_module(), poly2.residue_field()]))
    c = certify_tilting(m["M"], m["N"], reports=[bad])
    assert c.verdict == "FAILED(NCCR)"


def test_certify_rejects_non_cm():
    bad = ring(["x", "y"], None, ["x^2", "x*y"])
    with pytest.raises(NotCohenMacaulay, match="Cohen-Macaulay"):
        certify_tilting(bad.unit_module(), bad.unit_module())


# -- Morita ----------------------------------------------------------------------

def test_morita_a1(a1):
    R, m = a1
    Md = dual_sum(m["M"])
    # the dual of the ideal is again isomorphic to a twist of it
    assert [X.rank for X in summand_modules(Md)] == [1, 2]
    rep = morita_check(m["M"], Md)
    assert rep.verdict and rep.m_in_add_n == [True, True] and rep.n_in_add_m == [True, True]


def test_morita_same_module(a1):
    R, m = a1
    assert morita_check(m["M"], m["M"]).verdict


def test_morita_fails_without_generator(a1):
    R, m = a1
    rep = morita_check(m["M"], R.unit_module())
    assert not rep.verdict and rep.m_in_add_n == [True, False]


def test_morita_wrong_dimension(cf):
    with pytest.raises(WrongDimension):
        morita_check(cf[1]["M"], cf[1]["M"])


# -- acyclicity ------------------------------------------------------------------

def test_acyclicity_identity(poly2):
    rep = acyclicity_check([identity_map(poly2.unit_module())], 2)
    assert rep.hypotheses and rep.exact and rep.verdict == "EXACT"


def test_acyclicity_koszul():
    R = ring(["x", "y", "z"])
    F0, F1, F2, F3 = R.free([3]), R.free([2, 2, 2]), R.free([1, 1, 1]), R.free([0])
    d0 = ModuleMap(F0, F1, [v(R, "z", "-y", "x")])
    d1 = ModuleMap(F1, F2, [v(R, "y", "-x", "0"), v(R, "z", "0", "-x"), v(R, "0", "z", "-y")])
    d2 = ModuleMap(F2, F3, [v(R, "x"), v(R, "y"), v(R, "z")])
    for a, b in ((d0, d1), (d1, d2)):
        assert compose(b, a).is_zero()
    rep = acyclicity_check([d0, d1, d2], 3)
    assert rep.term_depths == [3, 3, 3, 3]
    assert rep.depth_hypotheses
    # exact except at the last term, whose homology is the residue field
    assert rep.homology_zero == [True, True, True, False]
    assert rep.homology_finite_length[3]
    assert rep.verdict != "INCONSISTENT"


def test_acyclicity_zero_map(poly2):
    F = poly2.unit_module()
    rep = acyclicity_check([zero_map(F, F)], 2)
    assert rep.homology_finite_length[0] is False
    assert not rep.hypotheses
    assert rep.verdict == "HYPOTHESES_UNMET"


def test_acyclicity_not_a_complex(poly2):
    F = poly2.unit_module()
    with pytest.raises(NotAComplex):
        acyclicity_check([identity_map(F), identity_map(F)], 2)


# -- derived equivalence -----------------------------------------------------------

def test_derived_equiv_conifold(cf):
    rep = derived_equiv(cf[1]["M"], cf[1]["N"])
    assert rep.verdict == "TILTING" and rep.derived_equivalent
    assert rep.certificate.x_exact


def test_derived_equiv_a1(a1):
    R, m = a1
    rep = derived_equiv(m["M"], dual_sum(m["M"]))
    assert rep.verdict == "MORITA_PROGENERATOR" and rep.derived_equivalent
    assert rep.morita.T.rank > 0


def test_derived_equiv_refuses_failing_inputs(poly2):
    M = direct_sum([poly2.unit_module(), poly2.residue_field()])
    rep = derived_equiv(M, poly2.unit_module())
    assert rep.verdict == "FAILED(NCCR)" and not rep.derived_equivalent
