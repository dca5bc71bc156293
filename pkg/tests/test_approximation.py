import pytest

from nccr_kit.approximation import (NotInAddM, add_membership, build_approx_complex, euler_check,
                                    is_approximation, right_approximation, summand_modules,
                                    truncated, verify_hom_resolution)
from nccr_kit.modules import (compose, hom, identity_map, is_isomorphism, is_surjective,
                              maps_equal, minimal_generators, shift)
from nccr_kit.tilting import dual_sum

from oracles import Slices, as_map, pres


def test_free_base_gives_free_cover(cf):
    R, m = cf
    obj, f = right_approximation(R.unit_module(), m["J"])
    assert obj.multiset() == [(0, -1), (0, -1)]
    assert is_surjective(f)


def test_summand_target_gives_identity(a1):
    R, m = a1
    obj, f = right_approximation(m["M"], m["I"])
    assert obj.multiset() == [(1, 0)]
    assert is_isomorphism(f)


def test_conifold_approximation_of_J(cf):
    R, m = cf
    M, J = m["M"], m["J"]
    O = Slices.of_ring(R)
    # Hom(R, J) and Hom(I, J) are generated in degree 1 by 2 and 3 maps: nothing
    # below degree 1, and the degree-1 slices have those dimensions
    assert [O.hom_dim(pres(R.unit_module()), pres(J), t) for t in (0, 1)] == [0, 2]
    assert [O.hom_dim(pres(m["I"]), pres(J), t) for t in (0, 1)] == [0, 3]
    obj, f = right_approximation(M, J, minimal=False)
    assert obj.multiset() == [(0, -1), (0, -1), (1, -1), (1, -1), (1, -1)]
    assert is_approximation(M, f)
    # the maps out of I factor through R(-1)^2, so the minimal approximation is free
    obj, f = right_approximation(M, J)
    assert obj.multiset() == [(0, -1), (0, -1)]
    assert is_approximation(M, f)


def test_conifold_complex(cf):
    R, m = cf
    M, J = m["M"], m["J"]
    C = build_approx_complex(M, J, 3)
    assert C.length == 1
    assert C.terms[0].multiset() == [(0, -1), (0, -1)]
    assert C.terms[1].multiset() == [(1, -1)]
    assert verify_hom_resolution(C)
    # 0 -> I(-1) -> R(-1)^2 -> J -> 0 is exact, checked slice by slice
    O = Slices.of_ring(R)
    f0, f1 = C.maps
    for t in range(0, 5):
        assert O.kernel_dim(as_map(f1), t) == 0
        assert O.homology_dim(as_map(f1), as_map(f0), t) == 0
        assert O.dim(pres(J), t) == O.image_dim(as_map(f0), t)
    assert euler_check(C, 4)


def test_truncated_complex_fails(cf):
    R, m = cf
    C = build_approx_complex(m["M"], m["J"], 3)
    T = truncated(C, 1)
    assert not verify_hom_resolution(T)
    # the missing kernel shows up at Hom(M, M_0)
    assert T.verification["positions"] == [False, True]


def test_non_generator_raises(cf):
    R, m = cf
    with pytest.raises(NotInAddM) as err:
        build_approx_complex(R.unit_module(), m["I"], 3)
    assert err.value.step == 1


def test_add_membership_examples(cf):
    R, m = cf
    M, I = m["M"], m["I"]
    for X in summand_modules(M):
        assert add_membership(M, X)[0]
    ok, s = add_membership(M, shift(I, -2))
    assert ok
    assert not add_membership(R.unit_module(), I)[0]
    # oracle: the evaluation R(-1)^2 -> I has no section
    obj, f = right_approximation(R.unit_module(), I)
    assert not Slices.of_ring(R).has_section(as_map(f))


def test_membership_section_is_a_witness(cf):
    R, m = cf
    X = shift(m["I"], 1)
    ok, s = add_membership(m["M"], X)
    obj, f = right_approximation(m["M"], X)
    assert ok
    assert maps_equal(compose(f, s), identity_map(X))


def test_length_zero_complex_when_target_in_add(a1, ver3):
    R, m = a1
    C = build_approx_complex(m["M"], m["I"], 2)
    assert C.length == 0
    assert verify_hom_resolution(C)
    M = ver3.nccr_module()
    C = build_approx_complex(M, M, 3)
    assert C.length == 0 and verify_hom_resolution(C)


def _check_complex(C, d):
    M = C.base
    assert C.length <= d - 2
    for a, b in zip(C.maps[1:], C.maps):
        assert compose(b, a).is_zero()
    assert verify_hom_resolution(C)
    assert is_approximation(M, C.maps[0])


@pytest.mark.parametrize("which", ["conifold", "conifold_swapped", "a2_dual", "ver3_dual"])
def test_complex_properties(which, cf, a2, ver3):
    if which == "conifold":
        M, N, d = cf[1]["M"], cf[1]["N"], 3
    elif which == "conifold_swapped":
        M, N, d = cf[1]["N"], cf[1]["M"], 3
    elif which == "a2_dual":
        M = a2.nccr_module()
        N, d = dual_sum(M), 2
    else:
        M = ver3.nccr_module()
        N, d = dual_sum(M), 3
    C = build_approx_complex(M, N, d)
    _check_complex(C, d)


def test_dual_of_conifold_generator(cf):
    R, m = cf
    Ms = dual_sum(m["M"])
    assert [minimal_generators(X)[0] for X in summand_modules(Ms)] == [[0], [0, 0]]
    E = hom(Ms, Ms)
    assert E.depth() == 3
