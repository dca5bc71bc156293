"""Right add(M)-approximations and the approximation complex.

``M`` is a direct sum of summands ``M^(k)``; objects of add M are recorded
as multisets of (summand index, twist) so membership is witnessed by
construction.
"""

from dataclasses import dataclass, field

from .groebner import GBState
from .modules import (ModuleMap, PresentedModule, compose, direct_sum, hom,
                      hom_left, homology_is_zero, is_injective, is_reflexive,
                      find_section, kernel, shift, zero_module)


class NotInAddM(RuntimeError):
    """The last kernel of the approximation complex is not in add M."""

    def __init__(self, message, step=None, module=None):
        super().__init__(message)
        self.step = step
        self.module = module


@dataclass
class AddMObject:
    base: PresentedModule
    parts: list  # (summand index, extra twist)
    module: PresentedModule

    def multiset(self):
        return sorted(self.parts)

    def describe(self):
        return [{"summand": k, "twist": t} for k, t in self.multiset()]


def summand_modules(M):
    """The shifted summands M^(k) of M as separate modules."""
    out = []
    for base, twist, _ in M.base_summands():
        out.append(shift(base, twist) if twist else base)
    return out


def realize(M, parts):
    summ = M.base_summands()
    if not parts:
        return AddMObject(M, [], zero_module(M.ring))
    mod = direct_sum([(summ[k][0], summ[k][1] + t) for k, t in parts])
    return AddMObject(M, list(parts), mod)


def _candidates(M, N):
    cands = []
    for k, Mk in enumerate(summand_modules(M)):
        H = hom(Mk, N)
        for i, t in enumerate(H.degrees):
            cands.append({"k": k, "i": i, "degree": t, "map": H.gen_map(i)})
    cands.sort(key=lambda c: (c["k"], c["degree"], c["i"]))
    return cands


def _redundant(M, N, cand, others):
    """Whether cand's map lies in the sum of others o Hom(M^(k), M^(k'))."""
    k = cand["k"]
    mods = summand_modules(M)
    H = hom(mods[k], N)
    st = GBState.from_gb(H.gb_elements, H.order, H.K)
    for o in others:
        E = hom(mods[k], mods[o["k"]])
        for j in range(len(E.degrees)):
            h = E.gen_map(j)
            g = compose(o["map"], h)
            v = H.encode(g)
            if v:
                st.add(v)
    st.complete(cand["degree"])
    return st.contains(H.unit(cand["i"]))


def right_approximation(M, N, minimal=True, check=True):
    """(AddMObject M0, f: M0 -> N) with Hom(M, M0) -> Hom(M, N) onto.

    Built from the generators of Hom(M^(k), N); with ``minimal`` the
    generators that factor through the others are dropped (highest
    degree first), which yields the minimal approximation.
    """
    cands = _candidates(M, N)
    if minimal:
        keep = list(cands)
        for c in sorted(cands, key=lambda c: (-c["degree"], -c["k"], -c["i"])):
            others = [o for o in keep if o is not c]
            if others and _redundant(M, N, c, others):
                keep = others
        cands = [c for c in cands if any(c is o for o in keep)]
    parts = [(c["k"], -c["degree"]) for c in cands]
    obj = realize(M, parts)
    mat = []
    for c in cands:
        mat.extend(c["map"].matrix)
    f = ModuleMap(obj.module, N, mat, check=False)
    if check and not is_approximation(M, f):
        raise AssertionError("approximation property failed")
    return obj, f


def is_approximation(M, f):
    """Every map from a summand of M into the target factors through f."""
    for Mk in summand_modules(M):
        HN = hom(Mk, f.target)
        if not HN.degrees:
            continue
        st = GBState.from_gb(HN.gb_elements, HN.order, HN.K)
        if f.source.rank:
            HA = hom(Mk, f.source)
            for j in range(len(HA.degrees)):
                v = HN.encode(compose(f, HA.gen_map(j)))
                if v:
                    st.add(v)
        st.complete()
        if not all(st.contains(HN.unit(i)) for i in range(len(HN.degrees))):
            return False
    return True


def add_membership(M, X):
    """(X in add M, section witness) via the minimal right approximation."""
    if X.is_zero():
        return True, None
    obj, f = right_approximation(M, X)
    if not obj.parts:
        return False, None
    s = find_section(f)
    return s is not None, s


@dataclass
class ApproxComplex:
    base: PresentedModule
    target: PresentedModule
    d: int
    terms: list = field(default_factory=list)     # AddMObjects M_0, ..., M_L
    maps: list = field(default_factory=list)      # M_0 -> N, M_1 -> M_0, ...
    kernels: list = field(default_factory=list)   # K_1, ..., kernels along the way
    final_section: object = None
    verification: dict = field(default_factory=dict)

    @property
    def length(self):
        return len(self.terms) - 1

    def chain(self):
        """Maps in cochain order: M_L -> ... -> M_0 -> N."""
        return list(reversed(self.maps))


def build_approx_complex(M, N, d, check_reflexive=True):
    """0 -> M_{d-2} -> ... -> M_0 -> N -> 0 from minimal approximations."""
    if d < 2:
        raise ValueError("needs dimension at least 2")
    C = ApproxComplex(M, N, d)
    cur = N
    inc_prev = None
    for i in range(d - 1):
        last = i == d - 2
        obj, f = right_approximation(M, cur)
        if last:
            s = find_section(f)
            if s is None or not is_injective(f):
                raise NotInAddM("kernel at step %d is not in add M" % i, step=i, module=cur)
            C.final_section = s
        C.terms.append(obj)
        C.maps.append(f if inc_prev is None else compose(inc_prev, f))
        if last:
            break
        Kn, inc = kernel(f)
        if Kn.rank == 0 or Kn.is_zero():
            break
        if check_reflexive and not is_reflexive(Kn):
            raise AssertionError("kernel of a map between reflexive modules is not reflexive")
        C.kernels.append(Kn)
        cur = Kn
        inc_prev = inc
    return C


def verify_hom_resolution(C):
    """Exactness of 0 -> Hom(M, M_L) -> ... -> Hom(M, M_0) -> Hom(M, N) -> 0."""
    M = C.base
    maps = [hom_left(M, f) for f in C.chain()]
    flags = homology_is_zero(maps)
    C.verification = {"hom_maps": maps, "positions": flags, "exact": all(flags)}
    return all(flags)


def truncated(C, drop):
    """A copy of C with the last ``drop`` terms removed (a test device)."""
    T = ApproxComplex(C.base, C.target, C.d)
    T.terms = C.terms[:len(C.terms) - drop]
    T.maps = C.maps[:len(C.maps) - drop]
    T.kernels = C.kernels
    return T


def euler_check(C, cap):
    """sum_i (-1)^i dim Hom(M, M_i)_t = dim Hom(M, N)_t for all t <= cap."""
    M = C.base
    mods = [hom(M, C.target)] + [hom(M, t.module) for t in C.terms if t.parts]
    lows = [min(H.degrees) for H in mods if H.degrees]
    if not lows:
        return True
    for t in range(min(lows), cap + 1):
        total = mods[0].hilbert_value(t)
        alt = sum((-1) ** i * H.hilbert_value(t) for i, H in enumerate(mods[1:]))
        if total != alt:
            return False
    return True
