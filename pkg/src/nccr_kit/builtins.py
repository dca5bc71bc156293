"""Built-in example families: hypersurfaces, cyclic quotient singularities
(by elimination) and the conifold pair."""

import re
from dataclasses import dataclass, field as dc_field
from itertools import product
from math import gcd

from .field import QQ
from .groebner import GBState, InhomogeneousError, ModuleOrder
from .modules import PresentedModule, QuotientRing, direct_sum, _minimize
from .poly import GradedPolyRing, MonomialOrder

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def gen_hypersurface(f, weights, names=None, field=QQ, name="R"):
    """S/(f) for homogeneous f; variables default to order of appearance."""
    if names is None:
        names = []
        for tok in _IDENT.findall(f):
            if tok not in names:
                names.append(tok)
    S = GradedPolyRing(names, weights, field)
    p = S.parse(f)
    if not p.is_homogeneous():
        raise InhomogeneousError("hypersurface equation is not homogeneous")
    R = QuotientRing(S, [p], name=name)
    if R.dim != S.nvars - 1 or not R.is_cm:
        raise AssertionError("hypersurface has unexpected dimension")
    return R


def conifold(field=QQ):
    """uv - xy with the ideals I = (u, x), J = (u, y) and M = R+I, N = R+J."""
    R = gen_hypersurface("u*v - x*y", [1, 1, 1, 1], field=field, name="C")
    I = R.ideal(["u", "x"], name="I")
    J = R.ideal(["u", "y"], name="J")
    M = direct_sum([R.unit_module(), I], name="M")
    N = direct_sum([R.unit_module(), J], name="N")
    return R, {"I": I, "J": J, "M": M, "N": N}


def a1_singularity(field=QQ):
    R = gen_hypersurface("x*y - z^2", [2, 2, 2], field=field, name="A1")
    I = R.ideal(["x", "z"], name="I")
    return R, {"I": I, "M": direct_sum([R.unit_module(), I], name="M")}


# -- cyclic quotients ------------------------------------------------------------

def _monomials_upto(r, dmax):
    for e in product(range(dmax + 1), repeat=r):
        if 0 < sum(e) <= dmax:
            yield e


def _weight(e, w, n):
    return sum(a * b for a, b in zip(e, w)) % n


def _has_invariant_divisor(e, w, n, proper):
    """Is there a nonconstant invariant monomial dividing e (strictly, if proper)?"""
    for f in product(*[range(a + 1) for a in e]):
        if not any(f):
            continue
        if proper and f == tuple(e):
            continue
        if _weight(f, w, n) == 0:
            return True
    return False


def _sort_monomials(mons):
    pure = [m for m in mons if sum(1 for a in m if a) == 1]
    mixed = [m for m in mons if sum(1 for a in m if a) > 1]
    pure.sort(key=lambda m: [i for i, a in enumerate(m) if a][0])
    mixed.sort(key=lambda m: (sum(m), tuple(-a for a in m)))
    return pure + mixed


def invariant_generators(n, w):
    r = len(w)
    mons = [e for e in _monomials_upto(r, n)
            if _weight(e, w, n) == 0 and not _has_invariant_divisor(e, w, n, proper=True)]
    return _sort_monomials(mons)


def semi_invariant_generators(n, w, c):
    """Minimal monomial generators of the c-isotypic part over the invariants."""
    r = len(w)
    if c % n == 0:
        return [(0,) * r]
    mons = [e for e in _monomials_upto(r, n - 1)
            if _weight(e, w, n) == c % n and not _has_invariant_divisor(e, w, n, proper=False)]
    mons.sort(key=lambda m: (sum(m), tuple(-a for a in m)))
    return mons


@dataclass
class CyclicQuotient:
    n: int
    weights: tuple
    ring: QuotientRing
    invariants: list
    eigenmodules: list
    faithful: bool
    small: bool
    elimination_gb_size: int
    relation_count: int
    structural: bool = False
    semi_invariants: list = dc_field(default_factory=list)

    def nccr_module(self):
        M = direct_sum(list(self.eigenmodules), name="M")
        return M


def _elim_ring(r, inv, field):
    names = ["t%d" % i for i in range(r)] + ["x%d" % j for j in range(len(inv))]
    weights = [1] * r + [sum(m) for m in inv]
    order = MonomialOrder("elim", weights, block=r)
    return names, weights, order


def gen_cyclic_quotient(n, weights, field=QQ, name=None):
    """Invariant ring of Z/n acting diagonally by the given weights, and its
    eigenmodules (modules of semi-invariants) as modules over it."""
    w = tuple(int(a) % n for a in weights)
    r = len(w)
    faithful = gcd(n, *w) == 1 if w else n == 1
    small = True
    for k in range(1, n):
        fixed = sum(1 for a in w if (k * a) % n == 0)
        if fixed == r - 1:
            small = False
    inv = invariant_generators(n, w)
    m = len(inv)
    names, eweights, order = _elim_ring(r, inv, field)
    K = field
    # the ideal (x_j - m_j) in k[t, x]
    o1 = ModuleOrder(order, [0])
    graph = []
    for j, mon in enumerate(inv):
        xj = [0] * (r + m)
        xj[r + j] = 1
        graph.append({(0, tuple(xj)): K.one, (0, tuple(mon) + (0,) * m): K(-1)})
    st = GBState(o1, K)
    for g in graph:
        st.add(g)
    st.complete()
    gb = st.reduced_basis()
    rels = [v for v in gb if all(not any(e[:r]) for (_, e) in v)]
    # relations as polynomials in x only
    S = GradedPolyRing(["x%d" % j for j in range(m)], [sum(mon) for mon in inv], field)
    polys = [{e[r:]: a for (_, e), a in v.items()} for v in rels]
    so = ModuleOrder(S.order, [0])
    minimal = _minimize([{(0, e): a for e, a in p.items()} for p in polys], so, K)
    R = QuotientRing(S, [{e: a for (_, e), a in v.items()} for v in minimal],
                     name=name or "C%d(%s)" % (n, ",".join(map(str, w))))
    # eigenmodules
    mods = []
    semis = []
    for c in range(n):
        gens = semi_invariant_generators(n, w, c)
        semis.append(gens)
        mods.append(_eigenmodule(R, r, m, inv, gens, order, K, graph, "E%d" % c))
    cq = CyclicQuotient(n, w, R, inv, mods, faithful, small, len(rels), len(minimal), semi_invariants=semis)
    cq.structural = faithful and small
    return cq


class _EliminationModuleOrder(ModuleOrder):
    """Terms in component 0 first, then by the t-block, then the usual one.

    A vector whose lead lies outside component 0 and is free of t has no
    component-0 or t-dependent terms at all.
    """

    def __init__(self, mono, shifts, r):
        super().__init__(mono, shifts)
        w = mono.weights
        base = self.key
        cache = {}
        ncache = {}

        def key(t):
            k = cache.get(t)
            if k is None:
                c, e = t
                tb = e[:r]
                k = cache[t] = ((1 if c == 0 else 0), sum(a * b for a, b in zip(tb, w)),) \
                    + tuple(-a for a in reversed(tb)) + base(t)
            return k

        def nkey(t):
            k = ncache.get(t)
            if k is None:
                k = ncache[t] = tuple(-x for x in key(t))
            return k

        self.key = key
        self.nkey = nkey


def _eigenmodule(R, r, m, inv, gens, order, K, graph, name):
    """Kernel of R^k(-deg g) -> k[t], e_j -> g_j, by module elimination."""
    k = len(gens)
    degs = [sum(g) for g in gens]
    if k == 1 and not any(gens[0]):
        return PresentedModule(R, [0], [], name=name)
    shifts = [0] + degs
    mo = _EliminationModuleOrder(order, shifts, r)
    st = GBState(mo, K)
    for j, g in enumerate(gens):
        st.add({(j + 1, (0,) * (r + m)): K.one, (0, tuple(g) + (0,) * m): K(-1)})
    for c in range(k + 1):
        for v in graph:
            st.add({(c, e): a for (_, e), a in v.items()})
    st.complete()
    rels = []
    for v in st.reduced_basis():
        if any(c == 0 for (c, _) in v):
            continue
        if any(any(e[:r]) for (_, e) in v):
            continue
        rels.append({(c - 1, e[r:]): a for (c, e), a in v.items()})
    M = PresentedModule(R, degs, rels, name=name)
    M.relations = M.minimal_relations
    return M


def veronese(nvars, field=QQ):
    """The second Veronese ring of nvars variables: Z/2 acting by -1."""
    return gen_cyclic_quotient(2, [1] * nvars, field=field, name="V%d" % nvars)
