"""Finitely generated graded modules over a quotient ring R = S/I.

A module is a cokernel ``F0 / U`` where ``F0 = R(-a_0) + ... + R(-a_{r-1})``
and ``U`` is generated over S by the given relations together with
``I * F0``.  All computations run over S through the Groebner engine.
Elements of ``F0`` are sparse vectors ``{(component, exponents): coeff}``.
"""

import math
import threading
from functools import cached_property

from .groebner import (GBState, InhomogeneousError, ModuleOrder, add_vecs,
                       buchberger, lead_term, poly_times_vec,
                       syzygies, tracked_state, vec_degree)
from .linalg import solve_combination
from .poly import Polynomial
from .resolution import (krull_dimension_from_leads, monomials_of_degree,
                         schreyer_resolution)


class NotCohenMacaulay(ValueError):
    """Raised when an operation needs a Cohen-Macaulay ring."""


class NotAComplex(ValueError):
    pass


class ZeroModuleError(ValueError):
    pass


def _poly_dict(p, ring):
    if isinstance(p, Polynomial):
        return dict(p.coeffs)
    if isinstance(p, str):
        return dict(ring.parse(p).coeffs)
    if isinstance(p, dict):
        return dict(p)
    return dict(ring.const(p).coeffs)


def _offset(v, off):
    if not off:
        return v
    return {(c + off, e): a for (c, e), a in v.items()}


def _minimize(gens, order, K, modulo=()):
    """Greedy degree-ordered pruning: the kept vectors minimally generate
    ``<gens> + <modulo>`` modulo ``<modulo>`` (``modulo`` must be a GB)."""
    st = GBState.from_gb(modulo, order, K)
    cand = []
    for v in gens:
        if v:
            cand.append((vec_degree(v, order), len(cand), v))
    cand.sort(key=lambda x: (x[0], x[1]))
    kept = []
    for d, _, v in cand:
        st.complete(d)
        if st.contains(v):
            continue
        kept.append(v)
        st.add(v)
    return kept


def _gb_of(gens, order, K, preloaded=()):
    st = GBState.from_gb(preloaded, order, K)
    for g in gens:
        if g:
            st.add(g)
    st.complete()
    return st.reduced_basis()


class QuotientRing:
    """R = S/I for a homogeneous ideal I of a weighted polynomial ring S."""

    def __init__(self, S, ideal=(), name="R"):
        self.S = S
        self.K = S.field
        self.name = name
        self.nvars = len(S.names)
        self.weights = tuple(S.weights)
        self.zero_exp = (0,) * self.nvars
        polys = []
        for p in ideal:
            d = _poly_dict(p, S)
            if d:
                polys.append(d)
        self.order1 = ModuleOrder(S.order, [0])
        vecs = [{(0, e): a for e, a in p.items()} for p in polys]
        for v in vecs:
            vec_degree(v, self.order1)
        self.ideal_gens = polys
        self.ideal_gb = buchberger(vecs, self.order1, self.K)
        self.ideal_polys = [{e: a for (c, e), a in v.items()} for v in self.ideal_gb.elements]
        self._hom_cache = {}
        self._lock = threading.RLock()
        self._canonical = None

    # -- basic data ------------------------------------------------------
    def order_for(self, shifts):
        return ModuleOrder(self.S.order, shifts)

    @cached_property
    def dim(self):
        return krull_dimension_from_leads(self.ideal_gb.leads, self.nvars, 1)

    @cached_property
    def s_resolution(self):
        return schreyer_resolution(self.ideal_gb.elements, self.order1, self.K, is_gb=True)

    @cached_property
    def pd_over_ambient(self):
        return self.s_resolution.projective_dimension()

    @property
    def codim(self):
        return self.nvars - self.dim

    @cached_property
    def is_cm(self):
        return self.pd_over_ambient == self.nvars - self.dim

    @property
    def max_relation_degree(self):
        degs = [vec_degree(v, self.order1) for v in self.ideal_gb.elements]
        return max(degs) if degs else 1

    @property
    def is_hypersurface(self):
        return len(self.ideal_gb.elements) == 1

    def poly(self, text):
        return _poly_dict(text, self.S)

    # -- module constructors ---------------------------------------------
    def free(self, degrees, name=None):
        return PresentedModule(self, list(degrees), [], name=name)

    def unit_module(self):
        return self.free([0], name=self.name)

    def residue_field(self):
        z = self.zero_exp
        rels = []
        for i in range(self.nvars):
            e = list(z)
            e[i] = 1
            rels.append({(0, tuple(e)): self.K.one})
        return PresentedModule(self, [0], rels, name="k")

    def ideal(self, gens, name=None):
        """The ideal generated by ``gens`` as a module (its own presentation)."""
        polys = [_poly_dict(g, self.S) for g in gens]
        polys = [p for p in polys if p]
        degs = []
        for p in polys:
            ds = {self.S.weighted_degree(e) for e in p}
            if len(ds) != 1:
                raise InhomogeneousError("inhomogeneous ideal generator")
            degs.append(ds.pop())
        F = self.free(degs)
        f = ModuleMap(F, self.unit_module(), [{(0, e): a for e, a in p.items()} for p in polys], check=False)
        return image_module(f, name=name)

    def canonical_module(self):
        """Ext^{n-d}_S(R, S) twisted by minus the sum of the weights."""
        with self._lock:
            if self._canonical is None:
                self._canonical = _canonical_module(self)
            return self._canonical

    def summary(self):
        return {"nvars": self.nvars, "weights": list(self.weights), "dim": self.dim,
                "cm": self.is_cm, "pd_over_ambient": self.pd_over_ambient}

    def __repr__(self):
        return "QuotientRing(%s, %d vars, %d ideal generators)" % (self.name, self.nvars, len(self.ideal_polys))


class PresentedModule:
    """``F0/U``: generator degrees and homogeneous relations over S."""

    def __init__(self, ring, degrees, relations=(), name=None, check=True):
        self.ring = ring
        self.degrees = [int(a) for a in degrees]
        self.order = ring.order_for(self.degrees)
        rels = []
        for v in relations:
            v = {t: a for t, a in v.items() if a}
            if not v:
                continue
            if check:
                for (c, e) in v:
                    if not 0 <= c < len(self.degrees):
                        raise ValueError("relation refers to generator %d of %d" % (c, len(self.degrees)))
                vec_degree(v, self.order)
            rels.append(v)
        self.relations = rels
        self.name = name
        self.summands = None
        self._lock = threading.RLock()
        self._gb = None
        self._depth = None

    @property
    def rank(self):
        return len(self.degrees)

    @property
    def K(self):
        return self.ring.K

    def ideal_part(self):
        out = []
        for j in range(self.rank):
            for p in self.ring.ideal_polys:
                out.append({(j, e): a for e, a in p.items()})
        return out

    @property
    def gb_elements(self):
        """Reduced Groebner basis of U = relations + I*F0."""
        with self._lock:
            if self._gb is None:
                if self.summands is not None and len(self.summands) > 1:
                    gb = []
                    for mod, twist, off in self.summands:
                        gb.extend(_offset(v, off) for v in mod.gb_elements)
                    self._gb = gb
                elif self.summands is not None:
                    mod = self.summands[0][0]
                    self._gb = list(mod.gb_elements)
                else:
                    self._gb = _gb_of(self.relations, self.order, self.K, self.ideal_part())
            return self._gb

    @cached_property
    def gb_state(self):
        return GBState.from_gb(self.gb_elements, self.order, self.K)

    def nf(self, v):
        return self.gb_state.nf(v)

    def is_zero_element(self, v):
        return self.gb_state.contains(v)

    def unit(self, j):
        return {(j, self.ring.zero_exp): self.K.one}

    def is_zero(self):
        return all(self.is_zero_element(self.unit(j)) for j in range(self.rank))

    @cached_property
    def minimal_relations(self):
        """Relations pruned modulo I*F0 and each other."""
        return _minimize(self.relations, self.order, self.K, self.ideal_part())

    def base_summands(self):
        if self.summands is None:
            return [(self, 0, 0)]
        return self.summands

    # -- homological invariants ----------------------------------------
    @cached_property
    def s_resolution(self):
        return schreyer_resolution(self.gb_elements, self.order, self.K, is_gb=True)

    def depth(self):
        """depth = n - pd_S(M); +inf for the zero module."""
        with self._lock:
            if self._depth is None:
                if self.summands is not None and (len(self.summands) > 1 or self.summands[0][0] is not self):
                    ds = [m.depth() for m, _, _ in self.summands]
                    self._depth = min(ds) if ds else math.inf
                elif self.is_zero():
                    self._depth = math.inf
                else:
                    self._depth = self.ring.nvars - self.s_resolution.projective_dimension()
            return self._depth

    def krull_dim(self):
        leads = [lead_term(v, self.order) for v in self.gb_elements]
        return krull_dimension_from_leads(leads, self.ring.nvars, self.rank)

    def hilbert_value(self, t):
        """dim_K of the degree-t slice."""
        return len(self.slice_basis(t))

    def slice_basis(self, t):
        from .resolution import standard_terms
        leads = [lead_term(v, self.order) for v in self.gb_elements]
        return standard_terms(leads, self.degrees, self.ring.weights, t)

    def __repr__(self):
        nm = self.name or "M"
        return "PresentedModule(%s, degrees=%s, %d relations)" % (nm, self.degrees, len(self.relations))


# -- maps --------------------------------------------------------------------

class ModuleMap:
    """A graded map given by the images of the source generators.

    ``matrix[j]`` is a vector of the target cover; ``degree`` is the shift.
    """

    def __init__(self, source, target, matrix, degree=0, check=True):
        if source.ring is not target.ring:
            raise ValueError("maps between modules over different rings")
        if len(matrix) != source.rank:
            raise ValueError("expected %d images, got %d" % (source.rank, len(matrix)))
        self.source = source
        self.target = target
        self.matrix = [{t: a for t, a in v.items() if a} for v in matrix]
        self.degree = degree
        if check:
            self.verify()

    def verify(self):
        """Homogeneity of the images and relations mapping into U_target."""
        for j, v in enumerate(self.matrix):
            if v:
                d = vec_degree(v, self.target.order)
                if d != self.source.degrees[j] + self.degree:
                    raise InhomogeneousError("image of generator %d has degree %d, expected %d"
                                             % (j, d, self.source.degrees[j] + self.degree))
        for r in self.source.relations:
            if not self.target.is_zero_element(self.apply(r)):
                raise ValueError("map is not well defined on the relations")
        return True

    def apply(self, v):
        K = self.source.K
        parts = {}
        for (j, e), a in v.items():
            parts.setdefault(j, {})[e] = a
        out = {}
        for j, p in parts.items():
            if self.matrix[j]:
                out = add_vecs(out, poly_times_vec(p, self.matrix[j], K), K)
        return out

    def is_zero(self):
        return all(self.target.is_zero_element(v) for v in self.matrix)

    def __repr__(self):
        return "ModuleMap(%r -> %r, degree %d)" % (self.source, self.target, self.degree)


def compose(g, f):
    """g after f."""
    if f.target is not g.source and f.target.degrees != g.source.degrees:
        raise ValueError("maps are not composable")
    return ModuleMap(f.source, g.target, [g.apply(v) for v in f.matrix],
                     degree=f.degree + g.degree, check=False)


def identity_map(M):
    return ModuleMap(M, M, [M.unit(j) for j in range(M.rank)], check=False)


def zero_map(A, B, degree=0):
    return ModuleMap(A, B, [{} for _ in range(A.rank)], degree=degree, check=False)


def maps_equal(f, g):
    if f.source.rank != g.source.rank:
        return False
    K = f.source.K
    return all(f.target.is_zero_element(add_vecs(a, b, K, -1)) for a, b in zip(f.matrix, g.matrix))


# -- direct sums and shifts ----------------------------------------------------

def direct_sum(parts, name=None):
    """``parts``: modules or (module, twist) pairs; (M, t) means M(t).

    Nested sums are flattened; the result remembers its summands so that
    Hom and depth can be computed summand by summand.
    """
    flat = []
    for p in parts:
        mod, twist = (p, 0) if isinstance(p, PresentedModule) else p
        for base, t2, _ in mod.base_summands():
            flat.append((base, t2 + twist))
    if not flat:
        raise ValueError("empty direct sum; use zero_module")
    ring = flat[0][0].ring
    degrees = []
    rels = []
    summands = []
    off = 0
    for base, twist in flat:
        summands.append((base, twist, off))
        degrees.extend(a - twist for a in base.degrees)
        rels.extend(_offset(v, off) for v in base.relations)
        off += base.rank
    M = PresentedModule(ring, degrees, rels, name=name, check=False)
    M.summands = summands
    return M


def shift(M, t):
    """M(t): generator degrees lowered by t."""
    return direct_sum([(M, t)])


def zero_module(ring):
    return PresentedModule(ring, [], [], name="0")


def summand_inclusion(S, k):
    """Inclusion of the k-th summand (shifted) into a direct sum S."""
    base, twist, off = S.summands[k]
    B = shift(base, twist) if twist else base
    z = S.ring.zero_exp
    return ModuleMap(B, S, [{(off + j, z): S.K.one} for j in range(base.rank)], check=False)


def summand_projection(S, k):
    base, twist, off = S.summands[k]
    B = shift(base, twist) if twist else base
    z = S.ring.zero_exp
    mat = []
    for c in range(S.rank):
        if off <= c < off + base.rank:
            mat.append({(c - off, z): S.K.one})
        else:
            mat.append({})
    return ModuleMap(S, B, mat, check=False)


# -- kernels, images, subquotients -------------------------------------------

def _subquotient(ring, order, gens, modulo, name=None):
    """Module generated by ``gens`` inside F/<modulo> (modulo a GB of F).

    Returns (module, kept) where ``kept`` are the chosen generators.
    """
    K = ring.K
    kept = _minimize(gens, order, K, modulo)
    degrees = [vec_degree(v, order) for v in kept]
    if not kept:
        return PresentedModule(ring, [], [], name=name), []
    rels = syzygies(kept, order, K, modulo=modulo, modulo_is_gb=True)
    M = PresentedModule(ring, degrees, rels, name=name, check=False)
    M.relations = M.minimal_relations
    return M, kept


def preimage_generators(f):
    """S-generators of {v in F_src : f(v) in U_target}."""
    return syzygies(f.matrix, f.target.order, f.source.K,
                    modulo=f.target.gb_elements, modulo_is_gb=True)


def kernel(f, name=None):
    """(ker f, inclusion)."""
    src = f.source
    P = preimage_generators(f)
    Km, kept = _subquotient(src.ring, src.order, P, src.gb_elements, name=name)
    return Km, ModuleMap(Km, src, kept, check=False)


def image_module(f, name=None):
    """Image of f presented on the source generators."""
    src = f.source
    P = preimage_generators(f)
    M = PresentedModule(src.ring, src.degrees, P, name=name, check=False)
    M.relations = M.minimal_relations
    return M


def cokernel(f, name=None):
    B = f.target
    return PresentedModule(B.ring, B.degrees, list(B.relations) + [v for v in f.matrix if v], name=name)


def is_injective(f):
    src = f.source
    st = src.gb_state
    return all(st.contains(v) for v in preimage_generators(f))


def _image_state(f):
    B = f.target
    st = GBState.from_gb(B.gb_elements, B.order, B.K)
    for v in f.matrix:
        if v:
            st.add(v)
    st.complete()
    return st


def is_surjective(f):
    B = f.target
    st = _image_state(f)
    return all(st.contains(B.unit(j)) for j in range(B.rank))


def is_isomorphism(f):
    return is_surjective(f) and is_injective(f)


def minimal_generators(M):
    """Degrees of a minimal generating set and the projection from its free cover."""
    units = [M.unit(j) for j in range(M.rank)]
    kept = _minimize(units, M.order, M.K, M.gb_elements)
    degs = [vec_degree(v, M.order) for v in kept]
    F = M.ring.free(degs)
    return degs, ModuleMap(F, M, kept, check=False)


def prune(M):
    """An isomorphic presentation on a minimal subset of the generators.

    Returns (M', to_M, from_M) with inverse isomorphisms.
    """
    units = [M.unit(j) for j in range(M.rank)]
    Mp, kept = _subquotient(M.ring, M.order, units, M.gb_elements, name=M.name)
    to_M = ModuleMap(Mp, M, kept, check=False)
    st = tracked_state(kept, M.order, M.K, modulo=M.gb_elements, modulo_is_gb=True)
    back = []
    for j in range(M.rank):
        rep = st.lift(M.unit(j))
        back.append(rep)
    from_M = ModuleMap(M, Mp, back, check=False)
    return Mp, to_M, from_M


# -- Hom -----------------------------------------------------------------------

class HomModule(PresentedModule):
    """Hom_R(M, N) with a decoder to actual maps.

    Its generators are vectors of ``Hom(F0_M, N)``, the module with one
    component per pair (generator j of M, generator l of N), laid out as
    ``j * N.rank + l``.
    """

    def _setup(self, source, target, gens):
        self.source = source
        self.target = target
        self.h0_degrees = [b - a for a in source.degrees for b in target.degrees]
        self.h0_order = source.ring.order_for(self.h0_degrees)
        self.gens = gens
        self.blocks = None
        self._encoder = None

    @property
    def u_h0(self):
        s0 = self.target.rank
        u_n = self.target.gb_elements
        return [_offset(u, j * s0) for j in range(self.source.rank) for u in u_n]

    def h0_from_map(self, f):
        s0 = self.target.rank
        h0 = {}
        for j, v in enumerate(f.matrix):
            for (l, e), a in v.items():
                h0[(j * s0 + l, e)] = a
        return h0

    def map_from_h0(self, h0, degree=None):
        s0 = self.target.rank
        mat = [dict() for _ in range(self.source.rank)]
        for (c, e), a in h0.items():
            j, l = divmod(c, s0)
            mat[j][(l, e)] = a
        if degree is None:
            degree = vec_degree(h0, self.h0_order) if h0 else 0
        return ModuleMap(self.source, self.target, mat, degree=degree, check=False)

    def to_h0(self, v):
        K = self.K
        out = {}
        parts = {}
        for (i, e), a in v.items():
            parts.setdefault(i, {})[e] = a
        for i, p in parts.items():
            out = add_vecs(out, poly_times_vec(p, self.gens[i], K), K)
        return out

    def decode(self, v, degree=None):
        """The map M -> N(t) represented by an element of Hom (cover vector)."""
        if degree is None and v:
            degree = vec_degree(v, self.order)
        return self.map_from_h0(self.to_h0(v), degree)

    def gen_map(self, i):
        return self.map_from_h0(self.gens[i], self.degrees[i])

    def encode_h0(self, h0):
        if not h0:
            return {}
        if self.blocks is not None:
            return self._encode_blocks(h0)
        with self._lock:
            if self._encoder is None:
                self._encoder = tracked_state(self.gens, self.h0_order, self.K,
                                              modulo=self.u_h0, modulo_is_gb=True)
            rep = self._encoder.lift(h0)
        if rep is None:
            raise ValueError("not a homomorphism between the given modules")
        return rep

    def _encode_blocks(self, h0):
        s0 = self.target.rank
        out = {}
        split = {}
        for (c, e), a in h0.items():
            j, l = divmod(c, s0)
            for bi, (H, goff, joff, loff, _) in enumerate(self.blocks):
                if joff <= j < joff + H.source.rank and loff <= l < loff + H.target.rank:
                    sb = H.target.rank
                    split.setdefault(bi, {})[((j - joff) * sb + (l - loff), e)] = a
                    break
        for bi, sub in split.items():
            H, goff, _, _, _ = self.blocks[bi]
            rep = H.encode_h0(sub)
            for (i, e), a in rep.items():
                out[(i + goff, e)] = a
        return out

    def encode(self, f):
        """Cover vector of Hom representing the map f."""
        return self.encode_h0(self.h0_from_map(f))


def _hom_direct(M, N):
    R = M.ring
    K = R.K
    r0, s0 = M.rank, N.rank
    h0_degrees = [b - a for a in M.degrees for b in N.degrees]
    h0_order = R.order_for(h0_degrees)
    u_n = N.gb_elements
    u_h0 = [_offset(u, j * s0) for j in range(r0) for u in u_n]
    rels = M.minimal_relations
    z = R.zero_exp
    if r0 == 0 or s0 == 0:
        gens = []
    elif not rels:
        gens = [{(i, z): K.one} for i in range(r0 * s0)]
    else:
        cdeg = [vec_degree(k, M.order) for k in rels]
        p1_deg = [b - c for c in cdeg for b in N.degrees]
        p1_order = R.order_for(p1_deg)
        u_p1 = [_offset(u, t * s0) for t in range(len(rels)) for u in u_n]
        by_j = [dict() for _ in range(r0)]
        for t, k in enumerate(rels):
            for (j, e), a in k.items():
                by_j[j].setdefault(t, {})[e] = a
        images = []
        for j in range(r0):
            for l in range(s0):
                vec = {}
                for t, p in by_j[j].items():
                    for e, a in p.items():
                        vec[(t * s0 + l, e)] = a
                images.append(vec)
        gens = syzygies(images, p1_order, K, modulo=u_p1, modulo_is_gb=True)
    kept = _minimize(gens, h0_order, K, u_h0)
    degrees = [vec_degree(v, h0_order) for v in kept]
    if kept:
        hrels = syzygies(kept, h0_order, K, modulo=u_h0, modulo_is_gb=True)
    else:
        hrels = []
    H = HomModule(R, degrees, hrels, name="Hom(%s,%s)" % (M.name or "M", N.name or "N"), check=False)
    H.relations = H.minimal_relations
    H._setup(M, N, kept)
    return H


def _hom_base(M, N):
    R = M.ring
    key = (id(M), id(N))
    with R._lock:
        hit = R._hom_cache.get(key)
        if hit is not None:
            return hit[2]
    H = _hom_direct(M, N)
    with R._lock:
        R._hom_cache.setdefault(key, (M, N, H))
        return R._hom_cache[key][2]


def hom(M, N):
    """Hom_R(M, N) as a :class:`HomModule` (computed summand by summand)."""
    if M.ring is not N.ring:
        raise ValueError("modules over different rings")
    ms = M.base_summands()
    ns = N.base_summands()
    if len(ms) == 1 and len(ns) == 1 and ms[0][0] is M and ns[0][0] is N:
        return _hom_base(M, N)
    R = M.ring
    s0 = N.rank
    blocks = []
    degrees = []
    rels = []
    gens = []
    gb = []
    summands = []
    goff = 0
    for mk, alpha, joff in ms:
        for nl, beta, loff in ns:
            H = _hom_base(mk, nl)
            diff = alpha - beta
            blocks.append((H, goff, joff, loff, diff))
            summands.append((H, beta - alpha, goff))
            degrees.extend(a + diff for a in H.degrees)
            rels.extend(_offset(v, goff) for v in H.relations)
            gb.extend(_offset(v, goff) for v in H.gb_elements)
            sb = nl.rank
            for g in H.gens:
                v = {}
                for (c, e), a in g.items():
                    j, l = divmod(c, sb)
                    v[((joff + j) * s0 + loff + l, e)] = a
                gens.append(v)
            goff += len(H.degrees)
    out = HomModule(R, degrees, rels, name="Hom(%s,%s)" % (M.name or "M", N.name or "N"), check=False)
    out._setup(M, N, gens)
    out.blocks = blocks
    out.summands = [s for s in summands]
    out._gb = gb
    return out


class HomDecoder:
    """Bijection between Hom(M,N) elements and maps M -> N(t)."""

    def __init__(self, H):
        self.H = H

    def __call__(self, v, degree=None):
        return self.H.decode(v, degree)

    def encode(self, f):
        return self.H.encode(f)


def hom_module(M, N):
    H = hom(M, N)
    return H, HomDecoder(H)


def degree_slice(H, t):
    """A K-spanning set of Hom(M,N)_t, as cover vectors of H."""
    out = []
    for i, a in enumerate(H.degrees):
        for e in monomials_of_degree(H.ring.weights, t - a):
            out.append({(i, e): H.K.one})
    return out


def hom_left(M, f):
    """Hom(M, f): Hom(M, A) -> Hom(M, B) for f: A -> B."""
    HA = hom(M, f.source)
    HB = hom(M, f.target)
    mat = []
    for i, g in enumerate(HA.gens):
        phi = HA.map_from_h0(g, HA.degrees[i])
        mat.append(HB.encode(compose(f, phi)))
    return ModuleMap(HA, HB, mat, degree=f.degree, check=False)


def hom_right(f, N):
    """Hom(f, N): Hom(B, N) -> Hom(A, N) for f: A -> B."""
    HB = hom(f.target, N)
    HA = hom(f.source, N)
    mat = []
    for i, g in enumerate(HB.gens):
        phi = HB.map_from_h0(g, HB.degrees[i])
        mat.append(HA.encode(compose(phi, f)))
    return ModuleMap(HB, HA, mat, degree=f.degree, check=False)


# -- R-free resolutions and Ext ---------------------------------------------

def ring_resolution(M, steps):
    """Minimal free resolution of M over R, ``steps`` maps long.

    Returns (degrees, maps): ``degrees[k]`` for F_k, ``maps[k-1]`` the
    columns of F_k -> F_{k-1}.
    """
    R = M.ring
    Mp, _, _ = prune(M)
    degrees = [list(Mp.degrees)]
    maps = []
    cols = list(Mp.minimal_relations)
    for k in range(1, steps + 1):
        if not cols:
            break
        prev = R.free(degrees[-1])
        degs = [vec_degree(c, prev.order) for c in cols]
        maps.append(cols)
        degrees.append(degs)
        if k == steps:
            break
        Fk = R.free(degs)
        f = ModuleMap(Fk, prev, cols, check=False)
        P = preimage_generators(f)
        cols = _minimize(P, Fk.order, R.K, Fk.gb_elements)
    return degrees, maps


def _hom_free_images(src_degrees, cols, N):
    """Images of the units of Hom(F_src, N) under Hom(d, N) for d = cols."""
    s0 = N.rank
    by_j = [dict() for _ in src_degrees]
    for t, k in enumerate(cols):
        for (j, e), a in k.items():
            by_j[j].setdefault(t, {})[e] = a
    images = []
    for j in range(len(src_degrees)):
        for l in range(s0):
            vec = {}
            for t, p in by_j[j].items():
                for e, a in p.items():
                    vec[(t * s0 + l, e)] = a
            images.append(vec)
    return images


def _ext_pieces(i, M, N, res=None):
    R = M.ring
    K = R.K
    z = R.zero_exp
    degrees, maps = res if res is not None else ring_resolution(M, i + 1)
    s0 = N.rank
    u_n = N.gb_elements
    if i >= len(degrees):
        return None
    Fi = degrees[i]
    h_deg = [b - a for a in Fi for b in N.degrees]
    h_order = R.order_for(h_deg)
    u_h = [_offset(u, j * s0) for j in range(len(Fi)) for u in u_n]
    if i < len(maps):
        nxt = degrees[i + 1]
        p_deg = [b - a for a in nxt for b in N.degrees]
        p_order = R.order_for(p_deg)
        u_p = [_offset(u, j * s0) for j in range(len(nxt)) for u in u_n]
        imgs = _hom_free_images(Fi, maps[i], N)
        cyc = syzygies(imgs, p_order, K, modulo=u_p, modulo_is_gb=True)
    else:
        cyc = [{(c, z): K.one} for c in range(len(h_deg))]
    if i >= 1:
        bnd = _hom_free_images(degrees[i - 1], maps[i - 1], N)
    else:
        bnd = []
    return h_order, u_h, cyc, bnd


def ext_module(i, M, N, res=None):
    """Ext^i_R(M, N) via a minimal R-free resolution of M."""
    R = M.ring
    pieces = _ext_pieces(i, M, N, res)
    if pieces is None:
        return zero_module(R)
    h_order, u_h, cyc, bnd = pieces
    modulo = _gb_of(bnd, h_order, R.K, u_h)
    E, _ = _subquotient(R, h_order, cyc, modulo, name="Ext^%d" % i)
    return E


def ext_is_zero(i, M, N, res=None):
    R = M.ring
    pieces = _ext_pieces(i, M, N, res)
    if pieces is None:
        return True
    h_order, u_h, cyc, bnd = pieces
    st = GBState.from_gb(u_h, h_order, R.K)
    for b in bnd:
        if b:
            st.add(b)
    st.complete()
    return all(st.contains(c) for c in cyc)


def _canonical_module(R):
    if not R.is_cm:
        raise NotCohenMacaulay("ring is not Cohen-Macaulay (pd_S R = %d, codim = %d)"
                               % (R.pd_over_ambient, R.nvars - R.dim))
    K = R.K
    z = R.zero_exp
    res = R.s_resolution
    c = R.nvars - R.dim
    D = res.degrees
    Dc = D[c] if c < len(D) else []
    order = R.order_for([-a for a in Dc])
    if c + 1 < len(D) and D[c + 1]:
        nxt = res.maps[c]
        p_order = R.order_for([-a for a in D[c + 1]])
        imgs = []
        for j in range(len(Dc)):
            vec = {}
            for t, col in enumerate(nxt):
                for (cc, e), a in col.items():
                    if cc == j:
                        vec[(t, e)] = a
            imgs.append(vec)
        cyc = syzygies(imgs, p_order, K)
    else:
        cyc = [{(j, z): K.one} for j in range(len(Dc))]
    bnd = []
    if c >= 1:
        cols = res.maps[c - 1]
        for s in range(len(D[c - 1])):
            vec = {}
            for j, col in enumerate(cols):
                for (cc, e), a in col.items():
                    if cc == s:
                        vec[(j, e)] = a
            bnd.append(vec)
    modulo = _gb_of(bnd, order, K)
    W, kept = _subquotient(R, order, cyc, modulo)
    tw = sum(R.weights)
    # relations live in S^{kept}; as an R-module the ideal part is implied
    omega = PresentedModule(R, [a + tw for a in W.degrees], W.relations, name="omega", check=False)
    omega.relations = omega.minimal_relations
    return omega


def canonical_module(R):
    return R.canonical_module()


def depth(M):
    return M.depth()


def depth_via_canonical(M):
    """d - max{i : Ext^i_R(M, omega) != 0}; +inf for the zero module."""
    R = M.ring
    omega = R.canonical_module()
    if M.is_zero():
        return math.inf
    d = R.dim
    res = ring_resolution(M, d + 1)
    for i in range(d, -1, -1):
        if not ext_is_zero(i, M, omega, res):
            return d - i
    raise AssertionError("all Ext^i(M, omega) vanish for a nonzero module")


def is_cm_ring(R):
    return R.is_cm


def is_maximal_cm(M):
    return M.depth() == M.ring.dim


# -- duals ---------------------------------------------------------------------

def dual(M):
    return hom(M, M.ring.unit_module())


def double_dual_map(M):
    """The evaluation map M -> M**."""
    D = dual(M)
    DD = dual(D)
    mat = []
    for j in range(M.rank):
        # eval_j sends the l-th generator of M* to its value on e_j
        h0 = {}
        for l, q in enumerate(D.gens):
            for (c, e), a in q.items():
                if c == j:
                    h0[(l, e)] = a
        mat.append(DD.encode_h0(h0))
    return ModuleMap(M, DD, mat, check=False)


def is_reflexive(M):
    if M.is_zero():
        return True
    if M.summands is not None and (len(M.summands) > 1 or M.summands[0][0] is not M):
        return all(is_reflexive(m) for m, _, _ in M.summands)
    f = double_dual_map(M)
    return is_isomorphism(f)


# -- splitting -------------------------------------------------------------------

def find_section(f):
    """A degree-0 map s with f o s = id_target, or None."""
    A, B = f.source, f.target
    if f.degree != 0:
        raise ValueError("split test needs a degree-0 map")
    K = A.K
    H = hom(B, A)
    basis = degree_slice(H, 0)
    target = {}
    for l in range(B.rank):
        for t, a in B.nf(B.unit(l)).items():
            target[(l, t)] = a
    cols = []
    maps = []
    for v in basis:
        s = H.decode(v, 0)
        fs = compose(f, s)
        col = {}
        for l, img in enumerate(fs.matrix):
            for t, a in B.nf(img).items():
                col[(l, t)] = a
        cols.append(col)
        maps.append(s)
    coeffs = solve_combination(cols, target, K)
    if coeffs is None:
        return None
    mat = [dict() for _ in range(B.rank)]
    for i, c in coeffs.items():
        s = maps[i]
        if c:
            for l in range(B.rank):
                mat[l] = add_vecs(mat[l], s.matrix[l], K, c)
    return ModuleMap(B, A, mat, check=False)


def is_split_surjection(f):
    """(verdict, section witness or None)."""
    s = find_section(f)
    return s is not None, s


# -- complexes -----------------------------------------------------------------

def homology_is_zero(maps):
    """Exactness of 0 -> X^0 -> ... -> X^k -> 0 given by ``maps``.

    Returns a list of k+1 booleans (one per term).
    """
    for a, b in zip(maps, maps[1:]):
        if a.target.rank != b.source.rank:
            raise NotAComplex("maps are not composable")
        gf = compose(b, a)
        if not gf.is_zero():
            raise NotAComplex("consecutive maps do not compose to zero")
    out = []
    n = len(maps)
    for pos in range(n + 1):
        if pos < n:
            X = maps[pos].source
            cyc = preimage_generators(maps[pos])
        else:
            X = maps[-1].target
            cyc = [X.unit(j) for j in range(X.rank)]
        if pos == 0:
            st = X.gb_state
        else:
            st = _image_state(maps[pos - 1])
        out.append(all(st.contains(v) for v in cyc))
    return out


def homology_module(maps, pos):
    """H at term ``pos`` of the complex as a presented module."""
    n = len(maps)
    if pos < n:
        X = maps[pos].source
        cyc = preimage_generators(maps[pos])
    else:
        X = maps[-1].target
        cyc = [X.unit(j) for j in range(X.rank)]
    if pos == 0:
        modulo = X.gb_elements
    else:
        modulo = _gb_of(maps[pos - 1].matrix, X.order, X.K, X.gb_elements)
    H, _ = _subquotient(X.ring, X.order, cyc, modulo)
    return H


def is_finite_length(M):
    from .resolution import is_finite_length as fl
    leads = [lead_term(v, M.order) for v in M.gb_elements]
    return fl(leads, M.ring.nvars, M.rank)
