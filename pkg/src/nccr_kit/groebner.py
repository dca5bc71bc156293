"""Buchberger's algorithm for homogeneous submodules of graded free modules.

A vector of the free module ``F = S(-a_0) + ... + S(-a_{r-1})`` is a dict
``{(component, exponents): coefficient}``; an ideal is the case ``r = 1``.
One engine (:class:`GBState`) serves three purposes:

* Groebner bases and normal forms,
* syzygies of a generator list modulo a second, untracked list, and
* lifts (writing an element of a submodule in terms of generators),

by optionally carrying, for every basis element, its representation in
terms of the tracked generators.  The representation of a zero reduction
is a syzygy.
"""

import heapq
from operator import add

from .poly import MonomialOrder


class InhomogeneousError(ValueError):
    pass


class ModuleOrder:
    """Order on terms ``(c, e)`` of a graded free module.

    ``top`` compares shifted degree, then the monomial, then position;
    ``pot`` compares position first.
    """

    def __init__(self, mono_order, shifts, kind="top"):
        if not isinstance(mono_order, MonomialOrder):
            raise TypeError("expected a MonomialOrder")
        self.mono = mono_order
        self.shifts = tuple(shifts)
        self.kind = kind
        self.weights = mono_order.weights
        mkey = mono_order.key
        w = self.weights
        sh = self.shifts
        cache = {}
        ncache = {}

        if kind == "top":
            def key(t):
                k = cache.get(t)
                if k is None:
                    c, e = t
                    k = cache[t] = (sum(a * b for a, b in zip(e, w)) + sh[c],) + mkey(e) + (-c,)
                return k
        elif kind == "pot":
            def key(t):
                k = cache.get(t)
                if k is None:
                    c, e = t
                    k = cache[t] = (-c,) + mkey(e)
                return k
        else:
            raise ValueError("unknown module order %r" % kind)

        def nkey(t):
            k = ncache.get(t)
            if k is None:
                k = ncache[t] = tuple(-x for x in key(t))
            return k

        self.key = key
        self.nkey = nkey

    @property
    def rank(self):
        return len(self.shifts)

    def degree(self, t):
        c, e = t
        return sum(a * b for a, b in zip(e, self.weights)) + self.shifts[c]

    def with_shifts(self, shifts):
        return ModuleOrder(self.mono, shifts, self.kind)


class SchreyerOrder:
    """The order induced on ``S^m`` by leading terms of a basis in ``F``.

    ``(i, e) > (j, f)`` iff ``x^e lt(g_i) > x^f lt(g_j)`` in the previous
    order, ties broken in favour of the smaller index.
    """

    def __init__(self, prev, leads):
        self.prev = prev
        self.leads = list(leads)
        self.weights = prev.weights
        self.shifts = tuple(prev.degree(t) for t in self.leads)
        self.mono = prev.mono
        cache = {}
        ncache = {}
        pkey = prev.key
        L = self.leads

        def key(t):
            k = cache.get(t)
            if k is None:
                i, e = t
                c, f = L[i]
                k = cache[t] = pkey((c, tuple(map(add, e, f)))) + (-i,)
            return k

        def nkey(t):
            k = ncache.get(t)
            if k is None:
                k = ncache[t] = tuple(-x for x in key(t))
            return k

        self.key = key
        self.nkey = nkey

    @property
    def rank(self):
        return len(self.leads)

    def degree(self, t):
        i, e = t
        return sum(a * b for a, b in zip(e, self.weights)) + self.shifts[i]


# -- vector helpers --------------------------------------------------------

def lead_term(v, order):
    return max(v, key=order.key)


def vec_degree(v, order, check=True):
    """Degree of a homogeneous vector (None for zero)."""
    degs = {order.degree(t) for t in v}
    if not degs:
        return None
    if len(degs) > 1:
        if check:
            raise InhomogeneousError("inhomogeneous vector (degrees %s)" % sorted(degs))
        return None
    return degs.pop()


def shift_vec(v, e):
    """x^e * v."""
    if not any(e):
        return dict(v)
    return {(c, tuple(map(add, f, e))): a for (c, f), a in v.items()}


def scale_vec(v, c, K):
    if c == 0:
        return {}
    mod = K.p
    if mod:
        return {t: a * c % mod for t, a in v.items()}
    return {t: a * c for t, a in v.items()}


def axpy(f, c, e, g, mod):
    """f -= c * x^e * g in place; returns newly created keys."""
    new = []
    if any(e):
        items = (((gc, tuple(map(add, ge, e))), gv) for (gc, ge), gv in g.items())
    else:
        items = g.items()
    for t, gv in items:
        old = f.get(t)
        if old is None:
            val = -c * gv
            if mod:
                val %= mod
            if val:
                f[t] = val
                new.append(t)
        else:
            val = old - c * gv
            if mod:
                val %= mod
            if val:
                f[t] = val
            else:
                del f[t]
    return new


def add_vecs(a, b, K, cb=1):
    """a + cb*b as a new dict."""
    out = dict(a)
    mod = K.p
    for t, v in b.items():
        val = out.get(t, 0) + cb * v
        if mod:
            val %= mod
        if val:
            out[t] = val
        else:
            out.pop(t, None)
    return out


def poly_times_vec(p, v, K):
    """p * v where p is a dict {exps: coef} (a polynomial)."""
    out = {}
    mod = K.p
    for e, a in p.items():
        for (c, f), b in v.items():
            t = (c, tuple(map(add, e, f)))
            val = out.get(t, 0) + a * b
            if mod:
                val %= mod
            if val:
                out[t] = val
            else:
                out.pop(t, None)
    return out


def component(v, c):
    """The polynomial (dict exps->coef) in component c of v."""
    return {e: a for (cc, e), a in v.items() if cc == c}


def divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def lcm_exp(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def sub_exp(a, b):
    return tuple(x - y for x, y in zip(a, b))


# -- the engine ------------------------------------------------------------

class GBState:
    """Incremental homogeneous Buchberger with optional tracking.

    ``add(v, rep)`` queues a generator; ``rep`` (a vector over the tracked
    generator indices) is its representation, ``None`` meaning untracked.
    ``complete(upto)`` runs Buchberger through degree ``upto`` (all degrees
    when None).  Syzygies among tracked generators found along the way are
    appended to ``self.syzygies``.
    """

    def __init__(self, order, K, track=False, product_criterion=None):
        self.order = order
        self.K = K
        self.track = track
        if product_criterion is None:
            product_criterion = (not track) and order.rank == 1
        self.product_criterion = product_criterion
        self.vecs = []
        self.leads = []
        self.lcs = []
        self.degs = []
        self.reps = []
        self.by_comp = {}
        self.pending = []   # heap of (deg, seq, vec, rep)
        self.pairs = {}     # (i, j) -> (deg, okey)
        self.pair_heap = []
        self.syzygies = []
        self.done_degree = None
        self._seq = 0
        self.stats = {"pairs": 0, "zero": 0, "inserted": 0}

    # -- queueing --------------------------------------------------------
    def add(self, v, rep=None):
        if not v:
            if self.track and rep:
                self.syzygies.append(dict(rep))
            return
        d = vec_degree(v, self.order)
        if self.done_degree is not None and d <= self.done_degree:
            self.done_degree = d - 1
        self._seq += 1
        heapq.heappush(self.pending, (d, self._seq, dict(v), dict(rep) if rep else {}))

    def add_basis_element(self, v, rep=None):
        """Insert an element known to be reduced w.r.t. the current basis."""
        self._insert(dict(v), dict(rep) if rep else {}, vec_degree(v, self.order))

    @classmethod
    def from_gb(cls, vecs, order, K, track=False):
        """A state preloaded with a known Groebner basis (no pairs queued)."""
        st = cls(order, K, track=track)
        for v in vecs:
            t = lead_term(v, order)
            inv = K.inv(v[t])
            v = scale_vec(v, inv, K) if K.p else {s: a * inv for s, a in v.items()}
            st.vecs.append(v)
            st.leads.append(t)
            st.lcs.append(K.one)
            st.degs.append(order.degree(t))
            st.reps.append({})
            st.by_comp.setdefault(t[0], []).append(len(st.vecs) - 1)
        return st

    # -- reduction -------------------------------------------------------
    def _find_divisor(self, t):
        c, e = t
        for k in self.by_comp.get(c, ()):
            if divides(self.leads[k][1], e):
                return k
        return None

    def reduce(self, v, rep=None, full=True):
        """Normal form of v; returns (remainder, rep-after).

        ``rep`` (when given) is updated as ``rep - sum q * rep_k`` alongside
        ``v - sum q * g_k``.  With ``full=False`` stops at the first
        irreducible term (enough to decide zero-ness).
        """
        K = self.K
        mod = K.p
        nkey = self.order.nkey
        f = dict(v)
        rep = dict(rep) if rep is not None else None
        heap = [(nkey(t), t) for t in f]
        heapq.heapify(heap)
        rem = {}
        leads, vecs, reps = self.leads, self.vecs, self.reps
        while heap:
            _, t = heapq.heappop(heap)
            a = f.get(t)
            if a is None:
                continue
            k = self._find_divisor(t)
            if k is None:
                rem[t] = f.pop(t)
                if not full:
                    rem.update(f)
                    return rem, rep
                continue
            q = a
            e = sub_exp(t[1], leads[k][1])
            new = axpy(f, q, e, vecs[k], mod)
            f.pop(t, None)
            for s in new:
                heapq.heappush(heap, (nkey(s), s))
            if rep is not None and reps[k]:
                axpy(rep, q, e, reps[k], mod)
        return rem, rep

    def nf(self, v):
        return self.reduce(v)[0]

    def contains(self, v):
        return not self.reduce(v, full=False)[0]

    def lift(self, v):
        """Representation of v over the tracked generators, or None."""
        rem, rep = self.reduce(v, {})
        if rem:
            return None
        K = self.K
        mod = K.p
        return {t: (-a % mod if mod else -a) for t, a in rep.items()}

    # -- Buchberger ------------------------------------------------------
    def _insert(self, v, rep, d):
        K = self.K
        t = lead_term(v, self.order)
        lc = v[t]
        if lc != 1:
            inv = K.inv(lc)
            v = scale_vec(v, inv, K) if K.p else {s: a * inv for s, a in v.items()}
            if rep:
                rep = scale_vec(rep, inv, K) if K.p else {s: a * inv for s, a in rep.items()}
        h = len(self.vecs)
        self.vecs.append(v)
        self.leads.append(t)
        self.lcs.append(K.one)
        self.degs.append(d)
        self.reps.append(rep)
        self.stats["inserted"] += 1
        same = self.by_comp.setdefault(t[0], [])
        self._update(h, same)
        same.append(h)

    def _update(self, h, same):
        c, eh = self.leads[h]
        order = self.order
        leads = self.leads
        pc = self.product_criterion
        cand = []
        for g in same:
            eg = leads[g][1]
            cand.append((g, lcm_exp(eg, eh), pc and all(x == 0 or y == 0 for x, y in zip(eg, eh))))
        # Gebauer-Moeller: new pairs
        kept = []
        remaining = list(cand)
        while remaining:
            g1, l1, disj = remaining.pop(0)
            if disj:
                kept.append((g1, l1, disj))
                continue
            blocked = False
            for g2, l2, _ in remaining:
                if divides(l2, l1):
                    blocked = True
                    break
            if not blocked:
                for g2, l2, _ in kept:
                    if divides(l2, l1):
                        blocked = True
                        break
            if not blocked:
                kept.append((g1, l1, disj))
        # old pairs killed by the chain criterion
        dead = []
        for (i, j), (deg, okey, lij) in self.pairs.items():
            if leads[i][0] != c:
                continue
            if divides(eh, lij):
                lih = lcm_exp(leads[i][1], eh)
                ljh = lcm_exp(leads[j][1], eh)
                if lih != lij and ljh != lij:
                    dead.append((i, j))
        for p in dead:
            del self.pairs[p]
        for g, l, disj in kept:
            if disj:
                continue
            t = (c, l)
            deg = order.degree(t)
            okey = order.key(t)
            self.pairs[(g, h)] = (deg, okey, l)
            heapq.heappush(self.pair_heap, (deg, okey, g, h))

    def _spair(self, i, j, l):
        K = self.K
        mod = K.p
        vi, vj = self.vecs[i], self.vecs[j]
        ei, ej = self.leads[i][1], self.leads[j][1]
        ci = cj = K.one
        mi, mj = sub_exp(l, ei), sub_exp(l, ej)
        s = {}
        axpy(s, -ci if not mod else (-ci) % mod, mi, vi, mod)
        axpy(s, cj, mj, vj, mod)
        rep = None
        if self.track:
            rep = {}
            if self.reps[i]:
                axpy(rep, -ci if not mod else (-ci) % mod, mi, self.reps[i], mod)
            if self.reps[j]:
                axpy(rep, cj, mj, self.reps[j], mod)
        return s, rep

    def _next_degree(self):
        cands = []
        if self.pending:
            cands.append(self.pending[0][0])
        while self.pair_heap:
            deg, okey, i, j = self.pair_heap[0]
            if (i, j) in self.pairs:
                cands.append(deg)
                break
            heapq.heappop(self.pair_heap)
        return min(cands) if cands else None

    def complete(self, upto=None):
        """Run Buchberger on all pairs and inputs of degree <= upto."""
        while True:
            d = self._next_degree()
            if d is None or (upto is not None and d > upto):
                break
            # inputs of degree d first, then pairs of degree d
            work = []
            while self.pending and self.pending[0][0] == d:
                _, _, v, rep = heapq.heappop(self.pending)
                work.append((v, rep))
            for v, rep in work:
                self._process(v, rep if self.track else None, d)
            while self.pair_heap and self.pair_heap[0][0] == d:
                deg, okey, i, j = heapq.heappop(self.pair_heap)
                info = self.pairs.pop((i, j), None)
                if info is None:
                    continue
                self.stats["pairs"] += 1
                s, rep = self._spair(i, j, info[2])
                self._process(s, rep, d)
                # a new same-degree element may have created more pairs
        if upto is None:
            self.done_degree = float("inf")
        else:
            self.done_degree = upto
        return self

    def _process(self, v, rep, d):
        rem, rep = self.reduce(v, rep)
        if rem:
            self._insert(rem, rep if rep is not None else {}, d)
        else:
            self.stats["zero"] += 1
            if self.track and rep:
                self.syzygies.append(rep)

    # -- outputs ---------------------------------------------------------
    def reduced_basis(self):
        """Reduced (minimal, interreduced, monic) basis, in sorted order."""
        K = self.K
        order = self.order
        idx = []
        for k, t in enumerate(self.leads):
            c, e = t
            redundant = False
            for j in self.by_comp.get(c, ()):
                if j != k and divides(self.leads[j][1], e) and (self.leads[j][1] != e or j < k):
                    redundant = True
                    break
            if not redundant:
                idx.append(k)
        minimal = GBState.from_gb([self.vecs[k] for k in idx], order, K)
        out = []
        for k in range(len(minimal.vecs)):
            v = minimal.vecs[k]
            t = minimal.leads[k]
            tail = {s: a for s, a in v.items() if s != t}
            # no tail term is divisible by the lead of v itself
            rem = minimal.reduce(tail)[0] if tail else {}
            rem[t] = v[t]
            out.append(rem)
        out.sort(key=lambda w: order.key(lead_term(w, order)), reverse=True)
        return out


def check_homogeneous(vecs, order):
    for v in vecs:
        if v:
            vec_degree(v, order)


class GroebnerBasis:
    """A reduced Groebner basis of a submodule of a graded free module."""

    def __init__(self, elements, order, K, reduced=True):
        self.elements = list(elements)
        self.order = order
        self.K = K
        self.reduced = reduced
        self.leads = [lead_term(v, order) for v in self.elements]
        self._state = None

    @property
    def state(self):
        if self._state is None:
            self._state = GBState.from_gb(self.elements, self.order, self.K)
        return self._state

    def normal_form(self, v):
        return self.state.nf(v)

    def contains(self, v):
        return self.state.contains(v)

    @property
    def shifts(self):
        return self.order.shifts

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def buchberger(gens, order, K):
    """Reduced Groebner basis of the submodule generated by ``gens``."""
    check_homogeneous(gens, order)
    st = GBState(order, K)
    for g in gens:
        st.add(g)
    st.complete()
    return GroebnerBasis(st.reduced_basis(), order, K)


def normal_form(v, gb):
    return gb.normal_form(v)


def unit_vec(i, zero_exp, K):
    return {(i, zero_exp): K.one}


def tracked_state(gens, order, K, modulo=(), modulo_is_gb=False):
    """GBState over ``gens`` (tracked) plus ``modulo`` (untracked)."""
    for g in gens:
        if g:
            vec_degree(g, order)
    n = len(order.weights)
    z = (0,) * n
    if modulo_is_gb:
        st = GBState.from_gb([m for m in modulo if m], order, K, track=True)
        # pairs among preloaded elements are known to reduce to zero
    else:
        st = GBState(order, K, track=True)
        for m in modulo:
            if m:
                st.add(m)
    for i, g in enumerate(gens):
        st.add(g, unit_vec(i, z, K))
    st.complete()
    return st


def syzygies(gens, order, K, modulo=(), modulo_is_gb=False):
    """Generators of {c : sum c_i gens_i in <modulo>}.

    The result lives in the free module with one component per generator,
    shifted by the generator degrees.  Zero generators contribute unit
    syzygies.
    """
    st = tracked_state(gens, order, K, modulo, modulo_is_gb)
    return [s for s in st.syzygies if s]


def _preload_pairs(st):
    """Queue all S-pairs among preloaded elements (used when not a GB)."""
    for c, idxs in st.by_comp.items():
        for a in range(len(idxs)):
            for b in range(a + 1, len(idxs)):
                i, j = idxs[a], idxs[b]
                l = lcm_exp(st.leads[i][1], st.leads[j][1])
                t = (c, l)
                deg = st.order.degree(t)
                okey = st.order.key(t)
                st.pairs[(i, j)] = (deg, okey, l)
                heapq.heappush(st.pair_heap, (deg, okey, i, j))
