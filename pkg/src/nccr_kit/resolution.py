"""Schreyer free resolutions over the ambient polynomial ring, Betti
numbers, minimalization, Krull dimension and degree slices."""

from collections import defaultdict
from itertools import combinations

from .groebner import (GBState, SchreyerOrder, add_vecs, axpy, buchberger,
                       component, divides, lcm_exp, lead_term, poly_times_vec,
                       sub_exp)
from .linalg import Echelon


class ResolutionCapExceeded(RuntimeError):
    pass


def _lexdesc(t):
    c, e = t
    return (c, tuple(-x for x in e))


def _sort_basis(vecs, order):
    """Sort a basis so that leads within a component are lex-descending."""
    leads = [lead_term(v, order) for v in vecs]
    idx = sorted(range(len(vecs)), key=lambda k: _lexdesc(leads[k]))
    return [vecs[k] for k in idx], [leads[k] for k in idx]


def _schreyer_step(vecs, leads, order, K):
    """Lifted S-pair syzygies of a Groebner basis; a GB for the Schreyer order."""
    n = len(order.weights)
    z = (0,) * n
    st = GBState(order, K, track=True)
    for k, v in enumerate(vecs):
        st.vecs.append(v)
        st.leads.append(leads[k])
        st.lcs.append(v[leads[k]])
        st.degs.append(order.degree(leads[k]))
        st.reps.append({(k, z): K.one})
        st.by_comp.setdefault(leads[k][0], []).append(k)
    mod = K.p
    out = []
    by_comp = defaultdict(list)
    for k, t in enumerate(leads):
        by_comp[t[0]].append(k)
    for c, idxs in by_comp.items():
        for a, i in enumerate(idxs):
            ei = leads[i][1]
            quots = []
            for j in idxs[a + 1:]:
                quots.append((sub_exp(lcm_exp(ei, leads[j][1]), ei), j))
            # minimal generators of the quotient ideal (lt_j : lt_i), j > i
            keep = []
            for q, j in quots:
                dominated = False
                for q2, j2 in quots:
                    if j2 != j and divides(q2, q) and (q2 != q or j2 < j):
                        dominated = True
                        break
                if not dominated:
                    keep.append((q, j))
            for q, j in keep:
                l = tuple(x + y for x, y in zip(q, ei))
                qj = sub_exp(l, leads[j][1])
                ci = K.inv(vecs[i][leads[i]])
                cj = K.inv(vecs[j][leads[j]])
                s = {}
                axpy(s, -ci if not mod else (-ci) % mod, q, vecs[i], mod)
                axpy(s, cj, qj, vecs[j], mod)
                rep = {(i, q): ci, (j, qj): (-cj % mod) if mod else -cj}
                rem, rep = st.reduce(s, rep)
                if rem:
                    raise AssertionError("S-pair of a Groebner basis did not reduce to zero")
                syz = {t: a for t, a in rep.items() if a}
                # normalise so the Schreyer lead (i, q) has coefficient 1
                inv = K.inv(syz[(i, q)])
                out.append({t: K(a * inv) for t, a in syz.items()})
    return out


class FreeResolution:
    """A chain of matrices d_k : F_k -> F_{k-1} over S.

    ``maps[k-1]`` holds the columns of d_k (vectors in F_{k-1});
    ``degrees[k]`` the generator degrees of F_k.
    """

    def __init__(self, maps, degrees, K, weights, minimal=False):
        self.maps = maps
        self.degrees = degrees
        self.K = K
        self.weights = tuple(weights)
        self.minimal = minimal

    @property
    def length(self):
        """Index of the last nonzero free module."""
        for k in range(len(self.degrees) - 1, -1, -1):
            if self.degrees[k]:
                return k
        return -1

    def ranks(self):
        return [len(d) for d in self.degrees]

    def apply(self, k, v):
        """d_k(v) for v in F_k."""
        K = self.K
        cols = self.maps[k - 1]
        out = {}
        parts = defaultdict(dict)
        for (j, e), a in v.items():
            parts[j][e] = a
        for j, p in parts.items():
            out = add_vecs(out, poly_times_vec(p, cols[j], K), K)
        return out

    def is_complex(self):
        for k in range(2, len(self.maps) + 1):
            for col in self.maps[k - 1]:
                if self.apply(k - 1, col):
                    return False
        return True

    def has_unit_entries(self):
        for cols in self.maps:
            for col in cols:
                for (c, e) in col:
                    if not any(e):
                        return True
        return False

    def betti(self):
        """Graded Betti numbers {k: {degree: count}} from H(F (x) k)."""
        K = self.K
        nlev = len(self.degrees)
        const_rank = [defaultdict(int) for _ in range(nlev + 1)]
        for k in range(1, nlev):
            cols = self.maps[k - 1] if k - 1 < len(self.maps) else []
            bydeg = defaultdict(list)
            for j, col in enumerate(cols):
                vec = {c: a for (c, e), a in col.items() if not any(e)}
                if vec:
                    bydeg[self.degrees[k][j]].append(vec)
            for d, vs in bydeg.items():
                ech = Echelon(K)
                for v in vs:
                    ech.add(v)
                const_rank[k][d] = ech.rank
        out = {}
        for k in range(nlev):
            counts = defaultdict(int)
            for d in self.degrees[k]:
                counts[d] += 1
            b = {}
            for d, cnt in counts.items():
                val = cnt - const_rank[k][d] - const_rank[k + 1][d]
                if val:
                    b[d] = val
            if b:
                out[k] = b
        return out

    def projective_dimension(self):
        """Length of the minimal resolution; -1 for the zero module."""
        b = self.betti()
        return max(b) if b else -1

    def minimalize(self):
        """Unit-entry elimination; returns a new minimal resolution."""
        K = self.K
        maps = [[dict(c) for c in cols] for cols in self.maps]
        degrees = [list(d) for d in self.degrees]
        changed = True
        while changed:
            changed = False
            for k in range(1, len(maps) + 1):
                A = maps[k - 1]
                hit = None
                for j, col in enumerate(A):
                    for (c, e), a in col.items():
                        if not any(e):
                            hit = (c, j, a)
                            break
                    if hit:
                        break
                if not hit:
                    continue
                i, j, a = hit
                changed = True
                colj = A[j]
                inv = K.inv(a)
                for l in range(len(A)):
                    if l == j:
                        continue
                    p = component(A[l], i)
                    if p:
                        p = {e: K(-c * inv) for e, c in p.items()}
                        A[l] = add_vecs(A[l], poly_times_vec(p, colj, K), K)
                del A[j]
                maps[k - 1] = [_drop_component(col, i) for col in A]
                del degrees[k][j]
                del degrees[k - 1][i]
                if k < len(maps):
                    maps[k] = [_drop_component(col, j, check=False) for col in maps[k]]
                if k >= 2:
                    del maps[k - 2][i]
                break
        while maps and not maps[-1] and not degrees[-1]:
            maps.pop()
            degrees.pop()
        return FreeResolution(maps, degrees, K, self.weights, minimal=True)

    def __repr__(self):
        return "FreeResolution(ranks=%s%s)" % (self.ranks(), ", minimal" if self.minimal else "")


def _drop_component(v, i, check=True):
    out = {}
    for (c, e), a in v.items():
        if c == i:
            if check and a:
                raise AssertionError("dropping a nonzero row")
            continue
        out[(c - 1 if c > i else c, e)] = a
    return out


def schreyer_resolution(gens, order, K, cap=None, is_gb=False):
    """Free resolution of F/<gens> over S (F has the shifts of ``order``).

    Non-minimal in general; terminates within ``nvars`` steps because each
    level's basis is sorted lex-descending within components.
    """
    n = len(order.weights)
    if cap is None:
        cap = n + 1
    if is_gb:
        elements = [g for g in gens if g]
    else:
        elements = buchberger([g for g in gens if g], order, K).elements
    vecs, leads = _sort_basis(elements, order)
    maps = []
    degrees = [list(order.shifts)]
    cur_order = order
    level = 0
    while vecs:
        level += 1
        if level > cap:
            raise ResolutionCapExceeded("resolution did not terminate within %d steps" % cap)
        maps.append(vecs)
        degrees.append([cur_order.degree(t) for t in leads])
        next_order = SchreyerOrder(cur_order, leads)
        syz = _schreyer_step(vecs, leads, cur_order, K)
        cur_order = next_order
        if not syz:
            break
        vecs, leads = _sort_basis(syz, cur_order)
    return FreeResolution(maps, degrees, K, order.weights)


def free_resolution(gens, order, K, minimal=True, cap=None):
    """Free resolution of the presented module F/<gens> over S."""
    n = len(order.weights)
    if minimal and cap is not None and cap < n:
        raise ValueError("cap must be at least the number of variables for minimal resolutions")
    res = schreyer_resolution(gens, order, K, cap)
    return res.minimalize() if minimal else res


# -- combinatorics of initial modules --------------------------------------

def _support_mask(e):
    m = 0
    for i, a in enumerate(e):
        if a:
            m |= 1 << i
    return m


def krull_dimension_from_leads(leads, nvars, ncomps=1):
    """dim F/U from the leading terms of a GB of U (max over components).

    A set of variables is independent for a component when no leading
    monomial of that component is supported inside it.  Returns -1 when
    every component is killed (a unit in each).
    """
    best = -1
    bycomp = defaultdict(list)
    for c, e in leads:
        bycomp[c].append(_support_mask(e))
    for c in range(ncomps):
        masks = bycomp.get(c, [])
        if any(m == 0 for m in masks):
            continue
        if not masks:
            return nvars
        found = None
        for size in range(nvars, -1, -1):
            for subset in combinations(range(nvars), size):
                sm = 0
                for i in subset:
                    sm |= 1 << i
                if all(m & ~sm for m in masks):
                    found = size
                    break
            if found is not None:
                break
        best = max(best, found)
    return best


def krull_dimension(gb, nvars=None):
    """Krull dimension of S/I (or F/U) for a Groebner basis."""
    nvars = len(gb.order.weights) if nvars is None else nvars
    return krull_dimension_from_leads(gb.leads, nvars, gb.order.rank)


def monomials_of_degree(weights, t):
    """All exponent vectors of weighted degree t (t may be negative: none)."""
    n = len(weights)
    if t < 0:
        return []
    out = []

    def rec(i, left, acc):
        if i == n - 1:
            if left % weights[i] == 0:
                out.append(tuple(acc + [left // weights[i]]))
            return
        for a in range(left // weights[i], -1, -1):
            rec(i + 1, left - a * weights[i], acc + [a])

    if n == 0:
        return [()] if t == 0 else []
    rec(0, t, [])
    return out


def standard_terms(leads, shifts, weights, t):
    """Terms (c, e) of degree t not divisible by any leading term."""
    bycomp = defaultdict(list)
    for c, e in leads:
        bycomp[c].append(e)
    out = []
    for c, a in enumerate(shifts):
        ls = bycomp.get(c, [])
        for e in monomials_of_degree(weights, t - a):
            if not any(divides(l, e) for l in ls):
                out.append((c, e))
    return out


def is_finite_length(leads, nvars, ncomps):
    """F/U has finite length iff each component's initial ideal is m-primary."""
    bycomp = defaultdict(list)
    for c, e in leads:
        bycomp[c].append(e)
    for c in range(ncomps):
        ls = bycomp.get(c, [])
        if any(not any(e) for e in ls):
            continue
        for i in range(nvars):
            if not any(e[i] > 0 and all(e[j] == 0 for j in range(nvars) if j != i) for e in ls):
                return False
    return True
