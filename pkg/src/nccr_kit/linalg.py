"""Sparse exact linear algebra over a base field.

Vectors are dicts ``{index: value}`` with no stored zeros; indices may be
any hashable, orderable keys (monomial-component pairs in practice).
"""


class Echelon:
    """Incrementally maintained echelon basis of a span of sparse vectors.

    With ``track=True`` each stored row remembers which inserted vectors it
    combines, so :meth:`express` can write a vector in terms of the inputs.
    """

    def __init__(self, K, track=False):
        self.K = K
        self.track = track
        self.rows = {}  # pivot -> (row, combo)
        self.count = 0

    def _reduce(self, v, combo):
        K = self.K
        mod = K.p
        v = dict(v)
        rows = self.rows
        while v:
            piv = max(v)
            hit = rows.get(piv)
            if hit is None:
                return v, combo, piv
            row, rcombo = hit
            c = v[piv]
            for k, a in row.items():
                val = v.get(k, 0) - c * a
                if mod:
                    val %= mod
                if val:
                    v[k] = val
                else:
                    v.pop(k, None)
            if combo is not None:
                for k, a in rcombo.items():
                    val = combo.get(k, 0) - c * a
                    if mod:
                        val %= mod
                    if val:
                        combo[k] = val
                    else:
                        combo.pop(k, None)
        return v, combo, None

    def add(self, v):
        """Insert v; return True when it enlarged the span."""
        idx = self.count
        self.count += 1
        combo = {idx: self.K.one} if self.track else None
        v, combo, piv = self._reduce(v, combo)
        if piv is None:
            return False
        K = self.K
        inv = K.inv(v[piv])
        v = {k: K(a * inv) for k, a in v.items()}
        if combo is not None:
            combo = {k: K(a * inv) for k, a in combo.items()}
        self.rows[piv] = (v, combo)
        return True

    def contains(self, v):
        return not self._reduce(v, None)[0]

    def express(self, v):
        """Coefficients c with v = sum c[i] * (i-th inserted vector), or None."""
        if not self.track:
            raise ValueError("express needs track=True")
        rem, combo, _ = self._reduce(v, {})
        if rem:
            return None
        K = self.K
        return {k: K(-a) for k, a in combo.items()}

    @property
    def rank(self):
        return len(self.rows)


def rank(vectors, K):
    ech = Echelon(K)
    for v in vectors:
        ech.add(v)
    return ech.rank


def solve_combination(columns, target, K):
    """Find c with sum c[i]*columns[i] == target; None if inconsistent."""
    ech = Echelon(K, track=True)
    for col in columns:
        ech.add(col)
    return ech.express(target)


def nullspace(columns, K):
    """Basis of {c : sum c[i]*columns[i] = 0} as sparse coefficient dicts."""
    ech = Echelon(K, track=True)
    basis = []
    for i, col in enumerate(columns):
        rem, combo, piv = ech._reduce(col, {i: K.one})
        if piv is None:
            basis.append({k: a for k, a in combo.items() if a})
        else:
            inv = K.inv(rem[piv])
            ech.rows[piv] = ({k: K(a * inv) for k, a in rem.items()},
                             {k: K(a * inv) for k, a in combo.items()})
        ech.count += 1
    return basis
