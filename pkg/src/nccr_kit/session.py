"""Session files: a ring declaration, named modules and a task list.

::

    ring C field QQ vars u:1 v:1 x:1 y:1 ideal u*v - x*y
    module I gens 1,1 rels [ x, -u ; v, -y ]
    module J ideal u, y
    module M = C + I
    module N = C + J(-1)
    module Md = dual M
    task derived-equiv M N

Built-in rings: ``ring C builtin conifold`` (declares I, J, M, N) and
``ring V builtin cyclic 2 weights 1,1,1`` (declares E0.., M = sum of the
eigenmodules).  Lines starting with ``#`` are comments; a statement may
continue over several lines inside ``[ ]``.
"""

from dataclasses import dataclass, field as dfield
from typing import List, Optional, Tuple

from .field import QQ, GF
from .groebner import InhomogeneousError
from .poly import GradedPolyRing, PolySyntaxError

TASKS = {
    "check-cm": 0, "depth": 1, "hom": 2, "approx-complex": 2, "depth-condition": 2,
    "certify-tilting": 2, "derived-equiv": 2, "morita": 2,
}
BUILTINS = ("conifold", "cyclic")


class SessionError(ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = "line %d" % line + (", column %d" % column if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass
class RingDecl:
    name: str
    field: str = "QQ"
    vars: List[Tuple[str, int]] = dfield(default_factory=list)
    ideal: List[str] = dfield(default_factory=list)
    builtin: Optional[str] = None
    params: List[int] = dfield(default_factory=list)
    weights: List[int] = dfield(default_factory=list)
    line: int = dfield(default=0, compare=False)


@dataclass
class ModuleDecl:
    name: str
    kind: str                      # present | ideal | sum | dual
    gens: List[int] = dfield(default_factory=list)
    rels: List[List[str]] = dfield(default_factory=list)
    polys: List[str] = dfield(default_factory=list)
    terms: List[Tuple[str, int]] = dfield(default_factory=list)
    of: Optional[str] = None
    line: int = dfield(default=0, compare=False)


@dataclass
class TaskDecl:
    kind: str
    args: List[str] = dfield(default_factory=list)
    line: int = dfield(default=0, compare=False)


@dataclass
class SessionDocument:
    ring: RingDecl
    modules: List[ModuleDecl] = dfield(default_factory=list)
    tasks: List[TaskDecl] = dfield(default_factory=list)

    def module_names(self):
        names = [m.name for m in self.modules]
        if self.ring.builtin == "conifold":
            names = ["I", "J", "M", "N"] + names
        elif self.ring.builtin == "cyclic":
            n = self.ring.params[0]
            names = ["E%d" % c for c in range(n)] + ["M"] + names
        return names


# -- lexing ----------------------------------------------------------------------

def _statements(text):
    """Yield (line, column, statement text) with bracket continuation."""
    buf, start, depth = [], None, 0
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0] if not raw.lstrip().startswith("#") else ""
        if not line.strip() and depth == 0:
            continue
        if start is None:
            start = (ln, len(line) - len(line.lstrip()) + 1)
        buf.append(line)
        depth += line.count("[") - line.count("]")
        if depth < 0:
            raise SessionError("unbalanced ']'", ln, line.index("]") + 1)
        if depth == 0:
            yield start[0], start[1], " ".join(buf).strip()
            buf, start = [], None
    if depth:
        raise SessionError("unterminated '['", start[0], start[1])


def _ints(text, line, what):
    out = []
    for part in text.replace(",", " ").split():
        try:
            out.append(int(part))
        except ValueError:
            raise SessionError("expected an integer %s, got %r" % (what, part), line)
    return out


def parse_session(text):
    """Parse and validate a session; raises :class:`SessionError`."""
    ring = None
    modules, tasks = [], []
    for line, col, st in _statements(text):
        head, _, rest = st.partition(" ")
        rest = rest.strip()
        if head == "ring":
            if ring is not None:
                raise SessionError("only one ring per session", line, col)
            ring = _parse_ring(rest, line)
        elif head == "module":
            if ring is None:
                raise SessionError("module declared before the ring", line, col)
            modules.append(_parse_module(rest, line))
        elif head == "task":
            parts = rest.split()
            if not parts or parts[0] not in TASKS:
                raise SessionError("unknown task %r" % (parts[0] if parts else ""), line, col + 5)
            if len(parts) - 1 != TASKS[parts[0]]:
                raise SessionError("task %s takes %d arguments" % (parts[0], TASKS[parts[0]]), line, col)
            tasks.append(TaskDecl(parts[0], parts[1:], line))
        else:
            raise SessionError("unknown statement %r" % head, line, col)
    if ring is None:
        raise SessionError("no ring declared")
    doc = SessionDocument(ring, modules, tasks)
    validate(doc)
    return doc


def _parse_field(words, line):
    if not words:
        raise SessionError("missing field", line)
    if words[0] == "QQ":
        return "QQ", words[1:]
    if words[0] == "Fp":
        if len(words) < 2 or not words[1].isdigit():
            raise SessionError("Fp needs a prime", line)
        p = int(words[1])
        try:
            GF(p)
        except ValueError as e:
            raise SessionError(str(e), line)
        return "Fp %d" % p, words[2:]
    raise SessionError("unknown field %r" % words[0], line)


def _parse_ring(rest, line):
    words = rest.split()
    if not words:
        raise SessionError("ring needs a name", line)
    name = words[0]
    words = words[1:]
    if words and words[0] == "builtin":
        if len(words) < 2 or words[1] not in BUILTINS:
            raise SessionError("unknown builtin ring", line)
        decl = RingDecl(name, builtin=words[1], line=line)
        words = words[2:]
        if decl.builtin == "cyclic":
            if not words or not words[0].isdigit():
                raise SessionError("cyclic needs an order", line)
            decl.params = [int(words[0])]
            words = words[1:]
            if not words or words[0] != "weights" or len(words) < 2:
                raise SessionError("cyclic needs 'weights w1,...,wr'", line)
            decl.weights = _ints(words[1], line, "weight")
            words = words[2:]
        if words and words[0] == "field":
            decl.field, words = _parse_field(words[1:], line)
        if words:
            raise SessionError("unexpected %r" % words[0], line)
        return decl
    if not words or words[0] != "field":
        raise SessionError("expected 'field'", line)
    fld, words = _parse_field(words[1:], line)
    if not words or words[0] != "vars":
        raise SessionError("expected 'vars'", line)
    words = words[1:]
    vs = []
    while words and words[0] != "ideal":
        v, sep, w = words[0].partition(":")
        if not sep:
            raise SessionError("variable %r needs a weight (v:w)" % v, line)
        try:
            vs.append((v, int(w)))
        except ValueError:
            raise SessionError("bad weight %r" % w, line)
        words = words[1:]
    ideal = []
    if words:
        text = " ".join(words[1:])
        ideal = [p.strip() for p in text.split(";") if p.strip()]
    return RingDecl(name, fld, vs, ideal, line=line)


def _parse_module(rest, line):
    name, _, body = rest.partition(" ")
    body = body.strip()
    if not name:
        raise SessionError("module needs a name", line)
    if body.startswith("="):
        expr = body[1:].strip()
        if expr.startswith("dual "):
            return ModuleDecl(name, "dual", of=expr[5:].strip(), line=line)
        terms = []
        for t in expr.split("+"):
            t = t.strip()
            if not t:
                raise SessionError("empty summand", line)
            if "(" in t:
                base, _, sh = t.partition("(")
                if not sh.endswith(")"):
                    raise SessionError("bad shift in %r" % t, line)
                try:
                    s = int(sh[:-1])
                except ValueError:
                    raise SessionError("bad shift in %r" % t, line)
                terms.append((base.strip(), s))
            else:
                terms.append((t, 0))
        return ModuleDecl(name, "sum", terms=terms, line=line)
    if body.startswith("ideal"):
        polys = [p.strip() for p in body[5:].split(",") if p.strip()]
        return ModuleDecl(name, "ideal", polys=polys, line=line)
    if body.startswith("gens"):
        gtext, sep, rtext = body[4:].partition("rels")
        gens = _ints(gtext, line, "generator degree")
        rels = []
        if sep:
            rtext = rtext.strip()
            if not (rtext.startswith("[") and rtext.endswith("]")):
                raise SessionError("relations must be enclosed in [ ]", line)
            inner = rtext[1:-1].strip()
            if inner:
                for row in inner.split(";"):
                    rels.append([e.strip() for e in row.split(",")])
        return ModuleDecl(name, "present", gens=gens, rels=rels, line=line)
    raise SessionError("expected 'gens', 'ideal' or '='", line)


# -- validation ------------------------------------------------------------------

def field_of(decl, override=None):
    from .field import field_from_spec
    if override:
        return field_from_spec(override)
    if decl.field == "QQ":
        return QQ
    return GF(int(decl.field.split()[1]))


def ambient_ring(decl, field=None):
    K = field or field_of(decl)
    return GradedPolyRing([v for v, _ in decl.vars], [w for _, w in decl.vars], K)


def _check_poly(S, text, line, what):
    try:
        p = S.parse(text)
    except (PolySyntaxError, ValueError) as e:
        raise SessionError("%s %r: %s" % (what, text, e), line)
    if not p.is_homogeneous():
        raise SessionError("inhomogeneous polynomial %r" % text, line)
    return p


def validate(doc):
    r = doc.ring
    S = None
    if r.builtin is None:
        if not r.vars:
            raise SessionError("ring has no variables", r.line)
        try:
            S = ambient_ring(r)
        except ValueError as e:
            raise SessionError(str(e), r.line)
        for p in r.ideal:
            _check_poly(S, p, r.line, "ideal generator")
    elif r.builtin == "cyclic":
        if r.params[0] < 1 or not r.weights:
            raise SessionError("cyclic needs an order >= 1 and weights", r.line)
    known = set(doc.module_names()[:len(doc.module_names()) - len(doc.modules)])
    known.add(r.name)
    for m in doc.modules:
        if m.name in known:
            raise SessionError("module %r declared twice" % m.name, m.line)
        if m.kind == "sum":
            for base, _ in m.terms:
                if base not in known:
                    raise SessionError("unknown module %r" % base, m.line)
        elif m.kind == "dual":
            if m.of not in known:
                raise SessionError("unknown module %r" % m.of, m.line)
        elif S is not None and m.kind == "ideal":
            for p in m.polys:
                _check_poly(S, p, m.line, "ideal generator")
        elif S is not None and m.kind == "present":
            for row in m.rels:
                if len(row) != len(m.gens):
                    raise SessionError("relation has %d entries for %d generators" % (len(row), len(m.gens)), m.line)
                degs = set()
                for e, a in zip(row, m.gens):
                    p = _check_poly(S, e, m.line, "relation entry")
                    if not p.is_zero():
                        degs.add(p.degree() + a)
                if len(degs) > 1:
                    raise SessionError("relation column has mixed degrees %s" % sorted(degs), m.line)
        elif S is None and m.kind in ("ideal", "present"):
            pass
        known.add(m.name)
    for t in doc.tasks:
        for a in t.args:
            if a not in known:
                raise SessionError("unknown module %r" % a, t.line)
    return doc


# -- printing --------------------------------------------------------------------

def format_session(doc):
    r = doc.ring
    lines = []
    if r.builtin:
        s = "ring %s builtin %s" % (r.name, r.builtin)
        if r.builtin == "cyclic":
            s += " %d weights %s" % (r.params[0], ",".join(map(str, r.weights)))
        if r.field != "QQ":
            s += " field %s" % r.field
        lines.append(s)
    else:
        s = "ring %s field %s vars %s" % (r.name, r.field, " ".join("%s:%d" % v for v in r.vars))
        if r.ideal:
            s += " ideal " + "; ".join(r.ideal)
        lines.append(s)
    for m in doc.modules:
        if m.kind == "present":
            s = "module %s gens %s" % (m.name, ",".join(map(str, m.gens)))
            s += " rels [ %s ]" % " ; ".join(", ".join(row) for row in m.rels)
        elif m.kind == "ideal":
            s = "module %s ideal %s" % (m.name, ", ".join(m.polys))
        elif m.kind == "dual":
            s = "module %s = dual %s" % (m.name, m.of)
        else:
            s = "module %s = %s" % (m.name, " + ".join(b if not sh else "%s(%d)" % (b, sh) for b, sh in m.terms))
        lines.append(s)
    for t in doc.tasks:
        lines.append("task %s" % " ".join([t.kind] + t.args))
    return "\n".join(lines) + "\n"


# -- building ----------------------------------------------------------------------

@dataclass
class Workspace:
    doc: SessionDocument
    ring: object
    modules: dict
    structural: dict
    info: dict = dfield(default_factory=dict)

    def module(self, name):
        if name == self.doc.ring.name:
            return self.ring.unit_module()
        return self.modules[name]


def build_workspace(doc, field_override=None):
    """Construct the ring and modules of a validated document."""
    from .builtins import conifold, gen_cyclic_quotient
    from .modules import QuotientRing, PresentedModule, direct_sum
    from .tilting import dual_sum
    r = doc.ring
    K = field_of(r, field_override)
    mods, structural, info = {}, {}, {}
    if r.builtin == "conifold":
        R, named = conifold(K)
        R.name = r.name
        mods.update(named)
        structural.update({"M": True, "N": True})
    elif r.builtin == "cyclic":
        cq = gen_cyclic_quotient(r.params[0], r.weights, field=K, name=r.name)
        R = cq.ring
        for E in cq.eigenmodules:
            mods[E.name] = E
        mods["M"] = direct_sum(list(cq.eigenmodules), name="M")
        structural["M"] = cq.structural
        info["cyclic"] = {"order": cq.n, "weights": list(cq.weights), "faithful": cq.faithful,
                          "small": cq.small, "invariants": [list(m) for m in cq.invariants],
                          "elimination_gb_size": cq.elimination_gb_size,
                          "relation_count": cq.relation_count}
    else:
        S = ambient_ring(r, K)
        R = QuotientRing(S, [S.parse(p) for p in r.ideal], name=r.name)
    S = R.S
    for m in doc.modules:
        try:
            if m.kind == "present":
                rels = []
                for row in m.rels:
                    v = {}
                    for j, e in enumerate(row):
                        for ex, a in S.parse(e).coeffs.items():
                            v[(j, ex)] = a
                    rels.append(v)
                mods[m.name] = PresentedModule(R, m.gens, rels, name=m.name)
            elif m.kind == "ideal":
                mods[m.name] = R.ideal(m.polys, name=m.name)
            elif m.kind == "sum":
                parts = []
                for base, sh in m.terms:
                    B = R.unit_module() if base == r.name else mods[base]
                    parts.append((B, sh))
                mods[m.name] = direct_sum(parts, name=m.name)
                structural[m.name] = False
            elif m.kind == "dual":
                B = R.unit_module() if m.of == r.name else mods[m.of]
                mods[m.name] = dual_sum(B)
                mods[m.name].name = m.name
                # End(X*) is End(X)^op, so the origin of a non-singularity claim carries over
                structural[m.name] = structural.get(m.of, False)
        except (InhomogeneousError, PolySyntaxError, ValueError) as e:
            raise SessionError("module %s: %s" % (m.name, e), m.line)
    return Workspace(doc, R, mods, structural, info)
