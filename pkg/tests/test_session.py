import pytest
from hypothesis import given, settings, strategies as st

from nccr_kit.modules import ModuleMap, is_isomorphism
from nccr_kit.session import (ModuleDecl, RingDecl, SessionDocument, SessionError, TaskDecl,
                              build_workspace, format_session, parse_session)

CONIFOLD = """\
# a comment
ring C field QQ vars u:1 v:1 x:1 y:1 ideal u*v - x*y
module I gens 1,1 rels [ x, -u ;
                         v, -y ]
module J ideal u, y
module M = C + I
module N = C + J(-1)
module Md = dual M
task derived-equiv M N
"""


def test_parse_example():
    doc = parse_session(CONIFOLD)
    assert doc.ring.vars == [("u", 1), ("v", 1), ("x", 1), ("y", 1)]
    assert doc.ring.ideal == ["u*v - x*y"]
    kinds = [(m.name, m.kind) for m in doc.modules]
    assert kinds == [("I", "present"), ("J", "ideal"), ("M", "sum"), ("N", "sum"), ("Md", "dual")]
    assert doc.modules[0].rels == [["x", "-u"], ["v", "-y"]]
    assert doc.modules[3].terms == [("C", 0), ("J", -1)]
    assert doc.tasks == [TaskDecl("derived-equiv", ["M", "N"])]


def test_workspace_matches_bundled_conifold(cf):
    R, m = cf
    ws = build_workspace(parse_session(CONIFOLD))
    assert ws.ring.dim == 3
    I = ws.module("I")
    assert list(I.degrees) == [1, 1]
    assert I.hilbert_value(3) == m["I"].hilbert_value(3)
    assert ws.module("C").rank == 1
    assert ws.module("N").degrees == [0, 2, 2]
    assert not ws.structural.get("M")


def test_builtin_rings():
    ws = build_workspace(parse_session("ring C builtin conifold\ntask derived-equiv M N\n"))
    assert ws.structural == {"M": True, "N": True}
    ws = build_workspace(parse_session("ring V builtin cyclic 2 weights 1,1,1\ntask check-cm\n"))
    assert sorted(ws.modules) == ["E0", "E1", "M"]
    assert ws.structural["M"]
    assert ws.info["cyclic"]["relation_count"] == 6


def test_field_override():
    ws = build_workspace(parse_session(CONIFOLD), "fp:7")
    assert ws.ring.K.p == 7
    doc = parse_session(CONIFOLD.replace("field QQ", "field Fp 5"))
    assert build_workspace(doc).ring.K.p == 5


def test_dual_of_sum_is_summandwise():
    ws = build_workspace(parse_session(CONIFOLD))
    Md = ws.module("Md")
    assert Md.rank == 3


@pytest.mark.parametrize("text, line, fragment", [
    ("ring C field QQ vars u:1 v:1 ideal u*v - u\n", 1, "inhomogeneous"),
    ("ring C field QQ vars u:1 v:1\nmodule X gens 0,0 rels [ u, u*v ]\n", 2, "mixed degrees"),
    ("ring C field QQ vars u:1 v:1\nmodule X = C + Y\n", 2, "unknown module"),
    ("ring C field QQ vars u:1 v:1\n\ntask depth Z\n", 3, "unknown module"),
    ("ring C field QQ vars u:1 v:1\ntask frobnicate\n", 2, "unknown task"),
    ("ring C field QQ vars u:1 v:1\ntask hom C\n", 2, "takes 2 arguments"),
    ("ring C field QQ vars u v\n", 1, "needs a weight"),
    ("ring C field Fp 6 vars u:1\n", 1, "prime"),
    ("ring C field QQ vars u:1\nmodule X gens 0 rels [ u\n", 2, "unterminated"),
    ("ring C field QQ vars u:1\nmodule X gens 0 rels [ u ] ]\n", 2, "unbalanced"),
    ("ring C field QQ vars u:1\nmodule X ideal u +* u\n", 2, "ideal generator"),
    ("ring C field QQ vars u:1\nmodule X gens 0,0 rels [ u ]\n", 2, "entries"),
    ("module X ideal u\n", 1, "before the ring"),
    ("ring C field QQ vars u:1\nring D field QQ vars v:1\n", 2, "only one ring"),
    ("ring C field QQ vars u:1\nmodule X ideal u\nmodule X ideal u\n", 3, "declared twice"),
    ("ring C builtin cyclic 2\n", 1, "weights"),
    ("", None, "no ring"),
])
def test_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(SessionError) as err:
        parse_session(text)
    assert fragment in str(err.value)
    assert err.value.line == line


def test_error_column():
    with pytest.raises(SessionError) as err:
        parse_session("ring C field QQ vars u:1\n   task nope\n")
    assert (err.value.line, err.value.column) == (2, 9)
    assert "line 2, column 9" in str(err.value)


# -- round trip ------------------------------------------------------------------

VARS = ["a", "b", "c", "d"]


@st.composite
def monomial(draw, names):
    exps = draw(st.lists(st.integers(0, 2), min_size=len(names), max_size=len(names)))
    if not any(exps):
        exps[0] = 1
    return "*".join(n if e == 1 else "%s^%d" % (n, e) for n, e in zip(names, exps) if e)


@st.composite
def documents(draw):
    k = draw(st.integers(1, 4))
    names = VARS[:k]
    weights = draw(st.lists(st.integers(1, 3), min_size=k, max_size=k))
    fld = draw(st.sampled_from(["QQ", "Fp 7", "Fp 101"]))
    ideal = draw(st.lists(monomial(names), max_size=2))
    ring = RingDecl("R", fld, list(zip(names, weights)), ideal)
    known = ["R"]
    modules = []
    for i in range(draw(st.integers(0, 4))):
        name = "X%d" % i
        kind = draw(st.sampled_from(["ideal", "sum", "dual"]))
        if kind == "ideal":
            m = ModuleDecl(name, "ideal", polys=draw(st.lists(monomial(names), min_size=1, max_size=3)))
        elif kind == "sum":
            terms = draw(st.lists(st.tuples(st.sampled_from(known), st.integers(-3, 3)), min_size=1, max_size=3))
            m = ModuleDecl(name, "sum", terms=terms)
        else:
            m = ModuleDecl(name, "dual", of=draw(st.sampled_from(known)))
        modules.append(m)
        known.append(name)
    tasks = [TaskDecl("check-cm")]
    for _ in range(draw(st.integers(0, 3))):
        kind = draw(st.sampled_from(["depth", "hom", "derived-equiv", "approx-complex"]))
        nargs = 1 if kind == "depth" else 2
        tasks.append(TaskDecl(kind, [draw(st.sampled_from(known)) for _ in range(nargs)]))
    return SessionDocument(ring, modules, tasks)


@settings(max_examples=150)
@given(documents())
def test_format_parse_round_trip(doc):
    text = format_session(doc)
    again = parse_session(text)
    assert again == doc
    assert format_session(again) == text


def test_round_trip_of_builtin_and_presented():
    for text in ["ring V builtin cyclic 3 weights 1,2 field Fp 7\ntask morita M M\n",
                 "ring C builtin conifold\ntask certify-tilting M N\ntask hom I J\n",
                 CONIFOLD]:
        doc = parse_session(text)
        assert parse_session(format_session(doc)) == doc


def test_presented_module_matches_ideal():
    ws = build_workspace(parse_session(CONIFOLD + "module I2 ideal u, x\n"))
    I, I2 = ws.module("I"), ws.module("I2")
    f = ModuleMap(I, I2, [I2.unit(0), I2.unit(1)])
    assert is_isomorphism(f)
