"""Certificate documents: canonical JSON emission and replay.

Every module is stored as its list of summands (generator degrees, twist,
relation rows as polynomial strings) and every map as the images of the
source generators, so each stage can be re-verified from the document
alone.
"""

import hashlib
import json
import math

from .field import field_from_spec
from .modules import (ModuleMap, PresentedModule, QuotientRing,
                      direct_sum, hom, hom_left, hom_right, homology_is_zero,
                      zero_module)
from .poly import GradedPolyRing, format_poly

FIELDS = ("tool_version", "input_digest", "ring_summary", "nccr_reports",
          "depth_condition_reports", "tilting_certificate", "timings")


def input_digest(text):
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def _stringify(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        raise TypeError("floats are not serialized: %r" % obj)
    if isinstance(obj, dict):
        return {str(k): _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    return obj


def emit_certificate(doc, fmt="json"):
    """Canonical bytes: sorted keys, numbers as decimal strings."""
    data = _stringify(doc)
    if fmt == "json":
        return (json.dumps(data, sort_keys=True, indent=1, ensure_ascii=True) + "\n").encode()
    if fmt == "text":
        return format_text(data).encode()
    raise ValueError("unknown format %r" % fmt)


def format_text(data, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(data, dict):
        for k in sorted(data):
            v = data[k]
            if isinstance(v, (dict, list)) and v:
                lines.append("%s%s:" % (pad, k))
                lines.append(format_text(v, indent + 1))
            else:
                lines.append("%s%s: %s" % (pad, k, _scalar(v)))
    elif isinstance(data, list):
        for v in data:
            if isinstance(v, (dict, list)) and v:
                lines.append("%s-" % pad)
                lines.append(format_text(v, indent + 1))
            else:
                lines.append("%s- %s" % (pad, _scalar(v)))
    else:
        lines.append(pad + _scalar(data))
    return "\n".join(lines) + ("\n" if indent == 0 else "")


def _scalar(v):
    if v is None:
        return "null"
    if v is True:
        return "true"
    if v is False:
        return "false"
    if isinstance(v, (dict, list)):
        return "[]" if isinstance(v, list) else "{}"
    return str(v)


# -- records ---------------------------------------------------------------------

def vec_entries(v, rank, S):
    parts = [dict() for _ in range(rank)]
    for (c, e), a in v.items():
        parts[c][e] = a
    return [format_poly(p, S) for p in parts]


def entries_vec(entries, S):
    v = {}
    for j, text in enumerate(entries):
        for e, a in S.parse(text).coeffs.items():
            v[(j, e)] = a
    return v


def presentation_record(X):
    S = X.ring.S
    return {"degrees": list(X.degrees),
            "relations": [vec_entries(r, X.rank, S) for r in X.relations]}


def module_record(X):
    return {"degrees": list(X.degrees),
            "summands": [dict(presentation_record(b), twist=t) for b, t, _ in X.base_summands()]
            if X.rank else []}


def module_from_record(R, rec):
    S = R.S
    if not rec["summands"]:
        return zero_module(R)
    parts = []
    for s in rec["summands"]:
        rels = [entries_vec(row, S) for row in s["relations"]]
        parts.append((PresentedModule(R, [int(a) for a in s["degrees"]], rels), int(s["twist"])))
    return direct_sum(parts)


def map_record(f):
    S = f.source.ring.S
    return {"degree": f.degree, "matrix": [vec_entries(v, f.target.rank, S) for v in f.matrix]}


def map_from_record(rec, A, B, check=True):
    S = A.ring.S
    mat = [entries_vec(row, S) for row in rec["matrix"]]
    return ModuleMap(A, B, mat, degree=int(rec["degree"]), check=check)


def ring_record(R, field_spec):
    S = R.S
    rec = {"name": R.name, "field": field_spec, "vars": list(S.names), "weights": list(S.weights),
           "ideal": [format_poly(p, S) for p in R.ideal_polys], "dim": R.dim, "cm": R.is_cm,
           "pd_over_ambient": R.pd_over_ambient}
    if R.is_cm:
        om = R.canonical_module()
        rec["omega"] = {"degrees": list(om.degrees), "relations": len(om.relations)}
        rec["omega_twist"] = -om.degrees[0] if om.rank == 1 and not om.relations else None
    else:
        rec["omega"] = None
        rec["omega_twist"] = None
    return rec


def ring_from_record(rec):
    K = field_from_spec(rec["field"])
    S = GradedPolyRing(rec["vars"], [int(w) for w in rec["weights"]], K)
    return QuotientRing(S, [S.parse(p) for p in rec["ideal"]], name=rec["name"])


def complex_record(C):
    return {"base": module_record(C.base), "target": module_record(C.target),
            "length": C.length,
            "terms": [{"parts": t.describe(), "module": module_record(t.module)} for t in C.terms],
            "maps": [map_record(f) for f in C.maps],
            "final_section": map_record(C.final_section) if C.final_section is not None else None}


def depth_report_record(rep):
    return rep.to_dict() if rep is not None else None


def tilting_record(cert, M, N):
    rec = {"verdict": cert.verdict, "stage": cert.stage, "message": cert.message, "d": cert.d,
           "M": module_record(M), "N": module_record(N),
           "T": module_record(cert.T) if cert.T is not None else None,
           "pd_bound": cert.pd_bound}
    if cert.complex is not None:
        rec["complex"] = complex_record(cert.complex)
        rec["projective_resolution"] = {"exact": cert.projres_exact,
                                        "positions": cert.complex.verification.get("positions", [])}
    rec["depth_condition"] = depth_report_record(cert.depth_MN)
    rec["depth_condition_dual"] = depth_report_record(cert.depth_dual)
    rec["x_complex"] = {"exact": cert.x_exact, "positions": cert.x_positions,
                        "acyclicity": getattr(cert, "acyclicity", None)}
    cores = {"exact": cert.cores_exact, "positions": cert.cores_positions,
             "witnesses": cert.cores_witnesses}
    if getattr(cert, "dual_complex", None) is not None:
        cores["complex"] = complex_record(cert.dual_complex)
    rec["coresolution"] = cores
    return rec


# -- replay ------------------------------------------------------------------------

def _complex_from_record(R, rec):
    target = module_from_record(R, rec["target"])
    terms = [module_from_record(R, t["module"]) for t in rec["terms"]]
    maps = []
    for i, m in enumerate(rec["maps"]):
        src = terms[i]
        tgt = target if i == 0 else terms[i - 1]
        maps.append(map_from_record(m, src, tgt))
    return target, terms, maps


def _chain_exact(maps):
    """0 -> M_L -> ... -> M_0 -> N -> 0 exact over R."""
    return all(homology_is_zero(list(reversed(maps))))


def replay_morita(R, rec):
    from .tilting import morita_check
    M = module_from_record(R, rec["M"])
    N = module_from_record(R, rec["N"])
    mo = morita_check(M, N)
    rm = rec["morita"]
    return {"summands_of_M_in_add_N": {"recorded": rm["summands_of_M_in_add_N"], "replayed": mo.m_in_add_n},
            "summands_of_N_in_add_M": {"recorded": rm["summands_of_N_in_add_M"], "replayed": mo.n_in_add_m},
            "progenerator_degrees": {"recorded": rec["T"]["degrees"], "replayed": list(mo.T.degrees)}}


def replay_tilting(R, rec):
    """Re-verify every recorded stage; returns {stage: {recorded, replayed}}."""
    out = {}
    if "morita" in rec:
        return replay_morita(R, rec)
    if "complex" not in rec:
        return out
    M = module_from_record(R, rec["M"])
    N = module_from_record(R, rec["N"])
    target, terms, maps = _complex_from_record(R, rec["complex"])
    out["approximation_sequence_exact"] = {"recorded": True, "replayed": _chain_exact(maps)}
    hmaps = [hom_left(M, f) for f in reversed(maps)]
    pos = homology_is_zero(hmaps)
    out["projective_resolution"] = {"recorded": rec["projective_resolution"]["positions"], "replayed": pos}
    out["pd_bound"] = {"recorded": rec["pd_bound"], "replayed": len(terms) - 1}
    xs = [hom_right(f, N) for f in maps]
    out["x_complex"] = {"recorded": rec["x_complex"]["positions"], "replayed": homology_is_zero(xs)}
    dep = rec.get("depth_condition")
    if dep:
        got = []
        for e in dep["entries"]:
            i = int(e["index"])
            if i < len(terms) and terms[i].rank:
                got.append(hom(terms[i], N).depth())
            else:
                got.append(math.inf)
        out["depth_condition"] = {"recorded": [e["depth"] for e in dep["entries"]], "replayed": got}
    cores = rec.get("coresolution", {})
    if cores.get("complex"):
        Ms, dterms, dmaps = _complex_from_record(R, cores["complex"])
        Rm = R.unit_module()
        duals = [hom_right(f, Rm) for f in dmaps]
        cpos = homology_is_zero([hom_left(M, g) for g in duals])
        out["coresolution"] = {"recorded": cores["positions"], "replayed": cpos}
    return out


def _norm(v):
    if isinstance(v, list):
        return [_norm(x) for x in v]
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, bool) or v is None:
        return v
    return str(v)


def replay_certificate(data):
    """Replay a parsed certificate; returns (all_match, per-stage results)."""
    R = ring_from_record(data["ring_summary"])
    results = {"ring": {"recorded": [data["ring_summary"]["dim"], data["ring_summary"]["cm"]],
                        "replayed": [R.dim, R.is_cm]}}
    tc = data.get("tilting_certificate")
    certs = tc if isinstance(tc, list) else ([tc] if tc else [])
    for k, c in enumerate(certs):
        for stage, v in replay_tilting(R, c).items():
            results["%d:%s" % (k, stage)] = v
    ok = all(_norm(v["recorded"]) == _norm(v["replayed"]) for v in results.values())
    return ok, results
