"""Command line: ``nccr-kit run <session>`` and ``nccr-kit replay <cert>``."""

import argparse
import json
import signal
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass

from . import __version__
from .approximation import NotInAddM, build_approx_complex, euler_check, verify_hom_resolution
from .certificate import (complex_record, emit_certificate, input_digest, module_record,
                          replay_certificate, ring_record, tilting_record)
from .groebner import InhomogeneousError
from .modules import NotCohenMacaulay, depth_via_canonical, hom
from .session import SessionError, build_workspace, format_session, parse_session
from .tilting import (ASSERTED, STRUCTURAL, UNCHECKED, WrongDimension, certify_tilting,
                      check_nccr_necessary, depth_condition, morita_check)

EXIT_OK, EXIT_INPUT, EXIT_TIMEOUT, EXIT_INCONSISTENT = 0, 2, 3, 4


class RunTimeout(Exception):
    pass


@contextmanager
def time_limit(seconds):
    if not seconds:
        yield
        return

    def handler(signum, frame):
        raise RunTimeout("time limit of %d seconds exceeded" % seconds)

    old = signal.signal(signal.SIGALRM, handler)
    signal.alarm(int(seconds))
    try:
        yield
    finally:
        signal.alarm(0)
        signal.signal(signal.SIGALRM, old)


class Runner:
    """Executes the tasks of a session and assembles the certificate."""

    def __init__(self, text, field=None, assert_nonsingular=(), degree_cap=None):
        self.text = text
        self.doc = parse_session(text)
        self.field = field
        self.ws = build_workspace(self.doc, field)
        self.asserted = set(assert_nonsingular)
        self.R = self.ws.ring
        self.cap = degree_cap if degree_cap is not None else 4 * self.R.max_relation_degree
        self.nccr = {}
        self.depth_reports = []
        self.certs = []
        self.tasks = []
        self.timings = {}
        self.inconsistent = False
        self.rejected = False

    def status(self, name):
        if self.ws.structural.get(name):
            return STRUCTURAL
        if name in self.asserted:
            return ASSERTED
        return UNCHECKED

    def field_spec(self):
        if self.field:
            return self.field
        f = self.doc.ring.field
        return "qq" if f == "QQ" else "fp:%s" % f.split()[1]

    def nccr_report(self, name):
        if name not in self.nccr:
            self.nccr[name] = check_nccr_necessary(self.ws.module(name), self.status(name))
        return self.nccr[name]

    # -- tasks ---------------------------------------------------------------
    def run(self):
        t0 = time.perf_counter()
        for t in self.doc.tasks:
            s = time.perf_counter()
            try:
                res = getattr(self, "task_" + t.kind.replace("-", "_"))(*t.args)
            except NotCohenMacaulay as e:
                self.rejected = True
                res = {"verdict": "REJECTED(NOT_CM)", "message": str(e)}
                if t.kind in ("certify-tilting", "derived-equiv", "morita"):
                    self.certs.append({"verdict": "REJECTED(NOT_CM)", "message": str(e)})
            except WrongDimension as e:
                self.rejected = True
                res = {"verdict": "REJECTED(DIMENSION)", "message": str(e)}
            res = dict(res, task=" ".join([t.kind] + t.args))
            self.tasks.append(res)
            self.timings[res["task"]] = "%.3f" % (time.perf_counter() - s)
        self.timings["total"] = "%.3f" % (time.perf_counter() - t0)
        return self.document()

    def document(self):
        tc = None
        if len(self.certs) == 1:
            tc = self.certs[0]
        elif self.certs:
            tc = self.certs
        canon = format_session(self.doc) + "field=%s nonsingular=%s cap=%d\n" % (
            self.field_spec(), ",".join(sorted(self.asserted)), self.cap)
        return {
            "tool_version": __version__,
            "input_digest": input_digest(canon),
            "ring_summary": ring_record(self.R, self.field_spec()),
            "nccr_reports": {k: v.to_dict() for k, v in self.nccr.items()},
            "depth_condition_reports": self.depth_reports,
            "tilting_certificate": tc,
            "timings": self.timings,
        }

    def task_check_cm(self):
        R = self.R
        out = {"cm": R.is_cm, "dim": R.dim, "pd_over_ambient": R.pd_over_ambient}
        if R.is_cm:
            om = R.canonical_module()
            out["omega_degrees"] = list(om.degrees)
        else:
            out["diagnostic"] = "not Cohen-Macaulay: pd_S R = %d, n - d = %d" % (R.pd_over_ambient, R.nvars - R.dim)
        return out

    def task_depth(self, name):
        X = self.ws.module(name)
        out = {"module": name, "depth": X.depth()}
        if self.R.is_cm:
            out["depth_via_canonical"] = depth_via_canonical(X)
            out["agree"] = out["depth"] == out["depth_via_canonical"]
        return out

    def task_hom(self, a, b):
        H = hom(self.ws.module(a), self.ws.module(b))
        return {"degrees": list(H.degrees), "relations": len(H.relations), "depth": H.depth()}

    def task_approx_complex(self, a, b):
        M, N = self.ws.module(a), self.ws.module(b)
        if not self.R.is_cm:
            raise NotCohenMacaulay("approximation complexes need a Cohen-Macaulay ring")
        try:
            C = build_approx_complex(M, N, self.R.dim)
        except NotInAddM as e:
            return {"verdict": "NOT_ADD_M", "message": str(e)}
        ok = verify_hom_resolution(C)
        return {"verdict": "BUILT", "length": C.length, "hom_resolution_exact": ok,
                "euler_check": euler_check(C, self.cap), "complex": complex_record(C)}

    def task_depth_condition(self, a, b):
        M, N = self.ws.module(a), self.ws.module(b)
        if not self.R.is_cm:
            raise NotCohenMacaulay("depth condition needs a Cohen-Macaulay ring")
        try:
            rep = depth_condition(M, N)
        except NotInAddM as e:
            return {"verdict": "NOT_ADD_M", "message": str(e)}
        rec = dict(rep.to_dict(), pair=[a, b])
        self.depth_reports.append(rec)
        return {"verdict": "PASS" if rep.passed else "FAIL", "passed": rep.passed}

    def task_certify_tilting(self, a, b):
        M, N = self.ws.module(a), self.ws.module(b)
        reps = [self.nccr_report(a), self.nccr_report(b)]
        cert = certify_tilting(M, N, reps)
        rec = tilting_record(cert, M, N)
        if cert.complex is not None:
            rec["complex"]["euler_check"] = euler_check(cert.complex, self.cap)
        rec["nonsingularity"] = {a: self.status(a), b: self.status(b)}
        if cert.acyclicity == "INCONSISTENT":
            self.inconsistent = True
        for name, rep in ((a + "," + b, cert.depth_MN), (b + "*," + a + "*", cert.depth_dual)):
            if rep is not None:
                self.depth_reports.append(dict(rep.to_dict(), pair=name.split(",")))
        self.certs.append(rec)
        return {"verdict": cert.verdict, "pd_bound": cert.pd_bound, "x_exact": cert.x_exact,
                "coresolution_exact": cert.cores_exact}

    def task_morita(self, a, b):
        M, N = self.ws.module(a), self.ws.module(b)
        reps = [self.nccr_report(a), self.nccr_report(b)]
        mo = morita_check(M, N)
        verdict = "MORITA_PROGENERATOR" if mo.verdict and all(r.passed for r in reps) else "NOT_MORITA"
        rec = {"verdict": verdict, "d": self.R.dim, "M": module_record(M), "N": module_record(N),
               "T": module_record(mo.T),
               "morita": {"summands_of_M_in_add_N": mo.m_in_add_n, "summands_of_N_in_add_M": mo.n_in_add_m},
               "nonsingularity": {a: self.status(a), b: self.status(b)}}
        self.certs.append(rec)
        return {"verdict": verdict}

    def task_derived_equiv(self, a, b):
        reps = [self.nccr_report(a), self.nccr_report(b)]
        if not all(r.passed for r in reps):
            self.certs.append({"verdict": "FAILED(NCCR)", "message": "necessary NCCR checks fail"})
            return {"verdict": "FAILED(NCCR)", "derived_equivalent": False}
        if self.R.dim == 2:
            res = self.task_morita(a, b)
        else:
            res = self.task_certify_tilting(a, b)
        res["derived_equivalent"] = res["verdict"] in ("TILTING", "MORITA_PROGENERATOR")
        return res


@dataclass
class RunResult:
    certificate: dict
    tasks: list
    code: int


def execute(text, field=None, assert_nonsingular=(), degree_cap=None, timeout=None):
    """Run a session: the certificate, the per-task results and the exit code."""
    with time_limit(timeout):
        runner = Runner(text, field, assert_nonsingular, degree_cap)
        doc = runner.run()
    code = EXIT_OK
    if runner.rejected:
        code = EXIT_INPUT
    if runner.inconsistent:
        code = EXIT_INCONSISTENT
    return RunResult(doc, runner.tasks, code)


def task_lines(tasks):
    out = []
    for t in tasks:
        keys = [k for k in ("verdict", "cm", "depth", "depth_via_canonical", "degrees", "length")
                if k in t]
        out.append("%s: %s" % (t["task"], " ".join("%s=%s" % (k, _plain(t[k])) for k in keys)))
    return out


def _plain(v):
    if isinstance(v, list):
        return ",".join(str(a) for a in v)
    return str(v).lower() if isinstance(v, bool) else str(v)


def main(argv=None):
    ap = argparse.ArgumentParser(prog="nccr-kit")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run the tasks of a session file")
    r.add_argument("file")
    r.add_argument("--assert-nonsingular", default="", metavar="M,N")
    r.add_argument("--field", default=None, metavar="qq|fp:P")
    r.add_argument("--degree-cap", type=int, default=None)
    r.add_argument("--timeout", type=int, default=None, metavar="SECONDS")
    r.add_argument("--out", default=None)
    r.add_argument("--format", choices=("json", "text"), default="json")
    p = sub.add_parser("replay", help="re-verify a certificate")
    p.add_argument("file")
    p.add_argument("--timeout", type=int, default=None)
    args = ap.parse_args(argv)

    if args.cmd == "replay":
        try:
            with open(args.file) as fh:
                data = json.load(fh)
            with time_limit(args.timeout):
                ok, results = replay_certificate(data)
        except RunTimeout as e:
            print("timeout: %s" % e, file=sys.stderr)
            return EXIT_TIMEOUT
        except (OSError, ValueError, KeyError) as e:
            print("error: %s" % e, file=sys.stderr)
            return EXIT_INPUT
        for stage, v in sorted(results.items()):
            print("%-40s recorded=%s replayed=%s" % (stage, v["recorded"], v["replayed"]))
        print("replay: %s" % ("MATCH" if ok else "MISMATCH"))
        return EXIT_OK if ok else EXIT_INCONSISTENT

    try:
        with open(args.file) as fh:
            text = fh.read()
    except OSError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_INPUT
    names = [s.strip() for s in args.assert_nonsingular.split(",") if s.strip()]
    try:
        res = execute(text, args.field, names, args.degree_cap, args.timeout)
    except RunTimeout as e:
        print("timeout: %s" % e, file=sys.stderr)
        return EXIT_TIMEOUT
    except (SessionError, InhomogeneousError) as e:
        print("input error: %s" % e, file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print("input error: %s" % e, file=sys.stderr)
        return EXIT_INPUT
    data = emit_certificate(res.certificate, args.format)
    report = sys.stdout
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data.decode())
        report = sys.stderr
    for line in task_lines(res.tasks):
        print(line, file=report)
    for t in res.tasks:
        if "message" in t:
            print("%s: %s" % (t["task"], t["message"]), file=sys.stderr)
    return res.code


if __name__ == "__main__":
    sys.exit(main())
