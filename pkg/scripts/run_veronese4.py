"""The d = 4 run: second Veronese of four variables, M = R + odd part, N = M*.

Runs the session, prints the depth condition and the verdict, writes the
certificate and replays it.
"""

import argparse
import json
import time
from pathlib import Path

from nccr_kit.certificate import emit_certificate, replay_certificate
from nccr_kit.cli import execute, task_lines

SESSION = Path(__file__).resolve().parent.parent / "sessions" / "veronese4.nccr"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="veronese4_certificate.json")
    ap.add_argument("--timeout", type=int, default=1800)
    args = ap.parse_args()
    t0 = time.perf_counter()
    res = execute(SESSION.read_text(), timeout=args.timeout)
    for line in task_lines(res.tasks):
        print(line)
    for rep in res.certificate["depth_condition_reports"]:
        print("depth condition %s: %s" % (",".join(rep["pair"]),
                                          [(e["index"], str(e["depth"]), e["bound"], e["automatic"])
                                           for e in rep["entries"]]))
    data = emit_certificate(res.certificate)
    Path(args.out).write_bytes(data)
    ok, results = replay_certificate(json.loads(data))
    print("replay %s (%d stages), %.1fs total" % ("MATCH" if ok else "MISMATCH", len(results),
                                                 time.perf_counter() - t0))


if __name__ == "__main__":
    main()
