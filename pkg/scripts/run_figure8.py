"""Trace of the figure-eight knot complement presentation, state by state.

    python3 scripts/run_figure8.py            # Ct = q^-1/2, Cb = 1
    python3 scripts/run_figure8.py --symbolic # keep Ct, Cb as symbols
"""
import argparse

from skeintrace import complex as cx
from skeintrace import trace3d, uvir3d
from skeintrace.scalars import Scalar


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--symbolic", action="store_true")
    args = ap.parse_args()
    ct, cb = (Scalar.ct(), Scalar.cb()) if args.symbolic else (trace3d.DEFAULT_CT, trace3d.DEFAULT_CB)

    T = cx.figure8()
    p = trace3d.figure8_presentation()
    sq = trace3d.SQGM(T, ct, cb)
    print(f"relations ({len(sq.dropped)} dependent one dropped):")
    for r in sq.relations:
        print(f"  {r.label}: {sq.torus.render_vec(r.vector)} = {r.scalar}")

    per = {}
    total = trace3d.trace_3d(T, p, ct, cb, sq, order=["eps1", "eps2"], per_state=per)
    for key, val in per.items():
        print(f"state {dict(key)}: {val}")
    print(f"total: {total}")

    rep = uvir3d.compat_check_3d(T, p, ct, cb)
    print(f"UV-IR compatibility: {'ok' if rep.ok else 'FAILED'} ({len(rep.records)} checks)")
    print(f"recovered: {uvir3d.recover_trace(T, p, ct, cb)}")


if __name__ == "__main__":
    main()
