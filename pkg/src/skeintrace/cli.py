"""Command-line front end.

    python3 -m skeintrace fig8
    python3 -m skeintrace verify-all --jobs 4 --out report.json
    python3 -m skeintrace trace3d --mfld fig8.json --presentation kb.json

Exit status is 0 when every check passes, 1 when a check fails and 2 when an
input does not parse.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

from . import complex as cx
from . import trace2d, trace3d, uvir2d, uvir3d
from .qtorus import TorusError
from .scalars import ConstraintViolation, Scalar, ScalarError

COMMANDS = ("trace2d", "trace3d", "uvir2d", "uvir3d", "compat", "flip-check", "pachner-check",
            "cone-check", "fig8", "verify-all")


class UsageError(ValueError):
    pass


@dataclass
class JobSpec:
    command: str
    surface: str | None = None
    mfld: str | None = None
    presentation: str | None = None
    edge: str = "x"
    face: str = "F"
    ct: str | None = None
    cb: str | None = None
    angles: str | None = None
    out: str | None = None
    jobs: int = 1


@dataclass
class Line:
    name: str
    ok: bool
    detail: str = ""

    def render(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        return f"{tag} {self.name}" + (f": {self.detail}" if self.detail else "")


@dataclass
class Report:
    lines: list[Line] = field(default_factory=list)
    output: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(x.ok for x in self.lines)

    def add_records(self, recs: list[uvir2d.CheckRecord]) -> None:
        for r in recs:
            self.lines.append(Line(r.name, r.equal, "" if r.equal else f"{r.lhs} != {r.rhs}"))


# ---------------------------------------------------------------- inputs

def _load(path: str | None, what: str) -> Any:
    if path is None:
        raise UsageError(f"missing --{what}")
    with open(path) as fh:
        return json.load(fh)


def _scalar(text: str | None, default: Scalar) -> Scalar:
    return default if text is None else Scalar.parse(text)


def _mfld(job: JobSpec, default: Callable[[], cx.Mfld3Tri] | None = None) -> cx.Mfld3Tri:
    if job.mfld is None:
        if default is None:
            raise UsageError("missing --mfld")
        spec = default().to_spec()
    elif job.mfld == "figure8":
        spec = dict(cx.FIGURE8)
    elif job.mfld == "bipyramid":
        spec = cx.bipyramid().to_spec()
    else:
        spec = _load(job.mfld, "mfld")
    if job.angles:
        spec = dict(spec)
        spec["angles"] = _load(job.angles, "angles")
    return cx.build_mfld3(spec)


def _constants_3d(job: JobSpec) -> tuple[Scalar, Scalar]:
    return _scalar(job.ct, trace3d.DEFAULT_CT), _scalar(job.cb, trace3d.DEFAULT_CB)


def _presentation_3d(job: JobSpec) -> trace3d.SplitPresentation3D:
    if job.presentation in (None, "figure8"):
        return trace3d.figure8_presentation()
    return trace3d.parse_presentation_3d(_load(job.presentation, "presentation"))


# -------------------------------------------------------------- commands

def cmd_trace2d(job: JobSpec) -> Report:
    tau = cx.build_surface(_load(job.surface, "surface"))
    p = trace2d.parse_presentation_2d(_load(job.presentation, "presentation"))
    rep = Report()
    rep.output.append(str(trace2d.trace_surface(tau, p, _scalar(job.ct, Scalar.one()))))
    return rep


def cmd_trace3d(job: JobSpec) -> Report:
    T = _mfld(job, cx.figure8)
    p = _presentation_3d(job)
    ct, cb = _constants_3d(job)
    rep = Report()
    rep.output.append(str(trace3d.trace_3d(T, p, ct, cb)))
    return rep


def cmd_uvir2d(job: JobSpec) -> Report:
    tau = cx.build_surface(_load(job.surface, "surface"))
    p = trace2d.parse_presentation_2d(_load(job.presentation, "presentation"))
    rep = Report()
    rep.add_records(uvir2d.compat_check_2d(tau, p, _scalar(job.ct, Scalar.one())))
    return rep


def cmd_uvir3d(job: JobSpec) -> Report:
    T = _mfld(job, cx.figure8)
    p = _presentation_3d(job)
    ct, cb = _constants_3d(job)
    rep = Report()
    res = uvir3d.compat_check_3d(T, p, ct, cb)
    rep.add_records(res.records)
    rep.output.append(f"recovered trace: {uvir3d.recover_trace(T, p, ct, cb)}")
    return rep


def suite_triangle(ct: str | None) -> list[Line]:
    c = _scalar(ct, Scalar.one())
    recs = [uvir2d.compat_triangle(w, c, name) for name, w in uvir2d.triangle_generators()]
    recs.append(uvir2d.central_check(c))
    return [Line(r.name, r.equal) for r in recs]


def suite_face_suspension(ct: str | None, cb: str | None, T: cx.Mfld3Tri | None = None) -> list[Line]:
    c, b = _scalar(ct, trace3d.DEFAULT_CT), _scalar(cb, trace3d.DEFAULT_CB)
    T = T or cx.figure8()
    out = []
    for face in (s.name for s in T.suspensions if s.bottom is not None):
        out += [Line(r.name, r.equal) for r in uvir3d.sf_generator_squares(T, face, c, b)]
    return out


def cmd_compat(job: JobSpec) -> Report:
    rep = Report()
    rep.lines += suite_triangle(job.ct)
    rep.lines += suite_face_suspension(job.ct, job.cb, _mfld(job, cx.figure8))
    return rep


def suite_flip(surface: dict | None, edge: str, ct: str | None) -> list[Line]:
    tau = cx.build_surface(surface or cx.FLIP_QUAD)
    out = [Line(f"flip round trip {name}", ok) for name, ok in trace2d.flip_round_trips(tau, edge)]
    for r in uvir2d.naturality_check_2d(tau, edge, _scalar(ct, Scalar.one())):
        out.append(Line(r.name, r.equal, "" if r.equal else f"{r.lhs} != {r.rhs}"))
    return out


def cmd_flip_check(job: JobSpec) -> Report:
    rep = Report()
    surface = _load(job.surface, "surface") if job.surface else None
    rep.lines += suite_flip(surface, job.edge, job.ct)
    return rep


def suite_pachner(spec: dict | None, face: str) -> list[Line]:
    T = cx.build_mfld3(spec) if spec else cx.bipyramid()
    T3, data = cx.pachner_2_3(T, face)
    r = trace3d.phi_2_3(T, T3, data)
    out = [Line(f"vertex relation of {t} maps to zero", s.is_zero(), str(s)) for t, s in r.vertex]
    out.append(Line("Lagrangian chain closes", r.lagrangian.is_zero(), str(r.lagrangian)))
    out.append(Line("horizontal biangle square", r.biangle[0] == r.biangle[1],
                    f"{r.biangle[0]} vs {r.biangle[1]}"))
    out.append(Line("generator map preserves forms", r.forms_preserved))
    out.append(Line("angle constraints after the move", T3.angle_constraints_hold()))
    return out


def suite_sqgm() -> list[Line]:
    out = []
    for k in range(3, 7):
        T = cx.edge_star(k)
        sq = trace3d.SQGM(T)
        e = sq.reduce(sq.torus.monomial(T.gluing_vector(T.interior_edge_classes[0])))
        want = sq.torus.scalar(Scalar.q() * sq.cb ** -k)
        out.append(Line(f"edge of degree {k} reduces to q Cb^-{k}", e == want, str(e)))
        out.append(Line(f"vertex monomials central (degree {k})",
                        all(sq.torus.is_central(r.vector) for r in sq.vertex_relations)))
    return out


def cmd_pachner_check(job: JobSpec) -> Report:
    rep = Report()
    spec = _mfld(job, cx.bipyramid).to_spec() if job.mfld else None
    rep.lines += suite_pachner(spec, job.face)
    rep.lines += suite_sqgm()
    return rep


def suite_cone(spec: dict | None, face: str) -> list[Line]:
    T = cx.build_mfld3(spec) if spec else cx.bipyramid()
    T3, data = cx.pachner_2_3(T, face)
    r = uvir3d.cone_3term_check(T, T3, data)
    mq = uvir3d.cone_torus().scalar(-Scalar.q())
    return [
        Line("[x x' x''] = -1 is central", r.cyclic_relation_central),
        Line("ordered product x x' x'' = -q", r.ordered_product == mq, str(r.ordered_product)),
        Line("[x x' x''] acts on the cyclic vector by -q", r.module_action == mq, str(r.module_action)),
        Line("meridian sign (-1)^3 = -1", r.sign == -1),
        Line("three-term transport closes", r.three_term_closes,
             "; ".join(f"{k}: {v}" for k, v in r.three_term.items())),
    ]


def cmd_cone_check(job: JobSpec) -> Report:
    rep = Report()
    spec = _mfld(job, cx.bipyramid).to_spec() if job.mfld else None
    rep.lines += suite_cone(spec, job.face)
    return rep


def suite_fig8(ct: str | None, cb: str | None) -> tuple[list[Line], list[str]]:
    c, b = _scalar(ct, trace3d.DEFAULT_CT), _scalar(cb, trace3d.DEFAULT_CB)
    T = cx.figure8()
    p = trace3d.figure8_presentation()
    sq = trace3d.SQGM(T, c, b)
    per: dict = {}
    total = trace3d.trace_3d(T, p, c, b, sq, order=["eps1", "eps2"], per_state=per)
    gold = trace3d.figure8_golden(sq)
    lines, text = [], []
    for key, val in per.items():
        st = dict(key)
        k = (st["eps1"], st["eps2"])
        text.append(f"state (eps1, eps2) = {k}: {val}")
        lines.append(Line(f"figure-8 state {k}", sq.equal(val, gold[k]), f"{val} vs {gold[k]}"))
    want = sum(gold.values(), sq.torus.zero())
    text.append(f"total: {total}")
    lines.append(Line("figure-8 total", sq.equal(total, want), f"{total} vs {want}"))
    res = uvir3d.compat_check_3d(T, p, c, b, order=["eps1", "eps2"])
    lines.append(Line("figure-8 UV-IR compatibility", res.ok,
                      "; ".join(r.name for r in res.records if not r.equal)))
    rec = uvir3d.recover_trace(T, p, c, b)
    lines.append(Line("figure-8 trace recovered from the UV-IR image", sq.equal(rec, total), str(rec)))
    return lines, text


def cmd_fig8(job: JobSpec) -> Report:
    rep = Report()
    lines, text = suite_fig8(job.ct, job.cb)
    rep.lines += lines
    rep.output += text
    return rep


def _run_suite(name: str, job: JobSpec) -> list[Line]:
    if name == "triangle":
        return suite_triangle(None)
    if name == "face-suspension":
        return suite_face_suspension(job.ct, job.cb)
    if name == "flip":
        return suite_flip(None, "x", None)
    if name == "pachner":
        return suite_pachner(None, "F")
    if name == "sqgm":
        return suite_sqgm()
    if name == "cone":
        return suite_cone(None, "F")
    if name == "fig8":
        return suite_fig8(job.ct, job.cb)[0]
    raise UsageError(name)


SUITES = ("triangle", "face-suspension", "flip", "sqgm", "pachner", "cone", "fig8")


def cmd_verify_all(job: JobSpec) -> Report:
    rep = Report()
    if job.jobs > 1:
        with ProcessPoolExecutor(max_workers=job.jobs) as ex:
            results = list(ex.map(_run_suite, SUITES, [job] * len(SUITES)))
    else:
        results = [_run_suite(s, job) for s in SUITES]
    for name, lines in zip(SUITES, results):
        rep.lines += [Line(f"[{name}] {x.name}", x.ok, x.detail) for x in lines]
    return rep


HANDLERS: dict[str, Callable[[JobSpec], Report]] = {
    "trace2d": cmd_trace2d, "trace3d": cmd_trace3d, "uvir2d": cmd_uvir2d, "uvir3d": cmd_uvir3d,
    "compat": cmd_compat, "flip-check": cmd_flip_check, "pachner-check": cmd_pachner_check,
    "cone-check": cmd_cone_check, "fig8": cmd_fig8, "verify-all": cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="skeintrace", description=__doc__.split("\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--surface", help="surface triangulation (JSON)")
    ap.add_argument("--mfld", help="3d triangulation (JSON, or 'figure8' / 'bipyramid')")
    ap.add_argument("--presentation", help="split presentation (JSON)")
    ap.add_argument("--edge", default="x", help="edge to flip (flip-check)")
    ap.add_argument("--face", default="F", help="face for the 2-3 move")
    ap.add_argument("--ct", help="value of Ct, e.g. 'q^-1/2'")
    ap.add_argument("--cb", help="value of Cb")
    ap.add_argument("--angles", help="angle assignment (JSON: tet -> {theta, theta1, theta2})")
    ap.add_argument("--out", help="write a JSON report here")
    ap.add_argument("--jobs", type=int, default=1)
    return ap


def run(job: JobSpec) -> tuple[int, Report | None, str]:
    try:
        rep = HANDLERS[job.command](job)
    except ConstraintViolation as exc:
        return 1, None, f"check failed: {type(exc).__name__}: {exc}"
    except (OSError, json.JSONDecodeError, cx.ComplexError, trace2d.InvalidPresentation,
            trace3d.InvalidPresentation, uvir3d.NoAngles, ScalarError, UsageError, KeyError) as exc:
        return 2, None, f"error: {type(exc).__name__}: {exc}"
    except (TorusError, trace2d.FlipError, uvir2d.UVIRError) as exc:
        return 1, None, f"check failed: {type(exc).__name__}: {exc}"
    return (0 if rep.ok else 1), rep, ""


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    job = JobSpec(**vars(args))
    code, rep, err = run(job)
    if rep is None:
        print(err, file=sys.stderr)
        return code
    for s in rep.output:
        print(s)
    for x in rep.lines:
        print(x.render())
    n_fail = sum(not x.ok for x in rep.lines)
    if rep.lines:
        print(f"{len(rep.lines) - n_fail} passed, {n_fail} failed")
    if job.out:
        with open(job.out, "w") as fh:
            json.dump({"command": job.command, "ok": rep.ok, "output": rep.output,
                       "checks": [{"name": x.name, "ok": x.ok, "detail": x.detail} for x in rep.lines]},
                      fh, indent=2, sort_keys=True)
    return code


if __name__ == "__main__":
    sys.exit(main())
