"""Command-line driver.

Subcommands: ``solve``, ``certify``, ``link``, ``verify``, ``plot``,
``batch`` and ``selftest``.  Every run writes one JSON report (stdout or
``--out``) and exits with 0 on success, 2 for bad input, 3 when the instance
is not generic and 4 when an internal check fails.
"""

from __future__ import annotations

import argparse
import os
import random
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .errors import InputError, InvariantBreach, MalformedInput, RealSliceError
from .generate import gen_instance
from .linking import OrientedLine, lk_boundary, lk_chart, verify_theorem5
from .report import attach_error, dumps, new_report, payload
from .slices import PencilSpec, certify_slice
from .solve import real_base_points

COMMANDS = ("solve", "certify", "link", "verify", "plot", "batch", "selftest")
JOB_KEYS = ("command", "pencil", "pencil_file", "line", "orient", "seed", "count", "degrees", "out", "svg", "window", "workers")


@dataclass
class JobSpec:
    command: str
    pencil: str | None = None
    line: str | None = None
    orient: int = 1
    seed: int = 0
    count: int = 50
    degrees: tuple[int, int] = (1, 4)
    out: str | None = None
    svg: str | None = None
    window: tuple[Fraction, Fraction, Fraction, Fraction] = (Fraction(-2), Fraction(2), Fraction(-2), Fraction(2))
    workers: int = 0

    def echo(self) -> dict[str, Any]:
        out: dict[str, Any] = {"command": self.command}
        if self.pencil is not None:
            out["pencil"] = self.pencil
        if self.line is not None:
            out["line"] = self.line
            out["orient"] = self.orient
        if self.command in ("link", "verify", "batch"):
            out["seed"] = self.seed
        if self.command == "batch":
            out["count"] = self.count
            out["degrees"] = list(self.degrees)
        if self.command == "plot":
            out["window"] = [str(v) for v in self.window]
        return out


# ---------------------------------------------------------------------------
# parsing


def parse_point(text: str) -> tuple[Fraction, Fraction, Fraction]:
    parts = [p for p in re.split(r"[\s,:()]+", text.strip()) if p]
    try:
        values = tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"bad point {text!r}", module="cli") from exc
    if len(values) != 3:
        raise MalformedInput(f"a point needs three coordinates, got {text!r}", module="cli")
    return values


def parse_line(text: str, orient: int = 1) -> OrientedLine:
    parts = text.split(";")
    if len(parts) != 2:
        raise MalformedInput("a line is written 'u; v', e.g. '1,0,0; 0,1,0'", module="cli", text=text)
    line = OrientedLine(parse_point(parts[0]), parse_point(parts[1]))
    if orient not in (1, -1):
        raise MalformedInput("--orient must be +1 or -1", module="cli")
    return line if orient == 1 else line.reversed()


def parse_degrees(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*(?:[-:,]\s*(\d+))?\s*", text)
    if not m:
        raise MalformedInput(f"bad degree range {text!r}", module="cli")
    lo = int(m.group(1))
    hi = int(m.group(2) or lo)
    if not 1 <= lo <= hi <= 6:
        raise MalformedInput("degree range must lie within [1, 6]", module="cli", degrees=[lo, hi])
    return lo, hi


def parse_window(text: str) -> tuple[Fraction, ...]:
    try:
        values = tuple(Fraction(v) for v in re.split(r"[\s,]+", text.strip()) if v)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"bad window {text!r}", module="cli") from exc
    if len(values) != 4:
        raise MalformedInput("window is 'xmin,xmax,ymin,ymax'", module="cli")
    return values


def read_job_file(path: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment."""
    p = Path(path)
    if not p.is_file():
        raise MalformedInput(f"job file {path} does not exist", module="cli")
    values: dict[str, str] = {}
    for n, raw in enumerate(p.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise MalformedInput(f"{path}:{n}: expected key = value", module="cli")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in JOB_KEYS:
            raise MalformedInput(f"{path}:{n}: unknown key {key!r}", module="cli")
        values[key] = value
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="realslice", description="Certified base points, coorientations and linking numbers of real pencils.")
    parser.add_argument("--job", dest="job_top", help="job file naming the command and its options")
    sub = parser.add_subparsers(dest="command")
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--job", help="key = value job file; flags override it")
        sp.add_argument("--pencil", help="'R; S' in x, y, z")
        sp.add_argument("--pencil-file", dest="pencil_file", help="file holding the pencil text")
        sp.add_argument("--line", help="'u; v' two points of the line, traversed as t*u + v")
        sp.add_argument("--orient", type=int, choices=(1, -1), help="+1 keeps, -1 reverses the line orientation")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--count", type=int)
        sp.add_argument("--degrees", help="degree range such as 1-4")
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--svg", help="SVG output path (plot)")
        sp.add_argument("--window", help="plot window xmin,xmax,ymin,ymax")
        sp.add_argument("--workers", type=int, help="batch worker processes (0 = automatic)")
    return parser


def job_from_args(argv: Sequence[str]) -> JobSpec:
    parser = _build_parser()
    try:
        ns = parser.parse_args(list(argv))
    except SystemExit as exc:
        if exc.code == 0:  # --help
            raise
        raise MalformedInput("invalid command line", module="cli") from exc
    job_path = getattr(ns, "job", None) or ns.job_top
    values: dict[str, str] = read_job_file(job_path) if job_path else {}
    for key in JOB_KEYS:
        flag = getattr(ns, key, None)
        if flag is not None and key != "command":
            values[key] = str(flag)
    command = ns.command or values.get("command")
    if command not in COMMANDS:
        raise MalformedInput(f"unknown command {command!r}", module="cli", choices=list(COMMANDS))
    job = JobSpec(command)
    if "pencil_file" in values and "pencil" not in values:
        path = Path(values["pencil_file"])
        if not path.is_file():
            raise MalformedInput(f"pencil file {path} does not exist", module="cli")
        job.pencil = path.read_text().strip()
    else:
        job.pencil = values.get("pencil")
    job.line = values.get("line")
    try:
        job.orient = int(values.get("orient", 1))
        job.seed = int(values.get("seed", 0))
        job.count = int(values.get("count", 50))
        job.workers = int(values.get("workers", 0))
    except ValueError as exc:
        raise MalformedInput(str(exc), module="cli") from exc
    if "degrees" in values:
        job.degrees = parse_degrees(values["degrees"])
    if "window" in values:
        job.window = parse_window(values["window"])
    job.out, job.svg = values.get("out"), values.get("svg")
    return job


# ---------------------------------------------------------------------------
# running


def _need(value, what: str):
    if value is None:
        raise MalformedInput(f"this command needs {what}", module="cli")
    return value


def _batch_one(args: tuple[int, tuple[int, int]]) -> dict[str, Any]:
    seed, degrees = args
    try:
        inst = gen_instance(seed, degrees)
        rep = verify_theorem5(inst.line, inst.base, seed=seed)
        return {
            "seed": seed,
            "pencil": inst.pencil.to_dict(),
            "points": len(inst.base.points),
            "line": inst.line.to_dict(),
            "h_dot_v": rep.h_dot_v,
            "lk_chart": str(rep.lk_chart),
            "lk_boundary": str(rep.lk_boundary),
            "residual": str(rep.residual),
        }
    except RealSliceError as exc:
        return {"seed": seed, "error": exc.to_dict()}


def run_job(job: JobSpec) -> dict[str, Any]:
    """Execute a job and return its report; domain errors become structured entries."""
    report = new_report(job.command, job.echo())
    start = time.perf_counter()
    try:
        result = _dispatch(job, report)
        report["result"] = result
        report["exit_code"] = 0
    except RealSliceError as exc:
        attach_error(report, exc)
    report["timings"]["total_seconds"] = round(time.perf_counter() - start, 6)
    return report


def _dispatch(job: JobSpec, report: dict[str, Any]) -> dict[str, Any]:
    if job.command == "selftest":
        from .acceptance import run_all

        lines: list[str] = []
        results = run_all(lines.append)
        for text in lines:
            print(text, file=sys.stderr)
        report["timings"]["criteria"] = {str(r.number): round(r.seconds, 3) for r in results}
        if not all(r.passed for r in results):
            failed = [r.number for r in results if not r.passed]
            raise InvariantBreach("acceptance criteria failed", module="cli", failed=failed)
        return {"criteria": [{"number": r.number, "title": r.title, "passed": r.passed} for r in results]}

    if job.command == "batch":
        rng = random.Random(job.seed)
        seeds = [rng.randrange(2**31) for _ in range(job.count)]
        workers = job.workers or min(4, os.cpu_count() or 1)
        tasks = [(s, job.degrees) for s in seeds]
        if workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(_batch_one, tasks))
        else:
            rows = [_batch_one(t) for t in tasks]
        ok = sum(1 for r in rows if r.get("residual") == "0")
        if any("error" in r for r in rows) or ok != len(rows):
            report["result"] = {"instances": rows}
            raise InvariantBreach("batch instances failed", module="cli", passed=ok, total=len(rows))
        return {"instances": rows, "passed": ok}

    pencil = PencilSpec.parse(_need(job.pencil, "--pencil"))
    if job.command == "solve":
        pts = real_base_points(pencil.R, pencil.S)
        return {"points": [p.to_dict() for p in pts]}
    base = certify_slice(pencil.R, pencil.S)
    if job.command == "certify":
        return base.to_dict()
    if job.command == "plot":
        from .svg import emit_svg

        line = parse_line(job.line, job.orient) if job.line else None
        text = emit_svg(base, line, job.window)
        if job.svg:
            Path(job.svg).write_text(text)
            return {"svg": job.svg, "bytes": len(text.encode())}
        return {"svg_text": text}
    line = parse_line(_need(job.line, "--line"), job.orient)
    if job.command == "link":
        return {
            "line": line.to_dict(),
            "lk_chart": str(lk_chart(line, base)),
            "lk_boundary": str(lk_boundary(line, base, seed=job.seed)),
        }
    rep = verify_theorem5(line, base, seed=job.seed)
    return {"base": base.to_dict(), **rep.to_dict()}


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    out_path = None
    try:
        job = job_from_args(argv)
        out_path = job.out
        report = run_job(job)
    except InputError as exc:
        report = attach_error(new_report("invalid", {"argv": list(argv)}), exc)
    except Exception as exc:  # no panic paths: anything unexpected is an invariant breach
        report = attach_error(new_report("crashed", {"argv": list(argv)}), InvariantBreach(f"{type(exc).__name__}: {exc}", module="cli"))
    text = dumps(report)
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)
    return int(report.get("exit_code", 4))


__all__ = ["JobSpec", "run_job", "main", "payload", "parse_line", "job_from_args"]


if __name__ == "__main__":
    raise SystemExit(main())
