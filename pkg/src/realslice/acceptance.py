"""The nine acceptance criteria, shared by the test-suite and ``realslice selftest``.

Every check is exact except the subdivision oracle of criterion 7, which only
proposes candidate regions that the certified boxes must match one-to-one.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from . import orient
from .errors import CommonFactor, Degenerate, DomainError, Singular
from .generate import Instance, gen_instance, random_form
from .interval import Interval, eval_real_form
from .linking import OrientedLine, h_circle_v, lk_boundary, lk_chart, verify_theorem5
from .poly import GaussianRational, HomPoly, parse_poly, realify
from .slices import certify_slice, chart_sign, conjugate_flip
from .solve import CHART_ORDER, brute_force_base_oracle, chart_box, real_base_points, real_zeros, refine_point

CALIBRATION_LINE = OrientedLine((1, 0, 0), (0, 1, 0))
N_THEOREM = 200
N_SINGLE = 50
N_RESEED = 10
N_SEMILINEAR = 500
N_CONJ = 50
N_ORACLE = 100
N_REALIFY = 50


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} criterion {self.number}: {self.title} ({self.detail}; {self.seconds:.1f}s)"


@lru_cache(maxsize=None)
def theorem_instances() -> tuple[Instance, ...]:
    return tuple(gen_instance(seed, (1, 4)) for seed in range(N_THEOREM))


@lru_cache(maxsize=None)
def single_point_instances() -> tuple[Instance, ...]:
    return tuple(gen_instance(100_000 + seed, (1, 1)) for seed in range(N_SINGLE))


def calibration_base():
    return certify_slice(parse_poly("x"), parse_poly("y"))


def _timed(number: int, title: str, fn: Callable[[], tuple[bool, str]]) -> CriterionResult:
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported with its type
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(number, title, ok, detail, time.perf_counter() - start)


# 1 ---------------------------------------------------------------------------


def _criterion_1():
    bad = [inst.seed for inst in theorem_instances() if verify_theorem5(inst.line, inst.base).residual != 0]
    return not bad, f"{N_THEOREM} instances, nonzero residual at seeds {bad}" if bad else f"{N_THEOREM} instances, residual 0"


def criterion_1() -> CriterionResult:
    return _timed(1, "linking identity D/2 = H.V + lk", _criterion_1)


# 2 ---------------------------------------------------------------------------


def _criterion_2():
    bad = []
    for inst in theorem_instances():
        lk = lk_chart(inst.line, inst.base)
        if abs(lk) > Fraction(inst.base.degree, 2):
            bad.append(inst.seed)
    return not bad, f"bound violated at {bad}" if bad else f"|lk| <= D/2 on {N_THEOREM} instances"


def criterion_2() -> CriterionResult:
    return _timed(2, "corollary bound |lk| <= D/2", _criterion_2)


# 3 ---------------------------------------------------------------------------


def _criterion_3():
    calib = lk_chart(CALIBRATION_LINE, calibration_base())
    mags = [abs(lk_chart(inst.line, inst.base)) for inst in single_point_instances()]
    sizes = {len(inst.base.points) for inst in single_point_instances()}
    ok = calib == Fraction(1, 2) and all(m == Fraction(1, 2) for m in mags) and sizes == {1}
    return ok, f"calibration lk = {calib}; |lk| values {sorted(set(map(str, mags)))} on {N_SINGLE} single-point bases"


def criterion_3() -> CriterionResult:
    return _timed(3, "single-point base has |lk| = 1/2, calibration +1/2", _criterion_3)


# 4 ---------------------------------------------------------------------------


def _criterion_4():
    bad = []
    count = 0
    for inst in theorem_instances() + single_point_instances():
        ref = lk_chart(inst.line, inst.base)
        for seed in range(N_RESEED + 1):
            count += 1
            if lk_boundary(inst.line, inst.base, seed=seed) != ref:
                bad.append((inst.seed, seed))
        if lk_boundary(inst.line, inst.base, seed=0, outgoing=-1) != ref:
            bad.append((inst.seed, "outgoing=-1"))
    return not bad, f"disagreements {bad[:5]}" if bad else f"{count} auxiliary-line choices agree with lk_chart"


def criterion_4() -> CriterionResult:
    return _timed(4, "lk_chart = lk_boundary", _criterion_4)


# 5 ---------------------------------------------------------------------------


def random_gaussian(rng: random.Random, bound: int = 5) -> GaussianRational:
    return GaussianRational(Fraction(rng.randint(-bound, bound), rng.randint(1, 3)), Fraction(rng.randint(-bound, bound), rng.randint(1, 3)))


def random_invertible(rng: random.Random, k: int, semilinear: bool) -> orient.ComplexMatrix:
    while True:
        m = orient.ComplexMatrix([[random_gaussian(rng) for _ in range(k)] for _ in range(k)], semilinear)
        if orient.det(m.realified()) != 0:
            return m


def _criterion_5():
    rng = random.Random(5)
    bad = 0
    for n in range(N_SEMILINEAR):
        k = 1 + n % 5
        semi = random_invertible(rng, k, True)
        lin = random_invertible(rng, k, False)
        try:
            if int(orient.semilinear_pullback_sign(semi, k)) != (-1) ** k:
                bad += 1
            if int(orient.semilinear_pullback_sign(lin, k)) != 1:
                bad += 1
        except Singular:
            bad += 1
    return bad == 0, f"{bad} failures over {N_SEMILINEAR} semilinear and {N_SEMILINEAR} linear maps"


def criterion_5() -> CriterionResult:
    return _timed(5, "semilinear pullback sign (-1)^k", _criterion_5)


# 6 ---------------------------------------------------------------------------


def _criterion_6():
    problems = []
    for inst in theorem_instances()[:N_CONJ]:
        base, line = inst.base, inst.line
        R, S = base.pencil.R, base.pencil.S
        conj = certify_slice(R, -S)
        flipped = conjugate_flip(base)
        same_points = len(conj.points) == len(base.points)
        signs_ok = same_points and all(
            chart_sign(c, 1) == -chart_sign(f, 1) == chart_sign(g, 1)
            for c, f, g in zip(conj.points, base.points, flipped.points)
        )
        before, after = verify_theorem5(line, base), verify_theorem5(line, conj)
        ok = (
            signs_ok
            and after.lk_chart == -before.lk_chart
            and after.h_dot_v == base.degree - before.h_dot_v
            and after.residual == 0
            and h_circle_v(line, flipped) == after.h_dot_v
        )
        if not ok:
            problems.append(inst.seed)
    return not problems, f"failures at {problems}" if problems else f"{N_CONJ} slices flip consistently"


def criterion_6() -> CriterionResult:
    return _timed(6, "conjugation flips coorientations and lk", _criterion_6)


# 7 ---------------------------------------------------------------------------


def random_pencil(seed: int, degree_range=(1, 4)) -> tuple[HomPoly, HomPoly]:
    rng = random.Random(seed)
    while True:
        d = rng.randint(*degree_range)
        R, S = random_form(rng, d), random_form(rng, d)
        if not (R.is_zero() or S.is_zero()):
            return R, S


def _unit(p) -> np.ndarray:
    v = np.array(p, dtype=float)
    return v / np.linalg.norm(v)


def match_oracle(R: HomPoly, S: HomPoly, points) -> tuple[bool, str]:
    """One-to-one matching between certified points and oracle clusters."""
    clusters = brute_force_base_oracle(R, S, 64)
    if len(points) > R.degree**2:
        return False, "Bezout bound exceeded"
    if len(clusters) != len(points):
        return False, f"{len(clusters)} clusters vs {len(points)} certified points"
    refined = [_unit(refine_point(p, Fraction(1, 10**9)).approx()) for p in points]
    used = set()
    for c in clusters:
        tol = 10 * c.leaf
        hits = [i for i, q in enumerate(refined) if min(np.linalg.norm(q - c.point), np.linalg.norm(q + c.point)) < tol]
        if len(hits) != 1 or hits[0] in used:
            return False, f"cluster at {np.round(c.point, 5)} matches {len(hits)} points"
        used.add(hits[0])
    return True, ""


def _criterion_7():
    bad, total, checked = [], 0, 0
    seed = 200_000
    while checked < N_ORACLE:
        seed += 1
        R, S = random_pencil(seed)
        try:
            points = real_base_points(R, S)
        except (CommonFactor, Degenerate):
            continue
        if any(p.multiplicity > 1 for p in points):
            continue
        checked += 1
        total += len(points)
        ok, why = match_oracle(R, S, points)
        if not ok:
            bad.append((seed, why))
    return not bad, f"mismatches {bad[:3]}" if bad else f"{N_ORACLE} pencils, {total} points matched one-to-one"


def criterion_7() -> CriterionResult:
    return _timed(7, "solver completeness against the subdivision oracle", _criterion_7)


# 8 ---------------------------------------------------------------------------


def random_complex_form(rng: random.Random, degree: int) -> HomPoly:
    terms = {}
    for a in range(degree, -1, -1):
        for b in range(degree - a, -1, -1):
            terms[(a, b, degree - a - b)] = GaussianRational(rng.randint(-6, 6), rng.randint(-6, 6))
    return HomPoly(degree, terms)


def _same_point_sets(first, second, width: Fraction) -> bool:
    a = [refine_point(p, width) for p in first]
    b = [refine_point(p, width) for p in second]
    if len(a) != len(b):
        return False
    used = set()
    for p in a:
        hits = [j for j, q in enumerate(b) if p.overlaps(q)]
        if len(hits) != 1 or hits[0] in used:
            return False
        used.add(hits[0])
    return True


def _mean_value(p: HomPoly, grads, chart, a: Fraction, b: Fraction, r: Fraction) -> Interval:
    """Enclosure of ``p`` on the cell ``[a-r, a+r] x [b-r, b+r]`` of ``chart``."""
    box = chart.lift(Interval(a - r, a + r), Interval(b - r, b + r))
    centre = eval_real_form(p, chart.lift(Interval(a), Interval(b)))
    spread = Interval(-r, r)
    return centre + eval_real_form(grads[0], box) * spread + eval_real_form(grads[1], box) * spread


def _clusters(cells: list[tuple[float, float]], leaf: float) -> list[list[tuple[float, float]]]:
    groups: list[list[tuple[float, float]]] = []
    for c in cells:
        touching = [g for g in groups if any(max(abs(c[0] - d[0]), abs(c[1] - d[1])) <= 1.01 * leaf for d in g)]
        merged = [c] + [d for g in touching for d in g]
        groups = [g for g in groups if not any(g is t for t in touching)] + [merged]
    return groups


def _survives(R, S, grads, chart, a, b, r) -> bool:
    value = _mean_value(R, grads[id(R)], chart, a, b, r) ** 2 + _mean_value(S, grads[id(S)], chart, a, b, r) ** 2
    return value.lo <= 0


def _subdivide(cells, r, levels, keep, first=True):
    """Quadtree pruning: drop cells where ``keep`` fails, split the rest, ``levels`` times."""
    if first:
        cells = [c for c in cells if keep(c[0], c[1], r)]
    for _ in range(levels):
        if not cells:
            break
        r /= 2
        cells = [(a + da, b + db) for a, b in cells for da in (-r, r) for db in (-r, r)]
        cells = [c for c in cells if keep(c[0], c[1], r)]
    return cells, r


def _holds_point(group, leaf, locs) -> bool:
    lo_x = min(c[0] for c in group) - leaf
    hi_x = max(c[0] for c in group) + leaf
    lo_y = min(c[1] for c in group) - leaf
    hi_y = max(c[1] for c in group) + leaf
    return any(lo_x <= px <= hi_x and lo_y <= py <= hi_y for px, py in locs)


def sos_exclusion(R: HomPoly, S: HomPoly, points, start: int = 8, levels: int = 8, extra_levels: int = 24) -> tuple[bool, str]:
    """Quadtree over the three charts ``[-1, 1]^2`` certifying ``R^2 + S^2 > 0``
    outside a union of small cell clusters, each of which holds a base point,
    while every base point inside a chart square stays in a surviving cell."""
    for chart in CHART_ORDER:
        i, j = chart.axes
        grads = {id(p): (p.diff(i), p.diff(j)) for p in (R, S)}
        locs = []
        for p in points:
            q = refine_point(p, Fraction(1, 10**10))
            if q.homogeneous_box()[chart.index].sign():
                _, box = chart_box(q, chart)
                locs.append((float(box[0].mid), float(box[1].mid)))
        r = Fraction(1, start)
        cells = [(Fraction(-1) + (2 * k + 1) * r, Fraction(-1) + (2 * m + 1) * r) for k in range(start) for m in range(start)]
        cells, r = _subdivide(cells, r, levels, lambda a, b, rr: _survives(R, S, grads, chart, a, b, rr))
        leaf = float(2 * r)
        centres = [(float(a), float(b)) for a, b in cells]
        for group in _clusters(centres, leaf):
            if _holds_point(group, leaf, locs):
                continue
            # a near miss: keep subdividing this cluster alone until it disappears
            exact = [c for c in cells if (float(c[0]), float(c[1])) in set(group)]
            rest, rr = _subdivide(exact, r, extra_levels, lambda a, b, q: _survives(R, S, grads, chart, a, b, q), first=False)
            if rest:
                return False, f"R^2+S^2 not excluded near {group[0]} in chart {chart}"
        for px, py in locs:
            if max(abs(px), abs(py)) < 1 and not any(
                max(abs(px - cx), abs(py - cy)) <= leaf / 2 * 1.0001 for cx, cy in centres
            ):
                return False, f"base point ({px:.4f}, {py:.4f}) excluded in chart {chart}"
    return True, ""


def _criterion_8():
    rng = random.Random(8)
    bad = []
    done = 0
    while done < N_REALIFY:
        P = random_complex_form(rng, rng.randint(1, 4))
        R, S = realify(P)
        try:
            base = real_base_points(R, S)
        except DomainError:
            continue
        c = random_gaussian(rng)
        if c.is_zero() or c.is_real() or c.re == 0:
            continue
        done += 1
        zeros = real_zeros(P, multiplier=c)
        if not _same_point_sets(base, zeros, Fraction(1, 10**8)):
            bad.append((done, "point sets differ"))
            continue
        ok, why = sos_exclusion(R, S, base)
        if not ok:
            bad.append((done, why))
    return not bad, f"failures {bad[:3]}" if bad else f"{N_REALIFY} complex forms: zero set = base, R^2+S^2 excluded elsewhere"


def criterion_8() -> CriterionResult:
    return _timed(8, "real zeros of P = base of (Re P, Im P) = zeros of R^2+S^2", _criterion_8)


# 9 ---------------------------------------------------------------------------


def _rand_vec(rng: random.Random, n: int):
    return tuple(Fraction(rng.randint(-7, 7), rng.randint(1, 4)) for _ in range(n))


def random_basis(rng: random.Random, n: int, k: int | None = None) -> orient.BasisMatrix:
    k = n if k is None else k
    while True:
        cols = [_rand_vec(rng, n) for _ in range(k)]
        if orient.rank(cols) == k:
            return orient.BasisMatrix(cols)


def random_quotient(rng: random.Random, n: int, codim: int) -> orient.QuotientBasis:
    while True:
        cols = [_rand_vec(rng, n) for _ in range(n)]
        if orient.rank(cols) == n:
            return orient.QuotientBasis(cols[:codim], cols[codim:], n)


def _criterion_9():
    rng = random.Random(9)
    failures = []
    for _ in range(200):
        n = rng.randint(1, 6)
        b1, b2, b3 = (random_basis(rng, n) for _ in range(3))
        s12, s23, s13 = orient.orientation_sign(b2, b1), orient.orientation_sign(b3, b2), orient.orientation_sign(b3, b1)
        if int(s13) != int(s12) * int(s23):
            failures.append("multiplicativity")
    for _ in range(200):
        k = rng.randint(1, 4)
        bases = []
        for _ in range(2):
            while True:
                vecs = [[random_gaussian(rng) for _ in range(k)] for _ in range(k)]
                try:
                    bases.append(orient.complex_orientation_basis(vecs))
                    break
                except orient.RankDeficient:
                    continue
        if int(orient.orientation_sign(bases[1], bases[0])) != 1:
            failures.append("complex transition")
    std2 = orient.BasisMatrix.standard(2)
    e = lambda *c: tuple(Fraction(x) for x in c)  # noqa: E731
    if int(orient.orientation_sign(orient.ses_orientation(orient.BasisMatrix([e(0, 1)]), orient.BasisMatrix([e(1, 0)])), std2)) != 1:
        failures.append("ordering example 1")
    if int(orient.orientation_sign(orient.ses_orientation(orient.BasisMatrix([e(0, -1)]), orient.BasisMatrix([e(1, 0)])), std2)) != -1:
        failures.append("ordering example 2")
    b3 = orient.ses_orientation(orient.BasisMatrix([e(0, 0, 1)]), orient.BasisMatrix([e(1, 0, 0), e(0, 1, 0)]))
    if b3.columns != (e(1, 0, 0), e(0, 1, 0), e(0, 0, 1)):
        failures.append("ordering example 3")
    for _ in range(200):
        n = rng.randint(2, 6)
        k = rng.randint(1, n - 1)
        l = rng.randint(1, n - k)
        Y, Z = random_quotient(rng, n, k), random_quotient(rng, n, l)
        if orient.rank(Y.sub + Z.sub) != n:
            continue
        yz, zy = orient.cup_coorientation(Y, Z), orient.cup_coorientation(Z, Y)
        sub = list(yz.sub)
        s1 = orient.det([list(r) for r in zip(*(list(yz.reps) + sub))])
        s2 = orient.det([list(r) for r in zip(*(list(zy.reps) + sub))])
        if (1 if s1 > 0 else -1) * (1 if s2 > 0 else -1) != (-1) ** (k * l):
            failures.append(f"swap factor n={n} k={k} l={l}")
    return not failures, f"failures {failures[:3]}" if failures else "multiplicativity, complex transitions, ordering, swap factor"


def criterion_9() -> CriterionResult:
    return _timed(9, "orientation algebra", _criterion_9)


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9)


def run_all(printer: Callable[[str], None] = print) -> list[CriterionResult]:
    results = []
    for crit in CRITERIA:
        res = crit()
        printer(res.line())
        results.append(res)
    return results


__all__ = ["CriterionResult", "CRITERIA", "run_all"] + [f"criterion_{k}" for k in range(1, 10)]
