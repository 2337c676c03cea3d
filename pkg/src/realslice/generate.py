"""Seeded random pencils and disjoint oriented lines."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DomainError, ExhaustedRetries, MalformedInput
from .linking import OrientedLine, line_meets_base
from .poly import HomPoly, cross
from .slices import CoorientedBase, PencilSpec, certify_slice

COEFF_BOUND = 6
POINT_BOUND = 5


@dataclass(frozen=True)
class Instance:
    seed: int
    pencil: PencilSpec
    line: OrientedLine
    base: CoorientedBase


def random_form(rng: random.Random, degree: int, bound: int = COEFF_BOUND) -> HomPoly:
    terms = {}
    for a in range(degree, -1, -1):
        for b in range(degree - a, -1, -1):
            terms[(a, b, degree - a - b)] = rng.randint(-bound, bound)
    return HomPoly(degree, terms)


def random_line(rng: random.Random) -> OrientedLine:
    while True:
        u = [rng.randint(-POINT_BOUND, POINT_BOUND) for _ in range(3)]
        v = [rng.randint(-POINT_BOUND, POINT_BOUND) for _ in range(3)]
        if any(cross(u, v)):
            return OrientedLine(u, v)


def _check_range(degree_range) -> tuple[int, int]:
    lo, hi = (degree_range, degree_range) if isinstance(degree_range, int) else tuple(degree_range)
    if not 1 <= lo <= hi <= 6:
        raise MalformedInput("degree range must lie within [1, 6]", module="cli", degrees=[lo, hi])
    return lo, hi


def gen_instance(seed: int, degree_range=(1, 4), retries: int = 200) -> Instance:
    """A certified slice and a random line missing its real base, from ``seed`` alone."""
    lo, hi = _check_range(degree_range)
    rng = random.Random(seed)
    for _ in range(retries):
        degree = rng.randint(lo, hi)
        R, S = random_form(rng, degree), random_form(rng, degree)
        try:
            base = certify_slice(R, S)
        except DomainError:
            continue
        for _ in range(20):
            line = random_line(rng)
            if not line_meets_base(line, base.pencil):
                return Instance(seed, base.pencil, line, base)
    raise ExhaustedRetries("no generic instance found", seed=seed, degrees=[lo, hi])


def gen_random(seed: int, degree_range=(1, 4)) -> tuple[PencilSpec, OrientedLine]:
    inst = gen_instance(seed, degree_range)
    return inst.pencil, inst.line
