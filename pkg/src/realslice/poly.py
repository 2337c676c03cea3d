"""Exact homogeneous polynomials in x, y, z over the Gaussian rationals.

A :class:`HomPoly` is an immutable map from exponent triples ``(a, b, c)``
(meaning ``x^a y^b z^c``) to nonzero :class:`GaussianRational` coefficients,
tagged with its degree so that the zero form still knows where it lives.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    BothZero,
    DegreeMismatch,
    DegreeZero,
    DependentPoints,
    IdenticallyZero,
    MalformedInput,
    NotHomogeneous,
    ZeroPolynomial,
)

Rational = Fraction
Exponent = tuple[int, int, int]
VARIABLES = ("x", "y", "z")


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    # sympy / gmpy rationals expose numerator and denominator
    num, den = getattr(value, "numerator", None), getattr(value, "denominator", None)
    if num is not None and den is not None:
        return Fraction(int(num), int(den))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


class GaussianRational:
    """Complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", as_fraction(re))
        object.__setattr__(self, "im", as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(value, 0)

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        norm = other.norm()
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, k: int):
        if k < 0:
            return GaussianRational(1) / self**-k
        result, base = GaussianRational(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return "i" if self.im == 1 else f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        im = "i" if mag == 1 else f"{mag}*i"
        return f"({self.re}{sign}{im})"


I = GaussianRational(0, 1)


def _canonical_terms(terms: Mapping[Exponent, object]) -> tuple[tuple[Exponent, GaussianRational], ...]:
    cleaned = {}
    for exp, coeff in terms.items():
        c = GaussianRational.coerce(coeff)
        if not c.is_zero():
            cleaned[tuple(exp)] = c
    # graded lex: all exponents share the degree, so plain descending lex
    return tuple(sorted(cleaned.items(), key=lambda kv: kv[0], reverse=True))


@dataclass(frozen=True)
class HomPoly:
    degree: int
    terms: tuple[tuple[Exponent, GaussianRational], ...]

    def __init__(self, degree: int, terms: Mapping[Exponent, object] | Iterable = ()):
        if degree < 0:
            raise ValueError("degree must be non-negative")
        if not isinstance(terms, Mapping):
            terms = dict(terms)
        canon = _canonical_terms(terms)
        for exp, _ in canon:
            if len(exp) != 3 or min(exp) < 0 or sum(exp) != degree:
                raise NotHomogeneous(
                    f"monomial exponent {exp} does not have total degree {degree}",
                    exponent=list(exp),
                )
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", canon)

    # construction helpers
    @classmethod
    def zero(cls, degree: int) -> "HomPoly":
        return cls(degree, {})

    @classmethod
    def monomial(cls, exp: Exponent, coeff=1) -> "HomPoly":
        return cls(sum(exp), {tuple(exp): coeff})

    @classmethod
    def variable(cls, name: str) -> "HomPoly":
        exp = [0, 0, 0]
        exp[VARIABLES.index(name)] = 1
        return cls(1, {tuple(exp): 1})

    def as_dict(self) -> dict[Exponent, GaussianRational]:
        return dict(self.terms)

    def coeff(self, exp: Exponent) -> GaussianRational:
        return self.as_dict().get(tuple(exp), GaussianRational(0))

    def is_zero(self) -> bool:
        return not self.terms

    def is_real(self) -> bool:
        return all(c.is_real() for _, c in self.terms)

    def __iter__(self) -> Iterator[tuple[Exponent, GaussianRational]]:
        return iter(self.terms)

    # arithmetic
    def _check_same_degree(self, other: "HomPoly"):
        if self.degree != other.degree:
            raise DegreeMismatch(
                f"degrees differ: {self.degree} vs {other.degree}",
                degrees=[self.degree, other.degree],
            )

    def __add__(self, other: "HomPoly") -> "HomPoly":
        self._check_same_degree(other)
        out = self.as_dict()
        for exp, c in other.terms:
            out[exp] = out.get(exp, GaussianRational(0)) + c
        return HomPoly(self.degree, out)

    def __neg__(self) -> "HomPoly":
        return HomPoly(self.degree, {e: -c for e, c in self.terms})

    def __sub__(self, other: "HomPoly") -> "HomPoly":
        return self + (-other)

    def scale(self, factor) -> "HomPoly":
        factor = GaussianRational.coerce(factor)
        return HomPoly(self.degree, {e: c * factor for e, c in self.terms})

    def __mul__(self, other) -> "HomPoly":
        if not isinstance(other, HomPoly):
            return self.scale(other)
        out: dict[Exponent, GaussianRational] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[e] = out.get(e, GaussianRational(0)) + c1 * c2
        return HomPoly(self.degree + other.degree, out)

    def __rmul__(self, other) -> "HomPoly":
        return self.scale(other)

    def __pow__(self, k: int) -> "HomPoly":
        result = HomPoly(0, {(0, 0, 0): 1})
        for _ in range(k):
            result = result * self
        return result

    def conjugate(self) -> "HomPoly":
        return HomPoly(self.degree, {e: c.conjugate() for e, c in self.terms})

    def real_part(self) -> "HomPoly":
        return HomPoly(self.degree, {e: c.re for e, c in self.terms})

    def imag_part(self) -> "HomPoly":
        return HomPoly(self.degree, {e: c.im for e, c in self.terms})

    def diff(self, var: int | str) -> "HomPoly":
        if self.degree == 0:
            raise DegreeZero("cannot differentiate a form of degree 0")
        k = VARIABLES.index(var) if isinstance(var, str) else var
        out = {}
        for exp, c in self.terms:
            if exp[k]:
                e = list(exp)
                e[k] -= 1
                out[tuple(e)] = c * exp[k]
        return HomPoly(self.degree - 1, out)

    def linear_substitute(self, matrix: Sequence[Sequence]) -> "HomPoly":
        """Return ``p(M @ (x, y, z))`` for a 3x3 rational matrix ``M``."""
        rows = [HomPoly(1, {(1, 0, 0): m[0], (0, 1, 0): m[1], (0, 0, 1): m[2]}) for m in matrix]
        out = HomPoly.zero(self.degree)
        for (a, b, c), coeff in self.terms:
            out = out + (rows[0] ** a * rows[1] ** b * rows[2] ** c).scale(coeff)
        return out

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"HomPoly({self.degree}, {format_poly(self)!r})"


@dataclass(frozen=True)
class BinaryForm:
    """``sum_k coeffs[k] * t0^k * t1^(degree-k)``."""

    degree: int
    coeffs: tuple[GaussianRational, ...]

    def __init__(self, degree: int, coeffs: Sequence):
        if len(coeffs) != degree + 1:
            raise ValueError("a binary form of degree D needs D+1 coefficients")
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", tuple(GaussianRational.coerce(c) for c in coeffs))

    def evaluate(self, t0, t1) -> GaussianRational:
        t0, t1 = GaussianRational.coerce(t0), GaussianRational.coerce(t1)
        total = GaussianRational(0)
        for k, c in enumerate(self.coeffs):
            total = total + c * t0**k * t1 ** (self.degree - k)
        return total

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def conjugate(self) -> "BinaryForm":
        return BinaryForm(self.degree, [c.conjugate() for c in self.coeffs])

    def __str__(self):
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v
                for v, e in (("t0", k), ("t1", self.degree - k))
                if e
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts) or "0"


# ---------------------------------------------------------------------------
# parsing


_TOKEN = re.compile(r"\s*(?:(\d+)|([xyzi])|([-+*/^()]))")


def _tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise MalformedInput(f"unexpected character {text[pos]!r} at offset {pos}", text=text)
        tokens.append(m.group(m.lastindex))
        pos = m.end()
    return tokens


class _Parser:
    """Recursive descent over sparse (possibly inhomogeneous) polynomials."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def fail(self, msg: str):
        raise MalformedInput(f"{msg} in {self.text!r}", text=self.text, token_index=self.i)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of input")
        self.i += 1
        return tok

    def parse(self) -> dict:
        if not self.tokens:
            self.fail("empty polynomial")
        out = self.expr()
        if self.peek() is not None:
            self.fail(f"unexpected token {self.peek()!r}")
        return out

    def expr(self) -> dict:
        result = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            result = _sp_add(result, rhs if op == "+" else _sp_scale(rhs, -1))
        return result

    def term(self) -> dict:
        result = self.unary()
        while True:
            tok = self.peek()
            if tok == "*":
                self.take()
                result = _sp_mul(result, self.unary())
            elif tok == "/":
                self.take()
                rhs = self.unary()
                if set(rhs) != {(0, 0, 0)}:
                    self.fail("division by a non-constant")
                result = _sp_scale(result, GaussianRational(1) / rhs[(0, 0, 0)])
            elif tok is not None and (tok.isdigit() or tok in "xyzi("):
                result = _sp_mul(result, self.unary())
            else:
                return result

    def unary(self) -> dict:
        tok = self.peek()
        if tok in ("+", "-"):
            self.take()
            inner = self.unary()
            return inner if tok == "+" else _sp_scale(inner, -1)
        return self.power()

    def power(self) -> dict:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            tok = self.take()
            if not tok.isdigit():
                self.fail("exponent must be a non-negative integer")
            result = {(0, 0, 0): GaussianRational(1)}
            for _ in range(int(tok)):
                result = _sp_mul(result, base)
            return result
        return base

    def atom(self) -> dict:
        tok = self.take()
        if tok.isdigit():
            return {(0, 0, 0): GaussianRational(int(tok))}
        if tok == "i":
            return {(0, 0, 0): I}
        if tok in VARIABLES:
            exp = [0, 0, 0]
            exp[VARIABLES.index(tok)] = 1
            return {tuple(exp): GaussianRational(1)}
        if tok == "(":
            inner = self.expr()
            if self.take() != ")":
                self.fail("expected ')'")
            return inner
        self.fail(f"unexpected token {tok!r}")


def _sp_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, GaussianRational(0)) + c
    return {e: c for e, c in out.items() if not c.is_zero()}


def _sp_scale(a: dict, k) -> dict:
    return {e: c * k for e, c in a.items() if not (c * k).is_zero()}


def _sp_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
            out[e] = out.get(e, GaussianRational(0)) + c1 * c2
    return {e: c for e, c in out.items() if not c.is_zero()}


def parse_poly(text: str, degree: int | None = None) -> HomPoly:
    """Parse a homogeneous polynomial in x, y, z.

    ``degree`` is required only when the text may simplify to zero; if the
    text is nonzero it must match the given degree.
    """
    sparse = {e: c for e, c in _Parser(text).parse().items() if not c.is_zero()}
    degrees = {sum(e) for e in sparse}
    if len(degrees) > 1:
        raise NotHomogeneous(
            f"mixed total degrees {sorted(degrees)} in {text!r}", text=text, degrees=sorted(degrees)
        )
    if not sparse:
        if degree is None:
            raise ZeroPolynomial(f"{text!r} is the zero polynomial", text=text)
        return HomPoly.zero(degree)
    (d,) = degrees
    if degree is not None and d != degree:
        raise DegreeMismatch(f"{text!r} has degree {d}, expected {degree}", text=text)
    return HomPoly(d, sparse)


def _format_monomial(exp: Exponent) -> str:
    parts = []
    for v, e in zip(VARIABLES, exp):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_poly(p: HomPoly) -> str:
    """Serialize in the input grammar; ``parse_poly(format_poly(p)) == p``."""
    if p.is_zero():
        return "0"
    out = []
    for exp, c in p.terms:
        mono = _format_monomial(exp)
        if c.is_real():
            sign = "-" if c.re < 0 else "+"
            mag = abs(c.re)
            coeff = "" if (mag == 1 and mono) else str(mag)
        else:
            sign = "+"
            im_sign = "-" if c.im < 0 else "+"
            im = f"{abs(c.im)}*i" if abs(c.im) != 1 else "i"
            if c.re:
                coeff = f"({c.re}{im_sign}{im})"
            else:
                coeff = f"({'-' if c.im < 0 else ''}{im})"
        body = f"{coeff}*{mono}" if coeff and mono else (coeff or mono)
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


# ---------------------------------------------------------------------------
# evaluation and the pencil constructions


def evaluate(p: HomPoly, point: Sequence) -> GaussianRational:
    pt = [GaussianRational.coerce(v) for v in point]
    total = GaussianRational(0)
    for (a, b, c), coeff in p.terms:
        total = total + coeff * pt[0] ** a * pt[1] ** b * pt[2] ** c
    return total


def gradient(p: HomPoly) -> tuple[HomPoly, HomPoly, HomPoly]:
    if p.degree == 0:
        raise DegreeZero("gradient of a degree-0 form is undefined here")
    return (p.diff(0), p.diff(1), p.diff(2))


def _require_real(*polys: HomPoly):
    for p in polys:
        if not p.is_real():
            raise MalformedInput(f"expected a real form, got {p}", poly=str(p))


def pencil_member(R: HomPoly, S: HomPoly, lam, mu) -> HomPoly:
    """The real member ``lam*R + mu*S`` of the pencil spanned by ``R`` and ``S``."""
    _require_real(R, S)
    R._check_same_degree(S)
    lam, mu = as_fraction(lam), as_fraction(mu)
    if lam == 0 and mu == 0:
        raise BothZero("(lambda, mu) = (0, 0) is not a point of the pencil")
    return R.scale(lam) + S.scale(mu)


def complexify(R: HomPoly, S: HomPoly) -> HomPoly:
    """``P = R + iS``: the member of the pencil at ``(1 : i)``."""
    _require_real(R, S)
    R._check_same_degree(S)
    if R.is_zero() and S.is_zero():
        raise BothZero("R and S are both zero")
    return R + S.scale(I)


def realify(P: HomPoly) -> tuple[HomPoly, HomPoly]:
    return P.real_part(), P.imag_part()


def sum_of_squares(R: HomPoly, S: HomPoly) -> HomPoly:
    _require_real(R, S)
    R._check_same_degree(S)
    return R * R + S * S


def cross(u: Sequence, v: Sequence) -> tuple:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def restrict_to_line(P: HomPoly, u: Sequence, v: Sequence) -> BinaryForm:
    """The binary form ``p(t0, t1) = P(t0*u + t1*v)``."""
    u = [as_fraction(c) for c in u]
    v = [as_fraction(c) for c in v]
    if all(c == 0 for c in cross(u, v)):
        raise DependentPoints("u and v do not span a projective line", u=list(map(str, u)), v=list(map(str, v)))
    # each coordinate restricts to a linear form, stored by power of t0
    lines = [[GaussianRational(v[k]), GaussianRational(u[k])] for k in range(3)]

    def mul(a, b):
        out = [GaussianRational(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return out

    def pw(a, k):
        out = [GaussianRational(1)]
        for _ in range(k):
            out = mul(out, a)
        return out

    total = [GaussianRational(0)] * (P.degree + 1)
    for exp, coeff in P.terms:
        term = mul(mul(pw(lines[0], exp[0]), pw(lines[1], exp[1])), pw(lines[2], exp[2]))
        for k, c in enumerate(term):
            total[k] = total[k] + coeff * c
    form = BinaryForm(P.degree, total)
    if form.is_zero():
        raise IdenticallyZero("the line lies in the zero set of P", poly=str(P))
    return form
