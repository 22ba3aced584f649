"""Sparse multivariate polynomials over exact rationals (or floats for estimates)."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import BudgetError

MAX_TOTAL_DEGREE = 24


class PolyBudgetError(BudgetError):
    pass


class Poly:
    """Polynomial in ``x_1..x_nvars`` stored as ``{exponent tuple: coefficient}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | None = None):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not match {nvars} variables")
            if c:
                clean[e] = clean.get(e, 0) + c
        self.terms = {e: c for e, c in clean.items() if c}

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> Poly:
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c) -> Poly:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> Poly:
        """The coordinate ``x_{i+1}`` (0-based ``i``)."""
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def parse(cls, text: str, nvars: int) -> Poly:
        """Parse an expression in ``x1..x{nvars}`` with rational coefficients."""
        import sympy

        syms = sympy.symbols(f"x1:{nvars + 1}")
        local = {str(s): s for s in syms}
        try:
            expr = sympy.sympify(text.replace("^", "**"), locals=local, rational=True)
            p = sympy.Poly(sympy.expand(expr), *syms)
        except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
            raise ValueError(f"not a polynomial in x1..x{nvars}: {text!r}") from exc
        if p.domain not in (sympy.ZZ, sympy.QQ):
            raise ValueError(f"coefficients of {text!r} are not rational")
        terms = {}
        for mon, c in p.terms():
            c = sympy.Rational(c)
            terms[tuple(int(k) for k in mon)] = Fraction(int(c.p), int(c.q))
        return cls(nvars, terms)

    # arithmetic -------------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other: Poly) -> Poly:
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.nvars, out)

    def __neg__(self) -> Poly:
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def scale(self, c) -> Poly:
        if not c:
            return Poly(self.nvars)
        return Poly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        p = Poly(self.nvars, out)
        if p.total_degree() > MAX_TOTAL_DEGREE:
            raise PolyBudgetError(f"total degree {p.total_degree()} exceeds {MAX_TOTAL_DEGREE}")
        return p

    __rmul__ = scale

    def diff(self, i: int) -> Poly:
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                out[e2] = c * k
        return Poly(self.nvars, out)

    def diff_multi(self, idx: Iterable[int]) -> Poly:
        p = self
        for i in idx:
            p = p.diff(i)
            if not p:
                break
        return p

    def abs(self) -> Poly:
        return Poly(self.nvars, {e: abs(c) for e, c in self.terms.items()})

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0)

    def coefficient(self, e) -> object:
        return self.terms.get(tuple(e), 0)

    def to_float(self) -> Poly:
        return Poly(self.nvars, {e: float(c) for e, c in self.terms.items()})

    # io ------------------------------------------------------------------------

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        """Readable and parseable: ``x1^2*x2 - 3/2*x3 + 1``."""
        if not self.terms:
            return "0"
        out = ""
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mon = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not mon:
                body = str(mag)
            elif mag == 1:
                body = mon
            else:
                body = f"{mag}*{mon}"
            if not out:
                out = body if sign == "+" else "-" + body
            else:
                out += f" {sign} {body}"
        return out

    def to_json(self) -> list:
        """``[[exponents, num, den], ...]`` for exact coefficients, ``[[exponents, value]]`` for floats."""
        out = []
        for e in sorted(self.terms):
            c = self.terms[e]
            if isinstance(c, (Fraction, int)):
                c = Fraction(c)
                out.append([list(e), c.numerator, c.denominator])
            else:
                out.append([list(e), float(c)])
        return out

    @classmethod
    def from_json(cls, nvars: int, data) -> Poly:
        terms = {}
        for item in data:
            e = tuple(item[0])
            if len(item) == 3:
                c = Fraction(item[1], item[2])
            else:
                c = item[1]
            terms[e] = terms.get(e, 0) + c
        return cls(nvars, terms)
