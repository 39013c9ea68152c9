"""Exact arithmetic in the coefficient field Q(i)(s, w, x).

All invariant values live in the field of rational functions in the
variables ``s``, ``w``, ``x`` with Gaussian-rational coefficients, where
``t`` is shorthand for ``s^2``.  Keeping ``s`` as the internal variable
lets the HOMFLY-PT substitution (which involves a square root of ``t``)
stay inside a single polynomial ring.  A second, disjoint ring in the
variables ``l``, ``m`` hosts HOMFLY-PT values.

Design rules:

- Polynomials carry only non-negative exponents; negative powers are
  expressed by fractions.
- The monomial order is lexicographic on the exponent tuple, which is
  stored in ring order (``x``, ``w``, ``s``), so ``x`` is the most
  significant variable.
- ``RationalFunction`` normalization divides out the multivariate GCD
  (primitive polynomial remainder sequences) and rescales so that the
  denominator is monic under the fixed order.
- Equality testing never trusts the GCD: it cross-multiplies, so a GCD
  bug cannot produce a false positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

__all__ = [
    "GaussianRational",
    "Polynomial",
    "RationalFunction",
    "SWX_RING",
    "LM_RING",
    "rf_arith",
    "rf_equals",
    "rf_substitute",
    "rf_is_t_expressible",
    "named_constant",
    "parse_rational_function",
    "rf",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class GaussianRational:
    """An element ``re + im*i`` of Q(i), both parts exact rationals."""

    re: Fraction = _ZERO
    im: Fraction = _ZERO

    @staticmethod
    def of(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return GaussianRational(Fraction(value))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        im = "i" if self.im == 1 else ("-i" if self.im == -1 else f"{self.im}*i")
        if not self.re:
            return im
        return f"{self.re}+{im}" if self.im > 0 else f"{self.re}{im}"


GR_ZERO = GaussianRational()
GR_ONE = GaussianRational(_ONE)
GR_I = GaussianRational(_ZERO, _ONE)

#: Ring of the invariant: exponent tuples are (e_x, e_w, e_s).
SWX_RING = ("x", "w", "s")
#: Ring of HOMFLY-PT values: exponent tuples are (e_l, e_m).
LM_RING = ("l", "m")

Monomial = tuple  # exponent tuple in ring order


class Polynomial:
    """Multivariate polynomial: a map from exponent tuples to Q(i) coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: tuple, terms: Mapping[Monomial, GaussianRational]):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c}

    # -- constructors -------------------------------------------------

    @staticmethod
    def const(ring: tuple, value) -> "Polynomial":
        c = GaussianRational.of(value)
        if not c:
            return Polynomial(ring, {})
        return Polynomial(ring, {(0,) * len(ring): c})

    @staticmethod
    def var(ring: tuple, name: str, power: int = 1) -> "Polynomial":
        exps = [0] * len(ring)
        exps[ring.index(name)] = power
        return Polynomial(ring, {tuple(exps): GR_ONE})

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        zero = (0,) * len(self.ring)
        return all(m == zero for m in self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, GR_ZERO) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Polynomial(self.ring, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = terms.get(m, GR_ZERO) + c1 * c2
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return Polynomial(self.ring, terms)

    def scale(self, c: GaussianRational) -> "Polynomial":
        if not c:
            return Polynomial(self.ring, {})
        return Polynomial(self.ring, {m: k * c for m, k in self.terms.items()})

    # -- leading data under lex order on exponent tuples ---------------

    def leading_monomial(self) -> Monomial:
        return max(self.terms)

    def leading_coefficient(self) -> GaussianRational:
        return self.terms[max(self.terms)]

    def degree_in(self, index: int) -> int:
        if not self.terms:
            return -1
        return max(m[index] for m in self.terms)

    # -- structure helpers ----------------------------------------------

    def coefficients_in(self, index: int) -> dict:
        """View as a univariate polynomial in ring variable ``index``.

        Returns a map from that variable's exponent to the polynomial
        coefficient (with zero exponent in position ``index``).
        """
        out: dict = {}
        for m, c in self.terms.items():
            key = m[index]
            rest = m[:index] + (0,) + m[index + 1:]
            bucket = out.setdefault(key, {})
            s = bucket.get(rest, GR_ZERO) + c
            if s:
                bucket[rest] = s
            else:
                bucket.pop(rest, None)
        return {k: Polynomial(self.ring, v) for k, v in out.items() if v}


def _poly_divmod(f: Polynomial, g: Polynomial):
    """Multivariate division of ``f`` by ``g`` along the lex order; returns (q, r)."""
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    q = Polynomial(f.ring, {})
    r = f
    g_lm = g.leading_monomial()
    g_lc_inv = g.leading_coefficient().inverse()
    while not r.is_zero():
        r_lm = r.leading_monomial()
        if any(a < b for a, b in zip(r_lm, g_lm)):
            break
        m = tuple(a - b for a, b in zip(r_lm, g_lm))
        c = r.terms[r_lm] * g_lc_inv
        piece = Polynomial(f.ring, {m: c})
        q = q + piece
        r = r - piece * g
    return q, r


def poly_div_exact(f: Polynomial, g: Polynomial) -> Polynomial:
    q, r = _poly_divmod(f, g)
    if not r.is_zero():
        raise ArithmeticError("inexact polynomial division")
    return q


def _pseudo_rem(f: Polynomial, g: Polynomial, index: int) -> Polynomial:
    """Pseudo-remainder of ``f`` by ``g``, both univariate in variable ``index``."""
    df, dg = f.degree_in(index), g.degree_in(index)
    g_coeffs = g.coefficients_in(index)
    lc_g = g_coeffs[dg]
    r = f
    while not r.is_zero() and r.degree_in(index) >= dg:
        dr = r.degree_in(index)
        r_coeffs = r.coefficients_in(index)
        lc_r = r_coeffs[dr]
        shift = Polynomial.var(f.ring, f.ring[index], dr - dg) if dr > dg else Polynomial.const(f.ring, 1)
        r = r * lc_g - g * lc_r * shift
    return r


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """GCD via primitive polynomial remainder sequences (up to a unit)."""
    if f.is_zero():
        return g
    if g.is_zero():
        return f
    if f.is_constant() or g.is_constant():
        return Polynomial.const(f.ring, 1)
    index = None
    for i in range(len(f.ring)):
        if f.degree_in(i) > 0 or g.degree_in(i) > 0:
            index = i
            break
    if f.degree_in(index) == 0 or g.degree_in(index) == 0:
        # The main variable is missing from one side: gcd divides that
        # side's coefficients, so recurse into contents only.
        return poly_gcd(_content(f, index), _content(g, index))
    cf, cg = _content(f, index), _content(g, index)
    c = poly_gcd(cf, cg)
    fp, gp = poly_div_exact(f, cf), poly_div_exact(g, cg)
    if fp.degree_in(index) < gp.degree_in(index):
        fp, gp = gp, fp
    while True:
        r = _pseudo_rem(fp, gp, index)
        if r.is_zero():
            result = gp
            break
        if r.degree_in(index) == 0:
            result = Polynomial.const(f.ring, 1)
            break
        fp, gp = gp, poly_div_exact(r, _content(r, index))
    result = poly_div_exact(result, _content(result, index))
    return c * result


def _content(f: Polynomial, index: int) -> Polynomial:
    """GCD of the coefficients of ``f`` viewed as univariate in ``index``."""
    coeffs = list(f.coefficients_in(index).values())
    acc = coeffs[0]
    for c in coeffs[1:]:
        if acc.is_constant():
            break
        acc = poly_gcd(acc, c)
    if acc.is_constant():
        return Polynomial.const(f.ring, 1)
    return acc


class RationalFunction:
    """Quotient of two polynomials, kept normalized (reduced, monic denominator)."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial, _normalized: bool = False):
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normalized:
            num, den = self._reduce(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _reduce(num: Polynomial, den: Polynomial):
        if num.is_zero():
            return num, Polynomial.const(num.ring, 1)
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = poly_div_exact(num, g)
            den = poly_div_exact(den, g)
        lc = den.leading_coefficient().inverse()
        return num.scale(lc), den.scale(lc)

    # -- constructors ----------------------------------------------------

    @staticmethod
    def const(ring: tuple, value) -> "RationalFunction":
        return RationalFunction(Polynomial.const(ring, value), Polynomial.const(ring, 1), _normalized=True)

    @staticmethod
    def var(ring: tuple, name: str, power: int = 1) -> "RationalFunction":
        if power >= 0:
            return RationalFunction(Polynomial.var(ring, name, power), Polynomial.const(ring, 1), _normalized=True)
        return RationalFunction(Polynomial.const(ring, 1), Polynomial.var(ring, name, -power), _normalized=True)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    @property
    def ring(self) -> tuple:
        return self.num.ring

    def __eq__(self, other) -> bool:
        """Exact equality by cross-multiplication (independent of GCD correctness)."""
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        raise TypeError("RationalFunction is not hashable; use its canonical string")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, _normalized=True)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __pow__(self, n: int) -> "RationalFunction":
        if n < 0:
            return RationalFunction.const(self.ring, 1) / self ** (-n)
        out = RationalFunction.const(self.ring, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- substitution and symmetries ------------------------------------------

    def substitute(self, mapping: Mapping[str, "RationalFunction"]) -> "RationalFunction":
        """Ring homomorphism sending each variable to the mapped rational function.

        Unmapped variables map to themselves in the target ring, which must
        then contain them.  Raises ``ZeroDivisionError`` if the image of the
        denominator vanishes.
        """
        target = next(iter(mapping.values())).ring if mapping else self.ring
        images = []
        for name in self.ring:
            if name in mapping:
                images.append(mapping[name])
            elif name in target:
                images.append(RationalFunction.var(target, name))
            else:
                raise ValueError(f"variable {name!r} has no image in target ring {target}")
        num = _poly_substitute(self.num, images, target)
        den = _poly_substitute(self.den, images, target)
        if den.is_zero():
            raise ZeroDivisionError("substitution maps denominator to zero")
        return num / den

    def _apply_coeff_map(self, fn) -> "RationalFunction":
        num = Polynomial(self.ring, {m: fn(c) for m, c in self.num.terms.items()})
        den = Polynomial(self.ring, {m: fn(c) for m, c in self.den.terms.items()})
        return RationalFunction(num, den)

    def conjugated(self) -> "RationalFunction":
        """Image under i -> -i."""
        return self._apply_coeff_map(GaussianRational.conjugate)

    def s_negated(self) -> "RationalFunction":
        """Image under s -> -s (only meaningful in the s, w, x ring)."""
        idx = self.ring.index("s")

        def flip(p: Polynomial) -> Polynomial:
            return Polynomial(p.ring, {
                m: (-c if m[idx] % 2 else c) for m, c in p.terms.items()
            })

        return RationalFunction(flip(self.num), flip(self.den))

    # -- printing ----------------------------------------------------------------

    def __str__(self) -> str:
        num = _poly_str(self.num)
        if self.den == Polynomial.const(self.ring, 1):
            return num
        den = _poly_str(self.den)
        if len(self.num.terms) > 1:
            num = f"({num})"
        if len(self.den.terms) > 1 or _needs_parens(den):
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"<RationalFunction {self}>"


def _poly_substitute(p: Polynomial, images: list, target: tuple):
    total = RationalFunction.const(target, 0)
    for m, c in p.terms.items():
        term = RationalFunction.const(target, c)
        for img, e in zip(images, m):
            if e:
                term = term * img ** e
        total = total + term
    return total


def _needs_parens(s: str) -> bool:
    return any(op in s for op in ("*", "/", "+")) or "-" in s[1:] or s.startswith("-")


def _coeff_str(c: GaussianRational, with_vars: bool) -> str:
    if c.im:
        if c.re:
            return f"({c.re}{'+' if c.im > 0 else ''}{_imag_str(c.im)})"
        return _imag_str(c.im)
    if not with_vars:
        return str(c.re)
    if c.re == 1:
        return ""
    if c.re == -1:
        return "-"
    return str(c.re)


def _imag_str(b: Fraction) -> str:
    if b == 1:
        return "i"
    if b == -1:
        return "-i"
    return f"{b}*i"


def _monomial_str(ring: tuple, m: Monomial) -> str:
    factors = []
    for name, e in zip(ring, m):
        if e == 0:
            continue
        if name == "s":
            # Even powers of s print as t, odd powers as s times t-powers.
            k, odd = divmod(e, 2)
            if odd:
                factors.append("s")
            if k == 1:
                factors.append("t")
            elif k > 1:
                factors.append(f"t^{k}")
        else:
            factors.append(name if e == 1 else f"{name}^{e}")
    # Alphabetical factor order (s, t, w, x / l, m): s,t come last in ring order.
    factors.sort()
    return "*".join(factors)


def _poly_str(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for m in sorted(p.terms, reverse=True):
        c = p.terms[m]
        mono = _monomial_str(p.ring, m)
        coeff = _coeff_str(c, bool(mono))
        if mono and coeff not in ("", "-"):
            term = f"{coeff}*{mono}"
        else:
            term = f"{coeff}{mono}"
        parts.append(term)
    out = parts[0]
    for term in parts[1:]:
        if term.startswith("-"):
            out += f" - {term[1:]}"
        else:
            out += f" + {term}"
    return out


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


class ParseError(ValueError):
    pass


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            if j < len(text) and text[j] == "i":
                tokens.append(("imag", int(text[i:j])))
                j += 1
            else:
                tokens.append(("int", int(text[i:j])))
            i = j
        elif ch.isalpha():
            j = i
            while j < len(text) and text[j].isalnum():
                j += 1
            tokens.append(("name", text[i:j]))
            i = j
        elif ch in "+-*/^()":
            tokens.append((ch, ch))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r} at position {i}")
    tokens.append(("end", None))
    return tokens


class _Parser:
    """Recursive-descent parser for the canonical rational-function grammar."""

    def __init__(self, tokens, ring):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.pos][0]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> RationalFunction:
        value = self.expr()
        if self.peek() != "end":
            raise ParseError(f"trailing input at token {self.pos}")
        return value

    def expr(self) -> RationalFunction:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.next()[0] == "-":
                sign = -sign
        value = self.term()
        if sign < 0:
            value = -value
        while self.peek() in ("+", "-"):
            op = self.next()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RationalFunction:
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.next()[0]
            rhs = self.factor()
            value = value * rhs if op == "*" else value / rhs
        return value

    def factor(self) -> RationalFunction:
        if self.peek() == "-":
            self.next()
            return -self.factor()
        base = self.atom()
        if self.peek() == "^":
            self.next()
            sign = 1
            if self.peek() == "-":
                self.next()
                sign = -1
            kind, value = self.next()
            if kind != "int":
                raise ParseError("exponent must be an integer")
            return base ** (sign * value)
        return base

    def atom(self) -> RationalFunction:
        kind, value = self.next()
        if kind == "int":
            return RationalFunction.const(self.ring, value)
        if kind == "imag":
            return RationalFunction.const(self.ring, GaussianRational(_ZERO, Fraction(value)))
        if kind == "name":
            if value == "i":
                return RationalFunction.const(self.ring, GR_I)
            if value == "t" and "s" in self.ring:
                return RationalFunction.var(self.ring, "s", 2)
            if value in self.ring:
                return RationalFunction.var(self.ring, value)
            raise ParseError(f"unknown variable {value!r} for ring {self.ring}")
        if kind == "(":
            inner = self.expr()
            if self.next()[0] != ")":
                raise ParseError("missing closing parenthesis")
            return inner
        raise ParseError(f"unexpected token {kind!r}")


def parse_rational_function(text: str, ring: tuple = SWX_RING) -> RationalFunction:
    return _Parser(_tokenize(text), ring).parse()


def rf(text: str, ring: tuple = SWX_RING) -> RationalFunction:
    """Shorthand used throughout the code base and the tests."""
    return parse_rational_function(text, ring)


# ---------------------------------------------------------------------------
# Spec-level operation wrappers
# ---------------------------------------------------------------------------


def rf_arith(a: RationalFunction, b: RationalFunction, kind: str) -> RationalFunction:
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def rf_equals(a: RationalFunction, b: RationalFunction) -> bool:
    return a == b


def rf_substitute(a: RationalFunction, mapping: Mapping[str, RationalFunction]) -> RationalFunction:
    return a.substitute(mapping)


def rf_is_t_expressible(a: RationalFunction) -> bool:
    """True iff the value lies in Q(x, t, w): fixed by s -> -s and by i -> -i."""
    return rf_equals(a, a.s_negated()) and rf_equals(a, a.conjugated())


_CONSTANTS = {
    # Disjoint union with a circle of a fresh color.
    "DELTA_DIFF": "1/(w*x)",
    # Disjoint union with a circle of an already-present color.
    "DELTA_SAME": "(t*w^2-1)/(w*(1-t))",
    # Removing a vertex loop (curl).
    "C_LOOP": "w/(1-t) + w^-1/(1-t^-1)",
    # Turn-back term of the anti-parallel bigon relation.
    "C_BIGON_ANTIPAR": "w*t^-1/(1-t) + w^-1*t/(1-t^-1)",
    # Correction factor of the orientation-reversed triangle slide.
    "C_TRIANGLE_DOWN": "w*t^-2/(1-t) + w^-1*t^2/(1-t^-1)",
    # Crossing expansion into states (positive crossing):
    "EXPAND_POS_SMOOTH": "-w/(t+1)",
    "EXPAND_POS_VERTEX_MERGED": "-w/(t+1)",
    "EXPAND_POS_VERTEX_KEPT": "w",
    # ... and negative crossing:
    "EXPAND_NEG_SMOOTH": "-t/(w*(t+1))",
    "EXPAND_NEG_VERTEX_MERGED": "-t/(w*(t+1))",
    "EXPAND_NEG_VERTEX_KEPT": "1/w",
}


def named_constant(name: str) -> RationalFunction:
    """Return one of the calculus' named coefficients (in the s, w, x ring)."""
    try:
        text = _CONSTANTS[name]
    except KeyError:
        raise ValueError(f"unknown constant {name!r}") from None
    return rf(text)


ZERO = RationalFunction.const(SWX_RING, 0)
ONE = RationalFunction.const(SWX_RING, 1)
