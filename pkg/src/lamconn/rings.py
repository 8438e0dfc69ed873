"""Exact coordinate rings: multivariate Laurent polynomials over Q, optionally
extended by square-zero generators.

An element is a finite sum of terms ``coeff * x1^e1 * ... * eps1^d1 * ...``
with Fraction coefficients. Negative exponents are allowed exactly on the
variables declared inverted (this is how localizations at monomials are
modelled). Square-zero generators carry exponent 0 or 1; any term acquiring a
square dies in reduction, so for two generators the mixed product eps1*eps2
survives while eps1^2 = eps2^2 = (eps1*eps2)^2 = 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, RingMismatch

Exponents = tuple[int, ...]


@dataclass(frozen=True)
class Ring:
    """Descriptor of a coordinate ring.

    ``variables`` are the body generators, ``inverted`` the subset with
    inverses adjoined, ``nilpotents`` the square-zero generators.
    """

    variables: tuple[str, ...]
    inverted: frozenset[str] = frozenset()
    nilpotents: tuple[str, ...] = ()

    def __post_init__(self):
        names = self.variables + self.nilpotents
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        if not self.inverted <= set(self.variables):
            raise ValueError("inverted must be a subset of variables")

    @property
    def generators(self) -> tuple[str, ...]:
        return self.variables + self.nilpotents

    def index(self, name: str) -> int:
        return self.generators.index(name)

    def is_nilpotent_gen(self, name: str) -> bool:
        return name in self.nilpotents

    def with_nilpotents(self, names: tuple[str, ...]) -> "Ring":
        return Ring(self.variables, self.inverted, self.nilpotents + names)

    def base(self) -> "Ring":
        """The ring with all square-zero generators removed."""
        return Ring(self.variables, self.inverted, ())

    def zero(self) -> "RingElement":
        return RingElement(self, {})

    def one(self) -> "RingElement":
        return self.const(1)

    def const(self, c) -> "RingElement":
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return RingElement(self, {(0,) * len(self.generators): c})

    def var(self, name: str) -> "RingElement":
        e = [0] * len(self.generators)
        e[self.index(name)] = 1
        return RingElement(self, {tuple(e): Fraction(1)})

    def monomial(self, coeff, exps: dict[str, int]) -> "RingElement":
        e = [0] * len(self.generators)
        for name, k in exps.items():
            e[self.index(name)] = k
        return RingElement(self, {tuple(e): Fraction(coeff)})

    def parse(self, text: str) -> "RingElement":
        return parse_poly(self, text)

    def __str__(self):
        body = ", ".join(
            (v + ", " + v + "^-1") if v in self.inverted else v for v in self.variables
        )
        if self.nilpotents:
            body += "; " + ", ".join(self.nilpotents)
        return f"Q[{body}]"


class RingElement:
    """Immutable by convention; all operations return fresh elements."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: dict[Exponents, Fraction], *, _checked: bool = False):
        self.ring = ring
        if not _checked:
            terms = _reduce(ring, terms)
        self.terms = terms

    # -- basics --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise RingMismatch(f"{other.ring} is not {self.ring}")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            if s is None:
                terms[e] = c
            else:
                s = s + c
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return RingElement(self.ring, terms, _checked=True)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(
            self.ring, {e: -c for e, c in self.terms.items()}, _checked=True
        )

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if not q:
                return self.ring.zero()
            return RingElement(
                self.ring, {e: c * q for e, c in self.terms.items()}, _checked=True
            )
        other = self._coerce(other)
        nil_start = len(self.ring.variables)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if any(e[i] > 1 for i in range(nil_start, len(e))):
                    continue
                s = out.get(e)
                if s is None:
                    out[e] = c1 * c2
                else:
                    s = s + c1 * c2
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        return RingElement(self.ring, out, _checked=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- structure -----------------------------------------------------

    def body(self) -> "RingElement":
        """The part with no square-zero generators (same ring)."""
        n = len(self.ring.variables)
        total = len(self.ring.generators)
        terms = {
            e: c
            for e, c in self.terms.items()
            if all(e[i] == 0 for i in range(n, total))
        }
        return RingElement(self.ring, terms, _checked=True)

    def nil_part(self) -> "RingElement":
        return self - self.body()

    def set_nil_zero(self) -> "RingElement":
        """Project to the base ring (every square-zero generator to 0)."""
        n = len(self.ring.variables)
        total = len(self.ring.generators)
        base = self.ring.base()
        terms = {
            e[:n]: c
            for e, c in self.terms.items()
            if all(e[i] == 0 for i in range(n, total))
        }
        return RingElement(base, terms, _checked=True)

    def nil_coefficient(self, nil_exps: dict[str, int]) -> "RingElement":
        """Coefficient of the given square-zero monomial, as a base-ring element."""
        n = len(self.ring.variables)
        gens = self.ring.generators
        want = tuple(nil_exps.get(g, 0) for g in gens[n:])
        base = self.ring.base()
        terms = {
            e[:n]: c for e, c in self.terms.items() if tuple(e[n:]) == want
        }
        return RingElement(base, terms, _checked=True)

    def into(self, ring: Ring) -> "RingElement":
        """Reinterpret in a ring sharing generator names. Extra generators in
        the target are fine; generators missing from the target must not occur
        in any term."""
        if ring == self.ring:
            return self
        target_gens = set(ring.generators)
        pos: list[int | None] = [
            ring.index(g) if g in target_gens else None for g in self.ring.generators
        ]
        width = len(ring.generators)
        terms: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            new = [0] * width
            for p, k in zip(pos, e):
                if p is None:
                    if k != 0:
                        raise RingMismatch(
                            f"element involves a generator missing from {ring}"
                        )
                else:
                    new[p] = k
            terms[tuple(new)] = c
        return RingElement(ring, terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        zero = (0,) * len(self.ring.generators)
        if set(self.terms) != {zero}:
            raise ValueError(f"not a constant: {self}")
        return self.terms[zero]

    def is_unit(self) -> bool:
        """Unit test: body is a single term supported on inverted variables,
        plus an arbitrary square-zero part."""
        b = self.body()
        if len(b.terms) != 1:
            return False
        (e,) = b.terms
        for i, k in enumerate(e[: len(self.ring.variables)]):
            if k != 0 and self.ring.variables[i] not in self.ring.inverted:
                return False
        return True

    def inverse(self) -> "RingElement":
        """Exact inverse of unit + nilpotent via a terminating geometric series."""
        b = self.body()
        if len(b.terms) != 1:
            raise ZeroDivisionError(f"not invertible: {self}")
        ((e, c),) = b.terms.items()
        for i, k in enumerate(e[: len(self.ring.variables)]):
            if k != 0 and self.ring.variables[i] not in self.ring.inverted:
                raise ZeroDivisionError(f"not invertible: {self}")
        binv = RingElement(self.ring, {tuple(-k for k in e): 1 / c})
        n = self.nil_part()
        if n.is_zero():
            return binv
        # (b + n)^-1 = b^-1 * sum (-n b^-1)^k; n nilpotent so this terminates.
        q = -(n * binv)
        acc = self.ring.one()
        power = q
        while not power.is_zero():
            acc = acc + power
            power = power * q
        return binv * acc

    def partial(self, name: str) -> "RingElement":
        """Formal partial derivative with respect to a generator."""
        i = self.ring.index(name)
        terms: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            ne = e[:i] + (k - 1,) + e[i + 1 :]
            terms[ne] = terms.get(ne, Fraction(0)) + c * k
        return RingElement(self.ring, {e: c for e, c in terms.items() if c})

    def max_abs_degree(self) -> int:
        """Largest |exponent| over body variables; 0 for constants."""
        n = len(self.ring.variables)
        best = 0
        for e in self.terms:
            for k in e[:n]:
                if abs(k) > best:
                    best = abs(k)
        return best

    # -- printing ------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        gens = self.ring.generators
        chunks = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            factors = []
            for name, k in zip(gens, e):
                if k == 0:
                    continue
                factors.append(name if k == 1 else f"{name}^{k}")
            if not factors:
                chunks.append(_frac_str(c))
                continue
            mono = "*".join(factors)
            if c == 1:
                chunks.append(mono)
            elif c == -1:
                chunks.append(f"-{mono}")
            else:
                chunks.append(f"{_frac_str(c)}*{mono}")
        out = chunks[0]
        for ch in chunks[1:]:
            out += " - " + ch[1:] if ch.startswith("-") else " + " + ch
        return out

    def __repr__(self):
        return f"<{self} in {self.ring}>"


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _reduce(ring: Ring, terms: dict[Exponents, Fraction]) -> dict[Exponents, Fraction]:
    width = len(ring.generators)
    nil_start = len(ring.variables)
    out: dict[Exponents, Fraction] = {}
    for e, c in terms.items():
        if len(e) != width:
            raise RingMismatch(f"exponent vector {e} has wrong length for {ring}")
        if not c:
            continue
        bad = False
        for i, k in enumerate(e):
            if i < nil_start:
                if k < 0 and ring.variables[i] not in ring.inverted:
                    raise RingMismatch(
                        f"negative exponent on non-inverted variable {ring.variables[i]}"
                    )
            elif k > 1:
                bad = True
                break
            elif k < 0:
                raise RingMismatch("negative exponent on a square-zero generator")
        if bad:
            continue
        out[e] = Fraction(c)
    return out


# ----------------------------------------------------------------------
# Polynomial literal grammar:
#   rational coefficients p/q, variables [A-Za-z][A-Za-z0-9_]*,
#   ^ with integer (possibly negative) exponents, + - *, parentheses,
#   whitespace-insensitive.  Example: 3/2*x^-2*y + 1
# ----------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


class _Parser:
    def __init__(self, ring: Ring, text: str):
        self.ring = ring
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                stripped = text[pos:].lstrip()
                if not stripped:
                    break
                at = len(text) - len(stripped)
                raise ParseError(
                    f"unexpected character {stripped[0]!r} in polynomial literal",
                    line=1,
                    column=at + 1,
                )
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, msg):
        _, _, col = self.peek()
        raise ParseError(msg, line=1, column=col + 1)

    def parse(self) -> RingElement:
        value = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"trailing input {self.peek()[1]!r}")
        return value

    def expr(self) -> RingElement:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.next()
            sign = -1 if val == "-" else 1
        value = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self) -> RingElement:
        value = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.next()
                value = value * self.factor()
            elif kind == "op" and val == "/":
                # only rational literals may be divided
                self.next()
                kind2, val2, _ = self.peek()
                if kind2 != "num":
                    self.fail("'/' must be followed by an integer")
                self.next()
                value = value * Fraction(1, int(val2))
            else:
                return value

    def factor(self) -> RingElement:
        kind, val, _ = self.next()
        if kind == "num":
            base = self.ring.const(int(val))
        elif kind == "name":
            try:
                base = self.ring.var(val)
            except ValueError:
                self.i -= 1
                self.fail(f"unknown variable {val!r}")
        elif kind == "op" and val == "(":
            base = self.expr()
            kind2, val2, _ = self.next()
            if (kind2, val2) != ("op", ")"):
                self.i -= 1
                self.fail("expected ')'")
        elif kind == "op" and val == "-":
            return -self.factor()
        else:
            self.i -= 1
            self.fail(f"unexpected token {val!r}")
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            neg = False
            kind2, val2, _ = self.next()
            if kind2 == "op" and val2 == "-":
                neg = True
                kind2, val2, _ = self.next()
            if kind2 != "num":
                self.i -= 1
                self.fail("exponent must be an integer")
            exp = -int(val2) if neg else int(val2)
            try:
                base = base**exp
            except (ZeroDivisionError, RingMismatch) as exc:
                self.i -= 1
                self.fail(str(exc))
        return base


def parse_poly(ring: Ring, text: str) -> RingElement:
    return _Parser(ring, text).parse()
