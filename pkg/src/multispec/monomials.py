"""Exact algebra of monomials with rational exponents and their value tags.

Variables come in three families: deformation scales t1..tm (one per
coordinate block), action parameters l1..l_ell, and block norms x1..xm
(the norm of the k-th block direction, treated as a formal symbol).
A monomial is a finite map variable -> rational exponent; a value tag is
either the formal zero or a monomial in the norm symbols only.  All
arithmetic is exact; floats appear only in `evaluate`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

TAU = "tau"
LAM = "lam"
XI = "xi"

_KIND_ORDER = {TAU: 0, LAM: 1, XI: 2}
_KIND_LETTER = {TAU: "t", LAM: "l", XI: "x"}
_LETTER_KIND = {v: k for k, v in _KIND_LETTER.items()}


@dataclass(frozen=True)
class Var:
    """A single variable: kind in {tau, lam, xi} plus a 1-based index."""

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if self.index < 1:
            raise ValueError("variable indices are 1-based")

    def key(self) -> tuple[int, int]:
        return (_KIND_ORDER[self.kind], self.index)

    def __lt__(self, other: "Var") -> bool:
        return self.key() < other.key()

    def __str__(self) -> str:
        return f"{_KIND_LETTER[self.kind]}{self.index}"

    def json_key(self) -> str:
        return f"{self.kind}:{self.index}"


def tau(k: int) -> Var:
    return Var(TAU, k)


def lam(j: int) -> Var:
    return Var(LAM, j)


def xi(k: int) -> Var:
    return Var(XI, k)


def _fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Monomial:
    """Product of rational powers of variables; the empty product is 1."""

    exps: tuple[tuple[Var, Fraction], ...]

    @staticmethod
    def from_dict(d: Mapping[Var, Fraction | int]) -> "Monomial":
        items = tuple(
            sorted(((v, _fr(e)) for v, e in d.items() if e != 0), key=lambda p: p[0].key())
        )
        return Monomial(items)

    def as_dict(self) -> dict[Var, Fraction]:
        return dict(self.exps)

    def exponent(self, var: Var) -> Fraction:
        for v, e in self.exps:
            if v == var:
                return e
        return Fraction(0)

    def vars(self) -> tuple[Var, ...]:
        return tuple(v for v, _ in self.exps)

    @property
    def is_one(self) -> bool:
        return not self.exps

    def __mul__(self, other: "Monomial") -> "Monomial":
        d = self.as_dict()
        for v, e in other.exps:
            d[v] = d.get(v, Fraction(0)) + e
        return Monomial.from_dict(d)

    def __pow__(self, r) -> "Monomial":
        r = _fr(r)
        if r == 0:
            return ONE
        return Monomial.from_dict({v: e * r for v, e in self.exps})

    def inv(self) -> "Monomial":
        return self ** Fraction(-1)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return self * other.inv()

    def restrict(self, kinds: Iterable[str]) -> "Monomial":
        keep = set(kinds)
        return Monomial(tuple((v, e) for v, e in self.exps if v.kind in keep))

    def has_kind(self, kind: str) -> bool:
        return any(v.kind == kind for v, _ in self.exps)

    def substitute(self, var: Var, replacement: "Monomial") -> "Monomial":
        """Replace var by a monomial (raised to var's exponent)."""
        e = self.exponent(var)
        if e == 0:
            return self
        rest = Monomial(tuple((v, x) for v, x in self.exps if v != var))
        return rest * (replacement ** e)

    def evaluate(self, assign: Mapping[Var, float]) -> float:
        out = 1.0
        for v, e in self.exps:
            base = assign[v]
            if base <= 0:
                raise ValueError(f"nonpositive value for {v}")
            out *= float(base) ** float(e)
        return out

    def sort_key(self):
        return tuple((v.key(), e.numerator, e.denominator) for v, e in self.exps)

    def __str__(self) -> str:
        if self.is_one:
            return "1"
        parts = []
        for v, e in self.exps:
            if e == 1:
                parts.append(str(v))
            elif e.denominator == 1:
                parts.append(f"{v}^{e}" if e > 0 else f"{v}^({e})")
            else:
                parts.append(f"{v}^({e})")
        return "*".join(parts)

    def json(self) -> dict:
        return {v.json_key(): str(e) for v, e in self.exps}


ONE = Monomial(())


_TOKEN = re.compile(r"\s*([tlx]\d+|\d+|[()*/^]|\S)")


def mono(text: str) -> Monomial:
    """Parse a compact monomial string, e.g. "t3/(t1*t2)" or "t1^(3/2)".

    Grammar: product of factors separated by "*" (or juxtaposition), with
    "/" inverting the factor or parenthesised group that follows.  A bare
    "1" is the unit.  Exponents follow "^"; fractional exponents need
    parentheses: "t1^(2/3)".
    """
    tokens = _TOKEN.findall(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        t = tokens[pos]
        pos += 1
        return t

    def parse_exponent() -> Fraction:
        t = take()
        if t == "(":
            sign = 1
            t = take()
            if t == "-":
                sign = -1
                t = take()
            num = int(t)
            if peek() == "/":
                take()
                den = int(take())
            else:
                den = 1
            if take() != ")":
                raise ValueError(f"bad exponent in {text!r}")
            return Fraction(sign * num, den)
        if t == "-":
            return -Fraction(int(take()))
        return Fraction(int(t))

    def parse_factor() -> Monomial:
        t = take()
        if t == "(":
            m = parse_product()
            if take() != ")":
                raise ValueError(f"unbalanced parens in {text!r}")
        elif t == "1":
            m = ONE
        elif re.fullmatch(r"[tlx]\d+", t):
            m = Monomial.from_dict({Var(_LETTER_KIND[t[0]], int(t[1:])): Fraction(1)})
        else:
            raise ValueError(f"unexpected token {t!r} in {text!r}")
        if peek() == "^":
            take()
            m = m ** parse_exponent()
        return m

    def parse_product() -> Monomial:
        m = parse_factor()
        while True:
            t = peek()
            if t == "*":
                take()
                m = m * parse_factor()
            elif t == "/":
                take()
                m = m * parse_factor().inv()
            elif t is not None and t not in ")":
                m = m * parse_factor()
            else:
                return m

    result = parse_product()
    if pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return result


@dataclass(frozen=True)
class Value:
    """The non-negative limit value of a generator pair.

    Either the formal zero (mono is None) or a monomial in norm symbols.
    Zero is absorbing under multiplication; the empty monomial is the unit.
    """

    mono: Monomial | None

    @property
    def is_zero(self) -> bool:
        return self.mono is None

    def __mul__(self, other: "Value") -> "Value":
        if self.is_zero or other.is_zero:
            return ZERO
        return Value(self.mono * other.mono)

    def __pow__(self, r) -> "Value":
        r = _fr(r)
        if r == 0:
            return UNIT_VALUE
        if self.is_zero:
            if r < 0:
                raise ZeroDivisionError("negative power of the zero value")
            return ZERO
        return Value(self.mono ** r)

    def inv(self) -> "Value":
        return self ** Fraction(-1)

    def evaluate(self, xi_norms: Mapping[int, float]) -> float:
        if self.is_zero:
            return 0.0
        assign = {Var(XI, k): v for k, v in xi_norms.items()}
        for v, _ in self.mono.exps:
            assign.setdefault(v, 1.0)
        return self.mono.evaluate(assign)

    def sort_key(self):
        if self.is_zero:
            return (0,)
        return (1,) + self.mono.sort_key()

    def __str__(self) -> str:
        return "0" if self.is_zero else str(self.mono)

    def json(self):
        return "0" if self.is_zero else self.mono.json()


ZERO = Value(None)
UNIT_VALUE = Value(ONE)


def xival(text_or_mono) -> Value:
    """Value from a norm monomial; accepts "x3", "1/x3" style strings."""
    m = text_or_mono if isinstance(text_or_mono, Monomial) else mono(text_or_mono)
    if any(v.kind != XI for v, _ in m.exps):
        raise ValueError("value monomials may only use norm symbols")
    return Value(m)


@dataclass(frozen=True)
class Pair:
    """A generator pair (f, v): monomial plus its limit value."""

    f: Monomial
    v: Value

    def __mul__(self, other: "Pair") -> "Pair":
        return Pair(self.f * other.f, self.v * other.v)

    def __pow__(self, n) -> "Pair":
        n = _fr(n)
        if n < 0:
            raise ValueError("pair powers must be non-negative")
        return Pair(self.f ** n, self.v ** n)

    def inv(self) -> "Pair":
        if self.v.is_zero:
            raise ZeroDivisionError("cannot invert a zero-valued pair")
        return Pair(self.f.inv(), self.v.inv())

    def sort_key(self):
        return (self.f.sort_key(), self.v.sort_key())

    def __str__(self) -> str:
        return f"({self.f}, {self.v})"

    def json(self) -> dict:
        return {"exponents": self.f.json(), "value": self.v.json()}


def pair(f, v=ZERO) -> Pair:
    if isinstance(f, str):
        f = mono(f)
    if isinstance(v, str):
        v = ZERO if v == "0" else xival(v)
    return Pair(f, v)


GenSet = frozenset  # of Pair


def genset(pairs: Iterable[Pair]) -> frozenset[Pair]:
    return frozenset(pairs)


def sorted_pairs(gs: Iterable[Pair]) -> list[Pair]:
    return sorted(gs, key=lambda p: p.sort_key())


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return a * b


def pair_pow(p: Pair, n) -> Pair:
    return p ** n


def exponent_of(p: Pair, var: Var) -> Fraction:
    return p.f.exponent(var)


def fraction_closure(gs: Iterable[Pair]) -> frozenset[Pair]:
    """A together with inverses of exactly its nonzero-valued pairs."""
    out = set(gs)
    for p in list(out):
        if not p.v.is_zero:
            out.add(p.inv())
    return frozenset(out)


def evaluate(p: Pair, tau_norms: Mapping[int, float], xi_norms: Mapping[int, float],
             lam_values: Mapping[int, float] | None = None) -> tuple[float, float]:
    """Numeric (f, v) at strictly positive inputs; the zero value gives 0.0."""
    assign: dict[Var, float] = {}
    for k, val in tau_norms.items():
        if val <= 0:
            raise ValueError("tau inputs must be strictly positive")
        assign[Var(TAU, k)] = float(val)
    for k, val in xi_norms.items():
        if val <= 0:
            raise ValueError("norm inputs must be strictly positive")
        assign[Var(XI, k)] = float(val)
    for j, val in (lam_values or {}).items():
        if val <= 0:
            raise ValueError("lambda inputs must be strictly positive")
        assign[Var(LAM, j)] = float(val)
    return p.f.evaluate(assign), p.v.evaluate(xi_norms)


def render_genset(gs: Iterable[Pair]) -> str:
    return "{" + ", ".join(str(p) for p in sorted_pairs(gs)) + "}"
