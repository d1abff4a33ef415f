"""Block-structured polynomials with exact rational coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .linear import fr


@dataclass(frozen=True)
class BlockStructure:
    """Coordinates grouped into blocks; multi-indices are flat tuples."""

    dims: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.dims)

    @property
    def n(self) -> int:
        return sum(self.dims)

    def block_of(self, coord: int) -> int:
        """1-based block index of a 0-based coordinate."""
        acc = 0
        for k, d in enumerate(self.dims, start=1):
            acc += d
            if coord < acc:
                return k
        raise IndexError(coord)

    def coords_of(self, block: int) -> range:
        start = sum(self.dims[:block - 1])
        return range(start, start + self.dims[block - 1])

    def block_lengths(self, idx: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(sum(idx[c] for c in self.coords_of(k))
                     for k in range(1, self.m + 1))

    def coord_name(self, coord: int) -> str:
        k = self.block_of(coord)
        offs = coord - self.coords_of(k).start
        return f"z{k}" if self.dims[k - 1] == 1 else f"z{k}_{offs + 1}"

    def zero_index(self) -> tuple[int, ...]:
        return (0,) * self.n


def _iadd(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True)
class BlockPolynomial:
    """Finite map multi-index -> rational coefficient."""

    struct: BlockStructure
    terms: tuple[tuple[tuple[int, ...], Fraction], ...]

    @staticmethod
    def from_dict(struct: BlockStructure, d) -> "BlockPolynomial":
        items = tuple(sorted(((tuple(i), fr(c)) for i, c in d.items() if c != 0)))
        return BlockPolynomial(struct, items)

    def as_dict(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "BlockPolynomial") -> "BlockPolynomial":
        d = self.as_dict()
        for i, c in other.terms:
            d[i] = d.get(i, Fraction(0)) + c
        return BlockPolynomial.from_dict(self.struct, d)

    def __sub__(self, other: "BlockPolynomial") -> "BlockPolynomial":
        return self + other.scale(-1)

    def scale(self, c) -> "BlockPolynomial":
        c = fr(c)
        return BlockPolynomial.from_dict(
            self.struct, {i: c * x for i, x in self.terms})

    def __mul__(self, other: "BlockPolynomial") -> "BlockPolynomial":
        d: dict[tuple[int, ...], Fraction] = {}
        for i, c in self.terms:
            for j, e in other.terms:
                k = _iadd(i, j)
                d[k] = d.get(k, Fraction(0)) + c * e
        return BlockPolynomial.from_dict(self.struct, d)

    def diff(self, coord: int, times: int = 1) -> "BlockPolynomial":
        out = self
        for _ in range(times):
            d = {}
            for i, c in out.terms:
                if i[coord] > 0:
                    j = list(i)
                    j[coord] -= 1
                    d[tuple(j)] = d.get(tuple(j), Fraction(0)) + c * i[coord]
            out = BlockPolynomial.from_dict(self.struct, d)
        return out

    def diff_multi(self, alpha: tuple[int, ...]) -> "BlockPolynomial":
        out = self
        for coord, times in enumerate(alpha):
            if times:
                out = out.diff(coord, times)
        return out

    def restrict_zero(self, blocks) -> "BlockPolynomial":
        """Set all coordinates of the listed blocks to zero."""
        dead = set()
        for k in blocks:
            dead.update(self.struct.coords_of(k))
        d = {i: c for i, c in self.terms if all(i[cc] == 0 for cc in dead)}
        return BlockPolynomial.from_dict(self.struct, d)

    def evaluate(self, values) -> float:
        out = 0.0
        for i, c in self.terms:
            term = float(c)
            for coord, e in enumerate(i):
                if e:
                    term *= values[coord] ** e
            out += term
        return out

    def support_blocks(self) -> frozenset[int]:
        used = set()
        for i, _ in self.terms:
            for coord, e in enumerate(i):
                if e:
                    used.add(self.struct.block_of(coord))
        return frozenset(used)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i, c in self.terms:
            factors = []
            for coord, e in enumerate(i):
                if e:
                    name = self.struct.coord_name(coord)
                    factors.append(name if e == 1 else f"{name}^{e}")
            body = "*".join(factors) if factors else "1"
            parts.append(f"{c}*{body}" if c != 1 or not factors else body)
        return " + ".join(parts)


def poly_zero(struct: BlockStructure) -> BlockPolynomial:
    return BlockPolynomial(struct, ())


def poly_const(struct: BlockStructure, c) -> BlockPolynomial:
    return BlockPolynomial.from_dict(struct, {struct.zero_index(): fr(c)})


def poly_monomial(struct: BlockStructure, idx, c=1) -> BlockPolynomial:
    return BlockPolynomial.from_dict(struct, {tuple(idx): fr(c)})


def coordinate(struct: BlockStructure, coord: int) -> BlockPolynomial:
    idx = [0] * struct.n
    idx[coord] = 1
    return poly_monomial(struct, idx)


def factorial_multi(idx) -> int:
    out = 1
    for e in idx:
        out *= math.factorial(e)
    return out


def exp_truncation(struct: BlockStructure, max_total_degree: int) -> BlockPolynomial:
    """Taylor truncation of exp(z_1 + ... + z_n) up to a total degree."""
    d = {}
    rngs = [range(max_total_degree + 1)] * struct.n
    for idx in product(*rngs):
        if sum(idx) <= max_total_degree:
            d[idx] = Fraction(1, factorial_multi(idx))
    return BlockPolynomial.from_dict(struct, d)


def random_polynomial(struct: BlockStructure, rng, max_degree: int = 3,
                      terms: int = 5) -> BlockPolynomial:
    d = {}
    for _ in range(terms):
        idx = tuple(int(rng.integers(0, max_degree + 1)) for _ in range(struct.n))
        d[idx] = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))
    return BlockPolynomial.from_dict(struct, d)
