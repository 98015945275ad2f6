"""Sparse integer polynomials over block-structured variables.

Player i's variables are named ``x<i>_<k>`` (1-based). A :class:`VarSpace`
may append extra, non-block variables (Lagrange multipliers ``l<i>_<j>``);
those are ignored by multi-degree computations.

Text grammar (whitespace is insignificant)::

    poly  := ['+'|'-'] term (('+'|'-') term)*
    term  := [INT ['*']] factor ('*' factor)*  |  INT
    factor:= NAME ['^' INT]

e.g. ``3x1_1^2*x2_1 - 2``.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence

from .multideg import MultiDegree, vec_max

Exponent = tuple[int, ...]


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text[:pos]}<HERE>{text[pos:]}")
        self.pos = pos


@dataclass(frozen=True)
class BlockVar:
    player: int
    coord: int

    @property
    def name(self) -> str:
        return f"x{self.player}_{self.coord}"


@dataclass(frozen=True)
class VarSpace:
    """Ordered variables: the blocks x_1..x_N (dims), then any extra names."""

    dims: tuple[int, ...]
    extra: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "extra", tuple(self.extra))
        if any(n < 1 for n in self.dims):
            raise ValueError("block dimensions must be positive")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")

    @cached_property
    def block_vars(self) -> tuple[BlockVar, ...]:
        return tuple(BlockVar(i, k) for i, n in enumerate(self.dims, 1) for k in range(1, n + 1))

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.block_vars) + self.extra

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: pos for pos, name in enumerate(self.names)}

    @property
    def nvars(self) -> int:
        return len(self.names)

    def position(self, var: BlockVar | str) -> int:
        name = var.name if isinstance(var, BlockVar) else var
        try:
            return self.index[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r} for dims {self.dims}") from None

    def block_slice(self, i: int) -> slice:
        start = sum(self.dims[: i - 1])
        return slice(start, start + self.dims[i - 1])

    def with_extra(self, names: Iterable[str]) -> "VarSpace":
        return VarSpace(self.dims, self.extra + tuple(names))


class IntPolynomial:
    """Immutable sparse polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("space", "terms", "_hash")

    def __init__(self, space: VarSpace, terms: Mapping[Exponent, int] | None = None):
        self.space = space
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != space.nvars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent {e} for {space.nvars} variables")
            if c:
                clean[e] = int(c)
        self.terms: dict[Exponent, int] = clean
        self._hash = None

    @classmethod
    def constant(cls, space: VarSpace, c: int) -> "IntPolynomial":
        return cls(space, {(0,) * space.nvars: c})

    @classmethod
    def variable(cls, space: VarSpace, var: BlockVar | str) -> "IntPolynomial":
        e = [0] * space.nvars
        e[space.position(var)] = 1
        return cls(space, {tuple(e): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, int):
            return self == IntPolynomial.constant(self.space, other)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial.constant(self.space, other)
        if other.space != self.space:
            raise ValueError("polynomials live in different variable spaces")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return IntPolynomial(self.space, out)

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial(self.space, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[Exponent, int] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return IntPolynomial(self.space, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = IntPolynomial.constant(self.space, 1)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, point: Sequence[int]) -> int:
        if len(point) != self.space.nvars:
            raise ValueError("point has the wrong number of coordinates")
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term *= x**k
            total += term
        return total

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"IntPolynomial({format_poly(self)!r}, dims={self.space.dims})"

    def block_degrees(self, e: Exponent) -> MultiDegree:
        return tuple(sum(e[self.space.block_slice(i)]) for i in range(1, len(self.space.dims) + 1))


# text I/O

_TOKEN_RE = re.compile(r"(?P<int>\d+)|(?P<name>[A-Za-z]\w*)|(?P<op>[-+*^])")


def _tokenize(text: str):
    pos, out = 0, []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise PolynomialSyntaxError("unexpected character", text, pos)
        out.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse_poly(text: str, space: VarSpace | Sequence[int]) -> IntPolynomial:
    """Parse polynomial text; `space` is a VarSpace or the block dimensions."""
    if not isinstance(space, VarSpace):
        space = VarSpace(tuple(space))
    toks = _tokenize(text)
    pos = 0
    terms: dict[Exponent, int] = {}

    def peek():
        return toks[pos]

    def expect_int():
        nonlocal pos
        kind, val, at = toks[pos]
        if kind != "int":
            raise PolynomialSyntaxError("expected an integer", text, at)
        pos += 1
        return int(val)

    def factor(expo: list[int]):
        nonlocal pos
        kind, val, at = toks[pos]
        if kind != "name":
            raise PolynomialSyntaxError("expected a variable", text, at)
        if val not in space.index:
            raise PolynomialSyntaxError(f"unknown variable {val!r}", text, at)
        pos += 1
        power = 1
        if peek()[:2] == ("op", "^"):
            pos += 1
            power = expect_int()
        expo[space.index[val]] += power

    first = True
    while True:
        sign = 1
        kind, val, at = peek()
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            pos += 1
        elif not first:
            if kind == "end":
                break
            raise PolynomialSyntaxError("expected '+' or '-'", text, at)
        first = False
        expo = [0] * space.nvars
        coeff = 1
        kind, val, at = peek()
        if kind == "int":
            coeff = expect_int()
            kind, val, at = peek()
            if (kind, val) == ("op", "*"):
                pos += 1
                factor(expo)
            elif kind == "name":
                factor(expo)
        elif kind == "name":
            factor(expo)
        else:
            raise PolynomialSyntaxError("expected a term", text, at)
        while peek()[:2] == ("op", "*"):
            pos += 1
            factor(expo)
        e = tuple(expo)
        terms[e] = terms.get(e, 0) + sign * coeff
        if peek()[0] == "end":
            break
    return IntPolynomial(space, terms)


def _grlex_key(e: Exponent):
    # descending total degree, then lexicographically larger exponents first
    return (-sum(e), tuple(-x for x in e))


def format_poly(p: IntPolynomial, explicit_times: bool = False) -> str:
    """Canonical text: graded-lex term order, unit coefficients suppressed.

    With `explicit_times` a ``*`` separates the coefficient from the monomial
    (needed by CAS front ends).
    """
    if p.is_zero():
        return "0"
    names = p.space.names
    parts = []
    for e in sorted(p.terms, key=_grlex_key):
        c = p.terms[e]
        mono = "*".join(
            names[k] if x == 1 else f"{names[k]}^{x}" for k, x in enumerate(e) if x
        )
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}" if explicit_times else f"{a}{mono}"
        parts.append(("-" if c < 0 else "+", body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# calculus and degrees


def partial(p: IntPolynomial, var: BlockVar | str) -> IntPolynomial:
    k = p.space.position(var)
    out = {}
    for e, c in p.terms.items():
        if e[k]:
            d = list(e)
            d[k] -= 1
            out[tuple(d)] = c * e[k]
    return IntPolynomial(p.space, out)


def gradient(p: IntPolynomial, i: int) -> list[IntPolynomial]:
    """Partial derivatives with respect to player i's block, in coordinate order."""
    return [partial(p, BlockVar(i, k)) for k in range(1, p.space.dims[i - 1] + 1)]


def multidegree(p: IntPolynomial) -> MultiDegree:
    """Per-block total degree, maximised over the terms of `p`."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no multi-degree")
    out = (0,) * len(p.space.dims)
    for e in p.terms:
        out = vec_max(out, p.block_degrees(e))
    return out


def check_degrees(objective: IntPolynomial, constraints: Sequence[IntPolynomial], i: int) -> list[MultiDegree]:
    """Componentwise max multi-degree of the player-i gradient entries.

    Returns one entry for the objective followed by one per constraint; a
    vanishing partial derivative contributes the zero vector.
    """
    out = []
    for p in (objective, *constraints):
        d = (0,) * len(p.space.dims)
        for q in gradient(p, i):
            if not q.is_zero():
                d = vec_max(d, multidegree(q))
        out.append(d)
    return out


# seeded generic polynomials


def _block_monomials(n: int, deg: int) -> list[tuple[int, ...]]:
    """Exponents in n variables of total degree <= deg, graded-lex descending."""
    mons = [e for e in product(range(deg + 1), repeat=n) if sum(e) <= deg]
    return sorted(mons, key=_grlex_key)


def generic_support(dims: Sequence[int], d: Sequence[int]) -> list[Exponent]:
    """All monomials whose block-k degree is at most d_k, in a fixed order."""
    blocks = [_block_monomials(n, dk) for n, dk in zip(dims, d)]
    return [sum(parts, ()) for parts in product(*blocks)]


def stream_int(key, index: int, bound: int, round_: int = 0) -> int:
    """Deterministic integer in [-bound, bound] keyed by (key, index, round)."""
    h = hashlib.blake2b(f"{key}:{index}:{round_}".encode(), digest_size=16).digest()
    return int.from_bytes(h, "big") % (2 * bound + 1) - bound


def random_generic(dims: Sequence[int], d: Sequence[int], seed: int, coeff_bound: int = 9,
                   stream: int = 0) -> IntPolynomial:
    """Dense random polynomial whose multi-degree is exactly `d`.

    Coefficients come from a counter-based stream keyed by (seed, stream,
    monomial index), so the result does not depend on evaluation order.
    The monomial prod_k x_{k,1}^{d_k} is forced nonzero; it attains every
    block degree at once and keeps every gradient at its generic degree.
    """
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be at least 1")
    dims, d = tuple(dims), tuple(d)
    if len(dims) != len(d):
        raise ValueError("multi-degree length must match the number of blocks")
    space = VarSpace(dims)
    support = generic_support(dims, d)
    top = []
    for n, dk in zip(dims, d):
        top.extend([dk] + [0] * (n - 1))
    top = tuple(top)
    key = f"{seed}/{stream}"
    terms = {}
    for idx, e in enumerate(support):
        c = stream_int(key, idx, coeff_bound)
        rnd = 0
        while e == top and c == 0:
            rnd += 1
            c = stream_int(key, idx, coeff_bound, rnd)
        terms[e] = c
    return IntPolynomial(space, terms)
