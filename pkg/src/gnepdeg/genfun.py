"""Generating-function coefficients used by the degree formulas.

calA, calB and calS are coefficients of t^delta in products of linear forms
z_1 t_1 + ... + z_N t_N:

    calA:  prod (L_j)            (exactly k factors, k = |delta|)
    calB:  prod (1 + L_j)
    calS:  prod 1 / (1 - L_j)

They are evaluated by exact truncated multiplication of multivariate series
whose exponents are capped at delta. The combinatorial sum definitions live
in :mod:`gnepdeg.reference` and are only used for cross-checking.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

from .multideg import MultiDegree

LINEAR = "linear"
ONE_PLUS_LINEAR = "one-plus-linear"
GEOMETRIC = "geometric"
MODES = (LINEAR, ONE_PLUS_LINEAR, GEOMETRIC)

Series = dict[MultiDegree, int]


class TruncatedSeries:
    """A multivariate power series truncated to exponents <= cap componentwise."""

    __slots__ = ("cap", "coeffs")

    def __init__(self, cap: Sequence[int], coeffs: dict | None = None):
        self.cap = tuple(cap)
        self.coeffs: Series = {}
        for e, c in (coeffs or {}).items():
            e = tuple(e)
            if c and all(x <= y for x, y in zip(e, self.cap)):
                self.coeffs[e] = c

    @classmethod
    def one(cls, cap: Sequence[int]) -> "TruncatedSeries":
        return cls(cap, {(0,) * len(cap): 1})

    @classmethod
    def linear_form(cls, z: Sequence[int], cap: Sequence[int]) -> "TruncatedSeries":
        n = len(cap)
        return cls(cap, {tuple(int(k == j) for k in range(n)): z[j] for j in range(n)})

    def __getitem__(self, e: Sequence[int]) -> int:
        return self.coeffs.get(tuple(e), 0)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return TruncatedSeries(self.cap, out)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        cap = self.cap
        out: Series = {}
        for ea, ca in self.coeffs.items():
            for eb, cb in other.coeffs.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                if all(x <= y for x, y in zip(e, cap)):
                    out[e] = out.get(e, 0) + ca * cb
        return TruncatedSeries(cap, out)


def _factor_series(z: Sequence[int], mode: str, cap: MultiDegree) -> TruncatedSeries:
    lin = TruncatedSeries.linear_form(z, cap)
    if mode == LINEAR:
        return lin
    one = TruncatedSeries.one(cap)
    if mode == ONE_PLUS_LINEAR:
        return one + lin
    if mode == GEOMETRIC:
        out, power = one, one
        for _ in range(sum(cap)):
            power = power * lin
            out = out + power
        return out
    raise ValueError(f"unknown factor mode {mode!r}")


def series_coeff(delta: Sequence[int], factors: Iterable[tuple[str, Sequence[int]]]) -> int:
    """Coefficient of t^delta in the product of the described factors.

    Each factor is ``(mode, z)`` with mode one of ``linear``,
    ``one-plus-linear`` or ``geometric``; geometric factors are expanded as
    1 + L + L^2 + ... up to total degree |delta|.
    """
    delta = tuple(delta)
    prod = TruncatedSeries.one(delta)
    for mode, z in factors:
        if len(z) != len(delta):
            raise ValueError(f"factor {tuple(z)} does not match exponent length {len(delta)}")
        prod = prod * _factor_series(z, mode, delta)
        if not prod.coeffs:
            return 0
    return prod[delta]


def _key(zs: Iterable[Sequence[int]]) -> tuple[MultiDegree, ...]:
    # every function here is symmetric in its argument list
    return tuple(sorted(tuple(z) for z in zs))


@lru_cache(maxsize=None)
def _coeff_cached(delta: MultiDegree, zs: tuple[MultiDegree, ...], mode: str) -> int:
    return series_coeff(delta, [(mode, z) for z in zs])


def calA(delta: Sequence[int], zs: Iterable[Sequence[int]]) -> int:
    """Coefficient of t^delta in prod_j (z_j . t); zero unless |delta| = len(zs)."""
    delta, zs = tuple(delta), _key(zs)
    if sum(delta) != len(zs):
        return 0
    return _coeff_cached(delta, zs, LINEAR)


def calB(delta: Sequence[int], zs: Iterable[Sequence[int]]) -> int:
    """Coefficient of t^delta in prod_j (1 + z_j . t)."""
    return _coeff_cached(tuple(delta), _key(zs), ONE_PLUS_LINEAR)


def calS(delta: Sequence[int], zs: Iterable[Sequence[int]]) -> int:
    """Coefficient of t^delta in prod_j 1 / (1 - z_j . t)."""
    return _coeff_cached(tuple(delta), _key(zs), GEOMETRIC)


def multinomial(parts: Sequence[int]) -> int:
    out = factorial(sum(parts))
    for p in parts:
        out //= factorial(p)
    return out


def _compositions(total: int, k: int):
    if k == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


def calT(i: int, delta: Sequence[int], z0: Sequence[int], zs: Sequence[int]) -> int:
    """The NEP specialisation of calS with own-block-only scalar arguments.

    Sums over (eta_0, ..., eta_m) with eta_0 + ... + eta_m = delta_i of

        z0_i^eta_0 * prod_j zs_j^eta_j
            * multinomial(eta_0, delta_j for j != i) * prod_{j != i} z0_j^delta_j

    The multinomial normalisation makes this equal to
    calS(delta, [z0, zs_1 e_i, ..., zs_m e_i]).
    """
    delta, z0 = tuple(delta), tuple(z0)
    if len(delta) != len(z0):
        raise ValueError("delta and z0 must have the same length")
    if not 1 <= i <= len(delta):
        raise IndexError(f"player index {i} out of range 1..{len(delta)}")
    if any(z < 0 for z in zs):
        raise ValueError("scalar arguments must be nonnegative")
    others = [delta[j] for j in range(len(delta)) if j != i - 1]
    other_factor = 1
    for j in range(len(delta)):
        if j != i - 1:
            other_factor *= z0[j] ** delta[j]
    if other_factor == 0:
        return 0
    total = 0
    for eta in _compositions(delta[i - 1], len(zs) + 1):
        term = z0[i - 1] ** eta[0]
        for z, e in zip(zs, eta[1:]):
            term *= z**e
        if term:
            total += term * multinomial([eta[0], *others])
    return total * other_factor

