"""Brute-force reference implementations.

These follow the combinatorial definitions literally (0/1 and N-valued
matrices with prescribed row sums, filters over full Cartesian products) and
share no code with the fast paths in genfun/degrees. They are slow on purpose
and meant for small inputs only.
"""

from __future__ import annotations

from itertools import combinations, product
from math import prod
from typing import Sequence

from .genfun import multinomial


def box_labels(s: int, nu: Sequence[int]) -> list[tuple[int, ...]]:
    return sorted(l for l in product(*(range(n + 1) for n in nu)) if sum(l) == s)


def _rows_with_sum(total: int, length: int):
    return [r for r in product(range(total + 1), repeat=length) if sum(r) == total]


def calA_matrix_sum(delta: Sequence[int], zs: Sequence[Sequence[int]]) -> int:
    """Sum over 0/1 matrices with row sums delta and unit column sums."""
    k, n_rows = len(zs), len(delta)
    if sum(delta) != k:
        return 0
    total = 0
    # a unit column sum means each column picks one row
    for rows in product(range(n_rows), repeat=k):
        if all(rows.count(r) == delta[r] for r in range(n_rows)):
            total += prod(zs[j][rows[j]] for j in range(k))
    return total


def calB_subset_sum(delta: Sequence[int], zs: Sequence[Sequence[int]]) -> int:
    r = sum(delta)
    if r == 0:
        return 1
    return sum(calA_matrix_sum(delta, [zs[i] for i in idx]) for idx in combinations(range(len(zs)), r))


def calS_matrix_sum(delta: Sequence[int], zs: Sequence[Sequence[int]]) -> int:
    """Sum over N-valued matrices with row sums delta, weighted by column multinomials."""
    s = len(zs)
    if s == 0:
        return 1 if not any(delta) else 0
    total = 0
    for rows in product(*(_rows_with_sum(d, s) for d in delta)):
        term = 1
        for j in range(s):
            col = [rows[i][j] for i in range(len(delta))]
            term *= multinomial(col) * prod(zs[j][i] ** col[i] for i in range(len(delta)))
            if not term:
                break
        total += term
    return total


def omega_filter(nu: Sequence[int], m: Sequence[int]):
    """Omega by filtering the full product of label sets."""
    nu = tuple(nu)
    big_n, n = len(nu), sum(nu)
    sets = [box_labels(n - sum(m), nu)] + [box_labels(n - nu[i] + m[i], nu) for i in range(big_n)]
    target = tuple(big_n * x for x in nu)
    return sorted(
        combo for combo in product(*sets)
        if tuple(sum(l[k] for l in combo) for k in range(big_n)) == target
    )


def theta_filter(nu: Sequence[int], m: Sequence[int]):
    nu = tuple(nu)
    big_n, n = len(nu), sum(nu)
    sets = [box_labels(n - nu[i] + m[i], nu) for i in range(big_n)]
    target = tuple((big_n - 1) * nu[k] + m[k] for k in range(big_n))
    return sorted(
        combo for combo in product(*sets)
        if tuple(sum(l[k] for l in combo) for k in range(big_n)) == target
    )


def lambda_filter(dims: Sequence[int], kinds: Sequence[Sequence[str]]):
    """All active tuples, from the power set of each player's constraint labels."""
    per_player = []
    for n_i, ks in zip(dims, kinds):
        labels = range(1, len(ks) + 1)
        eq = {j for j in labels if ks[j - 1] == "eq"}
        choices = []
        for r in range(len(ks) + 1):
            for sub in combinations(labels, r):
                if eq <= set(sub) and len(sub) <= n_i:
                    choices.append(sub)
        per_player.append(choices)
    return sorted(product(*per_player))
