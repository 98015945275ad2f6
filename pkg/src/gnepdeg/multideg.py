"""Multi-degree tuples and the label sets that index degree arrays.

Multi-degrees and labels are plain tuples of nonnegative ints, one entry per
player block. Player indices are 1-based throughout the package.
"""

from __future__ import annotations

from typing import Iterator, Sequence

MultiDegree = tuple[int, ...]


def _check_same_length(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise ValueError(f"multi-degree length mismatch: {len(a)} vs {len(b)}")


def vec_add(a: Sequence[int], b: Sequence[int]) -> MultiDegree:
    _check_same_length(a, b)
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence[int], b: Sequence[int]) -> MultiDegree:
    _check_same_length(a, b)
    out = tuple(x - y for x, y in zip(a, b))
    if any(v < 0 for v in out):
        raise ValueError(f"negative component in {tuple(a)} - {tuple(b)}")
    return out


def vec_leq(a: Sequence[int], b: Sequence[int]) -> bool:
    _check_same_length(a, b)
    return all(x <= y for x, y in zip(a, b))


def vec_max(a: Sequence[int], b: Sequence[int]) -> MultiDegree:
    _check_same_length(a, b)
    return tuple(max(x, y) for x, y in zip(a, b))


def unit(n_blocks: int, i: int) -> MultiDegree:
    """The unit vector e_i (1-based)."""
    if not 1 <= i <= n_blocks:
        raise IndexError(f"player index {i} out of range 1..{n_blocks}")
    return tuple(1 if k == i - 1 else 0 for k in range(n_blocks))


def hat_degree(d: Sequence[int], i: int) -> MultiDegree:
    """Lower the i-th entry of `d` by one, flooring at zero.

    This is the generic multi-degree of an entry of the gradient with respect
    to player i's variables.
    """
    if not 1 <= i <= len(d):
        raise IndexError(f"player index {i} out of range 1..{len(d)}")
    out = list(d)
    out[i - 1] = max(out[i - 1] - 1, 0)
    return tuple(out)


def iter_labels(s: int, nu: Sequence[int]) -> Iterator[MultiDegree]:
    """Yield every l with |l| = s and 0 <= l <= nu, in lexicographic order."""
    nu = tuple(nu)
    if s < 0:
        return
    # suffix capacity decides how small the current entry may be
    tail = [0] * (len(nu) + 1)
    for k in range(len(nu) - 1, -1, -1):
        tail[k] = tail[k + 1] + nu[k]

    def rec(k: int, left: int, prefix: tuple[int, ...]) -> Iterator[MultiDegree]:
        if k == len(nu):
            if left == 0:
                yield prefix
            return
        lo = max(0, left - tail[k + 1])
        for v in range(lo, min(nu[k], left) + 1):
            yield from rec(k + 1, left - v, prefix + (v,))

    yield from rec(0, s, ())


def labels(s: int, nu: Sequence[int]) -> list[MultiDegree]:
    """All labels of weight `s` inside the box [0, nu], lexicographically sorted."""
    return list(iter_labels(s, nu))


def decompositions(
    target: Sequence[int], weights: Sequence[int], cap: Sequence[int]
) -> Iterator[tuple[MultiDegree, ...]]:
    """Yield tuples (l_1, ..., l_k) with l_j in labels(weights[j], cap) summing to `target`.

    Used for the multi-label index sets of the degree formulas.
    """
    target = tuple(target)
    cap = tuple(cap)
    _check_same_length(target, cap)
    if any(t < 0 for t in target) or sum(weights) != sum(target):
        return
    k = len(weights)

    def rec(j: int, rest: MultiDegree, acc: tuple[MultiDegree, ...]):
        if j == k - 1:
            if sum(rest) == weights[j] and vec_leq(rest, cap):
                yield acc + (rest,)
            return
        bound = tuple(min(r, c) for r, c in zip(rest, cap))
        for lab in iter_labels(weights[j], bound):
            yield from rec(j + 1, tuple(r - x for r, x in zip(rest, lab)), acc + (lab,))

    if k == 0:
        if not any(target):
            yield ()
        return
    yield from rec(0, target, ())
