"""Degree arrays of multi-projective varieties and GNEP/NEP degree formulas."""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Mapping, Sequence

from .genfun import calA, calB, calS, calT
from .multideg import (
    MultiDegree,
    decompositions,
    hat_degree,
    labels,
    unit,
    vec_leq,
    vec_sub,
)

EQ = "eq"
INEQ = "ineq"

ActiveTuple = tuple[tuple[int, ...], ...]
Overrides = Mapping[tuple[int, int], Sequence[int]]


class PreconditionError(ValueError):
    """Raised when inputs violate a documented precondition of a formula."""


class InfeasibleActiveSetWarning(UserWarning):
    """A player has more equality constraints than variables."""


@dataclass(frozen=True)
class Constraint:
    kind: str
    degree: MultiDegree

    def __post_init__(self):
        if self.kind not in (EQ, INEQ):
            raise ValueError(f"constraint kind must be 'eq' or 'ineq', got {self.kind!r}")
        object.__setattr__(self, "degree", tuple(self.degree))


@dataclass(frozen=True)
class Player:
    dim: int
    objective: MultiDegree
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "objective", tuple(self.objective))
        object.__setattr__(self, "constraints", tuple(self.constraints))


@dataclass(frozen=True)
class GnepShape:
    """Dimensions, constraint kinds and multi-degrees of a GNEP."""

    players: tuple[Player, ...]

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        big_n = len(self.players)
        if big_n == 0:
            raise ValueError("a GNEP needs at least one player")
        for i, p in enumerate(self.players, 1):
            if p.dim < 1:
                raise ValueError(f"player {i}: dimension must be positive")
            degs = [p.objective] + [c.degree for c in p.constraints]
            for d in degs:
                if len(d) != big_n or any(v < 0 for v in d):
                    raise ValueError(f"player {i}: bad multi-degree {d} for {big_n} players")
            for j, c in enumerate(p.constraints, 1):
                if not any(c.degree):
                    raise ValueError(f"constraint ({i},{j}) has the zero multi-degree")

    @classmethod
    def build(cls, dims, objectives, constraints=None) -> "GnepShape":
        """Convenience constructor.

        `constraints[i]` is a list of ``(kind, degree)`` pairs for player i+1.
        """
        constraints = constraints or [[] for _ in dims]
        return cls(tuple(
            Player(n, tuple(d0), tuple(Constraint(k, tuple(d)) for k, d in cs))
            for n, d0, cs in zip(dims, objectives, constraints)
        ))

    @property
    def n_players(self) -> int:
        return len(self.players)

    @property
    def nu(self) -> MultiDegree:
        return tuple(p.dim for p in self.players)

    def equality_labels(self, i: int) -> tuple[int, ...]:
        return tuple(j for j, c in enumerate(self.players[i - 1].constraints, 1) if c.kind == EQ)

    def inequality_labels(self, i: int) -> tuple[int, ...]:
        return tuple(j for j, c in enumerate(self.players[i - 1].constraints, 1) if c.kind == INEQ)

    def degree(self, i: int, j: int) -> MultiDegree:
        p = self.players[i - 1]
        return p.objective if j == 0 else p.constraints[j - 1].degree

    def is_nep(self) -> bool:
        return all(
            all(v == 0 for k, v in enumerate(c.degree) if k != i)
            for i, p in enumerate(self.players)
            for c in p.constraints
        )

    def without_constraints(self) -> bool:
        return all(not p.constraints for p in self.players)


@dataclass(frozen=True)
class DegreeArray:
    """Multi-graded degree of a pure-dimensional variety in P^nu.

    Entries are stored densely over labels(dim, nu).
    """

    nu: MultiDegree
    dim: int
    entries: dict = field(compare=True)

    def __getitem__(self, label: Sequence[int]) -> int:
        return self.entries[tuple(label)]

    @property
    def scalar(self) -> int:
        if self.dim != 0:
            raise ValueError(f"degree array has dimension {self.dim}, not 0")
        return self.entries[(0,) * len(self.nu)]

    @classmethod
    def from_function(cls, nu, dim, fn: Callable[[MultiDegree], int]) -> "DegreeArray":
        nu = tuple(nu)
        if dim < 0:
            raise PreconditionError(f"negative dimension {dim}")
        return cls(nu, dim, {l: fn(l) for l in labels(dim, nu)})

    @classmethod
    def ambient(cls, nu) -> "DegreeArray":
        """The whole space P^nu."""
        nu = tuple(nu)
        return cls(nu, sum(nu), {nu: 1})


# active sets and label sets


def format_active(active: ActiveTuple) -> str:
    return ";".join(f"{i}:{{{','.join(map(str, e))}}}" for i, e in enumerate(active, 1))


_ACTIVE_RE = re.compile(r"\s*(\d+)\s*:\s*\{([^}]*)\}\s*")


def parse_active(text: str, n_players: int) -> ActiveTuple:
    """Parse the ``1:{1,2};2:{}`` syntax. Players not mentioned get the empty set."""
    sets: dict[int, tuple[int, ...]] = {}
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        m = _ACTIVE_RE.fullmatch(chunk)
        if not m:
            raise ValueError(f"bad active-set item {chunk!r}; expected like 1:{{1,2}}")
        i = int(m.group(1))
        if not 1 <= i <= n_players:
            raise ValueError(f"player {i} out of range 1..{n_players}")
        if i in sets:
            raise ValueError(f"player {i} listed twice")
        body = m.group(2).replace("∅", "").strip()
        sets[i] = tuple(sorted({int(x) for x in body.split(",") if x.strip()}))
    return tuple(sets.get(i, ()) for i in range(1, n_players + 1))


def lambda_active_sets(shape: GnepShape) -> list[ActiveTuple]:
    """Every admissible tuple of active label sets.

    E_i contains all equality labels, any subset of the inequality labels,
    and has at most n_i elements. Returns [] with a warning when some player
    has more equalities than variables.
    """
    per_player = []
    for i, p in enumerate(shape.players, 1):
        eq = shape.equality_labels(i)
        ineq = shape.inequality_labels(i)
        if len(eq) > p.dim:
            warnings.warn(
                f"player {i} has {len(eq)} equality constraints but only {p.dim} variables",
                InfeasibleActiveSetWarning,
                stacklevel=2,
            )
            return []
        choices = []
        for r in range(0, min(len(ineq), p.dim - len(eq)) + 1):
            for extra in combinations(ineq, r):
                choices.append(tuple(sorted(eq + extra)))
        per_player.append(sorted(choices))
    return sorted(product(*per_player))


def omega_labels(nu: Sequence[int], m: Sequence[int]) -> list[tuple[MultiDegree, ...]]:
    """Tuples (l0, l1, ..., lN) with l0 in [n-m], li in [n-n_i+m_i], summing to N*nu."""
    nu, m = tuple(nu), tuple(m)
    _check_m(nu, m)
    big_n, n = len(nu), sum(nu)
    weights = [n - sum(m)] + [n - nu[i] + m[i] for i in range(big_n)]
    return list(decompositions(tuple(big_n * x for x in nu), weights, nu))


def theta_labels(nu: Sequence[int], m: Sequence[int]) -> list[tuple[MultiDegree, ...]]:
    """Tuples (l1, ..., lN) with li in [n-n_i+m_i] summing to (N-1)*nu + m."""
    nu, m = tuple(nu), tuple(m)
    _check_m(nu, m)
    big_n, n = len(nu), sum(nu)
    weights = [n - nu[i] + m[i] for i in range(big_n)]
    return list(decompositions(tuple((big_n - 1) * x + y for x, y in zip(nu, m)), weights, nu))


def _check_m(nu, m):
    if len(m) != len(nu):
        raise ValueError("need one active count per player")
    if not vec_leq(m, nu) or any(x < 0 for x in m):
        raise PreconditionError(f"active counts {m} must satisfy 0 <= m_i <= n_i = {nu}")


# degree arrays


def complete_intersection_degree(nu: Sequence[int], ds: Sequence[Sequence[int]]) -> DegreeArray:
    """Degree array of the intersection of len(ds) general hypersurfaces."""
    nu = tuple(nu)
    k = len(ds)
    if k > sum(nu):
        raise PreconditionError(f"{k} hypersurfaces exceed ambient dimension {sum(nu)}")
    return DegreeArray.from_function(nu, sum(nu) - k, lambda l: calA(vec_sub(nu, l), ds))


def intersection_degree(nu: Sequence[int], deg_x: DegreeArray, deg_y: DegreeArray) -> DegreeArray:
    """Degree array of a proper (transversal) intersection X ∩ Y."""
    nu = tuple(nu)
    if deg_x.nu != nu or deg_y.nu != nu:
        raise ValueError("degree arrays live in a different multi-projective space")
    dim = deg_x.dim + deg_y.dim - sum(nu)
    if dim < 0:
        raise PreconditionError("codimensions add up to more than the ambient dimension")

    def entry(l):
        total = 0
        for l1, vx in deg_x.entries.items():
            if vx and vec_leq(l, l1):
                total += vx * deg_y.entries[tuple(a + b - c for a, b, c in zip(nu, l, l1))]
        return total

    return DegreeArray.from_function(nu, dim, entry)


def determinantal_degree(nu, rows: int, cols: int, ds, rank_bound: int) -> DegreeArray:
    """Degree array of {rank M <= rank_bound} for a general rows x cols matrix.

    Entries in column j have multi-degree ds[j]. Only the two maximal-minor
    cases are supported: rows <= cols with rank_bound = rows - 1, and
    rows > cols with rank_bound = cols - 1.
    """
    nu = tuple(nu)
    if len(ds) != cols:
        raise ValueError(f"need {cols} column degrees, got {len(ds)}")
    n = sum(nu)
    if rows <= cols and rank_bound == rows - 1:
        return DegreeArray.from_function(nu, n - cols + rows - 1, lambda l: calB(vec_sub(nu, l), ds))
    if rows > cols and rank_bound == cols - 1:
        return DegreeArray.from_function(nu, n - rows + cols - 1, lambda l: calS(vec_sub(nu, l), ds))
    raise PreconditionError(
        f"unsupported determinantal locus: {rows}x{cols} matrix with rank <= {rank_bound}"
    )


# GNEP / NEP degree formulas


def validate_active(shape: GnepShape, active: ActiveTuple, check_dims: bool = True) -> ActiveTuple:
    """Sorted copy of `active`; equality labels must be present."""
    if len(active) != shape.n_players:
        raise ValueError(f"active tuple has {len(active)} entries for {shape.n_players} players")
    out = []
    for i, e in enumerate(active, 1):
        e = tuple(sorted(set(e)))
        n_cons = len(shape.players[i - 1].constraints)
        if any(not 1 <= j <= n_cons for j in e):
            raise ValueError(f"player {i}: active labels {e} out of range 1..{n_cons}")
        missing = set(shape.equality_labels(i)) - set(e)
        if missing:
            raise ValueError(f"player {i}: equality constraints {sorted(missing)} must be active")
        if check_dims and len(e) > shape.players[i - 1].dim:
            raise PreconditionError(
                f"player {i}: {len(e)} active constraints exceed dimension "
                f"{shape.players[i - 1].dim}; no generic Fritz-John points"
            )
        out.append(e)
    return tuple(out)


def gradient_degrees(shape: GnepShape, i: int, e: Sequence[int], overrides: Overrides | None = None):
    """Column multi-degrees of player i's Jacobian [grad f_i, grad g_ij (j in e)]."""
    out = []
    for j in (0, *e):
        if overrides is not None and (i, j) in overrides:
            d = tuple(overrides[(i, j)])
            if len(d) != shape.n_players:
                raise ValueError(f"override for ({i},{j}) has wrong length")
            out.append(d)
        else:
            out.append(hat_degree(shape.degree(i, j), i))
    return out


def gnep_degree_fixed(shape: GnepShape, active: ActiveTuple, overrides: Overrides | None = None) -> int:
    """Number of complex Fritz-John points for one tuple of active sets.

    Without overrides this is the generic algebraic degree; with check-degree
    overrides keyed by (player, label) (label 0 for the objective) it is the
    upper bound for non-generic data.
    """
    active = validate_active(shape, active)
    nu = shape.nu
    m = tuple(len(e) for e in active)
    cons = [shape.degree(i, j) for i, e in enumerate(active, 1) for j in e]
    cols = [gradient_degrees(shape, i, e, overrides) for i, e in enumerate(active, 1)]
    total = 0
    for l0, *ls in omega_labels(nu, m):
        term = calA(vec_sub(nu, l0), cons)
        for li, ci in zip(ls, cols):
            if not term:
                break
            term *= calS(vec_sub(nu, li), ci)
        total += term
    return total


def gnep_degree_total(
    shape: GnepShape,
    overrides: Overrides | None = None,
    active_filter: Callable[[ActiveTuple], bool] | None = None,
) -> tuple[int, dict[ActiveTuple, int]]:
    breakdown = {}
    for e in lambda_active_sets(shape):
        if active_filter is None or active_filter(e):
            breakdown[e] = gnep_degree_fixed(shape, e, overrides)
    return sum(breakdown.values()), breakdown


def nep_overrides(shape: GnepShape) -> dict[tuple[int, int], MultiDegree]:
    """Gradient degrees of a generic NEP: hat(d_i0) and (d_ij - 1) e_i."""
    out = {}
    big_n = shape.n_players
    for i, p in enumerate(shape.players, 1):
        out[(i, 0)] = hat_degree(p.objective, i)
        for j, c in enumerate(p.constraints, 1):
            out[(i, j)] = tuple((c.degree[i - 1] - 1) * x for x in unit(big_n, i))
    return out


def nep_degree_fixed(shape: GnepShape, active: ActiveTuple) -> int:
    """NEP count for one active tuple, via the own-block calT specialisation."""
    if not shape.is_nep():
        raise PreconditionError("shape is not an NEP: some constraint depends on other players")
    active = validate_active(shape, active)
    nu = shape.nu
    m = tuple(len(e) for e in active)
    prefactor = 1
    args = []
    for i, e in enumerate(active, 1):
        own = [shape.degree(i, j)[i - 1] for j in e]
        for d in own:
            prefactor *= d
        args.append((hat_degree(shape.degree(i, 0), i), [d - 1 for d in own]))
    if not prefactor:
        return 0
    total = 0
    for ls in theta_labels(nu, m):
        term = prefactor
        for i, (li, (z0, zs)) in enumerate(zip(ls, args), 1):
            term *= calT(i, vec_sub(nu, li), z0, zs)
            if not term:
                break
        total += term
    return total


def nep_degree_total(shape: GnepShape) -> tuple[int, dict[ActiveTuple, int]]:
    breakdown = {e: nep_degree_fixed(shape, e) for e in lambda_active_sets(shape)}
    return sum(breakdown.values()), breakdown


def unconstrained_degree(shape: GnepShape) -> int:
    """Count of solutions of grad_{x_i} f_i = 0 (i = 1..N) for generic objectives.

    Evaluated as calA over the hat-degrees repeated n_i times and checked
    against the equivalent sum over decompositions nu = alpha_1 + ... + alpha_N
    of products of calS(alpha_i, [hat d_i]).
    """
    if not shape.without_constraints():
        raise PreconditionError("unconstrained_degree needs a shape without constraints")
    nu = shape.nu
    hats = [hat_degree(p.objective, i) for i, p in enumerate(shape.players, 1)]
    via_a = calA(nu, [h for h, n_i in zip(hats, nu) for _ in range(n_i)])
    via_s = unconstrained_degree_product_form(nu, hats)
    if via_a != via_s:
        raise AssertionError(f"unconstrained degree forms disagree: {via_a} != {via_s}")
    return via_a


def unconstrained_degree_product_form(nu: Sequence[int], hats: Iterable[Sequence[int]]) -> int:
    nu = tuple(nu)
    hats = list(hats)
    total = 0
    for alphas in decompositions(nu, list(nu), nu):
        term = 1
        for a, h in zip(alphas, hats):
            term *= calS(a, [h])
            if not term:
                break
        total += term
    return total
