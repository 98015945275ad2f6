"""Fritz-John polynomial systems of concrete GNEP instances, and their export."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .degrees import (
    ActiveTuple,
    Constraint,
    GnepShape,
    Player,
    format_active,
    validate_active,
)
from .poly import (
    IntPolynomial,
    VarSpace,
    format_poly,
    gradient,
    multidegree,
    parse_poly,
    stream_int,
)

MINORS = "minors"
LAGRANGE = "lagrange"
FORMULATIONS = (MINORS, LAGRANGE)
JSON_FORMAT = "gnepdeg.fjsystem/1"


@dataclass(frozen=True)
class GnepInstance:
    """A shape together with concrete objective and constraint polynomials."""

    shape: GnepShape
    objectives: tuple[IntPolynomial, ...]
    constraints: tuple[tuple[IntPolynomial, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "objectives", tuple(self.objectives))
        object.__setattr__(self, "constraints", tuple(tuple(c) for c in self.constraints))
        if len(self.objectives) != self.shape.n_players or len(self.constraints) != self.shape.n_players:
            raise ValueError("need one objective and one constraint list per player")
        for i, p in enumerate(self.shape.players, 1):
            if len(self.constraints[i - 1]) != len(p.constraints):
                raise ValueError(f"player {i}: constraint count does not match the shape")
            for j, poly in enumerate((self.objectives[i - 1], *self.constraints[i - 1])):
                if poly.space.dims != self.shape.nu:
                    raise ValueError(f"polynomial ({i},{j}) uses dims {poly.space.dims}")
                if not poly.is_zero() and multidegree(poly) != self.shape.degree(i, j):
                    raise ValueError(
                        f"polynomial ({i},{j}) has multi-degree {multidegree(poly)}, "
                        f"shape declares {self.shape.degree(i, j)}"
                    )

    @property
    def space(self) -> VarSpace:
        return VarSpace(self.shape.nu)

    @classmethod
    def from_polynomials(cls, dims, objectives, constraints) -> "GnepInstance":
        """Build an instance, reading multi-degrees off the polynomials.

        `constraints[i]` is a list of ``(kind, polynomial)`` pairs; polynomials
        may be given as text.
        """
        space = VarSpace(tuple(dims))

        def as_poly(p):
            return parse_poly(p, space) if isinstance(p, str) else p

        objs = [as_poly(f) for f in objectives]
        cons = [[(k, as_poly(g)) for k, g in cs] for cs in constraints]
        shape = GnepShape(tuple(
            Player(n, multidegree(f), tuple(Constraint(k, multidegree(g)) for k, g in cs))
            for n, f, cs in zip(dims, objs, cons)
        ))
        return cls(shape, tuple(objs), tuple(tuple(g for _, g in cs) for cs in cons))


@dataclass(frozen=True)
class FritzJohnSystem:
    variables: tuple[str, ...]
    generators: tuple[IntPolynomial, ...]
    formulation: str
    active: ActiveTuple

    @property
    def space(self) -> VarSpace:
        return self.generators[0].space if self.generators else None


def jacobian(instance: GnepInstance, i: int, active_i: Sequence[int]) -> list[list[IntPolynomial]]:
    """n_i x (m_i + 1) matrix [grad f_i, grad g_ij for j in sorted(active_i)]."""
    n_cons = len(instance.constraints[i - 1])
    e = sorted(set(active_i))
    if any(not 1 <= j <= n_cons for j in e):
        raise ValueError(f"player {i}: active labels {e} out of range 1..{n_cons}")
    cols = [gradient(instance.objectives[i - 1], i)]
    cols += [gradient(instance.constraints[i - 1][j - 1], i) for j in e]
    return [[col[k] for col in cols] for k in range(instance.shape.nu[i - 1])]


def determinant(matrix: Sequence[Sequence[IntPolynomial]]) -> IntPolynomial:
    """Determinant by cofactor expansion along the first row (memoised on column subsets)."""
    size = len(matrix)
    if size == 0 or any(len(row) != size for row in matrix):
        raise ValueError("determinant needs a nonempty square matrix")

    @lru_cache(maxsize=None)
    def det(row: int, cols: tuple[int, ...]) -> IntPolynomial:
        if len(cols) == 1:
            return matrix[row][cols[0]]
        total = None
        for pos, c in enumerate(cols):
            entry = matrix[row][c]
            if entry.is_zero():
                continue
            term = entry * det(row + 1, cols[:pos] + cols[pos + 1:])
            if pos % 2:
                term = -term
            total = term if total is None else total + term
        return total if total is not None else 0 * matrix[0][0]

    return det(0, tuple(range(size)))


def multiplier_name(i: int, j: int) -> str:
    return f"l{i}_{j}"


def build(instance: GnepInstance, active: ActiveTuple, formulation: str = MINORS,
          normalization_seed: int | None = None) -> FritzJohnSystem:
    """Fritz-John system for a fixed tuple of active label sets.

    ``minors``: the active constraints, then for each player every
    (m_i+1)-minor of its Jacobian, row subsets in lexicographic order.

    ``lagrange``: the active constraints, then the n stationarity equations
    grad f_i - sum_j l_ij grad g_ij. The objective multiplier is fixed to 1
    unless `normalization_seed` is given, in which case l_i0 becomes a
    variable and a seeded affine equation sum_j c_ij l_ij = 1 is added per
    player.
    """
    if formulation not in FORMULATIONS:
        raise ValueError(f"formulation must be one of {FORMULATIONS}")
    active = validate_active(instance.shape, active, check_dims=formulation == MINORS)
    nu = instance.shape.nu
    base = instance.space
    extra: list[str] = []
    if formulation == LAGRANGE:
        for i, e in enumerate(active, 1):
            js = (0, *e) if normalization_seed is not None else e
            extra.extend(multiplier_name(i, j) for j in js)
    space = base.with_extra(extra)

    def lift(p: IntPolynomial) -> IntPolynomial:
        pad = (0,) * len(extra)
        return IntPolynomial(space, {e + pad: c for e, c in p.terms.items()})

    gens = [lift(instance.constraints[i - 1][j - 1]) for i, e in enumerate(active, 1) for j in e]
    if formulation == MINORS:
        for i, e in enumerate(active, 1):
            jac = jacobian(instance, i, e)
            size = len(e) + 1
            for rows in combinations(range(nu[i - 1]), size):
                gens.append(lift(determinant([jac[r] for r in rows])))
    else:
        for i, e in enumerate(active, 1):
            jac = jacobian(instance, i, e)
            lam = [IntPolynomial.variable(space, multiplier_name(i, j)) for j in e]
            if normalization_seed is None:
                lam0 = IntPolynomial.constant(space, 1)
            else:
                lam0 = IntPolynomial.variable(space, multiplier_name(i, 0))
            for row in jac:
                eq = lam0 * lift(row[0])
                for lj, g in zip(lam, row[1:]):
                    eq = eq - lj * lift(g)
                gens.append(eq)
        if normalization_seed is not None:
            for i, e in enumerate(active, 1):
                norm = IntPolynomial.constant(space, -1)
                for j in (0, *e):
                    c = 0
                    rnd = 0
                    while c == 0:
                        c = stream_int(f"norm/{normalization_seed}", i * 1000 + j, 9, rnd)
                        rnd += 1
                    norm = norm + c * IntPolynomial.variable(space, multiplier_name(i, j))
                gens.append(norm)
    return FritzJohnSystem(space.names, tuple(gens), formulation, active)


def export_cas(system: FritzJohnSystem, ring_name: str = "R", ideal_name: str = "I") -> str:
    """Macaulay2 script declaring the ring and ideal, then asking for dim and degree."""
    lines = [
        f"-- Fritz-John system, {system.formulation} formulation, active {format_active(system.active)}",
        f"{ring_name} = QQ[{', '.join(system.variables)}];",
    ]
    if system.generators:
        body = ", ".join(format_poly(g, explicit_times=True) for g in system.generators)
    else:
        body = f"0_{ring_name}"
    lines += [f"{ideal_name} = ideal({body});", f"dim {ideal_name}", f"degree {ideal_name}"]
    return "\n".join(lines) + "\n"


def export_json(system: FritzJohnSystem, dims: Sequence[int]) -> str:
    doc = {
        "format": JSON_FORMAT,
        "dims": list(dims),
        "formulation": system.formulation,
        "active": [list(e) for e in system.active],
        "variables": list(system.variables),
        "generators": [format_poly(g) for g in system.generators],
    }
    return json.dumps(doc, indent=2) + "\n"


def import_json(text: str) -> FritzJohnSystem:
    doc = json.loads(text)
    if doc.get("format") != JSON_FORMAT:
        raise ValueError(f"not a {JSON_FORMAT} document")
    dims = tuple(doc["dims"])
    base = VarSpace(dims)
    extra = tuple(doc["variables"][len(base.names):])
    space = base.with_extra(extra)
    if space.names != tuple(doc["variables"]):
        raise ValueError("variable list does not match the block dimensions")
    gens = tuple(parse_poly(g, space) for g in doc["generators"])
    return FritzJohnSystem(space.names, gens, doc["formulation"], tuple(tuple(e) for e in doc["active"]))
