"""Reading and writing GNEP instance files (UTF-8 JSON).

Layout::

    {"name": "...",                      # optional
     "players": [
        {"dim": 3,
         "objective": {"multidegree": [2, 1]} | {"polynomial": "x1_1^2*x2_1 - 1"},
         "constraints": [{"kind": "eq" | "ineq", ...same slot keys...}]}],
     "expected": {...}}                  # optional, used by selftest

A slot carries a multi-degree, a polynomial, or both (they must agree).
It may also carry an explicit "check_degree" for the non-generic bound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .degrees import EQ, INEQ, Constraint, GnepShape, Player, PreconditionError
from .fjsys import GnepInstance
from .multideg import MultiDegree
from .poly import IntPolynomial, VarSpace, check_degrees, format_poly, multidegree, parse_poly, random_generic


class InstanceFileError(ValueError):
    """Malformed instance document."""


@dataclass(frozen=True)
class Slot:
    degree: MultiDegree
    polynomial: IntPolynomial | None = None
    check_degree: MultiDegree | None = None
    kind: str | None = None  # None for objectives


@dataclass(frozen=True)
class InstanceSpec:
    dims: tuple[int, ...]
    slots: tuple[tuple[Slot, ...], ...]  # per player: objective, then constraints
    name: str | None = None
    expected: dict = field(default_factory=dict, compare=False)

    @property
    def shape(self) -> GnepShape:
        return GnepShape(tuple(
            Player(n, s[0].degree, tuple(Constraint(c.kind, c.degree) for c in s[1:]))
            for n, s in zip(self.dims, self.slots)
        ))

    def has_polynomials(self) -> bool:
        return all(s.polynomial is not None for player in self.slots for s in player)

    def instance(self) -> GnepInstance:
        if not self.has_polynomials():
            raise PreconditionError("instance needs a polynomial in every slot")
        return GnepInstance(
            self.shape,
            tuple(p[0].polynomial for p in self.slots),
            tuple(tuple(s.polynomial for s in p[1:]) for p in self.slots),
        )

    def check_overrides(self) -> dict[tuple[int, int], MultiDegree]:
        """Check-degrees keyed by (player, label); label 0 is the objective.

        An explicit check_degree wins over one computed from the polynomial.
        Slots with neither are left out and fall back to the hat-degree.
        """
        out = {}
        for i, player in enumerate(self.slots, 1):
            for j, s in enumerate(player):
                if s.check_degree is not None:
                    out[(i, j)] = s.check_degree
                elif s.polynomial is not None:
                    out[(i, j)] = check_degrees(s.polynomial, [], i)[0]
        if not out:
            raise PreconditionError("bound needs polynomials or explicit check_degree entries")
        return out

    def to_document(self) -> dict:
        doc: dict[str, Any] = {}
        if self.name is not None:
            doc["name"] = self.name
        players = []
        for n, player in zip(self.dims, self.slots):
            players.append({
                "dim": n,
                "objective": _slot_document(player[0]),
                "constraints": [_slot_document(s) for s in player[1:]],
            })
        doc["players"] = players
        if self.expected:
            doc["expected"] = self.expected
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_document(), indent=2) + "\n"


def _slot_document(s: Slot) -> dict:
    out: dict[str, Any] = {}
    if s.kind is not None:
        out["kind"] = s.kind
    out["multidegree"] = list(s.degree)
    if s.polynomial is not None:
        out["polynomial"] = format_poly(s.polynomial)
    if s.check_degree is not None:
        out["check_degree"] = list(s.check_degree)
    return out


def _int_vector(value, what: str, length: int) -> MultiDegree:
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise InstanceFileError(f"{what}: expected a list of integers")
    if len(value) != length:
        raise InstanceFileError(f"{what}: expected {length} entries, got {len(value)}")
    if any(x < 0 for x in value):
        raise InstanceFileError(f"{what}: entries must be nonnegative")
    return tuple(value)


def _parse_slot(raw, where: str, space: VarSpace, constraint: bool) -> Slot:
    if not isinstance(raw, dict):
        raise InstanceFileError(f"{where}: expected an object")
    big_n = len(space.dims)
    kind = None
    if constraint:
        kind = raw.get("kind")
        if kind not in (EQ, INEQ):
            raise InstanceFileError(f"{where}: kind must be '{EQ}' or '{INEQ}'")
    deg = None
    if "multidegree" in raw:
        deg = _int_vector(raw["multidegree"], f"{where}.multidegree", big_n)
    poly = None
    if "polynomial" in raw:
        if not isinstance(raw["polynomial"], str):
            raise InstanceFileError(f"{where}.polynomial: expected a string")
        try:
            poly = parse_poly(raw["polynomial"], space)
        except ValueError as exc:
            raise InstanceFileError(f"{where}.polynomial: {exc}") from None
        if poly.is_zero():
            raise InstanceFileError(f"{where}.polynomial: the zero polynomial has no multi-degree")
        actual = multidegree(poly)
        if deg is not None and deg != actual:
            raise InstanceFileError(f"{where}: declared multidegree {deg} but polynomial has {actual}")
        deg = actual
    if deg is None:
        raise InstanceFileError(f"{where}: needs 'multidegree' or 'polynomial'")
    check = None
    if "check_degree" in raw:
        check = _int_vector(raw["check_degree"], f"{where}.check_degree", big_n)
    return Slot(deg, poly, check, kind)


def parse_instance(doc) -> InstanceSpec:
    if not isinstance(doc, dict) or not isinstance(doc.get("players"), list) or not doc["players"]:
        raise InstanceFileError("document needs a nonempty 'players' list")
    players = doc["players"]
    dims = []
    for k, p in enumerate(players, 1):
        n = p.get("dim") if isinstance(p, dict) else None
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise InstanceFileError(f"players[{k}].dim: expected a positive integer")
        dims.append(n)
    space = VarSpace(tuple(dims))
    slots = []
    for k, p in enumerate(players, 1):
        cons = p.get("constraints", [])
        if not isinstance(cons, list):
            raise InstanceFileError(f"players[{k}].constraints: expected a list")
        row = [_parse_slot(p.get("objective"), f"players[{k}].objective", space, False)]
        row += [_parse_slot(c, f"players[{k}].constraints[{j}]", space, True) for j, c in enumerate(cons, 1)]
        slots.append(tuple(row))
    spec = InstanceSpec(tuple(dims), tuple(slots), doc.get("name"), doc.get("expected") or {})
    try:
        spec.shape
    except ValueError as exc:
        raise InstanceFileError(str(exc)) from None
    return spec


def loads(text: str) -> InstanceSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFileError(f"invalid JSON: {exc}") from None
    return parse_instance(doc)


def bundled_names() -> list[str]:
    data = resources.files("gnepdeg") / "data"
    return sorted(p.name[:-5] for p in data.iterdir() if p.name.endswith(".json"))


def load_bundled(name: str) -> InstanceSpec:
    if name not in bundled_names():
        raise InstanceFileError(f"no bundled example named {name!r}")
    return loads((resources.files("gnepdeg") / "data" / f"{name}.json").read_text(encoding="utf-8"))


def load(source: str) -> InstanceSpec:
    """Load from a file path, falling back to a bundled example name."""
    path = Path(source)
    if path.is_file():
        return loads(path.read_text(encoding="utf-8"))
    if source in bundled_names():
        return load_bundled(source)
    raise InstanceFileError(f"{source}: no such file or bundled example")


def generate(spec: InstanceSpec, seed: int, coeff_bound: int = 9) -> InstanceSpec:
    """Replace every slot's polynomial by a seeded generic one of the same multi-degree."""
    slots = []
    stream = 0
    for player in spec.slots:
        row = []
        for s in player:
            poly = random_generic(spec.dims, s.degree, seed, coeff_bound, stream=stream)
            stream += 1
            row.append(Slot(s.degree, poly, None, s.kind))
        slots.append(tuple(row))
    return InstanceSpec(spec.dims, tuple(slots), spec.name)
