"""Internal consistency checks behind `gnepdeg selftest`."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from . import reference
from .degrees import gnep_degree_total, lambda_active_sets, omega_labels, theta_labels, GnepShape
from .genfun import calA, calB, calS, calT
from .instancefile import InstanceSpec, bundled_names, load_bundled
from .multideg import unit, vec_sub


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _boxes(delta) -> Iterator[tuple[int, ...]]:
    if not delta:
        yield ()
        return
    for a0 in range(delta[0] + 1):
        for rest in _boxes(delta[1:]):
            yield (a0,) + rest


def alternating_sum(delta, zs) -> int:
    """sum over a <= delta of (-1)^|a| calB(a) calS(delta - a); zero unless delta = 0."""
    return sum((-1) ** sum(a) * calB(a, zs) * calS(vec_sub(delta, a), zs) for a in _boxes(tuple(delta)))


def calT_as_calS(i: int, delta, z0, zs) -> int:
    big_n = len(delta)
    return calS(delta, [tuple(z0)] + [tuple(z * x for x in unit(big_n, i)) for z in zs])


def random_generating_case(rng: random.Random, max_weight: int = 6, max_blocks: int = 3, max_entry: int = 4):
    big_n = rng.randint(1, max_blocks)
    weight = rng.randint(0, max_weight)
    delta = [0] * big_n
    for _ in range(weight):
        delta[rng.randrange(big_n)] += 1
    k = rng.randint(0, 4)
    zs = [tuple(rng.randint(0, max_entry) for _ in range(big_n)) for _ in range(k)]
    return tuple(delta), zs


def genfun_checks(cases: int, seed: int = 0) -> CheckResult:
    rng = random.Random(seed)
    for _ in range(cases):
        delta, zs = random_generating_case(rng)
        a_zs = zs + [tuple(rng.randint(0, 4) for _ in delta) for _ in range(sum(delta) - len(zs))]
        pairs = [
            ("calA", calA(delta, a_zs), reference.calA_matrix_sum(delta, a_zs)),
            ("calB", calB(delta, zs), reference.calB_subset_sum(delta, zs)),
            ("calS", calS(delta, zs), reference.calS_matrix_sum(delta, zs)),
            ("alternating", alternating_sum(delta, zs), int(not any(delta))),
        ]
        i = rng.randint(1, len(delta))
        z0 = tuple(rng.randint(0, 4) for _ in delta)
        scalars = [rng.randint(0, 4) for _ in range(rng.randint(0, 3))]
        pairs.append(("calT", calT(i, delta, z0, scalars), calT_as_calS(i, delta, z0, scalars)))
        for what, got, want in pairs:
            if got != want:
                return CheckResult("generating functions", False, f"{what} at delta={delta}, zs={zs}: {got} != {want}")
    return CheckResult("generating functions", True, f"{cases} random cases")


def random_small_nu(rng: random.Random, max_total: int = 8, max_blocks: int = 3) -> tuple[int, ...]:
    while True:
        nu = tuple(rng.randint(1, 4) for _ in range(rng.randint(1, max_blocks)))
        if sum(nu) <= max_total:
            return nu


def label_checks(cases: int, seed: int = 0, max_total: int = 6) -> CheckResult:
    rng = random.Random(seed)
    for _ in range(cases):
        nu = random_small_nu(rng, max_total)
        m = tuple(rng.randint(0, n) for n in nu)
        if omega_labels(nu, m) != reference.omega_filter(nu, m):
            return CheckResult("label sets", False, f"Omega mismatch at nu={nu}, m={m}")
        if theta_labels(nu, m) != reference.theta_filter(nu, m):
            return CheckResult("label sets", False, f"Theta mismatch at nu={nu}, m={m}")
        kinds = [[rng.choice(("eq", "ineq")) for _ in range(rng.randint(0, n))] for n in nu]
        shape = GnepShape.build(nu, [(1,) * len(nu)] * len(nu), [[(k, (1,) * len(nu)) for k in ks] for ks in kinds])
        if lambda_active_sets(shape) != reference.lambda_filter(nu, kinds):
            return CheckResult("label sets", False, f"Lambda mismatch at nu={nu}, kinds={kinds}")
    return CheckResult("label sets", True, f"{cases} random shapes")


def fixture_values(spec: InstanceSpec) -> dict:
    """Compute the quantities named in the fixture's "expected" block."""
    exp = spec.expected
    shape = spec.shape
    out = {}
    if exp.get("command") == "bound":
        total, breakdown = gnep_degree_total(shape, spec.check_overrides())
    else:
        total, breakdown = gnep_degree_total(shape)
    out["total"] = total
    if "breakdown" in exp:
        out["breakdown"] = list(breakdown.values())
    if "generic_total" in exp:
        out["generic_total"] = gnep_degree_total(shape)[0]
    return out


def check_fixture(name: str, spec: InstanceSpec) -> CheckResult:
    exp = spec.expected
    if "total" not in exp:
        return CheckResult(f"fixture {name}", False, "no expected total")
    got = fixture_values(spec)
    wrong = [f"{k}: got {got[k]}, expected {exp[k]}" for k in got if got[k] != exp[k]]
    if wrong:
        return CheckResult(f"fixture {name}", False, "; ".join(wrong))
    return CheckResult(f"fixture {name}", True, f"total {got['total']}")


def run(depth: int = 1, extra: dict[str, InstanceSpec] | None = None) -> list[CheckResult]:
    """Depth 0 checks fixtures only; each further level widens the random suites."""
    results = [check_fixture(n, load_bundled(n)) for n in bundled_names()]
    for n, spec in (extra or {}).items():
        results.append(check_fixture(n, spec))
    if depth >= 1:
        results.append(genfun_checks(100 * depth, seed=depth))
        results.append(label_checks(20 * depth, seed=depth, max_total=min(4 + 2 * depth, 8)))
    return results
