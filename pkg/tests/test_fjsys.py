from itertools import permutations
from math import comb, prod

import pytest
from hypothesis import given, settings, strategies as st

from gnepdeg.degrees import GnepShape, PreconditionError, lambda_active_sets
from gnepdeg.fjsys import (
    FritzJohnSystem,
    GnepInstance,
    build,
    determinant,
    export_cas,
    export_json,
    import_json,
    jacobian,
)
from gnepdeg.multideg import hat_degree, vec_add, vec_leq
from gnepdeg.poly import VarSpace, check_degrees, format_poly, multidegree, parse_poly, random_generic

BALL = GnepInstance.from_polynomials(
    (3, 3),
    ["x1_1^2*x2_1 + x1_2*x2_2 + x1_3", "x2_1^2*x1_1 + x2_2*x1_3 - x2_3"],
    [[("ineq", "x1_1^2 + x1_2^2 + x1_3^2 - 1")], [("ineq", "x2_1^2 + x2_2^2 + x2_3^2 - 1")]],
)


def generic_instance(shape: GnepShape, seed: int) -> GnepInstance:
    nu = shape.nu
    objs, cons = [], []
    stream = 0
    for i, p in enumerate(shape.players, 1):
        objs.append(random_generic(nu, p.objective, seed, stream=stream))
        stream += 1
        row = []
        for c in p.constraints:
            row.append(random_generic(nu, c.degree, seed, stream=stream))
            stream += 1
        cons.append(row)
    return GnepInstance(shape, objs, cons)


def leibniz(matrix):
    n = len(matrix)
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(perm[a] > perm[b] for a in range(n) for b in range(a + 1, n))
        total += (-1) ** inversions * prod(matrix[r][perm[r]] for r in range(n))
    return total


def test_jacobian_columns():
    jac = jacobian(BALL, 1, (1,))
    assert len(jac) == 3 and all(len(row) == 2 for row in jac)
    assert [format_poly(row[1]) for row in jac] == ["2x1_1", "2x1_2", "2x1_3"]
    single = jacobian(BALL, 2, ())
    assert [format_poly(row[0]) for row in single] == ["2x1_1*x2_1", "x1_3", "-1"]
    with pytest.raises(ValueError):
        jacobian(BALL, 1, (2,))


def test_jacobian_entries_bounded_by_check_degrees():
    f = BALL.objectives[0]
    g = BALL.constraints[0][0]
    bounds = check_degrees(f, [g], 1)
    for row in jacobian(BALL, 1, (1,)):
        for entry, bound in zip(row, bounds):
            assert entry.is_zero() or vec_leq(multidegree(entry), bound)


def test_ball_counts():
    minors = build(BALL, ((1,), (1,)), "minors")
    assert (len(minors.variables), len(minors.generators)) == (6, 8)
    lagrange = build(BALL, ((1,), (1,)), "lagrange")
    assert (len(lagrange.variables), len(lagrange.generators)) == (8, 8)
    assert lagrange.variables[6:] == ("l1_1", "l2_1")
    normalised = build(BALL, ((1,), (1,)), "lagrange", normalization_seed=5)
    assert (len(normalised.variables), len(normalised.generators)) == (10, 10)
    assert normalised == build(BALL, ((1,), (1,)), "lagrange", normalization_seed=5)


def test_empty_active_gives_gradient_equations():
    want = [g for i in (1, 2) for g in (row[0] for row in jacobian(BALL, i, ()))]
    assert list(build(BALL, ((), ()), "minors").generators) == want
    lag = build(BALL, ((), ()), "lagrange")
    assert lag.variables == VarSpace((3, 3)).names
    assert list(lag.generators) == want


def test_minors_are_determinants():
    system = build(BALL, ((1,), ()), "minors")
    jac = jacobian(BALL, 1, (1,))
    point = (2, -1, 3, 1, 4, -2)
    minors = system.generators[1:4]
    for (r0, r1), minor in zip([(0, 1), (0, 2), (1, 2)], minors):
        values = [[entry(point) for entry in jac[r]] for r in (r0, r1)]
        assert minor(point) == leibniz(values)


def test_determinant_matches_leibniz():
    space = VarSpace((3,))
    entries = [[random_generic((3,), (1,), seed=r * 3 + c) for c in range(3)] for r in range(3)]
    det = determinant(entries)
    point = (1, -2, 3)
    assert det(point) == leibniz([[e(point) for e in row] for row in entries])
    with pytest.raises(ValueError):
        determinant([[parse_poly("1", space)], [parse_poly("1", space)]])


def test_build_rejects_bad_active_tuples():
    with pytest.raises(ValueError):
        build(BALL, ((2,), ()))
    with pytest.raises(ValueError):
        build(BALL, ((1,),))
    with pytest.raises(ValueError):
        build(BALL, ((), ()), formulation="hybrid")
    shape = GnepShape.build((1,), [(2,)], [[("ineq", (1,)), ("ineq", (1,))]])
    inst = generic_instance(shape, 0)
    with pytest.raises(PreconditionError):
        build(inst, ((1, 2),), "minors")
    assert len(build(inst, ((1, 2),), "lagrange").generators) == 3


def test_instance_checks_declared_degrees():
    shape = GnepShape.build((1,), [(2,)])
    with pytest.raises(ValueError):
        GnepInstance(shape, [parse_poly("x1_1^3", (1,))], [[]])
    with pytest.raises(ValueError):
        GnepInstance(shape, [parse_poly("x1_1^2", (2,))], [[]])


# counting contracts and degree bounds on random shapes


@st.composite
def shapes(draw):
    big_n = draw(st.integers(1, 2))
    dims = [draw(st.integers(1, 4)) for _ in range(big_n)]
    deg = st.lists(st.integers(0, 2), min_size=big_n, max_size=big_n)
    objectives = [tuple(draw(deg)) for _ in range(big_n)]
    constraints = []
    for n in dims:
        k = draw(st.integers(0, min(n, 2)))
        constraints.append([(draw(st.sampled_from(["eq", "ineq"])), tuple(draw(deg.filter(any)))) for _ in range(k)])
    return GnepShape.build(dims, objectives, constraints)


@settings(max_examples=25, deadline=None)
@given(shapes(), st.integers(0, 1000))
def test_counting_contracts(shape, seed):
    inst = generic_instance(shape, seed)
    n = sum(shape.nu)
    for active in lambda_active_sets(shape):
        m = [len(e) for e in active]
        minors = build(inst, active, "minors")
        assert len(minors.variables) == n
        assert len(minors.generators) == sum(m) + sum(comb(ni, mi + 1) for ni, mi in zip(shape.nu, m))
        lag = build(inst, active, "lagrange")
        assert len(lag.variables) == len(lag.generators) == n + sum(m)


@settings(max_examples=25, deadline=None)
@given(shapes(), st.integers(0, 1000))
def test_minor_degrees_bounded(shape, seed):
    inst = generic_instance(shape, seed)
    big_n = shape.n_players
    for active in lambda_active_sets(shape):
        system = build(inst, active, "minors")
        slots = [(i, j) for i, e in enumerate(active, 1) for j in e]
        for (i, j), g in zip(slots, system.generators):
            assert multidegree(g) == shape.degree(i, j)
        k = len(slots)
        pos = k
        for i, e in enumerate(active, 1):
            bound = (0,) * big_n
            for j in (0, *e):
                bound = vec_add(bound, hat_degree(shape.degree(i, j), i))
            count = comb(shape.nu[i - 1], len(e) + 1)
            for g in system.generators[pos:pos + count]:
                assert g.is_zero() or vec_leq(multidegree(g), bound)
            pos += count


# export


def test_cas_export_layout():
    text = export_cas(build(BALL, ((1,), ()), "minors"))
    lines = text.split("\n")
    assert lines[1] == "R = QQ[x1_1, x1_2, x1_3, x2_1, x2_2, x2_3];"
    assert lines[2].startswith("I = ideal(x1_1^2 + x1_2^2 + x1_3^2 - 1, ")
    assert lines[3:] == ["dim I", "degree I", ""]
    assert "\r" not in text and text.isascii()
    assert "2*x1_1" in text


def test_cas_export_is_deterministic():
    a = export_cas(build(BALL, ((1,), (1,)), "lagrange"))
    b = export_cas(build(BALL, ((1,), (1,)), "lagrange"))
    assert a == b
    assert "R = QQ[x1_1, x1_2, x1_3, x2_1, x2_2, x2_3, l1_1, l2_1];" in a


def test_cas_export_of_empty_system():
    empty = FritzJohnSystem(("x1_1",), (), "minors", ((),))
    assert "I = ideal(0_R);" in export_cas(empty)


@pytest.mark.parametrize("formulation,seed", [("minors", None), ("lagrange", None), ("lagrange", 3)])
def test_json_round_trip(formulation, seed):
    for active in lambda_active_sets(BALL.shape):
        system = build(BALL, active, formulation, seed)
        text = export_json(system, BALL.shape.nu)
        assert import_json(text) == system
        assert export_json(import_json(text), BALL.shape.nu) == text


def test_json_empty_and_bad_documents():
    empty = FritzJohnSystem(("x1_1",), (), "minors", ((),))
    text = export_json(empty, (1,))
    assert '"generators": []' in text
    assert import_json(text) == empty
    with pytest.raises(ValueError):
        import_json('{"format": "something else"}')
