import math

import pytest

from lambent.dynamics import (
    NonFiniteState,
    diagonal_confinement,
    find_diagonal_zeros,
    integrate_orbit,
    orbits_svg,
    rk4_steps,
)
from lambent.fields import dihedral_symmetric_field, dihedral_order0_field
from lambent.groups import dihedral3
from lambent.trig import SymFun, VecField


@pytest.fixture(scope="module")
def V():
    return dihedral_order0_field()


@pytest.fixture(scope="module")
def zeros(V):
    return find_diagonal_zeros(V, (0.0, 20.0))


def test_rk4_on_exponential():
    out = rk4_steps(lambda u: (u,), (1.0,), 0.01, 100)
    assert out[-1][0] == pytest.approx(math.e, rel=1e-9)


def test_rk4_is_fourth_order():
    f = lambda u, v: (v, -u)
    err = []
    for dt in (0.1, 0.05):
        n = round(2.0 / dt)
        u, v = rk4_steps(f, (1.0, 0.0), dt, n)[-1]
        err.append(abs(u - math.cos(2.0)))
    assert math.log2(err[0] / err[1]) == pytest.approx(4, abs=0.2)


def test_step_halving_on_the_dihedral_field(V):
    ends = [integrate_orbit(V, (2.0, -1.0), (0, 5), dt).points[-1] for dt in (0.04, 0.02, 0.01)]
    d1 = math.dist(ends[0], ends[1])
    d2 = math.dist(ends[1], ends[2])
    assert math.log2(d1 / d2) == pytest.approx(4, abs=0.5)


def test_equilibria_are_fixed(V, zeros):
    for z in zeros:
        orb = integrate_orbit(V, (z.x, z.x), (0, 10), 0.05)
        assert max(abs(p[0] - z.x) + abs(p[1] - z.x) for p in orb.points) < 1e-10


def test_time_reversal(V):
    fwd = integrate_orbit(V, (3.0, 1.0), (0, 10), 0.01)
    back = integrate_orbit(lambda *p: tuple(-c for c in V.compiled()(*p)), fwd.points[-1], (0, 10), 0.01)
    assert math.dist(back.points[-1], (3.0, 1.0)) < 1e-9


def test_two_sided_orbit(V):
    orb = integrate_orbit(V, (1.0, 0.5), (-2, 3), 0.01, t_init=0.0)
    assert orb.times[0] == pytest.approx(-2) and orb.times[-1] == pytest.approx(3)
    i0 = orb.times.index(0.0)
    assert orb.points[i0] == (1.0, 0.5)
    assert len(orb) == 501


def test_symmetry_maps_orbits_to_orbits(V):
    # for g in D3, x(t) solves the flow iff g x(t) does
    x0 = (1.3, -0.4)
    base = integrate_orbit(V, x0, (0, 10), 0.01)
    for g in dihedral3():
        M = g.matrix.to_floats()
        gx0 = tuple(sum(M[i][j] * x0[j] for j in range(2)) for i in range(2))
        img = integrate_orbit(V, gx0, (0, 10), 0.01)
        for p, q in zip(base.points[::100], img.points[::100]):
            gp = tuple(sum(M[i][j] * p[j] for j in range(2)) for i in range(2))
            assert math.dist(gp, q) < 1e-6


def test_diagonal_zeros(V, zeros):
    xs = [z.x for z in zeros]
    assert xs[0] == 0.0
    assert xs[1] == pytest.approx(4.3377212, abs=1e-6)
    assert len(xs) == 5
    g = V[0].compiled()
    for z in zeros:
        assert abs(g(z.x, z.x)) <= 1e-12
        assert z.bracket[0] <= z.x <= z.bracket[1]


def test_zero_free_field():
    c = SymFun.const(1, 2, 3)
    assert find_diagonal_zeros(VecField([c, c]), (0, 10)) == []


def test_zero_search_argument_checks():
    with pytest.raises(ValueError):
        find_diagonal_zeros(dihedral_order0_field(), (3, 1))


def test_diagonal_confinement(V, zeros):
    c = diagonal_confinement(V, (1.0, 1.0), (0, 100), zeros=zeros)
    assert c.max_deviation <= 1e-9
    assert abs(c.limit_forward[0] - c.nearest_forward.x) < 1e-3
    assert c.nearest_forward.x == pytest.approx(4.3377212, abs=1e-6)
    # the origin is a degenerate equilibrium, so the backward approach is slow but monotone
    assert 0 < c.limit_backward[0] < 0.05
    with pytest.raises(ValueError):
        diagonal_confinement(V, (1.0, 2.0), (0, 1))


def test_diagonal_confinement_q_field():
    Q = dihedral_symmetric_field()
    c = diagonal_confinement(Q, (2.5, 2.5), (0, 50))
    assert c.max_deviation <= 1e-9


def test_non_finite_state_is_reported():
    with pytest.raises(NonFiniteState):
        integrate_orbit(lambda u: (u * u,), (1.0,), (0, 5), 0.1)


def test_bad_spans():
    f = lambda u: (u,)
    with pytest.raises(ValueError):
        integrate_orbit(f, (1.0,), (1, 0), 0.1)
    with pytest.raises(ValueError):
        integrate_orbit(f, (1.0,), (0, 1), 0.1, t_init=2)
    with pytest.raises(ValueError):
        integrate_orbit(f, (1.0,), (0, 1), 0.1, method="euler")


def test_csv_and_svg(V):
    orb = integrate_orbit(V, (6.0, 0.0), (0, 1), 0.1)
    text = orb.to_csv()
    lines = text.splitlines()
    assert lines[0] == "t,x,y"
    assert len(lines) == 12
    assert float(lines[1].split(",")[1]) == 6.0
    svg = orbits_svg([orb])
    assert svg.startswith("<svg") and svg.count("<polyline") == 1
