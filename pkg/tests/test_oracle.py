import math

import numpy as np
import pytest

from pdem_si import catalog, verification as verif
from pdem_si.core import (
    AmbiguityParams,
    DeformingFunction,
    Grid,
    Interval,
    NonPositiveError,
    SingularPotential,
)
from pdem_si.oracle import (
    TridiagonalOperator,
    discretize_deformed,
    discretize_vonroos,
    eigenpairs,
    equivalence_check,
    quadrature,
    sturm_count,
)

PRESETS = ("bdd", "bastard", "zk", "lk")


def test_quadrature_examples():
    g = Grid(Interval(0.0, math.pi), 1001)
    assert abs(quadrature(np.sin(g.nodes()), g) - 2.0) < 1e-10
    g = Grid(Interval(-math.pi / 2, math.pi / 2), 1001)
    assert abs(quadrature(np.cos(g.nodes()) ** 2, g) - math.pi / 2) < 1e-10
    g = Grid(Interval(0.0, 1.0), 101)
    assert quadrature(np.ones(101), g) == 1.0


def test_quadrature_even_fallback_warns():
    g = Grid(Interval(0.0, 1.0), 100)
    with pytest.warns(UserWarning, match="trapezoid"):
        val = quadrature(np.ones(100), g)
    assert abs(val - 1.0) < 1e-12


def test_two_by_two():
    grid = Grid(Interval(0.0, 3.0), 4)
    op = TridiagonalOperator(np.array([2.0, 2.0]), np.array([1.0]), grid)
    spec = eigenpairs(op, 2)
    assert np.allclose(spec.eigenvalues, [1.0, 3.0], atol=1e-12)


def test_toeplitz_closed_form():
    # second-difference matrix on (0, pi): lambda_k = (2 - 2 cos(k pi/1000)) / h^2
    N = 999
    grid = Grid(Interval(0.0, math.pi), N + 2)
    h = grid.spacing
    op = TridiagonalOperator(np.full(N, 2.0 / h**2), np.full(N - 1, -1.0 / h**2), grid)
    spec = eigenpairs(op, 5)
    for k in range(1, 6):
        exact = (2.0 - 2.0 * math.cos(k * math.pi / 1000.0)) / h**2
        assert abs(spec.eigenvalues[k - 1] - exact) < 1e-9 * exact
        assert abs(spec.eigenvalues[k - 1] - k**2) < 5.0 * k**4 * h**2  # O(h^2) vs k^2


def test_sturm_count_monotone():
    rng = np.random.RandomState(3)
    grid = Grid(Interval(0.0, 1.0), 52)
    op = TridiagonalOperator(rng.uniform(-2, 2, 50), rng.uniform(-1, 1, 49), grid)
    ts = np.linspace(-5, 5, 41)
    counts = [sturm_count(op, t) for t in ts]
    assert all(c2 >= c1 for c1, c2 in zip(counts, counts[1:]))
    assert counts[0] == 0 and counts[-1] == 50


def _box_operator(alpha, n_points):
    df = DeformingFunction("trig_sin2", {"alpha": alpha})
    grid = Grid(Interval(-math.pi / 2, math.pi / 2), n_points)
    return discretize_deformed(df, lambda x: np.zeros_like(np.asarray(x)), grid)


def test_grid_convergence_second_order():
    errs = []
    for n_points in (1001, 2001, 4001, 8001):
        spec = eigenpairs(_box_operator(0.5, n_points), 1)
        errs.append(abs(spec.eigenvalues[0] - 1.5))
    for e1, e2 in zip(errs, errs[1:]):
        assert 3.0 < e1 / e2 < 5.0  # halving h divides the error by ~4


def test_box_spectrum_against_closed_form():
    spec = eigenpairs(_box_operator(0.5, 4001), 6)
    for n in range(6):
        exact = 1.5 * (n + 1) ** 2
        assert abs(spec.eigenvalues[n] - exact) / exact < 1e-4


def test_undeformed_box_spectrum():
    # f == 1, V == 0 on (-pi/2, pi/2): plain infinite well, E_n = (n+1)^2
    df = DeformingFunction("trig_sin", {"alpha": 0.0})
    grid = Grid(Interval(-math.pi / 2, math.pi / 2), 2001)
    spec = eigenpairs(discretize_deformed(df, lambda x: np.zeros_like(np.asarray(x)), grid), 3)
    for n in range(3):
        exact = (n + 1) ** 2
        assert abs(spec.eigenvalues[n] - exact) / exact < 1e-4


def test_api_guards():
    op = _box_operator(0.5, 101)
    from pdem_si.core import ParameterError

    with pytest.raises(ParameterError):
        eigenpairs(op, 0)
    with pytest.raises(ParameterError):
        eigenpairs(op, op.n + 1)
    with pytest.raises(ParameterError):
        quadrature(np.ones(5), Grid(Interval(0.0, 1.0), 11))
    with pytest.raises(ParameterError):
        TridiagonalOperator(np.ones(5), np.ones(4), Grid(Interval(0.0, 1.0), 11))


def test_apply_includes_boundary_couplings():
    # constant-mass second difference of a linear function vanishes identically,
    # which only holds if the stencil keeps its couplings to the boundary nodes
    df = DeformingFunction("trig_sin", {"alpha": 0.0})
    grid = Grid(Interval(0.0, 1.0), 101)
    op = discretize_deformed(df, lambda x: np.zeros_like(np.asarray(x)), grid)
    psi = 2.0 + 3.0 * grid.nodes()
    assert np.max(np.abs(op.apply(psi))) < 1e-9


def test_harmonic_oscillator_constant_mass():
    # f == 1, V = x^2 (omega = 2 in the quarter-square convention): E_n = 2(n + 1/2)
    df = DeformingFunction("trig_sin", {"alpha": 0.0})
    grid = Grid(Interval(-12.0, 12.0), 4001)
    op = discretize_deformed(df, lambda x: np.asarray(x) ** 2, grid)
    spec = eigenpairs(op, 3)
    for n in range(3):
        exact = 2.0 * (n + 0.5)
        assert abs(spec.eigenvalues[n] - exact) / exact < 1e-4


def test_eigenvectors_match_closed_ground_state():
    op = _box_operator(0.5, 4001)
    spec = eigenpairs(op, 1, want_vectors=True)
    x = op.grid.nodes()
    psi = np.cos(x) / (1.0 + 0.5 * np.sin(x) ** 2)
    psi /= math.sqrt(quadrature(psi**2, op.grid))
    vec = spec.eigenvectors[0]
    if vec[len(vec) // 2] < 0:
        vec = -vec
    assert np.max(np.abs(vec - psi)) < 1e-4


def test_eigenvector_orthonormality_under_quadrature():
    op = _box_operator(0.5, 4001)
    spec = eigenpairs(op, 4, want_vectors=True)
    G = np.empty((4, 4))
    for i in range(4):
        for j in range(4):
            G[i, j] = quadrature(spec.eigenvectors[i] * spec.eigenvectors[j], op.grid)
    assert np.max(np.abs(G - np.eye(4))) < 1e-8


def test_vonroos_constant_mass_matches_deformed():
    grid = Grid(Interval(0.0, 2.0), 101)
    v = lambda x: np.sin(np.asarray(x))
    flat = DeformingFunction("trig_sin", {"alpha": 0.0})
    a = discretize_deformed(flat, v, grid)
    b = discretize_vonroos(lambda x: np.ones_like(np.asarray(x)), (0.0, -1.0, 0.0), v, grid)
    assert np.array_equal(a.diag, b.diag) and np.array_equal(a.off, b.off)


def test_guards():
    grid = Grid(Interval(-math.pi / 2, math.pi / 2), 101)
    bad = DeformingFunction("trig_sin2", {"alpha": -1.5})
    with pytest.raises(NonPositiveError):
        discretize_deformed(bad, lambda x: np.zeros_like(np.asarray(x)), grid)
    flat = DeformingFunction("trig_sin", {"alpha": 0.0})
    with pytest.raises(SingularPotential):
        discretize_deformed(flat, lambda x: np.full_like(np.asarray(x), 1e15), grid)


def test_equivalence_check_constant_mass_exact():
    flat = DeformingFunction("trig_sin", {"alpha": 0.0})
    grid = Grid(Interval(-1.0, 1.0), 801)
    dev = equivalence_check(flat, AmbiguityParams.preset("zk"), lambda x: np.cos(np.asarray(x)), grid)
    assert dev < 1e-12


@pytest.mark.parametrize("preset", PRESETS)
def test_equivalence_check_test_family(preset):
    df = DeformingFunction("trig_sin", {"alpha": 0.3})
    amb = AmbiguityParams.preset(preset)
    ctx_v = lambda x: np.zeros_like(np.asarray(x, dtype=float))
    grid = Grid(Interval(-math.pi / 2, math.pi / 2), 4001)
    assert equivalence_check(df, amb, ctx_v, grid) < 1e-6


def _equivalence_cases():
    for name in sorted(catalog.ENTRIES):
        entry = catalog.ENTRIES[name]
        yield name, dict(entry.default_params)
    yield "eckart", {"A": 1.5, "B": 2.5, "alpha": -2.0}


@pytest.mark.parametrize("name,params", list(_equivalence_cases()), ids=lambda v: str(v))
def test_spectral_equivalence_all_presets(name, params):
    # ordered form on the recovered V vs deformed form on V_eff, same grid
    entry = catalog.ENTRIES[name]
    for preset in PRESETS:
        res = verif.spectral_equivalence(entry, params, preset)
        assert res is not None, (name, preset)
        assert res["max_rel_dev"] < 1e-6, (name, preset, res)
