"""Curvature pipeline against finite-difference and sympy oracles."""

import itertools
import random

import numpy as np
import pytest
import sympy as sp

import curvkit.exprcore as ec
from curvkit.catalog import builtin
from curvkit.curvature import build_bundle, covariant_derivative, stress_energy
from curvkit.tensor import invert_metric

N = 4


@pytest.fixture(scope="module")
def bardeen():
    spec = builtin("bardeen")
    return spec, build_bundle(invert_metric(spec.g()), spec.coords)


@pytest.fixture(scope="module")
def schw():
    spec = builtin("schwarzschild")
    return spec, build_bundle(invert_metric(spec.g()), spec.coords)


def sample_points(spec, count, seed=17):
    rng = random.Random(seed)
    pts = []
    while len(pts) < count:
        values = dict(spec.defaults)
        for c in spec.coords:
            lo, hi = spec.coordinate_range(c)
            values[c] = rng.uniform(lo, hi)
        pts.append(values)
    return pts


def eval_obj(arr, values):
    memo = {}
    out = np.empty(arr.shape)
    flat_in, flat_out = arr.reshape(-1), out.reshape(-1)
    for i in range(flat_in.size):
        flat_out[i] = ec.eval_float(flat_in[i], values, memo)
    return out


def gmat(spec, values):
    return eval_obj(spec.components, values)


# ---------------------------------------------------------------------------
# finite-difference oracles

def test_christoffel_matches_finite_differences(bardeen):
    spec, bundle = bardeen
    for values in sample_points(spec, 10):
        dg = np.empty((N, N, N))
        for c, name in enumerate(spec.coords):
            up = dict(values)
            dn = dict(values)
            up[name] = values[name] + 1e-5
            dn[name] = values[name] - 1e-5
            dg[..., c] = (gmat(spec, up) - gmat(spec, dn)) / 2e-5
        ginv = np.linalg.inv(gmat(spec, values))
        want = 0.5 * (np.einsum("hk,jki->hij", ginv, dg)
                      + np.einsum("hk,ikj->hij", ginv, dg)
                      - np.einsum("hk,ijk->hij", ginv, dg))
        got = eval_obj(bundle.gamma, values)
        assert np.abs(got - want).max() <= 1e-6 * (1 + np.abs(want).max())


def test_riemann_matches_finite_differences(bardeen):
    # outer derivative of the Christoffel field taken by central differences
    spec, bundle = bardeen
    for values in sample_points(spec, 10):
        gam = eval_obj(bundle.gamma, values)
        dgam = np.empty((N, N, N, N))
        for c, name in enumerate(spec.coords):
            up = dict(values)
            dn = dict(values)
            up[name] = values[name] + 1e-5
            dn[name] = values[name] - 1e-5
            dgam[..., c] = (eval_obj(bundle.gamma, up)
                            - eval_obj(bundle.gamma, dn)) / 2e-5
        rup = (np.einsum("hikj->hijk", dgam) - dgam
               + np.einsum("hjl,lik->hijk", gam, gam)
               - np.einsum("hkl,lij->hijk", gam, gam))
        want = np.einsum("hl,lijk->hijk", gmat(spec, values), rup)
        got = eval_obj(bundle.R.data, values)
        assert np.abs(got - want).max() <= 1e-6 * (1 + np.abs(want).max())


def test_riemann_and_ricci_match_sympy(bardeen):
    spec, bundle = bardeen
    t, r, th, ph = sp.symbols("t r theta phi")
    M, e = sp.Rational(1), sp.Rational(1, 2)
    f = 1 - 2 * M * r**2 / (e**2 + r**2) ** sp.Rational(3, 2)
    g = sp.diag(-f, 1 / f, r**2, r**2 * sp.sin(th) ** 2)
    ginv = g.inv()
    x = [t, r, th, ph]
    gam = [[[sum(ginv[h, k] * (sp.diff(g[j, k], x[i])
                               + sp.diff(g[i, k], x[j])
                               - sp.diff(g[i, j], x[k])) for k in range(N)) / 2
             for j in range(N)] for i in range(N)] for h in range(N)]
    rlow = sp.MutableDenseNDimArray.zeros(N, N, N, N)
    for h, i, j, k in itertools.product(range(N), repeat=4):
        expr = (sp.diff(gam[h][i][k], x[j]) - sp.diff(gam[h][i][j], x[k])
                + sum(gam[h][j][l] * gam[l][i][k]
                      - gam[h][k][l] * gam[l][i][j] for l in range(N)))
        rlow[h, i, j, k] = expr
    low = sp.MutableDenseNDimArray.zeros(N, N, N, N)
    for h, i, j, k in itertools.product(range(N), repeat=4):
        low[h, i, j, k] = sum(g[h, l] * rlow[l, i, j, k] for l in range(N))
    ric = sp.Matrix(N, N, lambda i, j: sum(
        ginv[h, k] * low[h, i, j, k] for h in range(N) for k in range(N)))
    kap = sum(ginv[i, j] * ric[i, j] for i in range(N) for j in range(N))
    fl = sp.lambdify((r, th), (low.tolist(), ric.tolist(), kap), "numpy")
    for values in sample_points(spec, 3, seed=23):
        low_n, ric_n, kap_n = fl(values["r"], values["theta"])
        low_n = np.array(low_n, dtype=float)
        ric_n = np.array(ric_n, dtype=float)
        got_R = eval_obj(bundle.R.data, values)
        got_S = eval_obj(bundle.S.data, values)
        got_k = ec.eval_float(bundle.kappa, values, {})
        assert np.abs(got_R - low_n).max() <= 1e-9 * (1 + np.abs(low_n).max())
        assert np.abs(got_S - ric_n).max() <= 1e-9 * (1 + np.abs(ric_n).max())
        assert abs(got_k - float(kap_n)) <= 1e-9 * (1 + abs(float(kap_n)))


# ---------------------------------------------------------------------------
# structural identities

def test_riemann_symmetries_and_first_bianchi(bardeen):
    spec, bundle = bardeen
    for values in sample_points(spec, 4, seed=5):
        R = eval_obj(bundle.R.data, values)
        scale = 1 + np.abs(R).max()
        assert np.abs(R + np.transpose(R, (1, 0, 2, 3))).max() < 1e-10 * scale
        assert np.abs(R + np.transpose(R, (0, 1, 3, 2))).max() < 1e-10 * scale
        assert np.abs(R - np.transpose(R, (2, 3, 0, 1))).max() < 1e-10 * scale
        cyc = R + np.transpose(R, (0, 2, 3, 1)) + np.transpose(R, (0, 3, 1, 2))
        assert np.abs(cyc).max() < 1e-10 * scale


def test_second_bianchi(bardeen):
    spec, bundle = bardeen
    for values in sample_points(spec, 4, seed=6):
        nab = eval_obj(bundle.nabla_R.data, values)
        cyc = (nab + np.transpose(nab, (0, 1, 3, 4, 2))
               + np.transpose(nab, (0, 1, 4, 2, 3)))
        assert np.abs(cyc).max() < 1e-9 * (1 + np.abs(nab).max())


def test_metric_is_parallel(bardeen):
    spec, bundle = bardeen
    nabla_g = covariant_derivative(bundle.metric.g, bundle.gamma,
                                   bundle.coords)
    for values in sample_points(spec, 3, seed=7):
        arr = eval_obj(nabla_g.data, values)
        assert np.abs(arr).max() < 1e-10


def test_weyl_is_trace_free(bardeen):
    spec, bundle = bardeen
    for values in sample_points(spec, 4, seed=8):
        C = eval_obj(bundle.C.data, values)
        ginv = np.linalg.inv(gmat(spec, values))
        tr = np.einsum("hk,hijk->ij", ginv, C)
        assert np.abs(tr).max() < 1e-9 * (1 + np.abs(C).max())


def test_contracted_second_bianchi(bardeen):
    # div S = (1/2) d kappa
    spec, bundle = bardeen
    nabla_S = bundle.nabla_S
    dkappa = [ec.differentiate(bundle.kappa, c) for c in bundle.coords]
    for values in sample_points(spec, 3, seed=9):
        ginv = np.linalg.inv(gmat(spec, values))
        ns = eval_obj(nabla_S.data, values)
        div = np.einsum("jk,ijk->i", ginv, ns)
        grad = np.array([ec.eval_float(d, values, {}) for d in dkappa])
        assert np.abs(div - grad / 2).max() <= 1e-9 * (1 + np.abs(grad).max())


def test_stress_energy_definition(bardeen):
    spec, bundle = bardeen
    lam = ec.parse_expr("3/10", set())
    T = stress_energy(bundle.S, bundle.kappa, bundle.metric.g, lam)
    for values in sample_points(spec, 2, seed=10):
        got = eval_obj(T.data, values)
        S = eval_obj(bundle.S.data, values)
        g = gmat(spec, values)
        k = ec.eval_float(bundle.kappa, values, {})
        want = S + (0.3 - k / 2) * g
        assert np.abs(got - want).max() < 1e-10 * (1 + np.abs(want).max())


# ---------------------------------------------------------------------------
# control cases and parameter limits

def test_vacuum_metric_is_ricci_flat_with_weyl_equal_riemann(schw):
    spec, bundle = schw
    for values in sample_points(spec, 4, seed=12):
        S = eval_obj(bundle.S.data, values)
        assert np.abs(S).max() < 1e-10
        C = eval_obj(bundle.C.data, values)
        R = eval_obj(bundle.R.data, values)
        assert np.abs(C - R).max() < 1e-10 * (1 + np.abs(R).max())


def test_charge_to_zero_limit_is_quadratic(schw):
    # the regular metric tends to the vacuum one with error O(e^2)
    spec_s, bundle_s = schw
    spec_b = builtin("bardeen")
    bundle_b = build_bundle(invert_metric(spec_b.g()), spec_b.coords)
    values = {"t": 0.0, "r": 2.5, "theta": 1.1, "phi": 0.4, "M": 1.0}
    R_s = eval_obj(bundle_s.R.data, values)
    errs = []
    for eps in (1e-2, 1e-3):
        vb = dict(values)
        vb["e"] = eps
        R_b = eval_obj(bundle_b.R.data, vb)
        errs.append(np.abs(R_b - R_s).max())
    assert errs[0] < 1e-2
    # quadratic decay: shrinking e by 10 shrinks the error by about 100
    assert errs[1] < errs[0] / 50
