"""Curvature pipeline: Christoffel symbols, Riemann tensor, the Ricci
family, the derived curvatures (conformal C, projective P, concircular W,
conharmonic K), covariant derivatives, and the energy-momentum tensor.

Sign conventions: R^h_ijk = d_j Gamma^h_ik - d_k Gamma^h_ij + Gamma Gamma
terms, lowered on the first slot, and S_ij = g^{hk} R_{hijk}.  With these
choices a static spherically symmetric metric with signature (-,+,+,+)
reproduces the component tables used by the regression suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence

import numpy as np

from . import exprcore as ec
from . import tensor as tn
from .exprcore import Expr
from .tensor import ComponentTensor, MetricData


def christoffel(metric: MetricData, coords: Sequence[str]) -> np.ndarray:
    """Second-kind Christoffel symbols Gamma^h_ij, symmetric in (i, j)."""
    n = metric.dim
    g = metric.g.data
    ginv = metric.g_inv
    dg = np.empty((n, n, n), dtype=object)  # dg[i,j,k] = d_k g_ij
    for i, j in itertools.product(range(n), repeat=2):
        for k in range(n):
            dg[i, j, k] = ec.differentiate(g[i, j], coords[k])
    gamma = np.empty((n, n, n), dtype=object)
    half = ec.const(Fraction(1, 2))
    for h in range(n):
        for i in range(n):
            for j in range(i, n):
                acc = ec.ZERO
                for k in range(n):
                    acc = acc + ginv[h, k] * (dg[j, k, i] + dg[i, k, j]
                                              - dg[i, j, k])
                gamma[h, i, j] = half * acc
                gamma[h, j, i] = gamma[h, i, j]
    return gamma


def riemann(gamma: np.ndarray, metric: MetricData,
            coords: Sequence[str]) -> ComponentTensor:
    """Lowered Riemann tensor R_{hijk} with full Riemann symmetries."""
    n = metric.dim
    rup = np.empty((n, n, n, n), dtype=object)
    dgamma = np.empty((n, n, n, n), dtype=object)  # d_k Gamma^h_ij
    for h, i, j, k in itertools.product(range(n), repeat=4):
        dgamma[h, i, j, k] = ec.differentiate(gamma[h, i, j], coords[k])
    for h, i, j, k in itertools.product(range(n), repeat=4):
        acc = dgamma[h, i, k, j] - dgamma[h, i, j, k]
        for l in range(n):
            acc = acc + gamma[h, j, l] * gamma[l, i, k] \
                      - gamma[h, k, l] * gamma[l, i, j]
        rup[h, i, j, k] = acc
    g = metric.g.data
    low = np.empty((n, n, n, n), dtype=object)
    for h, i, j, k in itertools.product(range(n), repeat=4):
        acc = ec.ZERO
        for l in range(n):
            acc = acc + g[h, l] * rup[l, i, j, k]
        low[h, i, j, k] = acc
    return ComponentTensor(low, 4, n, tn.SYMMETRY_RIEMANN)


def ricci_family(R: ComponentTensor, metric: MetricData):
    """Ricci tensor S, scalar curvature, Ricci operator J, and S^2."""
    n = metric.dim
    ginv = metric.g_inv
    S = np.empty((n, n), dtype=object)
    for i, j in itertools.product(range(n), repeat=2):
        acc = ec.ZERO
        for h, k in itertools.product(range(n), repeat=2):
            if ginv[h, k].is_zero():
                continue
            acc = acc + ginv[h, k] * R.data[h, i, j, k]
        S[i, j] = acc
    kappa = ec.ZERO
    for i, j in itertools.product(range(n), repeat=2):
        if not ginv[i, j].is_zero():
            kappa = kappa + ginv[i, j] * S[i, j]
    J = np.empty((n, n), dtype=object)  # J^i_j
    for i, j in itertools.product(range(n), repeat=2):
        acc = ec.ZERO
        for k in range(n):
            acc = acc + ginv[i, k] * S[k, j]
        J[i, j] = acc
    S2 = np.empty((n, n), dtype=object)
    for i, j in itertools.product(range(n), repeat=2):
        acc = ec.ZERO
        for k in range(n):
            acc = acc + S[i, k] * J[k, j]
        S2[i, j] = acc
    return (ComponentTensor(S, 2, n, tn.SYMMETRY_SYMMETRIC), kappa, J,
            ComponentTensor(S2, 2, n, tn.SYMMETRY_SYMMETRIC))


def derived_curvatures(R: ComponentTensor, S: ComponentTensor, kappa: Expr,
                       metric: MetricData):
    """Conformal C, projective P, concircular W, conharmonic K."""
    n = metric.dim
    if n < 3:
        raise tn.TensorError("derived curvatures need dimension >= 3")
    g = metric.g
    gg = tn.kulkarni_nomizu(g, g)
    gS = tn.kulkarni_nomizu(g, S)
    c_gg = ec.div(kappa, 2 * (n - 1) * (n - 2))
    c_gS = ec.const(Fraction(-1, n - 2))
    C = np.empty((n,) * 4, dtype=object)
    K = np.empty((n,) * 4, dtype=object)
    W = np.empty((n,) * 4, dtype=object)
    P = np.empty((n,) * 4, dtype=object)
    c_w = ec.div(ec.neg(kappa), 2 * n * (n - 1))
    third = ec.const(Fraction(1, n - 1))
    for idx in itertools.product(range(n), repeat=4):
        h, i, j, k = idx
        K[idx] = R.data[idx] + c_gS * gS.data[idx]
        C[idx] = K[idx] + c_gg * gg.data[idx]
        W[idx] = R.data[idx] + c_w * gg.data[idx]
        P[idx] = R.data[idx] + third * (S.data[h, j] * g.data[i, k]
                                        - S.data[i, j] * g.data[h, k])
    return (ComponentTensor(C, 4, n, tn.SYMMETRY_RIEMANN),
            ComponentTensor(P, 4, n),
            ComponentTensor(W, 4, n, tn.SYMMETRY_RIEMANN),
            ComponentTensor(K, 4, n, tn.SYMMETRY_RIEMANN))


def covariant_derivative(T: ComponentTensor, gamma: np.ndarray,
                         coords: Sequence[str]) -> ComponentTensor:
    """(0,k+1) tensor with the derivative index appended last:
    out[a..., f] = d_f T_{a...} - sum over slots of Gamma contraction."""
    n = T.dim
    k = T.valence
    out = np.empty((n,) * (k + 1), dtype=object)
    for idx in itertools.product(range(n), repeat=k):
        for f in range(n):
            acc = ec.differentiate(T.data[idx], coords[f])
            for s in range(k):
                for u in range(n):
                    gterm = gamma[u, f, idx[s]]
                    if gterm.is_zero():
                        continue
                    jdx = list(idx)
                    jdx[s] = u
                    acc = acc - gterm * T.data[tuple(jdx)]
            out[idx + (f,)] = acc
    return ComponentTensor(out, k + 1, n)


def stress_energy(S: ComponentTensor, kappa: Expr, g: ComponentTensor,
                  lam) -> ComponentTensor:
    """Energy-momentum tensor T = S - (kappa/2) g + Lambda g (geometric
    units with the coupling constant set to 1)."""
    n = g.dim
    lam = lam if isinstance(lam, Expr) else ec.const(Fraction(lam))
    coef = lam - ec.div(kappa, 2)
    out = np.empty((n, n), dtype=object)
    for i, j in itertools.product(range(n), repeat=2):
        out[i, j] = S.data[i, j] + coef * g.data[i, j]
    return ComponentTensor(out, 2, n, tn.SYMMETRY_SYMMETRIC)


@dataclass
class CurvatureBundle:
    """Everything the classifier consumes, fully symbolic."""

    metric: MetricData
    coords: List[str]
    gamma: np.ndarray
    R: ComponentTensor
    S: ComponentTensor
    kappa: Expr
    J: np.ndarray
    S2: ComponentTensor
    C: ComponentTensor
    P: ComponentTensor
    W: ComponentTensor
    K: ComponentTensor
    nabla_R: ComponentTensor
    nabla_C: ComponentTensor
    nabla_S: ComponentTensor
    T: ComponentTensor
    lam: object = 0
    _by_name: Dict[str, ComponentTensor] = field(default_factory=dict)

    def tensor(self, name: str) -> ComponentTensor:
        if not self._by_name:
            n = self.metric.dim
            self._by_name = {
                "g": self.metric.g, "R": self.R, "S": self.S, "S2": self.S2,
                "C": self.C, "P": self.P, "W": self.W, "K": self.K,
                "T": self.T, "nabla_R": self.nabla_R,
                "nabla_C": self.nabla_C, "nabla_S": self.nabla_S,
            }
        if name not in self._by_name:
            raise KeyError(f"unknown tensor '{name}' (choose from "
                           f"{sorted(self._by_name)})")
        return self._by_name[name]


def build_bundle(metric: MetricData, coords: Sequence[str],
                 lam=0) -> CurvatureBundle:
    gamma = christoffel(metric, coords)
    R = riemann(gamma, metric, coords)
    S, kappa, J, S2 = ricci_family(R, metric)
    C, P, W, K = derived_curvatures(R, S, kappa, metric)
    nabla_R = covariant_derivative(R, gamma, coords)
    nabla_C = covariant_derivative(C, gamma, coords)
    nabla_S = covariant_derivative(S, gamma, coords)
    T = stress_energy(S, kappa, metric.g, lam)
    return CurvatureBundle(metric=metric, coords=list(coords), gamma=gamma,
                           R=R, S=S, kappa=kappa, J=J, S2=S2, C=C, P=P, W=W,
                           K=K, nabla_R=nabla_R, nabla_C=nabla_C,
                           nabla_S=nabla_S, T=T, lam=lam)
