"""Dense component tensors, metric inversion, and the two product
constructions (Kulkarni-Nomizu wedge; curvature action D.eta and the
Tachibana tensor Q(lambda, eta)).

Tensors are stored dense as numpy arrays: dtype=object holding Expr in
symbolic mode, float64 in evaluated mode.  The products share one generic
loop implementation in symbolic mode and a vectorized einsum path in
evaluated mode; both paths are cross-checked against brute-force index-loop
oracles in the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import exprcore as ec
from .exprcore import Expr

SYMMETRY_NONE = "none"
SYMMETRY_SYMMETRIC = "symmetric"
SYMMETRY_RIEMANN = "riemann"


class TensorError(Exception):
    pass


class ComponentTensor:
    """Dense (0,k) tensor over dimension n with a declared symmetry class."""

    __slots__ = ("data", "valence", "dim", "symmetry")

    def __init__(self, data, valence: int, dim: int,
                 symmetry: str = SYMMETRY_NONE, verify: bool = False):
        arr = np.asarray(data)
        if arr.shape != (dim,) * valence:
            raise TensorError(
                f"shape {arr.shape} does not match valence {valence}, "
                f"dimension {dim}")
        self.data = arr
        self.valence = valence
        self.dim = dim
        self.symmetry = symmetry
        if verify:
            self.check_symmetry()

    @property
    def symbolic(self) -> bool:
        return self.data.dtype == object

    def entry(self, idx):
        return self.data[tuple(idx)]

    @classmethod
    def zeros_symbolic(cls, valence, dim, symmetry=SYMMETRY_NONE):
        arr = np.empty((dim,) * valence, dtype=object)
        arr[...] = ec.ZERO
        return cls(arr, valence, dim, symmetry)

    def evaluate(self, values, memo: Optional[dict] = None) -> "ComponentTensor":
        """Evaluated-mode copy at a point; the memo may be shared across
        tensors evaluated at the same point."""
        if not self.symbolic:
            return self
        if memo is None:
            memo = {}
        out = np.empty(self.data.shape)
        flat_in = self.data.reshape(-1)
        flat_out = out.reshape(-1)
        for i in range(flat_in.size):
            flat_out[i] = ec.eval_float(flat_in[i], values, memo)
        return ComponentTensor(out, self.valence, self.dim, self.symmetry)

    def check_symmetry(self, tol: float = 0.0):
        n = self.dim
        if self.symmetry == SYMMETRY_SYMMETRIC:
            self._check_equal(self.data, np.swapaxes(self.data, 0, 1), 1, tol)
        elif self.symmetry == SYMMETRY_RIEMANN:
            d = self.data
            self._check_equal(d, np.transpose(d, (1, 0, 2, 3)), -1, tol)
            self._check_equal(d, np.transpose(d, (0, 1, 3, 2)), -1, tol)
            self._check_equal(d, np.transpose(d, (2, 3, 0, 1)), 1, tol)

    def _check_equal(self, a, b, sign, tol):
        if self.symbolic:
            for idx in itertools.product(range(self.dim), repeat=self.valence):
                lhs = a[idx]
                rhs = b[idx] if sign == 1 else ec.neg(b[idx])
                if lhs is not rhs:
                    raise TensorError(
                        f"declared symmetry violated at index {idx}")
        else:
            dev = np.abs(a - sign * b).max()
            scale = 1.0 + np.abs(a).max()
            if dev > max(tol, 1e-10) * scale:
                raise TensorError(
                    f"declared symmetry violated (deviation {dev:.3e})")


@dataclass(frozen=True)
class MetricData:
    """Metric with its exact symbolic inverse and determinant."""

    g: ComponentTensor            # (0,2) symmetric
    g_inv: np.ndarray             # (n,n) object array of Expr
    det: Expr

    @property
    def dim(self) -> int:
        return self.g.dim


def _det(m: np.ndarray) -> Expr:
    n = m.shape[0]
    if n == 1:
        return m[0, 0]
    total = ec.ZERO
    for j in range(n):
        if m[0, j].is_zero():
            continue
        minor = np.delete(np.delete(m, 0, axis=0), j, axis=1)
        term = ec.mul(m[0, j], _det(minor))
        total = total + term if j % 2 == 0 else total - term
    return total


def invert_metric(g: ComponentTensor, check_seed: int = 7) -> MetricData:
    """Exact symbolic inverse via the adjugate."""
    if g.valence != 2:
        raise TensorError("metric must be a (0,2) tensor")
    n = g.dim
    m = g.data
    for i in range(n):
        for j in range(n):
            if m[i, j] is not m[j, i]:
                raise TensorError("metric must be symmetric")
    det = _det(m)
    if det.is_zero() or not _probably_nonzero(det, check_seed):
        raise TensorError("metric is symbolically singular")
    inv = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(m, j, axis=0), i, axis=1)
            cof = _det(minor)
            if (i + j) % 2 == 1:
                cof = ec.neg(cof)
            inv[i, j] = ec.div(cof, det)
    return MetricData(g=g, g_inv=inv, det=det)


def _probably_nonzero(e: Expr, seed: int) -> bool:
    import random
    rng = random.Random(seed)
    names = e.free_symbols()
    for _ in range(8):
        b = ec.sample_binding(names, rng)
        try:
            v = ec.evaluate(e, b)
        except ec.DomainError:
            continue
        if abs(v) > 1e-30:
            return True
    return False


def _require_same_mode(*tensors):
    modes = {t.symbolic for t in tensors}
    if len(modes) != 1:
        raise TensorError("cannot mix symbolic and evaluated tensors")
    return modes.pop()


def kulkarni_nomizu(tau: ComponentTensor, lam: ComponentTensor) -> ComponentTensor:
    """(tau ^ lam)(z1,z2,X,Y) = tau(z1,Y)lam(z2,X) - tau(z1,X)lam(z2,Y)
    + tau(z2,X)lam(z1,Y) - tau(z2,Y)lam(z1,X)."""
    if tau.valence != 2 or lam.valence != 2 or tau.dim != lam.dim:
        raise TensorError("wedge product needs two (0,2) tensors of equal "
                          "dimension")
    n = tau.dim
    a, b = tau.data, lam.data
    if _require_same_mode(tau, lam):
        out = np.empty((n,) * 4, dtype=object)
        for i, j, x, y in itertools.product(range(n), repeat=4):
            out[i, j, x, y] = (a[i, y] * b[j, x] - a[i, x] * b[j, y]
                               + a[j, x] * b[i, y] - a[j, y] * b[i, x])
    else:
        out = (np.einsum("iy,jx->ijxy", a, b) - np.einsum("ix,jy->ijxy", a, b)
               + np.einsum("jx,iy->ijxy", a, b) - np.einsum("jy,ix->ijxy", a, b))
    return ComponentTensor(out, 4, n, SYMMETRY_RIEMANN)


def dot_action(D: ComponentTensor, eta: ComponentTensor,
               g_inv: np.ndarray) -> ComponentTensor:
    """(D.eta)_{i1..il a b} = -g^{uv} sum_s D_{a b i_s v} eta_{i1.. u ..il}.

    The two appended slots (a, b) come last; the result is antisymmetric in
    them when D has the Riemann antisymmetries.
    """
    if eta.valence < 1:
        raise TensorError("eta must have valence >= 1")
    if D.valence != 4 or D.dim != eta.dim:
        raise TensorError("D must be a (0,4) tensor of matching dimension")
    n = D.dim
    l = eta.valence
    if _require_same_mode(D, eta):
        # contract the last slot of D with g^{uv} once
        Dg = np.empty((n,) * 4, dtype=object)
        for a, b, c, u in itertools.product(range(n), repeat=4):
            acc = ec.ZERO
            for v in range(n):
                acc = acc + D.data[a, b, c, v] * g_inv[u, v]
            Dg[a, b, c, u] = acc
        out = np.empty((n,) * (l + 2), dtype=object)
        for idx in itertools.product(range(n), repeat=l + 2):
            body, al, be = idx[:l], idx[l], idx[l + 1]
            acc = ec.ZERO
            for s in range(l):
                for u in range(n):
                    jdx = list(body)
                    jdx[s] = u
                    acc = acc + Dg[al, be, body[s], u] * eta.data[tuple(jdx)]
            out[idx] = ec.neg(acc)
    else:
        ginv_f = g_inv if g_inv.dtype != object else None
        if ginv_f is None:
            raise TensorError("evaluated dot_action needs a numeric inverse "
                              "metric")
        Dg = np.einsum("abcv,uv->abcu", D.data, ginv_f)
        out = np.zeros(eta.data.shape + (n, n))
        for s in range(l):
            eta_m = np.moveaxis(eta.data, s, 0)
            term = np.einsum("abcu,u...->...cab", Dg, eta_m)
            out -= np.moveaxis(term, l - 1, s)
    return ComponentTensor(out, l + 2, n, SYMMETRY_NONE)


def tachibana(lam: ComponentTensor, eta: ComponentTensor) -> ComponentTensor:
    """Q(lam,eta)_{i1..il a b} =
    sum_s [lam_{i_s a} eta(..b at s..) - lam_{i_s b} eta(..a at s..)].

    This is the lowered form of ((X wedge_lam Y).eta) with the appended
    slots (a, b) = (X, Y); it is antisymmetric in (a, b).
    """
    if lam.valence != 2 or lam.dim != eta.dim:
        raise TensorError("lam must be a (0,2) tensor of matching dimension")
    if eta.valence < 1:
        raise TensorError("eta must have valence >= 1")
    n = lam.dim
    l = eta.valence
    if _require_same_mode(lam, eta):
        out = np.empty((n,) * (l + 2), dtype=object)
        for idx in itertools.product(range(n), repeat=l + 2):
            body, al, be = idx[:l], idx[l], idx[l + 1]
            acc = ec.ZERO
            for s in range(l):
                jdx = list(body)
                jdx[s] = be
                kdx = list(body)
                kdx[s] = al
                acc = (acc + lam.data[body[s], al] * eta.data[tuple(jdx)]
                       - lam.data[body[s], be] * eta.data[tuple(kdx)])
            out[idx] = acc
    else:
        out = np.zeros(eta.data.shape + (n, n))
        for s in range(l):
            eta_m = np.moveaxis(eta.data, s, 0)
            t1 = np.einsum("ca,b...->...cab", lam.data, eta_m)
            t2 = np.einsum("cb,a...->...cab", lam.data, eta_m)
            out += np.moveaxis(t1 - t2, l - 1, s)
    return ComponentTensor(out, l + 2, n, SYMMETRY_NONE)
