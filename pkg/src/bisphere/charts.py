"""Stereographic charts and finite-difference Christoffel symbols.

Two charts cover the sphere: projection from the north pole and from the
south pole along the last coordinate axis.  Each point uses the chart whose
excluded pole is far away (automatic switching), so chart coordinates stay
well conditioned.  Christoffel symbols of any metric supplied as a pointwise
bilinear form are obtained by central differences of the pulled-back metric
components; the Riemann tensor adds one more difference level on top.

This is the ground-truth route for the deformed metrics: no closed-form
connection is assumed anywhere in this module.
"""

from __future__ import annotations

import numpy as np

from ._fd import _D1

POLE_SWITCH = 0.7  # use the south chart once the last coordinate exceeds this
POLE_GUARD = 1e-3  # minimum distance from a chart's excluded pole


class ChartError(ValueError):
    pass


class Chart:
    """Stereographic chart from the north (sign=+1) or south (sign=-1) pole."""

    def __init__(self, dim_ambient: int, sign: int):
        self.d = dim_ambient
        self.sign = sign  # projection pole is sign * e_d

    def to_chart(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        denom = 1.0 - self.sign * z[..., -1]
        if np.any(np.abs(denom) < POLE_GUARD):
            raise ChartError("point within 1e-3 of the chart's excluded pole")
        return z[..., :-1] / denom[..., None]

    def to_sphere(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        s2 = (u * u).sum(axis=-1)
        last = self.sign * (s2 - 1.0) / (s2 + 1.0)
        return np.concatenate([2.0 * u / (s2 + 1.0)[..., None], last[..., None]],
                              axis=-1)

    def jacobian(self, u: np.ndarray) -> np.ndarray:
        """d(to_sphere)/du, shape (d, d-1), closed form."""
        u = np.asarray(u, dtype=float)
        s2 = float(u @ u)
        q = 1.0 + s2
        J = np.zeros((self.d, self.d - 1))
        J[:-1, :] = 2.0 * np.eye(self.d - 1) / q
        J[:-1, :] -= 4.0 * np.outer(u, u) / q**2
        J[-1, :] = self.sign * 4.0 * u / q**2
        return J

    def push(self, u: np.ndarray, w: np.ndarray) -> np.ndarray:
        return self.jacobian(u) @ w

    def pull(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Chart components of a tangent vector v at to_sphere(u)."""
        J = self.jacobian(u)
        return np.linalg.solve(J.T @ J, J.T @ v)


def pick_chart(z: np.ndarray, dim_ambient: int) -> Chart:
    sign = -1 if z[-1] > POLE_SWITCH else 1
    chart = Chart(dim_ambient, sign)
    if abs(1.0 - sign * z[-1]) < POLE_GUARD:  # both poles close: cannot happen
        raise ChartError("both stereographic charts degenerate at this point")
    return chart


def metric_components(metric, chart: Chart, u: np.ndarray) -> np.ndarray:
    """Pull back a pointwise metric(z, X, Y) to chart coordinates at u."""
    z = chart.to_sphere(u)
    J = chart.jacobian(u)
    k = chart.d - 1
    G = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            G[i, j] = G[j, i] = metric(z, J[:, i], J[:, j])
    return G


def christoffel_fd(metric, chart: Chart, u: np.ndarray, h: float = 1e-3,
                   order: int = 4) -> np.ndarray:
    """Christoffel symbols Gamma[k, i, j] at u by central FD of the metric."""
    u = np.asarray(u, dtype=float)
    k = chart.d - 1
    coeffs = _D1[order]
    r = order // 2
    dG = np.zeros((k, k, k))  # dG[l] = d g / du_l
    for l in range(k):
        for off, c in enumerate(coeffs):
            if c == 0.0:
                continue
            up = u.copy()
            up[l] += (off - r) * h
            dG[l] += c * metric_components(metric, chart, up)
    dG /= h
    G = metric_components(metric, chart, u)
    Ginv = np.linalg.inv(G)
    # Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
    Gam = np.zeros((k, k, k))
    for i in range(k):
        for j in range(k):
            Gam[:, i, j] = Ginv @ (0.5 * (dG[i][j, :] + dG[j][i, :] - dG[:, i, j]))
    return Gam


def riemann_fd(metric, chart: Chart, u: np.ndarray, h_outer: float = 1e-2,
               h_inner: float = 1e-3, order: int = 4):
    """Riemann tensor R[l, k, i, j] with R(e_i, e_j) e_k = R[l, k, i, j] e_l.

    Convention: R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
    which in coordinates reads
    R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
                + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}.
    """
    u = np.asarray(u, dtype=float)
    k = chart.d - 1
    coeffs = _D1[order]
    r = order // 2
    dGam = np.zeros((k, k, k, k))  # dGam[l] = d Gamma / du_l
    for l in range(k):
        for off, c in enumerate(coeffs):
            if c == 0.0:
                continue
            up = u.copy()
            up[l] += (off - r) * h_outer
            dGam[l] += c * christoffel_fd(metric, chart, up, h_inner, order)
    dGam /= h_outer
    Gam = christoffel_fd(metric, chart, u, h_inner, order)
    R = np.zeros((k, k, k, k))
    for i in range(k):
        for j in range(k):
            R[:, :, i, j] = (dGam[i][:, j, :] - dGam[j][:, i, :]
                             + np.einsum('lm,mk->lk', Gam[:, i, :], Gam[:, j, :])
                             - np.einsum('lm,mk->lk', Gam[:, j, :], Gam[:, i, :]))
    return R


def cov_deriv_chart(metric, z: np.ndarray, x: np.ndarray, v: np.ndarray,
                    dv_chart, h: float = 1e-3) -> np.ndarray:
    """Covariant derivative nabla_X V at z from chart data.

    `dv_chart(chart)` must return d/dt of the chart components of V along the
    curve with velocity x (the caller owns the differentiation of V).
    """
    chart = pick_chart(z, z.shape[-1])
    u = chart.to_chart(z)
    xc = chart.pull(u, x)
    vc = chart.pull(u, v)
    dvc = dv_chart(chart)
    Gam = christoffel_fd(metric, chart, u, h)
    acc = dvc + np.einsum('kij,i,j->k', Gam, xc, vc)
    return chart.push(u, acc)
