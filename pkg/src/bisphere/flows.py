"""Reeb flow, flow-composed immersions, and tension fields on grids.

The Reeb flow of the (possibly deformed) structure rotates the ambient space:
phi_t(z) = cos(t/a) z - sin(t/a) S z with S the selected complex structure.
Composing an integral submanifold with the flow produces a one-higher
dimensional immersion whose new parameter direction maps to the Reeb field.

Tension and bitension of immersed grids are assembled in parameter
coordinates: tau(F) = G^{ab} (nabla^F_a F_b - Gamma^c_ab F_c) with G the
induced metric, Gamma its Christoffel symbols (finite differences of G), and
nabla^F the pull-back connection.  The bitension adds the rough Laplacian of
tau and the ambient curvature trace; the sign convention is calibrated so a
one-dimensional grid reproduces the curve formula
tau_2 = nabla_T^3 T - R(T, nabla_T T) T.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import ambient, jsonio
from ._fd import diff_grid
from .sasakian import SasakianSphere, curvature_formula
from .frenet import SampledCurve

GRID_PAD = 10  # samples appended per side of a non-periodic axis


def reeb_flow(S: SasakianSphere, t, z: np.ndarray) -> np.ndarray:
    """Flow of the Reeb field: an ambient rotation, isometry of g for each t."""
    t = np.asarray(t, dtype=float)
    theta = t / S.a
    c = np.cos(theta)[..., None] if theta.ndim else np.cos(theta)
    s = np.sin(theta)[..., None] if theta.ndim else np.sin(theta)
    return c * z - s * S.cs.apply(z)


def flow_differential(S: SasakianSphere, t: float, v: np.ndarray) -> np.ndarray:
    """d(phi_t) applied to ambient vectors (the flow is linear)."""
    return reeb_flow(S, t, v)


@dataclass
class GridAxis:
    values: np.ndarray          # stored samples, pad included
    periodic: bool
    period: Optional[float] = None
    pad: int = 0
    name: str = ""

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.periodic and self.period is None:
            raise ValueError(f"periodic axis {self.name!r} needs a period")

    @property
    def h(self) -> float:
        return float(self.values[1] - self.values[0])

    @property
    def m(self) -> int:
        return self.values.size

    def interior(self) -> slice:
        return slice(self.pad, self.m - self.pad) if self.pad else slice(None)


def make_axis(start: float, length: float, m: int, periodic: bool,
              name: str = "") -> GridAxis:
    if periodic:
        vals = start + length * np.arange(m) / m
        return GridAxis(vals, True, length, 0, name)
    h = length / (m - 1)
    vals = start - GRID_PAD * h + h * np.arange(m + 2 * GRID_PAD)
    return GridAxis(vals, False, None, GRID_PAD, name)


@dataclass
class ImmersionGrid:
    """Discretized immersion into the sphere over 1 to 3 parameters."""

    axes: list
    points: np.ndarray                       # (*shape, ambient_dim)
    analytic: Optional[object] = None        # .point/.d1/.d2 on meshes
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        shape = tuple(ax.m for ax in self.axes)
        if self.points.shape[:-1] != shape:
            raise ValueError("points shape does not match axes")
        ambient.check_on_sphere(self.points)

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple:
        return tuple(ax.m for ax in self.axes)

    def mesh(self) -> list:
        return list(np.meshgrid(*[ax.values for ax in self.axes], indexing="ij"))

    def interior(self) -> tuple:
        return tuple(ax.interior() for ax in self.axes)


class PullbackField:
    """A tangent vector at every grid node (section of the pull-back bundle)."""

    def __init__(self, grid: ImmersionGrid, values: np.ndarray):
        self.grid = grid
        self.values = values

    def tangency_residual(self) -> float:
        sl = self.grid.interior()
        return float(np.abs((self.values[sl] * self.grid.points[sl])
                            .sum(axis=-1)).max())

    def sup_norm(self, S: SasakianSphere) -> float:
        sl = self.grid.interior()
        return float(S.norm(self.grid.points[sl], self.values[sl]).max())

    def inf_norm(self, S: SasakianSphere) -> float:
        sl = self.grid.interior()
        return float(S.norm(self.grid.points[sl], self.values[sl]).min())


def curve_as_grid(curve: SampledCurve, name: str = "s") -> ImmersionGrid:
    axis = GridAxis(curve.params, curve.periodic, curve.period, 0, name)
    analytic = _CurveEvaluator(curve.analytic) if curve.analytic else None
    if not curve.periodic and curve.analytic is not None:
        # rebuild with padding so interior FD keeps full accuracy
        h = curve.h
        vals = np.concatenate([curve.params[0] + h * np.arange(-GRID_PAD, 0),
                               curve.params,
                               curve.params[-1] + h * np.arange(1, GRID_PAD + 1)])
        axis = GridAxis(vals, False, None, GRID_PAD, name)
        pts = curve.analytic.point(vals)
    else:
        pts = curve.points
    return ImmersionGrid([axis], pts, analytic, dict(curve.meta))


class _CurveEvaluator:
    def __init__(self, curve_analytic):
        self.c = curve_analytic

    def point(self, mesh):
        return self.c.point(mesh[0])

    def d1(self, i, mesh):
        return self.c.deriv(1, mesh[0])

    def d2(self, i, j, mesh):
        return self.c.deriv(2, mesh[0])


class FlowComposedEvaluator:
    """Analytic evaluator for phi_t applied to a base evaluator (t first)."""

    def __init__(self, cs, rate: float, base):
        self.cs = cs
        self.rate = rate
        self.base = base

    def _rot(self, t, v):
        th = self.rate * t
        return np.cos(th)[..., None] * v - np.sin(th)[..., None] * self.cs.apply(v)

    def _rot_dt(self, t, v):
        th = self.rate * t
        return self.rate * (-np.sin(th)[..., None] * v
                            - np.cos(th)[..., None] * self.cs.apply(v))

    def point(self, mesh):
        return self._rot(mesh[0], self.base.point(mesh[1:]))

    def d1(self, i, mesh):
        if i == 0:
            return self._rot_dt(mesh[0], self.base.point(mesh[1:]))
        return self._rot(mesh[0], self.base.d1(i - 1, mesh[1:]))

    def d2(self, i, j, mesh):
        i, j = min(i, j), max(i, j)
        if i == 0 and j == 0:
            return -self.rate**2 * self.point(mesh)
        if i == 0:
            return self._rot_dt(mesh[0], self.base.d1(j - 1, mesh[1:]))
        return self._rot(mesh[0], self.base.d2(i - 1, j - 1, mesh[1:]))


def integral_residual(S: SasakianSphere, grid: ImmersionGrid) -> float:
    """Largest |eta| over all parameter-direction tangents (integrality)."""
    tang = grid_tangents(S, grid)
    res = 0.0
    for a in range(grid.dim):
        res = max(res, float(np.abs(S.eta(grid.points, tang[..., a, :])).max()))
    return res


def gram_det_min(S: SasakianSphere, grid: ImmersionGrid) -> float:
    G = induced_metric(S, grid, grid_tangents(S, grid))
    return float(np.linalg.det(G).min())


def compose_flow(S: SasakianSphere, base, t_samples: int = 64,
                 integral_tol: float = 1e-8) -> ImmersionGrid:
    """Compose an integral base (curve, grid, or point) with the Reeb flow.

    The new flow parameter becomes axis 0 with period 2*pi*a.  The base must
    be an integral submanifold: eta vanishes on its tangent directions.
    """
    if isinstance(base, SampledCurve):
        base = curve_as_grid(base)
    if isinstance(base, np.ndarray):  # a single point: the orbit is a curve
        period = 2 * np.pi * S.a
        axis = make_axis(0.0, period, t_samples, True, "t")
        pts = reeb_flow(S, axis.values[:, None], base[None, :])
        ev = FlowComposedEvaluator(S.cs, 1.0 / S.a, _PointEvaluator(base))
        return ImmersionGrid([axis], pts, ev, {"family": "reeb-orbit"})
    res = integral_residual(S, base)
    if res > integral_tol:
        raise ValueError(f"base is not an integral submanifold: "
                         f"max |eta(dF)| = {res:.3e} exceeds {integral_tol:.1e}")
    dmin = gram_det_min(S, base)
    if dmin <= 1e-8:
        raise ValueError(f"base is rank deficient (min Gram det {dmin:.3e})")
    period = 2 * np.pi * S.a
    axis = make_axis(0.0, period, t_samples, True, "t")
    tmesh = axis.values.reshape((-1,) + (1,) * base.dim)
    pts = reeb_flow(S, tmesh[..., None] * 0 + tmesh[..., None] * 0 + tmesh[..., None],
                    base.points[None, ...]) if False else _compose_points(S, axis, base)
    analytic = None
    if base.analytic is not None:
        analytic = FlowComposedEvaluator(S.cs, 1.0 / S.a, base.analytic)
    meta = dict(base.meta)
    meta["composed"] = meta.get("composed", 0) + 1
    return ImmersionGrid([axis] + list(base.axes), pts, analytic, meta)


def _compose_points(S: SasakianSphere, axis: GridAxis, base: ImmersionGrid):
    th = axis.values.reshape((-1,) + (1,) * (base.dim + 1)) / S.a
    zp = base.points[None, ...]
    return np.cos(th) * zp - np.sin(th) * S.cs.apply(zp)


class _PointEvaluator:
    def __init__(self, z):
        self.z = np.asarray(z, dtype=float)

    def point(self, mesh):
        return np.broadcast_to(self.z, (1,) * 0 + self.z.shape).copy()

    def d1(self, i, mesh):
        raise IndexError("a point has no parameter directions")

    def d2(self, i, j, mesh):
        raise IndexError("a point has no parameter directions")


# ---------------------------------------------------------------------------
# derivatives and metric data on grids
# ---------------------------------------------------------------------------

def grid_tangents(S: SasakianSphere, grid: ImmersionGrid) -> np.ndarray:
    """First parameter derivatives dF/dx_a, shape (*shape, dim, dim_ambient)."""
    mesh = grid.mesh() if grid.analytic is not None else None
    out = np.empty(grid.shape + (grid.dim, grid.points.shape[-1]))
    for a, ax in enumerate(grid.axes):
        if grid.analytic is not None:
            out[..., a, :] = grid.analytic.d1(a, mesh)
        else:
            out[..., a, :] = diff_grid(grid.points, ax.h, ax.periodic,
                                       deriv=1, order=6, axis=a)
    return out


def grid_second_derivatives(S: SasakianSphere, grid: ImmersionGrid,
                            tang: np.ndarray) -> np.ndarray:
    """Second parameter derivatives, shape (*shape, dim, dim, dim_ambient)."""
    r = grid.dim
    mesh = grid.mesh() if grid.analytic is not None else None
    out = np.empty(grid.shape + (r, r, grid.points.shape[-1]))
    for a in range(r):
        for b in range(a, r):
            if grid.analytic is not None:
                val = grid.analytic.d2(a, b, mesh)
            else:
                val = diff_grid(tang[..., b, :], grid.axes[a].h,
                                grid.axes[a].periodic, deriv=1, order=6, axis=a)
            out[..., a, b, :] = val
            out[..., b, a, :] = val
    return out


def induced_metric(S: SasakianSphere, grid: ImmersionGrid,
                   tang: np.ndarray) -> np.ndarray:
    r = grid.dim
    G = np.empty(grid.shape + (r, r))
    for a in range(r):
        for b in range(a, r):
            G[..., a, b] = S.metric(grid.points, tang[..., a, :], tang[..., b, :])
            G[..., b, a] = G[..., a, b]
    return G


def domain_christoffels(grid: ImmersionGrid, G: np.ndarray) -> np.ndarray:
    """Christoffel symbols of the induced metric in parameter coordinates,
    Gamma[..., c, a, b], via 2nd-order central differences of G."""
    r = grid.dim
    dG = np.empty(grid.shape + (r, r, r))  # dG[..., l, a, b] = d_l G_ab
    for l in range(r):
        dG[..., l, :, :] = diff_grid(G, grid.axes[l].h, grid.axes[l].periodic,
                                     deriv=1, order=2, axis=l)
    Ginv = np.linalg.inv(G)
    # bracket[..., a, b, l] = (d_a G_bl + d_b G_al - d_l G_ab) / 2
    bracket = 0.5 * (np.moveaxis(dG, -3, -2).swapaxes(-1, -2) * 0  # shape helper
                     + np.einsum('...abl->...abl',
                                 np.moveaxis(dG, [-3, -2, -1], [-3, -1, -2])
                                 * 0))
    # build explicitly to keep the index juggling readable
    bracket = np.empty(grid.shape + (r, r, r))
    for a in range(r):
        for b in range(r):
            for l in range(r):
                bracket[..., a, b, l] = 0.5 * (dG[..., a, b, l] + dG[..., b, a, l]
                                               - dG[..., l, a, b])
    return np.einsum('...cl,...abl->...cab', Ginv, bracket)


def pullback_connection_term(S: SasakianSphere, points: np.ndarray,
                             X: np.ndarray, V: np.ndarray,
                             dV: np.ndarray) -> np.ndarray:
    """nabla^F_X V given the raw parameter derivative dV of V along X."""
    out = ambient.project_tangent(points, dV)
    if S.a != 1.0:
        if not S.uses_closed_form():
            raise ValueError("grid pipelines need an accepted connection "
                             "correction for a != 1")
        out = out + S.correction(S, points, X, V)
    return out


def immersion_tension(S: SasakianSphere, grid: ImmersionGrid) -> PullbackField:
    """Tension field of the immersion (trace of its second fundamental data)."""
    tang = grid_tangents(S, grid)
    G = induced_metric(S, grid, tang)
    cond = np.linalg.cond(G)
    if cond.max() > 1e6:
        raise ValueError(f"induced metric ill-conditioned (max cond {cond.max():.2e})")
    sec = grid_second_derivatives(S, grid, tang)
    Gam = domain_christoffels(grid, G)
    Ginv = np.linalg.inv(G)
    H = np.empty_like(sec)
    r = grid.dim
    for a in range(r):
        for b in range(r):
            H[..., a, b, :] = pullback_connection_term(
                S, grid.points, tang[..., a, :], tang[..., b, :], sec[..., a, b, :])
    tau = np.einsum('...ab,...abd->...d', Ginv, H)
    tau -= np.einsum('...ab,...cab,...cd->...d', Ginv, Gam, tang)
    return PullbackField(grid, tau)


def _field_partials(grid: ImmersionGrid, values: np.ndarray) -> np.ndarray:
    out = np.empty(grid.shape + (grid.dim,) + values.shape[-1:])
    for a, ax in enumerate(grid.axes):
        out[..., a, :] = diff_grid(values, ax.h, ax.periodic, deriv=1,
                                   order=6, axis=a)
    return out


def immersion_bitension(S: SasakianSphere, grid: ImmersionGrid,
                        subsample: Optional[float] = None,
                        seed: int = 0) -> dict:
    """Bitension field tau_2(F) = -Delta tau - trace R(dF, tau) dF.

    Returns a dict with the tension field, the bitension values, the node
    selection (3-dimensional grids are evaluated on a seeded random subsample
    plus one full coordinate slice), and norms over the evaluated nodes.
    """
    tang = grid_tangents(S, grid)
    G = induced_metric(S, grid, tang)
    Gam = domain_christoffels(grid, G)
    Ginv = np.linalg.inv(G)
    tau = immersion_tension(S, grid).values
    r = grid.dim

    # first covariant derivatives of tau along every axis, full grid
    dtau = _field_partials(grid, tau)
    W = np.empty_like(dtau)
    for a in range(r):
        W[..., a, :] = pullback_connection_term(S, grid.points, tang[..., a, :],
                                                tau, dtau[..., a, :])

    if r == 3:
        frac = 0.05 if subsample is None else subsample
        sel = _select_nodes(grid, frac, seed)
    else:
        sel = _interior_mask(grid)

    pts = grid.points[sel]
    lap = np.zeros_like(pts)
    for b in range(r):
        dWb = _partials_at(grid, W[..., b, :], sel)  # (N, r, d)
        for a in range(r):
            nab = pullback_connection_term(S, pts, tang[sel][:, a, :],
                                           W[sel][:, b, :], dWb[:, a, :])
            lap += Ginv[sel][:, a, b, None] * nab
    lap -= np.einsum('nab,ncab,ncd->nd', Ginv[sel], Gam[sel], W[sel])

    curv = np.zeros_like(pts)
    for a in range(r):
        for b in range(r):
            curv += Ginv[sel][:, a, b, None] * curvature_formula(
                S, pts, tang[sel][:, a, :], tau[sel], tang[sel][:, b, :])

    tau2 = lap - curv
    norms = S.norm(pts, tau2)
    tau_norms = S.norm(pts, tau[sel])
    return {
        "tension": PullbackField(grid, tau),
        "bitension_values": tau2,
        "selection": sel,
        "points": pts,
        "sup": float(norms.max()),
        "l2": float(np.sqrt(np.mean(norms**2))),
        "tension_inf": float(tau_norms.min()),
        "tension_sup": float(tau_norms.max()),
        "seed": seed,
    }


def _interior_mask(grid: ImmersionGrid) -> tuple:
    mask = np.zeros(grid.shape, dtype=bool)
    mask[grid.interior()] = True
    return np.nonzero(mask)


def _select_nodes(grid: ImmersionGrid, frac: float, seed: int) -> tuple:
    """Random fraction of interior nodes plus the full first coordinate slice."""
    shape = grid.shape
    mask = np.zeros(shape, dtype=bool)
    interior = np.zeros(shape, dtype=bool)
    interior[grid.interior()] = True
    flat_interior = np.flatnonzero(interior.ravel())
    rng = np.random.default_rng(seed)
    k = max(1, int(frac * flat_interior.size))
    chosen = rng.choice(flat_interior, size=k, replace=False)
    mask.ravel()[chosen] = True
    sl = [slice(None)] * len(shape)
    sl[0] = shape[0] // 2
    mask[tuple(sl)] &= False
    mask[tuple(sl)] = interior[tuple(sl)]
    return np.nonzero(mask)


def _partials_at(grid: ImmersionGrid, values: np.ndarray, sel: tuple) -> np.ndarray:
    """First derivatives of a full-grid field at selected nodes only."""
    from ._fd import _D1
    coeffs = _D1[6]
    rad = 3
    idx = [np.asarray(ix) for ix in sel]
    out = np.zeros((idx[0].size, grid.dim, values.shape[-1]))
    for a, ax in enumerate(grid.axes):
        acc = np.zeros((idx[0].size, values.shape[-1]))
        for k, c in enumerate(coeffs):
            if c == 0.0:
                continue
            shifted = list(idx)
            off = idx[a] + (k - rad)
            if ax.periodic:
                off = off % ax.m
            else:
                off = np.clip(off, 0, ax.m - 1)
            shifted[a] = off
            acc += c * values[tuple(shifted)]
        out[:, a, :] = acc / ax.h
    return out


def check_equivariance(S: SasakianSphere, base, composed: ImmersionGrid,
                       seed: int = 0) -> float:
    """sup |tau_2(F)_(t,p) - dphi_t(tau_2(i)_p)| in the g norm.

    `base` may be a curve or an immersion grid; `composed` must be its flow
    composition (flow parameter = axis 0).
    """
    if isinstance(base, SampledCurve):
        from .biharmonic import bitension
        bd = bitension(S, base)
        base_tau2 = bd.tau2_direct
        base_grid_shape = (base.m,)
        base_interior = (slice(None),)
        bw = bd.work
        base_tau2 = bw.crop(base_tau2)
    else:
        res = immersion_bitension(S, base, seed=seed)
        full = np.full(base.shape + (base.points.shape[-1],), np.nan)
        full[res["selection"]] = res["bitension_values"]
        base_tau2 = full
        base_interior = None

    comp = immersion_bitension(S, composed, seed=seed)
    sel = comp["selection"]
    tvals = composed.axes[0].values[sel[0]]
    base_idx = tuple(sel[1:])
    if isinstance(base, SampledCurve):
        expected_base = base_tau2[base_idx[0]]
        valid = np.ones(len(sel[0]), dtype=bool)
    else:
        expected_base = base_tau2[base_idx]
        valid = ~np.isnan(expected_base[:, 0])
    rotated = reeb_flow(S, tvals[:, None] * S.a / S.a * 1.0, expected_base) \
        if False else _rotate_each(S, tvals, expected_base)
    diff = comp["bitension_values"][valid] - rotated[valid]
    return float(S.norm(comp["points"][valid], diff).max())


def _rotate_each(S: SasakianSphere, tvals: np.ndarray, vecs: np.ndarray):
    th = (tvals / S.a)[:, None]
    return np.cos(th) * vecs - np.sin(th) * S.cs.apply(vecs)


# ---------------------------------------------------------------------------
# property residuals used by verification reports
# ---------------------------------------------------------------------------

def flow_direction_residual(S: SasakianSphere, grid: ImmersionGrid) -> float:
    """max |dF(d/dt) - xi o F| over nodes (axis 0 must be the flow direction)."""
    tang = grid_tangents(S, grid)
    diff = tang[..., 0, :] - S.xi(grid.points)
    sl = grid.interior()
    return float(S.norm(grid.points[sl], diff[sl]).max())


def product_metric_residual(S: SasakianSphere, grid: ImmersionGrid,
                            base: ImmersionGrid) -> float:
    """max |G - (dt^2 (+) i* g_base)| over nodes."""
    tang = grid_tangents(S, grid)
    G = induced_metric(S, grid, tang)
    bt = grid_tangents(S, base)
    Gb = induced_metric(S, base, bt)
    expected = np.zeros_like(G)
    expected[..., 0, 0] = 1.0
    expected[..., 1:, 1:] = Gb[None, ...]
    sl = grid.interior()
    return float(np.abs((G - expected)[sl]).max())


def tension_flow_derivative_residual(S: SasakianSphere,
                                     grid: ImmersionGrid) -> float:
    """max |nabla^F_{d/dt} tau(F) + phi(tau(F))| (flow direction = axis 0)."""
    tang = grid_tangents(S, grid)
    tau = immersion_tension(S, grid).values
    dtau = diff_grid(tau, grid.axes[0].h, grid.axes[0].periodic, deriv=1,
                     order=6, axis=0)
    nab = pullback_connection_term(S, grid.points, tang[..., 0, :], tau, dtau)
    resid = nab + S.phi(grid.points, tau)
    sl = grid.interior()
    return float(S.norm(grid.points[sl], resid[sl]).max())


def anti_invariance_residual(S: SasakianSphere, grid: ImmersionGrid) -> float:
    """For base directions X (normal to xi), phi X must be g-normal to the grid."""
    tang = grid_tangents(S, grid)
    res = 0.0
    sl = grid.interior()
    for b in range(1, grid.dim):
        pX = S.phi(grid.points, tang[..., b, :])
        for c in range(grid.dim):
            val = np.abs(S.metric(grid.points, pX, tang[..., c, :]))
            res = max(res, float(val[sl].max()))
    return res


def mean_curvature_relative_spread(S: SasakianSphere, grid: ImmersionGrid) -> float:
    tau = immersion_tension(S, grid).values
    sl = grid.interior()
    norms = S.norm(grid.points[sl], tau[sl])
    return float(norms.std() / norms.mean())


# ---------------------------------------------------------------------------
# interchange files
# ---------------------------------------------------------------------------

def immersion_to_dict(grid: ImmersionGrid) -> dict:
    meta = grid.meta
    doc = {
        "n": meta.get("n"),
        "a": meta.get("a"),
        "structure_index": meta.get("structure_index", 1),
        "dim": grid.dim,
        "grids": [ax.values.tolist() for ax in grid.axes],
        "periodic": [ax.periodic for ax in grid.axes],
        "periods": [ax.period for ax in grid.axes],
        "pads": [ax.pad for ax in grid.axes],
        "points": grid.points.reshape(-1, grid.points.shape[-1]).tolist(),
    }
    if "family" in meta:
        doc["family"] = meta["family"]
        doc["family_params"] = meta.get("family_params", {})
    if "seed" in meta:
        doc["seed"] = meta["seed"]
    return doc


def save_immersion(grid: ImmersionGrid, path: str) -> None:
    jsonio.dump17(immersion_to_dict(grid), path)


IMMERSION_FAMILIES: dict = {}  # family -> callable(params dict) -> evaluator


def immersion_from_dict(doc: dict) -> ImmersionGrid:
    axes = []
    for i, vals in enumerate(doc["grids"]):
        axes.append(GridAxis(np.asarray(vals, dtype=float),
                             bool(doc["periodic"][i]),
                             doc["periods"][i], int(doc.get("pads", [0] * 9)[i]),
                             name=f"x{i}"))
    shape = tuple(ax.m for ax in axes)
    pts = np.asarray(doc["points"], dtype=float)
    pts = pts.reshape(shape + (pts.shape[-1],))
    meta = {k: doc.get(k) for k in ("n", "a", "structure_index", "seed")}
    analytic = None
    fam = doc.get("family")
    if fam and fam in IMMERSION_FAMILIES:
        analytic = IMMERSION_FAMILIES[fam](doc.get("family_params", {}))
        meta["family"] = fam
        meta["family_params"] = doc.get("family_params", {})
    return ImmersionGrid(axes, pts, analytic, meta)


def load_immersion(path: str) -> ImmersionGrid:
    return immersion_from_dict(jsonio.load(path))
