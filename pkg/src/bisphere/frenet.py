"""Curves on the sphere: sampling, derivatives, Frenet apparatus, diagnostics.

A curve is a uniform parameter grid plus one ambient point per sample.
Generator-built curves also carry analytic derivative evaluators (orders
1..4); everything else falls back to finite differences, with periodic wrap
for closed curves and padding / interior cropping for windowed ones.

The Frenet apparatus of a unit-speed curve is built by the standard
recursion: E1 = T, then kappa_i E_{i+1} = nabla_T E_i + kappa_{i-1} E_{i-1},
with positive curvature functions and frame signs fixed by continuity along
the grid.  The osculating order is where the remainder norm drops below a
tolerance uniformly; mixed behaviour is flagged as indeterminate instead of
silently truncated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from . import ambient, jsonio
from ._fd import diff_grid
from .sasakian import SasakianSphere, cov_deriv_sampled

DEFAULT_SAMPLES = 512
FRENET_DROP_TOL = 1e-6
_PAD = 16          # extra analytic samples on each side of a window
_EDGE_MARGIN = 12  # samples dropped at each end of sampled non-periodic data

# analytic rebuilders for curves loaded from interchange files,
# registered by the generator module: family -> callable(params dict)
ANALYTIC_FAMILIES: dict[str, Callable] = {}


@dataclass
class SampledCurve:
    """A curve on S^(2n+1) given by uniform samples (and optional evaluators)."""

    params: np.ndarray
    points: np.ndarray
    periodic: bool = False
    period: Optional[float] = None
    analytic: Optional[object] = None  # needs .point(s) and .deriv(order, s)
    unit_speed: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.params = np.asarray(self.params, dtype=float)
        self.points = np.asarray(self.points, dtype=float)
        if self.params.ndim != 1 or self.points.shape[0] != self.params.size:
            raise ValueError("params/points shape mismatch")
        steps = np.diff(self.params)
        if steps.size and (steps.min() <= 0 or
                           abs(steps.max() - steps.min()) > 1e-9 * steps.mean()):
            raise ValueError("parameter grid must be strictly increasing and uniform")
        if self.periodic and self.period is None:
            raise ValueError("periodic curve needs a period")
        ambient.check_on_sphere(self.points)

    @property
    def m(self) -> int:
        return self.params.size

    @property
    def h(self) -> float:
        return float(self.params[1] - self.params[0])

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def from_analytic(evaluator, params, periodic: bool, period: Optional[float],
                  unit_speed: bool = True, meta: Optional[dict] = None) -> SampledCurve:
    params = np.asarray(params, dtype=float)
    return SampledCurve(params=params, points=evaluator.point(params),
                        periodic=periodic, period=period, analytic=evaluator,
                        unit_speed=unit_speed, meta=dict(meta or {}))


def derivative_samples(curve: SampledCurve, order: int) -> np.ndarray:
    """Derivative of the curve at every grid sample (4th-order FD fallback)."""
    if not 1 <= order <= 4:
        raise ValueError("derivative order must be between 1 and 4")
    if curve.analytic is not None:
        return curve.analytic.deriv(order, curve.params)
    vals = curve.points
    for _ in range(order):
        vals = diff_grid(vals, curve.h, curve.periodic, deriv=1, order=4, axis=0)
    return vals


def derivative(curve: SampledCurve, order: int, t: float) -> np.ndarray:
    """Derivative at a single parameter value.

    Analytic curves evaluate anywhere; sampled curves only at grid points,
    and a non-periodic sampled curve refuses queries too close to the ends.
    """
    if not 1 <= order <= 4:
        raise ValueError("derivative order must be between 1 and 4")
    if curve.analytic is not None:
        return curve.analytic.deriv(order, np.asarray([t], dtype=float))[0]
    tt = t
    if curve.periodic:
        tt = curve.params[0] + (t - curve.params[0]) % curve.period
    idx = int(np.argmin(np.abs(curve.params - tt)))
    if abs(curve.params[idx] - tt) > 1e-9 * max(1.0, abs(curve.period or 1.0)):
        raise ValueError("sampled curves support derivatives at grid points only")
    margin = 4 * order
    if not curve.periodic and (idx < margin or idx >= curve.m - margin):
        raise ValueError("derivative query too close to the boundary of a "
                         "non-periodic sampled curve")
    return derivative_samples(curve, order)[idx]


class CurveWork:
    """Extended sample arrays for a curve plus FD plumbing.

    Analytic windowed curves get `pad` extra samples on each side so interior
    results keep full stencil accuracy; periodic curves wrap instead.
    """

    def __init__(self, S: SasakianSphere, curve: SampledCurve):
        self.S = S
        self.curve = curve
        self.h = curve.h
        if curve.analytic is not None and not curve.periodic:
            self.pad = _PAD
            left = curve.params[0] + self.h * np.arange(-self.pad, 0)
            right = curve.params[-1] + self.h * np.arange(1, self.pad + 1)
            self.s = np.concatenate([left, curve.params, right])
            self.points = curve.analytic.point(self.s)
            self.wrap = False
            self.margin = 0
        else:
            self.pad = 0
            self.s = curve.params
            self.points = curve.points
            self.wrap = curve.periodic
            self.margin = 0 if curve.periodic else _EDGE_MARGIN
        if curve.analytic is not None:
            self.T = curve.analytic.deriv(1, self.s)
            self.d2 = curve.analytic.deriv(2, self.s)
        else:
            self.T = diff_grid(self.points, self.h, self.wrap, order=4)
            self.d2 = diff_grid(self.T, self.h, self.wrap, order=4)

    def dds(self, values: np.ndarray, order: int = 6) -> np.ndarray:
        return diff_grid(values, self.h, self.wrap, deriv=1, order=order, axis=0)

    def crop(self, values: np.ndarray) -> np.ndarray:
        if self.pad:
            return values[self.pad:-self.pad]
        return values

    def interior(self, values: np.ndarray) -> np.ndarray:
        """Reporting window minus any untrusted boundary samples."""
        vals = self.crop(values)
        if self.margin:
            return vals[self.margin:-self.margin]
        return vals

    def cov_deriv(self, V: np.ndarray, dV: Optional[np.ndarray] = None,
                  method: str = "auto") -> np.ndarray:
        if dV is None:
            dV = self.dds(V)
        return cov_deriv_sampled(self.S, self.points, self.T, V, dV, method)


@dataclass
class FrenetApparatus:
    """Osculating frames and curvature functions of a unit-speed curve."""

    order: int
    frames: list            # E_1..E_r, each (m, d) on the reporting grid
    curvatures: list        # kappa_1..kappa_{r-1}, each (m,)
    indeterminate: bool = False
    work: CurveWork = field(default=None, repr=False)
    frames_ext: list = field(default=None, repr=False)
    curvatures_ext: list = field(default=None, repr=False)

    def kappa_const(self, i: int) -> float:
        """Mean of kappa_i (1-based) over the trusted window."""
        vals = self.work.interior(self.curvatures_ext[i - 1][..., None])[:, 0] \
            if self.work else self.curvatures[i - 1]
        return float(np.mean(vals))


class NotUnitSpeedError(ValueError):
    pass


def speed_profile(S: SasakianSphere, curve: SampledCurve) -> np.ndarray:
    work = CurveWork(S, curve)
    return work.crop(S.norm(work.points, work.T))


def legendre_residual(S: SasakianSphere, curve: SampledCurve) -> float:
    work = CurveWork(S, curve)
    return float(np.abs(S.eta(work.points, work.T)).max())


def frenet_apparatus(S: SasakianSphere, curve: SampledCurve,
                     drop_tol: float = FRENET_DROP_TOL,
                     method: str = "auto",
                     speed_tol: float = 1e-6) -> FrenetApparatus:
    """Build the Frenet apparatus; raises if the curve is not unit speed."""
    work = CurveWork(S, curve)
    speed = S.norm(work.points, work.T)
    serr = float(np.abs(work.interior(speed[:, None]) - 1.0).max())
    if serr > speed_tol:
        raise NotUnitSpeedError(
            f"curve is not unit speed in g (max |speed-1| = {serr:.3e}); "
            "reparametrize by arc length first")

    cap = min(2 * S.n + 1, 6)
    frames = [work.T]
    curvatures = []
    indeterminate = False
    order = cap
    prev_kappa = None
    prev_frame = None
    for i in range(1, cap + 1):
        if i == 1:
            nab = work.cov_deriv(frames[0], work.d2, method)
        else:
            nab = work.cov_deriv(frames[-1], None, method)
        M = nab if prev_kappa is None else nab + prev_kappa[:, None] * prev_frame
        # numerical stabilization: the remainder is orthogonal to all previous
        # frames in exact arithmetic
        for E in frames:
            M = M - S.metric(work.points, M, E)[:, None] * E
        kappa = S.norm(work.points, M)
        interior_k = work.interior(kappa[:, None])[:, 0]
        if interior_k.max() < drop_tol:
            order = i
            break
        if interior_k.min() < drop_tol:
            indeterminate = True
            order = i
            break
        E_next = M / kappa[:, None]
        dots = (E_next[1:] * E_next[:-1]).sum(axis=1)
        if np.any(work.interior(dots[:, None]) < 0.0):
            indeterminate = True  # direction flip without a clean zero
            order = i
            break
        prev_kappa = kappa
        prev_frame = frames[-1]
        curvatures.append(kappa)
        frames.append(E_next)
        order = i + 1
    else:
        order = cap

    app = FrenetApparatus(
        order=order,
        frames=[work.crop(E) for E in frames[:order]],
        curvatures=[work.crop(k[:, None])[:, 0] for k in curvatures[:order - 1]],
        indeterminate=indeterminate,
        work=work,
        frames_ext=frames[:order],
        curvatures_ext=curvatures[:order - 1],
    )
    return app


def reparametrize_arclength(S: SasakianSphere, curve: SampledCurve,
                            samples: Optional[int] = None) -> SampledCurve:
    """Resample a curve by g-arc length (cumulative quadrature + monotone
    spline inversion).  The result is unit speed on a uniform grid."""
    m = samples or curve.m
    t = curve.params
    if curve.analytic is not None:
        tfine = np.linspace(t[0], t[-1] + (curve.period / curve.m if curve.periodic
                                           else 0.0), 8 * curve.m + 1)
        pts = curve.analytic.point(tfine)
        vel = curve.analytic.deriv(1, tfine)
    else:
        if curve.periodic:
            tfine = np.concatenate([t, [t[0] + curve.period]])
            closed = np.vstack([curve.points, curve.points[:1]])
            spl = CubicSpline(tfine, closed, bc_type="periodic", axis=0)
        else:
            spl = CubicSpline(t, curve.points, axis=0)
            tfine = t
        tfine = np.linspace(tfine[0], tfine[-1], 8 * curve.m + 1)
        pts = spl(tfine)
        vel = spl(tfine, 1)
    speeds = S.norm(pts, vel)
    sigma = np.concatenate([[0.0], np.cumsum((speeds[1:] + speeds[:-1]) / 2.0
                                             * np.diff(tfine))])
    total = float(sigma[-1])
    inv = PchipInterpolator(sigma, tfine)
    if curve.periodic:
        s_new = np.linspace(0.0, total, m, endpoint=False)
    else:
        s_new = np.linspace(0.0, total, m)
    t_new = inv(s_new)
    if curve.analytic is not None:
        new_pts = curve.analytic.point(t_new)
    else:
        new_pts = spl(t_new)
        new_pts = new_pts / np.linalg.norm(new_pts, axis=1, keepdims=True)
    return SampledCurve(params=s_new, points=new_pts, periodic=curve.periodic,
                        period=total if curve.periodic else None,
                        unit_speed=True,
                        meta={**curve.meta, "reparametrized": True})


# ---------------------------------------------------------------------------
# interchange files
# ---------------------------------------------------------------------------

def curve_to_dict(curve: SampledCurve) -> dict:
    meta = curve.meta
    doc = {
        "n": meta.get("n"),
        "a": meta.get("a"),
        "structure_index": meta.get("structure_index", 1),
        "periodic": curve.periodic,
        "period": curve.period,
        "params": curve.params.tolist(),
        "points": curve.points.tolist(),
    }
    if "family" in meta:
        doc["family"] = meta["family"]
        doc["family_params"] = meta.get("family_params", {})
    return doc


def save_curve(curve: SampledCurve, path: str) -> None:
    jsonio.dump17(curve_to_dict(curve), path)


def curve_from_dict(doc: dict) -> SampledCurve:
    family = doc.get("family")
    meta = {k: doc.get(k) for k in ("n", "a", "structure_index")}
    params = np.asarray(doc["params"], dtype=float)
    points = np.asarray(doc["points"], dtype=float)
    analytic = None
    if family and family in ANALYTIC_FAMILIES:
        analytic = ANALYTIC_FAMILIES[family](doc.get("family_params", {}))
        meta["family"] = family
        meta["family_params"] = doc.get("family_params", {})
    return SampledCurve(params=params, points=points,
                        periodic=bool(doc.get("periodic", False)),
                        period=doc.get("period"), analytic=analytic,
                        unit_speed=False, meta=meta)


def load_curve(path: str) -> SampledCurve:
    with open(path, encoding="utf-8") as fh:
        return curve_from_dict(json.load(fh))
