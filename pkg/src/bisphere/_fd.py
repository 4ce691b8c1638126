"""Finite-difference stencils on uniform grids (periodic wrap or padded interior)."""

from __future__ import annotations

import numpy as np

# central first-derivative coefficients, by order of accuracy
_D1 = {
    2: np.array([-0.5, 0.0, 0.5]),
    4: np.array([1 / 12, -2 / 3, 0.0, 2 / 3, -1 / 12]),
    6: np.array([-1 / 60, 3 / 20, -3 / 4, 0.0, 3 / 4, -3 / 20, 1 / 60]),
}

# central second-derivative coefficients
_D2 = {
    2: np.array([1.0, -2.0, 1.0]),
    4: np.array([-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12]),
    6: np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90]),
}


def stencil_radius(order: int) -> int:
    return order // 2


def diff_periodic(values: np.ndarray, h: float, deriv: int = 1, order: int = 6,
                  axis: int = 0) -> np.ndarray:
    """Differentiate samples of a periodic function along `axis`.

    `values` holds one full period (the sample at the period endpoint is not
    repeated).  `h` is the grid step.
    """
    coeffs = (_D1 if deriv == 1 else _D2)[order]
    r = stencil_radius(order)
    out = np.zeros_like(values, dtype=float)
    for k, c in enumerate(coeffs):
        if c != 0.0:
            out += c * np.roll(values, r - k, axis=axis)
    return out / h**deriv


def diff_padded(values: np.ndarray, h: float, deriv: int = 1, order: int = 6,
                axis: int = 0) -> np.ndarray:
    """Differentiate non-periodic samples; entries within one stencil radius of
    either end are filled with the nearest valid interior value (callers must
    carry enough padding that these entries are never consumed).
    """
    coeffs = (_D1 if deriv == 1 else _D2)[order]
    r = stencil_radius(order)
    vals = np.moveaxis(values, axis, 0)
    m = vals.shape[0]
    if m < 2 * r + 1:
        raise ValueError(f"need at least {2*r+1} samples for order-{order} stencil")
    out = np.zeros_like(vals, dtype=float)
    core = sum(c * vals[k:m - 2 * r + k] for k, c in enumerate(coeffs) if c != 0.0)
    out[r:m - r] = core / h**deriv
    out[:r] = out[r]
    out[m - r:] = out[m - r - 1]
    return np.moveaxis(out, 0, axis)


def diff_grid(values: np.ndarray, h: float, periodic: bool, deriv: int = 1,
              order: int = 6, axis: int = 0) -> np.ndarray:
    if periodic:
        return diff_periodic(values, h, deriv, order, axis)
    return diff_padded(values, h, deriv, order, axis)


def central_scalar(f, x: float, h: float, order: int = 4) -> float:
    """Central difference of a scalar->array function at a point."""
    coeffs = _D1[order]
    r = stencil_radius(order)
    acc = None
    for k, c in enumerate(coeffs):
        if c == 0.0:
            continue
        term = c * np.asarray(f(x + (k - r) * h))
        acc = term if acc is None else acc + term
    return acc / h
