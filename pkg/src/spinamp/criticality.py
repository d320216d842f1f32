"""Sweeps around the first-order transition and critical-exponent fits.

The susceptibility is the field derivative of the spontaneous magnetization
sqrt(zeta_x), taken as a central difference with a relative step. The size
scan uses the one-sided form [sqrt(zeta_x)(bx) - sqrt(zeta_x)(0)] / bx at a
fixed small probe field instead, which is how the chi-vs-N experiment is
defined.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .lmg_statics import (
    LmgParams,
    correlations,
    order_parameters,
    solve_ground,
)


class InsufficientDataError(ValueError):
    """Fewer than three usable points inside the fit window."""


@dataclass(frozen=True)
class SweepPoint:
    bx: float
    zeta_x: float
    zeta_y: float
    sqrt_zeta_x: float
    chi: float
    gap: float
    c_xxyy: float
    eta: float


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares power law on (log x, log y); exponent is the slope."""

    exponent: float
    log_amplitude: float
    r_squared: float
    window: tuple
    n_points: int


class SizePoint(NamedTuple):
    n: int
    chi: float
    gap: float
    c_xxyy: float


def _sqrt_zeta_x(params: LmgParams, bx: float) -> float:
    result = solve_ground(dataclasses.replace(params, bx=bx))
    return float(np.sqrt(order_parameters(result).zeta_x))


def susceptibility_at(params: LmgParams, bx: float, rel_step: float = 1e-2) -> float:
    """Central-difference chi(bx) = d sqrt(zeta_x)/d bx at the given field."""
    if bx <= 0.0:
        raise ValueError(f"bx must be positive, got {bx}")
    if not 0.0 < rel_step <= 0.1:
        raise ValueError(f"rel_step must lie in (0, 0.1], got {rel_step}")
    up = _sqrt_zeta_x(params, bx * (1.0 + rel_step))
    dn = _sqrt_zeta_x(params, bx * (1.0 - rel_step))
    return (up - dn) / (2.0 * bx * rel_step)


def susceptibility_one_sided(params: LmgParams, bx: float) -> float:
    """[sqrt(zeta_x)(bx) - sqrt(zeta_x)(0)] / bx, the size-scan form."""
    if bx <= 0.0:
        raise ValueError(f"bx must be positive, got {bx}")
    return (_sqrt_zeta_x(params, bx) - _sqrt_zeta_x(params, 0.0)) / bx


def field_sweep(
    params: LmgParams, bx_values: Sequence[float], rel_step: float = 1e-2
) -> list[SweepPoint]:
    """One SweepPoint per field value, each from independent solves."""
    bx_values = np.asarray(bx_values, dtype=float)
    if np.any(bx_values <= 0.0):
        raise ValueError("all sweep fields must be positive")
    points = []
    for bx in bx_values:
        try:
            result = solve_ground(dataclasses.replace(params, bx=float(bx)))
            ops = order_parameters(result)
            corr = correlations(result)
            chi = susceptibility_at(params, float(bx), rel_step=rel_step)
        except Exception as err:
            raise RuntimeError(f"field sweep failed at bx = {bx:.6e}: {err}") from err
        points.append(
            SweepPoint(
                bx=float(bx),
                zeta_x=ops.zeta_x,
                zeta_y=ops.zeta_y,
                sqrt_zeta_x=float(np.sqrt(ops.zeta_x)),
                chi=chi,
                gap=result.gap,
                c_xxyy=corr.c_xxyy,
                eta=corr.eta,
            )
        )
    return points


def fit_power_law(points, window) -> ScalingFit:
    """Fit y = A x^p over the points whose x falls inside the window.

    Raises InsufficientDataError for fewer than three usable points and
    ValueError (listing offenders) for nonpositive values in the window.
    """
    lo, hi = window
    if not lo < hi:
        raise ValueError(f"window must satisfy lo < hi, got {window}")
    pts = [(float(x), float(y)) for x, y in points]
    inside = [(x, y) for x, y in pts if lo <= x <= hi]
    bad = [(x, y) for x, y in inside if x <= 0.0 or y <= 0.0]
    if bad:
        raise ValueError(f"nonpositive values inside fit window: {bad}")
    if len(inside) < 3:
        raise InsufficientDataError(
            f"need >= 3 points inside window {window}, found {len(inside)}"
        )
    lx = np.log([x for x, _ in inside])
    ly = np.log([y for _, y in inside])
    design = np.vstack([lx, np.ones_like(lx)]).T
    coef, *_ = np.linalg.lstsq(design, ly, rcond=None)
    pred = design @ coef
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return ScalingFit(
        exponent=float(coef[0]),
        log_amplitude=float(coef[1]),
        r_squared=r_squared,
        window=(float(lo), float(hi)),
        n_points=len(inside),
    )


def size_sweep(j: float, bx: float, n_values: Sequence[int], epsilon: float = 1.0) -> list[SizePoint]:
    """Per-N statics on the transition line jx = jy = j.

    chi uses the one-sided probe at the given bx; the gap is evaluated at
    bx = 0, where it follows the 1/N law; c_xxyy is taken at the probe field.
    """
    out = []
    for n in n_values:
        n = int(n)
        if n < 2:
            raise ValueError(f"n_values must be >= 2, got {n}")
        params = LmgParams(n_qubits=n, jx=j, jy=j, epsilon=epsilon)
        try:
            chi = susceptibility_one_sided(params, bx)
            gap0 = solve_ground(params).gap
            corr = correlations(solve_ground(dataclasses.replace(params, bx=bx)))
        except Exception as err:
            raise RuntimeError(f"size sweep failed at N = {n}: {err}") from err
        out.append(SizePoint(n=n, chi=chi, gap=gap0, c_xxyy=corr.c_xxyy))
    return out
