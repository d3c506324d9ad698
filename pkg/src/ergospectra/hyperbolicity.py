"""Uniform-hyperbolicity detection and unstable-section winding degrees.

The stable/unstable Lagrangian bundles are estimated by QR dichotomy:
a long forward sweep aligns the leading m columns of the orthonormal
companion frame with the unstable plane, a backward sweep with the
stable plane.  Uniform hyperbolicity is declared when the per-step
singular-gap is bounded away from zero and the estimated planes are
invariant and transversal on consecutive orbit samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import subspace_angles

from .errors import RefineGrid, UnsupportedBase, UnsupportedDirection
from .model import OperatorModel, TORUS
from .cocycle import LagrangianFrame, frame_to_unitary, transfer_step

DEFAULT_N_ITER = 2000
DEFAULT_SAMPLES = 3
DEFAULT_GAP_THRESHOLD = float(np.exp(0.01))
ANGLE_TOL = 1e-6


@dataclass
class SplittingEstimate:
    """Sampled stable/unstable splitting along one orbit segment."""

    theta_samples: np.ndarray        # (samples, d), consecutive orbit points
    unstable: list                   # frame stacks (2m x m) per sample
    stable: list
    gap: float                       # per-step log singular-value gap
    converged: bool
    model: OperatorModel = None
    E: float = 0.0
    n_iter: int = DEFAULT_N_ITER


def _forward_sweep(model: OperatorModel, E: float, theta_start, steps: int,
                   collect_last: int):
    """QR iteration of the full companion frame along a forward orbit.

    Returns per-step Lyapunov estimates (descending) and the leading-m
    frames collected at the last collect_last orbit points reached.
    """
    m = model.m
    Q = np.eye(2 * m, dtype=complex)
    logs = np.zeros(2 * m)
    p = np.atleast_1d(np.asarray(theta_start, dtype=float))
    frames = []
    for k in range(steps):
        if steps - k <= collect_last:
            frames.append(Q[:, :m].copy())
        _, A = transfer_step(model, E, p)
        Q, R = np.linalg.qr(A @ Q)
        d = np.abs(np.diag(R))
        logs += np.log(np.maximum(d, 1e-300))
        p = model.base.advance(p, 1)
    frames.append(Q[:, :m].copy())
    chi = np.sort(logs / steps)[::-1]
    return chi, frames[-(collect_last + 1):]


def _backward_sweep(model: OperatorModel, E: float, theta_end, steps: int,
                    collect_last: int):
    """Same dichotomy run backward; leading columns align with the stable plane."""
    m = model.m
    Q = np.eye(2 * m, dtype=complex)
    logs = np.zeros(2 * m)
    p = np.atleast_1d(np.asarray(theta_end, dtype=float))
    frames = []
    for k in range(steps):
        if steps - k <= collect_last:
            frames.append((np.atleast_1d(p).copy(), Q[:, :m].copy()))
        p = model.base.advance(p, -1)
        _, A = transfer_step(model, E, p)
        Q, R = np.linalg.qr(np.linalg.solve(A, Q))
        d = np.abs(np.diag(R))
        logs += np.log(np.maximum(d, 1e-300))
    frames.append((np.atleast_1d(p).copy(), Q[:, :m].copy()))
    chi = np.sort(logs / steps)[::-1]
    return chi, frames[-(collect_last + 1):]


def _max_angle(F1: np.ndarray, F2: np.ndarray) -> float:
    return float(np.max(subspace_angles(F1, F2)))


def _min_angle_between(F1: np.ndarray, F2: np.ndarray) -> float:
    return float(np.min(subspace_angles(F1, F2)))


def uh_test(model: OperatorModel, E: float, n_iter: int = DEFAULT_N_ITER,
            samples: int = DEFAULT_SAMPLES,
            gap_threshold: float = DEFAULT_GAP_THRESHOLD,
            theta0=None):
    """Dichotomy test at energy E.

    Returns (is_uh, SplittingEstimate or None).  Inconclusive runs are
    reported as is_uh=False with converged=False.
    """
    if not model.base.invertible:
        raise UnsupportedDirection("uh_test needs backward iteration")
    if theta0 is None:
        theta0 = np.zeros(model.base.d)
    theta0 = np.atleast_1d(np.asarray(theta0, dtype=float))
    m = model.m
    pts = model.base.orbit(theta0, samples)

    start = model.base.advance(theta0, -n_iter)
    chi_f, unstable = _forward_sweep(model, E, start, n_iter + samples - 1,
                                     samples - 1)
    end = model.base.advance(theta0, n_iter + samples - 1)
    chi_b, stable_tagged = _backward_sweep(model, E, end, n_iter + samples - 1,
                                           samples - 1)
    stable = [F for _, F in reversed(stable_tagged)]

    gap = float(chi_f[m - 1] - chi_f[m])
    converged = True
    # invariance along consecutive samples
    for k in range(samples - 1):
        _, A = transfer_step(model, E, pts[k])
        if _max_angle(A @ unstable[k], unstable[k + 1]) > ANGLE_TOL:
            converged = False
        if _max_angle(A @ stable[k], stable[k + 1]) > ANGLE_TOL:
            converged = False
    # the fibers of a genuine splitting are Lagrangian
    if converged:
        for F in unstable + stable:
            try:
                LagrangianFrame(F, tol_symmetry=1e-6)
            except Exception:
                converged = False
                break
    transversal = all(
        _min_angle_between(unstable[k], stable[k]) > ANGLE_TOL
        for k in range(samples))
    is_uh = bool(converged and transversal and gap >= np.log(gap_threshold))
    splitting = SplittingEstimate(
        theta_samples=pts, unstable=unstable[:samples], stable=stable[:samples],
        gap=gap, converged=converged, model=model, E=E, n_iter=n_iter)
    return is_uh, splitting


def unstable_frame(model: OperatorModel, E: float, theta, n_iter: int) -> np.ndarray:
    """Unstable-plane frame at one base point via a forward sweep."""
    start = model.base.advance(theta, -n_iter)
    _, frames = _forward_sweep(model, E, start, n_iter, 0)
    return frames[-1]


@dataclass
class SectionDegree:
    r: np.ndarray  # integer winding per torus coordinate


def section_degree(splitting: SplittingEstimate, grid: int = 64,
                   n_iter: int | None = None, max_refine: int = 4) -> SectionDegree:
    """Winding of det W over the unstable section along coordinate loops."""
    model = splitting.model
    if model.base.kind != TORUS:
        raise UnsupportedBase("section degree requires a torus base")
    if n_iter is None:
        n_iter = splitting.n_iter
    d = model.base.d
    theta0 = splitting.theta_samples[0]
    r = np.zeros(d, dtype=int)
    for j in range(d):
        n_pts = grid
        for attempt in range(max_refine + 1):
            total, ok = _loop_winding(model, splitting.E, theta0, j, n_pts, n_iter)
            if ok:
                break
            n_pts *= 2
        else:
            raise RefineGrid(f"coordinate loop {j} unresolved at {n_pts} points")
        if not ok:
            raise RefineGrid(f"coordinate loop {j} unresolved at {n_pts} points")
        if abs(total - round(total)) > 1e-3:
            raise RefineGrid(f"winding {total} not integral on loop {j}")
        r[j] = int(round(total))
    return SectionDegree(r=r)


def _loop_winding(model, E, theta0, j, n_pts, n_iter):
    from .rotation import PhaseLedger
    phases = []
    for s in range(n_pts + 1):
        theta = np.array(theta0, dtype=float)
        theta[j] = np.mod(theta[j] + s / n_pts, 1.0)
        F = unstable_frame(model, E, theta, n_iter)
        W = frame_to_unitary(LagrangianFrame(F, tol_symmetry=1e-6))
        phases.append(float(np.angle(np.linalg.det(W)) / (2 * np.pi)))
    ledger = PhaseLedger(last_phase=np.mod(phases[0], 1.0))
    for ph in phases[1:]:
        delta = ledger.record(ph)
        if abs(delta) >= 0.25:
            return 0.0, False
    return ledger.accumulated, True


def contraction_fit(model: OperatorModel, E: float,
                    splitting: SplittingEstimate, n_max: int = 50):
    """Fit ||A_n v_s|| ~ c L^{-n} on the stable fiber; returns (c, L)."""
    theta = splitting.theta_samples[0]
    v = splitting.stable[0][:, 0]
    norms = []
    p = np.atleast_1d(np.asarray(theta, dtype=float))
    w = v.copy()
    for _ in range(n_max):
        _, A = transfer_step(model, E, p)
        w = A @ w
        norms.append(float(np.linalg.norm(w)))
        p = model.base.advance(p, 1)
    # roundoff re-injects the unstable direction once the stable part
    # bottoms out; fit only the initial decaying segment
    cut = max(int(np.argmin(norms)) + 1, 3)
    n = np.arange(1, cut + 1)
    slope, logc = np.polyfit(n, np.log(norms[:cut]), 1)
    return float(np.exp(logc)), float(np.exp(-slope))
