"""Time warping via sparse control-point spline interpolation.

A warp is described by point pairs: six boundary anchors that map to
themselves (the four corners and the midpoints of the vertical edges) and
one interior point on the horizontal center line, displaced along time by
a random amount.  A polyharmonic spline (thin-plate kernel r^2*log r by
default) interpolates those displacements into a dense backward flow;
the output image samples the input bilinearly along that flow, so the
warp has no holes and stays inside the input value range.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SplineSingularError
from .features import Spectrogram
from .rng import RngStream

_INTERP_TOL = 1e-6


@dataclass(frozen=True)
class WarpSpec:
    """The warp magnitude limit and the displacement actually sampled."""

    max_shift: int
    shift: int

    def __post_init__(self):
        if self.max_shift < 0:
            raise ValueError(f"max_shift must be non-negative, got {self.max_shift}")
        if abs(self.shift) > self.max_shift:
            raise ValueError(f"|shift| {abs(self.shift)} exceeds max_shift {self.max_shift}")


@dataclass(frozen=True)
class ControlPointSet:
    """Paired (time, freq) source and destination coordinates.

    `degenerate` marks sets produced when a requested warp could not be
    placed (utterance too short); such sets are identity maps and warping
    with them is a no-op rather than an error, so augmentation never
    aborts a batch over a short utterance.
    """

    source_points: np.ndarray
    dest_points: np.ndarray
    degenerate: bool = False

    def __post_init__(self):
        src = np.ascontiguousarray(self.source_points, dtype=np.float64)
        dst = np.ascontiguousarray(self.dest_points, dtype=np.float64)
        if src.ndim != 2 or src.shape[1] != 2:
            raise ValueError(f"source points must be (n, 2), got {src.shape}")
        if src.shape != dst.shape:
            raise ValueError(f"point count mismatch: {src.shape} vs {dst.shape}")
        if src.shape[0] < 3:
            raise ValueError(f"need at least 3 control points, got {src.shape[0]}")
        object.__setattr__(self, "source_points", src)
        object.__setattr__(self, "dest_points", dst)

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.source_points, self.dest_points))

    def swapped(self) -> "ControlPointSet":
        """Destination-to-source pairing, used to fit backward flows."""
        return ControlPointSet(self.dest_points, self.source_points, self.degenerate)


def _anchor_points(tau: int, nu: int) -> np.ndarray:
    mid = (nu - 1) / 2.0
    return np.array(
        [
            [0.0, 0.0],
            [tau - 1.0, 0.0],
            [0.0, nu - 1.0],
            [tau - 1.0, nu - 1.0],
            [0.0, mid],
            [tau - 1.0, mid],
        ]
    )


def sample_warp(tau: int, nu: int, max_shift: int, rng: RngStream) -> ControlPointSet:
    """Draw the random warp of a (nu x tau) spectrogram.

    The warp point sits on the horizontal center line at a time position
    drawn uniformly from the integers strictly between max_shift and
    tau - max_shift, and moves left or right by an integer shift drawn
    uniformly from [-max_shift, max_shift].  If that open interval holds
    no integer (the utterance is too short for the requested shift), the
    returned set is an identity map flagged `degenerate`; max_shift = 0
    returns a plain identity map.  No draws are consumed in either case.
    """
    if max_shift < 0:
        raise ValueError(f"max_shift must be non-negative, got {max_shift}")
    anchors = _anchor_points(tau, nu)
    if max_shift == 0:
        return ControlPointSet(anchors, anchors)
    lo, hi = max_shift + 1, tau - max_shift - 1
    if lo > hi or nu < 2:
        return ControlPointSet(anchors, anchors, degenerate=True)
    t0 = rng.randint(lo, hi)
    shift = rng.randint(-max_shift, max_shift)
    warp_src = [t0, nu / 2.0]
    warp_dst = [t0 + shift, nu / 2.0]
    return ControlPointSet(
        np.vstack([anchors, warp_src]),
        np.vstack([anchors, warp_dst]),
    )


def _kernel(r: np.ndarray, order: int) -> np.ndarray:
    """Polyharmonic basis: r^k for odd k, r^k * log(r) for even k (0 at r=0)."""
    if order % 2 == 1:
        return r**order
    out = np.zeros_like(r)
    nz = r > 0
    out[nz] = r[nz] ** order * np.log(r[nz])
    return out


@dataclass(frozen=True)
class SplineModel:
    """Fitted polyharmonic interpolant from R^2 to R^2.

    Maps a (time, freq) query to affine_terms @ [1, t, f] plus the kernel
    expansion over the fitted nodes.  With zero regularization the model
    reproduces every training pair exactly (to solver precision).
    """

    kernel_order: int
    nodes: np.ndarray  # (n, 2) source positions the kernel is centered on
    rbf_weights: np.ndarray  # (n, 2), one column per output dimension
    affine_terms: np.ndarray  # (3, 2) coefficients of [1, t, f]
    regularization: float = 0.0
    condition_number: float = field(default=float("nan"), compare=False)

    def predict(self, points: np.ndarray) -> np.ndarray:
        """Evaluate the interpolant at (m, 2) query points."""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        dist = np.linalg.norm(pts[:, None, :] - self.nodes[None, :, :], axis=2)
        basis = _kernel(dist, self.kernel_order)
        affine_in = np.column_stack([np.ones(len(pts)), pts])
        return affine_in @ self.affine_terms + basis @ self.rbf_weights

    __call__ = predict


def fit_spline(
    cps: ControlPointSet, order: int = 2, regularization: float = 0.0
) -> SplineModel:
    """Solve the polyharmonic system for a source-to-destination map.

    Builds [K + lam*I, P; P^T, 0] [w; a] = [d; 0] with K the pairwise
    kernel matrix and P the affine basis [1, t, f], solving both output
    dimensions at once.  Degenerate-but-consistent configurations (for
    example collinear points with affine targets) fall back to a
    minimum-norm least-squares solution; anything that cannot reproduce
    the prescribed targets raises `SplineSingularError`.
    """
    src = cps.source_points
    dst = cps.dest_points
    n = len(src)
    uniq = np.unique(src, axis=0)
    if len(uniq) != n:
        raise ValueError("source control points must be pairwise distinct")
    if regularization < 0:
        raise ValueError(f"regularization must be non-negative, got {regularization}")

    dist = np.linalg.norm(src[:, None, :] - src[None, :, :], axis=2)
    kernel = _kernel(dist, order) + regularization * np.eye(n)
    affine_in = np.column_stack([np.ones(n), src])  # (n, 3)
    system = np.zeros((n + 3, n + 3))
    system[:n, :n] = kernel
    system[:n, n:] = affine_in
    system[n:, :n] = affine_in.T
    rhs = np.zeros((n + 3, 2))
    rhs[:n] = dst

    cond = float(np.linalg.cond(system))
    try:
        solution = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError:
        solution = np.linalg.lstsq(system, rhs, rcond=None)[0]

    model = SplineModel(
        kernel_order=order,
        nodes=src,
        rbf_weights=solution[:n],
        affine_terms=solution[n:],
        regularization=regularization,
        condition_number=cond,
    )
    if regularization == 0.0:
        residual = float(np.max(np.abs(model.predict(src) - dst)))
        if not np.isfinite(residual) or residual > _INTERP_TOL:
            raise SplineSingularError(
                f"spline fit cannot reproduce its control points, residual {residual:.3e}",
                condition_number=cond,
            )
    return model


def dense_backward_flow(cps: ControlPointSet, tau: int, nu: int) -> np.ndarray:
    """Source-coordinate lookup for every output pixel, shape (nu, tau, 2).

    Fits the destination-to-source spline and evaluates it on the full
    pixel grid: entry [f, t] holds the (time, freq) position in the input
    image that output pixel (t, f) should sample.
    """
    model = fit_spline(cps.swapped())
    tt, ff = np.meshgrid(np.arange(tau, dtype=np.float64), np.arange(nu, dtype=np.float64))
    queries = np.column_stack([tt.ravel(), ff.ravel()])
    return model.predict(queries).reshape(nu, tau, 2)


def _bilinear_sample(values: np.ndarray, coords: np.ndarray) -> np.ndarray:
    """Sample (nu x tau) `values` at fractional (time, freq) coords with edge clamp."""
    nu, tau = values.shape
    t = np.clip(coords[..., 0], 0.0, tau - 1.0)
    f = np.clip(coords[..., 1], 0.0, nu - 1.0)
    t0 = np.floor(t).astype(np.intp)
    f0 = np.floor(f).astype(np.intp)
    t1 = np.minimum(t0 + 1, tau - 1)
    f1 = np.minimum(f0 + 1, nu - 1)
    wt = t - t0
    wf = f - f0
    return (
        values[f0, t0] * (1.0 - wf) * (1.0 - wt)
        + values[f1, t0] * wf * (1.0 - wt)
        + values[f0, t1] * (1.0 - wf) * wt
        + values[f1, t1] * wf * wt
    )


def warp_spectrogram(spec: Spectrogram, cps: ControlPointSet) -> Spectrogram:
    """Apply a control-point warp to a spectrogram.

    Identity control sets return the input untouched (bit-equal).  The
    output keeps the input's normalization metadata: warping zero-mean
    data can drift the empirical mean slightly, but the data stays
    calibrated to the zero-mean convention the masking stages rely on.
    """
    tau, nu = spec.tau, spec.nu
    if cps.is_identity:
        return spec
    pts = np.vstack([cps.source_points, cps.dest_points])
    if (
        pts[:, 0].min() < 0
        or pts[:, 0].max() > tau - 1
        or pts[:, 1].min() < 0
        or pts[:, 1].max() > nu - 1
    ):
        raise ValueError("control points fall outside the image bounds")
    flow = dense_backward_flow(cps, tau, nu)
    warped = _bilinear_sample(spec.values, flow)
    return spec.with_values(warped)
