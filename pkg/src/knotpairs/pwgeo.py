"""Piecewise geodesics: validation, chord-closeness, straightness grid search.

A path is a list of vertices joined by geodesic segments; its quality
constants are B = min segment length and alpha = min interior angle.  The
main measurement is the Hausdorff distance between the sampled path and the
geodesic through its endpoints ("the chord").

Distances from a point to a geodesic are read off a (T, rho) profile: T the
axial parameter of the nearest-point projection, rho the offset.  Any point
pair then satisfies cosh d(chord(T), p_j) = cosh(rho_j) cosh(T - T_j), which
gives the reverse Hausdorff direction without further geometry.

Long random paths (the grid search uses total lengths up to several hundred)
cannot be measured against their chord in fixed precision: the transverse
offset of a mid-path point is e^{-D} below its coordinate scale.  The grid
search therefore marches frame poses in mpmath at a precision matched to the
path length and only then measures each segment in well-conditioned local
float64 frames.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from mpmath import mp

from . import h3
from .h3 import Geodesic, HypIsometry, UHPoint


@dataclass(frozen=True)
class PiecewiseGeodesic:
    vertices: tuple[UHPoint, ...]

    def __init__(self, vertices: Sequence[UHPoint]):
        vertices = tuple(vertices)
        if len(vertices) < 2:
            raise ValueError("need at least two vertices")
        for p, q in zip(vertices, vertices[1:]):
            if h3.dist(p, q) < 1e-12:
                raise ValueError("consecutive vertices must be distinct")
        object.__setattr__(self, "vertices", vertices)

    @property
    def segment_lengths(self) -> list[float]:
        return [h3.dist(p, q) for p, q in zip(self.vertices, self.vertices[1:])]

    @property
    def interior_angles(self) -> list[float]:
        v = self.vertices
        return [h3.vertex_angle(v[i], v[i + 1], v[i + 2]) for i in range(len(v) - 2)]

    @property
    def min_segment_length(self) -> float:
        return min(self.segment_lengths)

    @property
    def min_interior_angle(self) -> float:
        angles = self.interior_angles
        return min(angles) if angles else math.pi


def validate(path: PiecewiseGeodesic, B: float, alpha: float) -> bool:
    """True iff every segment has length >= B and every interior angle >= alpha."""
    if any(l < B for l in path.segment_lengths):
        return False
    return all(a >= alpha for a in path.interior_angles)


# ---------------------------------------------------------------------------
# Profiles against a geodesic
# ---------------------------------------------------------------------------

def standardize_to_axis(geo: Geodesic) -> HypIsometry:
    """Moebius transformation sending geo to the vertical axis (0, infinity)."""
    e1, e2 = geo.e1, geo.e2
    if e1 is None:
        return HypIsometry.from_matrix([[0, 1], [1, -e2]])
    if e2 is None:
        return HypIsometry.from_matrix([[1, -e1], [0, 1]])
    return HypIsometry.from_matrix([[1, -e1], [1, -e2]])


def axis_profile(points: Sequence[UHPoint], geo: Geodesic) -> tuple[np.ndarray, np.ndarray]:
    """(T, rho) per point: sinh(rho) = |z|/t and T = log sqrt(|z|^2+t^2) once
    the geodesic is the vertical axis."""
    q = standardize_to_axis(geo)
    T = np.empty(len(points))
    rho = np.empty(len(points))
    for i, p in enumerate(points):
        w = h3.mobius_apply(q, p)
        r2 = abs(w.z) ** 2 + w.t * w.t
        T[i] = 0.5 * math.log(r2)
        rho[i] = math.asinh(abs(w.z) / w.t)
    return T, rho


def sample_path(path: PiecewiseGeodesic, samples_per_segment: int) -> list[UHPoint]:
    if samples_per_segment < 2:
        raise ValueError("need at least 2 samples per segment")
    out: list[UHPoint] = []
    verts = path.vertices
    for i in range(len(verts) - 1):
        x = h3.to_hyperboloid(verts[i])
        y = h3.to_hyperboloid(verts[i + 1])
        L = h3.dist_hyperboloid(x, y)
        m = h3.unit_tangent(x, y)
        first = i == 0
        for s in np.linspace(0.0, L, samples_per_segment):
            if not first and s == 0.0:
                continue  # avoid duplicating shared vertices
            out.append(h3.from_hyperboloid(h3.geodesic_step(x, m, float(s))))
    return out


def chord_geodesic(path: PiecewiseGeodesic) -> Geodesic:
    """Geodesic through the endpoints of the path."""
    x = h3.to_hyperboloid(path.vertices[0])
    y = h3.to_hyperboloid(path.vertices[-1])
    m = h3.unit_tangent(x, y)
    return Geodesic(_null_to_boundary(x - m), _null_to_boundary(x + m))


def _null_to_boundary(n: np.ndarray) -> Optional[complex]:
    den = n[0] - n[3]
    if abs(den) < 1e-14 * max(abs(n[0]), 1.0):
        return None
    return complex(n[1], n[2]) / den


def _reverse_sup(T: np.ndarray, rho: np.ndarray, n_chord: int = 128) -> float:
    """sup over chord points (between the extreme projections) of the distance
    to the profiled path, via cosh d = cosh(rho) cosh(T - T_path).

    Consecutive profile entries are treated as linearly interpolated in
    (T, rho), so a path lying on its chord measures 0 rather than half the
    sample spacing.
    """
    Ts = np.linspace(T.min(), T.max(), n_chord)[:, None]
    T0, T1 = T[:-1][None, :], T[1:][None, :]
    r0, r1 = rho[:-1][None, :], rho[1:][None, :]
    dT = T1 - T0
    lam = np.clip((Ts - T0) / np.where(np.abs(dT) < 1e-300, 1e-300, dT), 0.0, 1.0)
    Tst = T0 + lam * dT
    rst = r0 + lam * (r1 - r0)
    gap = Ts - Tst
    m = np.cosh(rst) * np.cosh(gap)
    # small-distance form: arccosh near 1 would amplify rounding to ~1e-8
    d = np.where(m - 1.0 < 1e-12,
                 np.hypot(rst, gap),
                 np.arccosh(np.maximum(m, 1.0)))
    return float(d.min(axis=1).max())


def hausdorff_profile(T: np.ndarray, rho: np.ndarray) -> float:
    return max(float(rho.max()), _reverse_sup(T, rho))


def chord_hausdorff(path: PiecewiseGeodesic, samples_per_segment: int = 64) -> float:
    """Symmetric Hausdorff estimate between the sampled path and its chord.

    Fixed-precision route: trustworthy while the path diameter stays a few
    tens of units (use the grid-search machinery for longer paths).
    """
    pts = sample_path(path, samples_per_segment)
    T, rho = axis_profile(pts, chord_geodesic(path))
    return hausdorff_profile(T, rho)


def hausdorff_to_geodesic(path: PiecewiseGeodesic, geo: Geodesic,
                          samples_per_segment: int = 64) -> float:
    """One-sided sup over path samples of the distance to geo."""
    pts = sample_path(path, samples_per_segment)
    _, rho = axis_profile(pts, geo)
    return float(rho.max())


def segment_projections(path: PiecewiseGeodesic, geo: Geodesic
                        ) -> tuple[list[float], float]:
    """Projected length of every segment under nearest-point projection to
    geo, plus the total displacement between the endpoint projections."""
    T, _ = axis_profile(path.vertices, geo)
    per_segment = [abs(float(T[i + 1] - T[i])) for i in range(len(T) - 1)]
    return per_segment, abs(float(T[-1] - T[0]))


# ---------------------------------------------------------------------------
# Random (B, alpha) paths
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PathSpec:
    """Length/bend data defining a path up to isometry: segment lengths,
    per-vertex deflections (pi - interior angle) and twists."""
    lengths: tuple[float, ...]
    deflections: tuple[float, ...]
    twists: tuple[float, ...]


def random_path_spec(rng: np.random.Generator, B: float, alpha: float,
                     n_segments: int = 20) -> PathSpec:
    """Segments uniform in [B, 2B]; each new direction deflects from the
    previous one by at most pi - alpha with a uniform twist."""
    lengths = tuple(float(x) for x in rng.uniform(B, 2 * B, n_segments))
    deflections = tuple(float(x) for x in rng.uniform(0.0, math.pi - alpha,
                                                      n_segments - 1))
    twists = tuple(float(x) for x in rng.uniform(0.0, 2 * math.pi, n_segments - 1))
    return PathSpec(lengths, deflections, twists)


def _boost(L):
    c, s = math.cosh(L), math.sinh(L)
    return np.array([[c, s, 0, 0], [s, c, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def _turn(deflection, twist):
    cd, sd = math.cos(deflection), math.sin(deflection)
    ct, st = math.cos(twist), math.sin(twist)
    defl = np.array([[1, 0, 0, 0], [0, cd, -sd, 0], [0, sd, cd, 0], [0, 0, 0, 1]])
    tw = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, ct, -st], [0, 0, st, ct]])
    return tw @ defl

def spec_to_path(spec: PathSpec) -> PiecewiseGeodesic:
    """Realize a path spec in fixed precision (fine for short paths)."""
    pose = np.eye(4)
    o = np.array([1.0, 0.0, 0.0, 0.0])
    verts = [h3.from_hyperboloid(pose @ o)]
    for i, L in enumerate(spec.lengths):
        pose = pose @ _boost(L)
        verts.append(h3.from_hyperboloid(pose @ o))
        if i < len(spec.lengths) - 1:
            pose = pose @ _turn(spec.deflections[i], spec.twists[i])
    return PiecewiseGeodesic(verts)


# ---------------------------------------------------------------------------
# High-precision chord profile for long paths
# ---------------------------------------------------------------------------

def _mp_mix_cols(cols, i, j, cii, cij, cji, cjj):
    """cols <- cols * M for the 2x2 block M = [[cii, cij], [cji, cjj]] acting
    on input axes (i, j); cols[k][r] is entry (r, k) of the pose."""
    a, b = cols[i], cols[j]
    cols[i] = [cii * x + cji * y for x, y in zip(a, b)]
    cols[j] = [cij * x + cjj * y for x, y in zip(a, b)]

def _mp_boost_cols(cols, L):
    c, s = mp.cosh(L), mp.sinh(L)
    _mp_mix_cols(cols, 0, 1, c, s, s, c)

def _mp_turn_cols(cols, deflection, twist):
    ct, st = mp.cos(twist), mp.sin(twist)
    _mp_mix_cols(cols, 2, 3, ct, -st, st, ct)
    cd, sd = mp.cos(deflection), mp.sin(deflection)
    _mp_mix_cols(cols, 1, 2, cd, -sd, sd, cd)

def _mp_apply_inverse(cols, v):
    """(G P^T G) v for the Lorentz pose P given by columns."""
    gv = [-v[0], v[1], v[2], v[3]]
    out = [sum(col[r] * gv[r] for r in range(4)) for col in cols]
    out[0] = -out[0]
    return out

def _mp_mink(x, y):
    return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3]

def _mp_orthocomplement(b0, b1):
    """Two orthonormal spacelike vectors spanning the complement of the
    (timelike b0, spacelike b1) plane."""
    basis = []
    for k in (2, 3, 1, 0):
        cand = [mp.mpf(1) if r == k else mp.mpf(0) for r in range(4)]
        v = [cand[r] + _mp_mink(cand, b0) * b0[r] - _mp_mink(cand, b1) * b1[r]
             for r in range(4)]
        for u in basis:
            cu = _mp_mink(v, u)
            v = [v[r] - cu * u[r] for r in range(4)]
        n2 = _mp_mink(v, v)
        if n2 > mp.mpf("1e-12"):
            nrm = mp.sqrt(n2)
            basis.append([x / nrm for x in v])
            if len(basis) == 2:
                return basis[0], basis[1]
    raise RuntimeError("degenerate chord frame")


def spec_chord_profile(spec: PathSpec, samples_per_segment: int = 64
                       ) -> tuple[np.ndarray, np.ndarray]:
    """(T, rho) profile of a long path against its chord.

    Poses are marched in mpmath at a precision matched to the total length;
    every segment is then sampled in the local frames of its two end vertices
    (well-conditioned in float64) against the locally re-based chord frame.
    """
    total = sum(spec.lengths)
    n = len(spec.lengths)
    # the slide below cancels products of size e^{2 T}, so the precision
    # budget must cover e^{2 total}
    with mp.workdps(int(0.8686 * total) + 40):
        one, zero = mp.mpf(1), mp.mpf(0)
        cols = [[one, zero, zero, zero], [zero, one, zero, zero],
                [zero, zero, one, zero], [zero, zero, zero, one]]
        poses = [[list(c) for c in cols]]
        for i, L in enumerate(spec.lengths):
            _mp_boost_cols(cols, L)
            if i < n - 1:
                _mp_turn_cols(cols, spec.deflections[i], spec.twists[i])
            poses.append([list(c) for c in cols])
        origin = [one, zero, zero, zero]
        end = [poses[-1][0][r] for r in range(4)]  # first column = endpoint
        # chord frame based at the start vertex (= origin of the start pose)
        c = _mp_mink(end, origin)
        nrm = mp.sqrt(c * c - 1)
        e1 = [(end[r] + c * origin[r]) / nrm for r in range(4)]
        anchors = []
        local_frames = []
        for P in poses:
            c0 = _mp_apply_inverse(P, origin)
            c1 = _mp_apply_inverse(P, e1)
            # slide the frame base to the nearest point of the current vertex;
            # log form keeps tanh(T*) = -c1[0]/c0[0] well conditioned
            high = (c0[0] - c1[0]) / 2
            low = (c0[0] + c1[0]) / 2
            tstar = mp.log(high / low) / 2
            ch, sh = mp.cosh(tstar), mp.sinh(tstar)
            b0 = [x * ch + y * sh for x, y in zip(c0, c1)]
            b1 = [x * sh + y * ch for x, y in zip(c0, c1)]
            n2, n3 = _mp_orthocomplement(b0, b1)
            anchors.append(float(tstar))
            local_frames.append(tuple(np.array([float(v) for v in vec])
                                      for vec in (b0, b1, n2, n3)))
    # float64 sampling, each segment measured from both of its end frames
    Ts: list[np.ndarray] = []
    rhos: list[np.ndarray] = []
    half = samples_per_segment // 2
    for i, L in enumerate(spec.lengths):
        s_lo = np.linspace(0.0, L / 2, half, endpoint=False)
        x = np.zeros((half, 4))
        x[:, 0] = np.cosh(s_lo)
        x[:, 1] = np.sinh(s_lo)
        _accumulate_profile(x, local_frames[i], anchors[i], Ts, rhos)
        # second half, viewed backward from the far vertex: the incoming
        # direction there is the forward axis before that vertex's turn,
        # i.e. -e1 after applying the inverse turn; u descends so the profile
        # stays in path order
        s_hi = np.linspace(L / 2, 0.0, samples_per_segment - half)
        y = np.zeros((len(s_hi), 4))
        y[:, 0] = np.cosh(s_hi)
        if i < n - 1:
            back = _turn(spec.deflections[i], spec.twists[i]).T @ np.array([0.0, -1.0, 0.0, 0.0])
        else:
            back = np.array([0.0, -1.0, 0.0, 0.0])
        y += np.outer(np.sinh(s_hi), back)
        _accumulate_profile(y, local_frames[i + 1], anchors[i + 1], Ts, rhos)
    return np.concatenate(Ts), np.concatenate(rhos)


def _accumulate_profile(x, frame, anchor, Ts, rhos):
    b0, b1, n2, n3 = frame
    g = np.array([-1.0, 1.0, 1.0, 1.0])
    a = -(x @ (b0 * g))
    b = x @ (b1 * g)
    # transverse components resolve small offsets that a^2 - b^2 cannot
    rho = np.arcsinh(np.hypot(x @ (n2 * g), x @ (n3 * g)))
    Ts.append(anchor + np.arctanh(np.clip(b / a, -1 + 1e-15, 1 - 1e-15)))
    rhos.append(rho)


def spec_chord_hausdorff(spec: PathSpec, samples_per_segment: int = 64) -> float:
    T, rho = spec_chord_profile(spec, samples_per_segment)
    return hausdorff_profile(T, rho)


# ---------------------------------------------------------------------------
# Straightness grid search
# ---------------------------------------------------------------------------

def empirical_constants(xi: float, B_grid: Sequence[float],
                        alpha_grid: Sequence[float], trials: int, seed: int,
                        n_segments: int = 20, samples_per_segment: int = 64
                        ) -> dict:
    """Grid search for quality constants that keep random paths xi-close to
    their chord.

    For each (B, alpha) cell, `trials` random paths are generated (segments in
    [B, 2B], interior angles in [alpha, pi], uniform twist) and the max chord
    Hausdorff is recorded; cells with max < xi pass.  Reported is the full
    grid plus the Pareto set of passing cells (no other passing cell with both
    coordinates weaker).
    """
    if not B_grid or not alpha_grid:
        raise ValueError("grids must be nonempty")
    cells = []
    for bi, B in enumerate(B_grid):
        for ai, alpha in enumerate(alpha_grid):
            worst = 0.0
            for trial in range(trials):
                rng = np.random.default_rng(
                    np.random.SeedSequence(entropy=int(seed),
                                           spawn_key=(bi, ai, trial)))
                spec = random_path_spec(rng, B, alpha, n_segments)
                worst = max(worst, spec_chord_hausdorff(spec, samples_per_segment))
            cells.append({"B": float(B), "alpha": float(alpha),
                          "max_hausdorff": worst, "passes": bool(worst < xi)})
    passing = [c for c in cells if c["passes"]]
    pareto = [c for c in passing
              if not any(o is not c and o["B"] <= c["B"] and o["alpha"] <= c["alpha"]
                         and (o["B"], o["alpha"]) != (c["B"], c["alpha"])
                         for o in passing)]
    return {"xi": xi, "trials": trials, "seed": seed, "n_segments": n_segments,
            "cells": cells, "pareto": pareto}
