"""Generating pairs (m, g l^N) of knot groups and the numerical evidence
that different N give different Nielsen classes.

g is the conjugator read off the presentation (b = g a g^-1 with g = w^-1),
so (m, g l^N) generates for every N and all these pairs share the commutator
trace [m, g l^N] = [m, g].  The distinguishing evidence is metric: positive
words in the pair are uniformly loxodromic (tube-and-chord construction of an
invariant piecewise geodesic), and trace scans separate g l^N from conjugates
of (g l^{N' + kn})^{+-1}.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import h3, holonomy, pwgeo, words
from .h3 import HypIsometry, UHPoint
from .holonomy import CuspData, FilledRep, TwoBridgeKnot
from .words import Word


class DegenerateTube(RuntimeError):
    pass


class PerpendicularNotFound(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# The pairs themselves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratingPair:
    knot: TwoBridgeKnot
    N: int
    first: Word   # the meridian a
    second: Word  # g l^N reduced, g = w^-1


def conjugator_word(knot: TwoBridgeKnot) -> Word:
    """g with b = g a g^-1, read off the relation a w = w b: g = w^-1."""
    return words.inverse(knot.w_word)


def make_pair(knot: TwoBridgeKnot, N: int) -> GeneratingPair:
    g = conjugator_word(knot)
    second = words.concat(g, words.power(knot.longitude_word, N))
    return GeneratingPair(knot, N, words.parse_word("a"), second)


def pair_conjugation_residual(pair: GeneratingPair, evaluator) -> float:
    """Residual of (g l^N) a (g l^N)^-1 = g a g^-1 in a representation."""
    a = evaluator(pair.first)
    s = evaluator(pair.second)
    g = evaluator(conjugator_word(pair.knot))
    lhs = s @ a @ s.inverse()
    rhs = g @ a @ g.inverse()
    return h3.psl_distance(lhs, rhs)


def commutator_check(fr: FilledRep, N_list: Sequence[int]) -> dict:
    """Traces of [m, g l^N] across N; they all equal tr [m, g], so the
    commutator invariant cannot separate these pairs."""
    ev = fr.evaluator
    a = ev(words.parse_word("a"))
    g = ev(conjugator_word(fr.knot))
    lon = ev(fr.knot.longitude_word)

    def comm_trace(x: HypIsometry, y: HypIsometry) -> complex:
        return (x @ y @ x.inverse() @ y.inverse()).trace()

    base = comm_trace(a, g)
    rows = []
    for N in N_list:
        t = comm_trace(a, g @ lon ** N)
        rows.append({"N": N, "trace": t, "deviation": abs(t - base)})
    return {"base_trace": base, "rows": rows,
            "max_deviation": max(r["deviation"] for r in rows)}


# ---------------------------------------------------------------------------
# Positive words in the pair
# ---------------------------------------------------------------------------

def positive_word_matrix(fr: FilledRep, N: int, spec: Sequence[int]) -> HypIsometry:
    """Matrix of (g l^N) m^{b_1} ... (g l^N) m^{b_s} for spec = (b_1..b_s)."""
    if not spec:
        raise ValueError("spec must contain at least one block")
    if any(b < 0 for b in spec):
        raise ValueError("exponents must be nonnegative")
    ev = fr.evaluator
    a = ev(words.parse_word("a"))
    block = ev(conjugator_word(fr.knot)) @ ev(fr.knot.longitude_word) ** N
    m = HypIsometry.identity()
    for b in spec:
        m = m @ block @ a ** b
    return m


def positive_word_length(fr: FilledRep, N: int, spec: Sequence[int]
                         ) -> tuple[h3.ComplexLength, float]:
    """Complex length of the positive word; raises NotLoxodromic when the
    element fails the expected regime (worth reporting as a counterexample)."""
    cls, length = h3.classify_and_length(positive_word_matrix(fr, N, spec))
    if cls != "loxodromic":
        raise h3.NotLoxodromic(f"positive word with spec {tuple(spec)} is {cls}")
    return length, length.a


def conjugacy_trace_scan(fr: FilledRep, N: int, N2: int,
                         k_range: Sequence[int]) -> dict:
    """Trace margins |tr(g l^N) -+ tr((g l^{N2 + k n})^{+-1})| over k; equal
    traces up to sign are necessary for conjugacy, so a positive minimum
    margin is evidence of non-conjugacy."""
    ev = fr.evaluator
    g = ev(conjugator_word(fr.knot))
    lon = ev(fr.knot.longitude_word)
    tr1 = (g @ lon ** N).trace()
    rows = []
    for k in k_range:
        other = g @ lon ** (N2 + k * fr.n)
        tr2 = other.trace()          # tr(h) = tr(h^-1) for det 1
        margin = min(abs(tr1 - tr2), abs(tr1 + tr2))
        rows.append({"k": k, "trace": tr2, "margin": margin})
    return {"N": N, "N2": N2, "trace_N": tr1, "rows": rows,
            "min_margin": min(r["margin"] for r in rows)}


# ---------------------------------------------------------------------------
# The invariant piecewise geodesic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TubeGeometry:
    """Common-perpendicular data between the core tube and its g-translate."""
    r_n: float
    d_axes: float
    B: float            # d(N_n, g N_n) = d_axes - 2 r_n
    t: float            # d(g x, y)
    x: UHPoint          # foot on the boundary of N_n
    y: UHPoint          # foot on the boundary of g N_n


def tube_geometry(fr: FilledRep, cusp: CuspData) -> TubeGeometry:
    r_n = holonomy.tube_radius(fr, cusp)
    if r_n <= 0:
        raise DegenerateTube("tube radius is zero at this cusp height")
    axis = fr.core_axis()
    g = fr.evaluator(conjugator_word(fr.knot))
    g_axis = h3.Geodesic(h3.mobius_boundary(g, axis.e1),
                         h3.mobius_boundary(g, axis.e2))
    d_axes, f1, f2 = h3.geodesic_distance(axis, g_axis)
    if not math.isfinite(d_axes) or d_axes < 1e-9:
        raise PerpendicularNotFound("axes meet or the projection stalled")
    if d_axes <= 2 * r_n:
        raise DegenerateTube("tubes overlap; raise the cusp height")
    x = h3.interpolate(f1, f2, r_n)
    y = h3.interpolate(f2, f1, r_n)
    gx = h3.mobius_apply(g, x)
    return TubeGeometry(r_n, d_axes, d_axes - 2 * r_n, h3.dist(gx, y), x, y)


def gamma_vertices(fr: FilledRep, N: int, spec: Sequence[int],
                   x: UHPoint, y: UHPoint,
                   prefix: Optional[HypIsometry] = None) -> list[UHPoint]:
    """Vertices x, y, w_1 x, w_1 y, ..., w_s x of the fundamental piece of the
    invariant path, w_i the partial products of (g l^N) m^{b_i}."""
    ev = fr.evaluator
    a = ev(words.parse_word("a"))
    g = ev(conjugator_word(fr.knot))
    lonN = ev(fr.knot.longitude_word) ** N
    w = prefix if prefix is not None else HypIsometry.identity()
    verts = [h3.mobius_apply(w, x), h3.mobius_apply(w, y)]
    for i, b in enumerate(spec):
        w = w @ g @ lonN @ a ** b
        verts.append(h3.mobius_apply(w, x))
        if i < len(spec) - 1:
            verts.append(h3.mobius_apply(w, y))
    return verts


def least_passing_N(fr: FilledRep, cusp: CuspData, beta: float = math.pi / 6,
                    k_scan: Sequence[int] = range(-6, 7), N_max: int = 400
                    ) -> dict:
    """Least N whose block translation lengths |l^N m^k| on the tube boundary
    clear B + t + kappa(beta) over the scanned k, plus the geometry report."""
    geo = tube_geometry(fr, cusp)
    consts = h3.beta_constants(beta)
    if geo.r_n < consts.r:
        raise DegenerateTube(f"tube radius {geo.r_n:.3f} below r(beta) = {consts.r:.3f}")
    need = geo.B + geo.t + consts.kappa
    for N in range(1, N_max + 1):
        worst = min(holonomy.tube_length_value(fr, geo.r_n, N, k) for k in k_scan)
        if worst >= need:
            return {"N": N, "need": need, "min_block_length": worst,
                    "geometry": geo, "beta": beta, "kappa": consts.kappa}
    raise PerpendicularNotFound(
        f"no N <= {N_max} clears {need:.3f}; the feasibility window is empty "
        "at this cusp height")


@dataclass(frozen=True)
class GammaAudit:
    path: pwgeo.PiecewiseGeodesic
    N: int
    spec: tuple[int, ...]
    B_meas: float
    alpha_meas: float
    xi_meas: float
    translation_length: float
    lower_bound: float        # 2 s (B_meas - 2 xi_meas)
    geometry: TubeGeometry

    @property
    def passes(self) -> bool:
        return (self.alpha_meas > math.pi / 2
                and self.translation_length >= self.lower_bound
                and pwgeo.validate(self.path, self.B_meas, self.alpha_meas))


def build_gamma_w(fr: FilledRep, N: int, spec: Sequence[int], cusp: CuspData,
                  samples_per_segment: int = 64) -> GammaAudit:
    """Construct the fundamental piece of the invariant piecewise geodesic for
    the positive word with the given spec and audit it: segment lengths,
    interior angles, closeness to the word's axis, and the projected
    translation-length bound."""
    spec = tuple(spec)
    geo = tube_geometry(fr, cusp)
    verts = gamma_vertices(fr, N, spec, geo.x, geo.y)
    path = pwgeo.PiecewiseGeodesic(verts)
    wmat = positive_word_matrix(fr, N, spec)
    cls, length = h3.classify_and_length(wmat)
    if cls != "loxodromic":
        raise h3.NotLoxodromic(f"word is {cls}; no axis to audit against")
    axis = h3.axis_endpoints(wmat)
    xi = pwgeo.hausdorff_to_geodesic(path, axis, samples_per_segment)
    B_meas = path.min_segment_length
    alpha_meas = path.min_interior_angle
    s = len(spec)
    return GammaAudit(path, N, spec, B_meas, alpha_meas, xi,
                      length.a, 2 * s * (B_meas - 2 * xi), geo)
