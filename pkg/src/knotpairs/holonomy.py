"""2-bridge knot groups: presentations, parabolic representations, and
(1,n) Dehn-filling holonomies.

The group of the p/q 2-bridge knot is presented as < a, b | a w = w b > with
w = b^{e_1} a^{e_2} ... a^{e_{p-1}}, e_i = (-1)^{floor(i q / p)}; the
0-framed longitude is w * reverse(w) * a^{-2e} with e the total exponent sum
of w (null-homologous, commutes with the meridian a).

Representations use the one-parameter family

    a -> [[s, 1], [0, 1/s]],    b -> [[s, 0], [-c, 1/s]]

whose s = 1 slice is the parabolic (Riley) family; the defining polynomial in
c is extracted exactly as the gcd of the entries of rho(a w) - rho(w b).  The
(1, n) filling is solved by continuing c along a path in the meridian
eigenvalue and applying a secant iteration to u + n v(u) - 2 pi i, where
u = 2 log s and v is the longitude's complex length, branch-tracked from the
cusp.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Callable, Optional, Sequence

import numpy as np
import sympy as sp

from . import h3, words
from .h3 import ComplexLength, HypIsometry
from .words import Word

TWO_PI_I = 2j * math.pi


class InvalidNormalForm(ValueError):
    pass


class NoNonrealRoot(ValueError):
    """No candidate for a discrete faithful representation (torus knot)."""


class ContinuationLost(RuntimeError):
    pass


class NewtonDiverged(RuntimeError):
    pass


class LongitudeNotParabolic(RuntimeError):
    pass


class NormalizationFailed(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoBridgeKnot:
    p: int
    q: int
    w_word: Word          # the relator conjugator: a w = w b
    relator_word: Word    # a w b^-1 w^-1
    longitude_word: Word

    def __str__(self):
        return f"TwoBridgeKnot({self.p}/{self.q})"


def two_bridge_presentation(p: int, q: int) -> TwoBridgeKnot:
    """Presentation and 0-framed longitude of the p/q 2-bridge knot."""
    if p < 3 or p % 2 == 0 or not (0 < q < p) or gcd(p, q) != 1:
        raise InvalidNormalForm(f"need odd p >= 3 and 0 < q < p coprime, got {p}/{q}")
    letters = []
    for i in range(1, p):
        e = (-1) ** ((i * q) // p)
        base = 2 if i % 2 == 1 else 0  # odd slots are b, even slots are a
        letters.append(base if e > 0 else base ^ 1)
    w = words.reduce(letters)
    if len(w) != p - 1:
        raise InvalidNormalForm("normal-form word unexpectedly reduced")
    a = words.parse_word("a")
    relator = words.concat(words.concat(a, w),
                           words.inverse(words.concat(w, words.parse_word("b"))))
    na, nb = words.abelianize(w)
    e = na + nb
    lon = words.concat(words.concat(w, w[::-1]), words.power(a, -2 * e))
    knot = TwoBridgeKnot(p, q, w, relator, lon)
    _check_presentation_invariants(knot)
    return knot


def _check_presentation_invariants(knot: TwoBridgeKnot) -> None:
    ra, rb = words.abelianize(knot.relator_word)
    if ra + rb != 0:
        raise InvalidNormalForm("relator not consistent with H1 = Z")
    la, lb = words.abelianize(knot.longitude_word)
    if la + lb != 0:
        raise InvalidNormalForm("longitude not null-homologous")
    # commutation with the meridian, witnessed in a solved representation
    coeffs = riley_polynomial(knot)
    roots = np.roots(coeffs) if len(coeffs) > 1 else np.array([])
    for c0 in roots[:1]:
        ev = _parabolic_evaluator(complex(c0))
        lm = ev(knot.longitude_word).matrix()
        am = ev(words.parse_word("a")).matrix()
        comm = lm @ am @ np.linalg.inv(lm) @ np.linalg.inv(am)
        if min(np.abs(comm - np.eye(2)).max(), np.abs(comm + np.eye(2)).max()) > 1e-8:
            raise InvalidNormalForm("longitude does not commute with the meridian")


# ---------------------------------------------------------------------------
# Parabolic representations
# ---------------------------------------------------------------------------

def _parabolic_evaluator(c: complex) -> Callable[[Word], HypIsometry]:
    A = np.array([[1, 1], [0, 1]], dtype=complex)
    B = np.array([[1, 0], [-c, 1]], dtype=complex)
    return _word_evaluator(A, B)


def _word_evaluator(A: np.ndarray, B: np.ndarray) -> Callable[[Word], HypIsometry]:
    gens = (A, np.linalg.inv(A), B, np.linalg.inv(B))

    def evaluate(w: Word) -> HypIsometry:
        m = np.eye(2, dtype=complex)
        for code in w:
            m = m @ gens[code]
        return HypIsometry(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    return evaluate


def riley_polynomial(knot: TwoBridgeKnot) -> np.ndarray:
    """Integer coefficients (highest degree first) of the defining polynomial:
    the gcd of the entries of rho(a w) - rho(w b) over Q[c]."""
    c = sp.symbols("c")
    A = sp.Matrix([[1, 1], [0, 1]])
    B = sp.Matrix([[1, 0], [-c, 1]])
    gens = (A, A.inv(), B, B.inv())
    W = sp.eye(2)
    for code in knot.w_word:
        W = W * gens[code]
    E = sp.expand(A * W - W * B)
    g = sp.S.Zero
    for entry in E:
        g = sp.gcd(g, entry)
    poly = sp.Poly(g, c)
    coeffs = [sp.Rational(x) for x in poly.all_coeffs()]
    den = sp.lcm([x.q for x in coeffs])
    ints = [int(x * den) for x in coeffs]
    if ints[0] < 0:
        ints = [-x for x in ints]
    return np.array(ints, dtype=object)


@dataclass(frozen=True)
class ParabolicRep:
    knot: TwoBridgeKnot
    c: complex
    geometric: bool

    @cached_property
    def evaluator(self) -> Callable[[Word], HypIsometry]:
        return _parabolic_evaluator(self.c)

    def relator_residual(self) -> float:
        m = self.evaluator(self.knot.relator_word)
        return h3.psl_distance(m, HypIsometry.identity())


def solve_parabolic(knot: TwoBridgeKnot, residual_tol: float = 1e-10
                    ) -> list[ParabolicRep]:
    """All parabolic representations (one per root of the defining
    polynomial), geometric candidates flagged.  Raises NoNonrealRoot when
    every root is real (no hyperbolic structure to continue from)."""
    coeffs = np.array([float(x) for x in riley_polynomial(knot)])
    roots = np.roots(coeffs)
    roots = sorted((complex(r) for r in roots), key=lambda z: (z.imag, z.real))
    reps = []
    for r in roots:
        rep = ParabolicRep(knot, r, geometric=abs(r.imag) > 1e-8)
        res = rep.relator_residual()
        if res > residual_tol:
            # polish with one round of roots refinement via Newton on the poly
            r2 = _polish_root(coeffs, r)
            rep = ParabolicRep(knot, r2, geometric=abs(r2.imag) > 1e-8)
            if rep.relator_residual() > residual_tol:
                raise ArithmeticError(f"root {r} fails the relator residual")
        reps.append(rep)
    if not any(rep.geometric for rep in reps):
        raise NoNonrealRoot(f"{knot} has only real parabolic representations")
    return reps


def _polish_root(coeffs: np.ndarray, r: complex, iters: int = 50) -> complex:
    der = np.polyder(coeffs)
    for _ in range(iters):
        f = np.polyval(coeffs, r)
        fp = np.polyval(der, r)
        if fp == 0:
            break
        step = f / fp
        r -= step
        if abs(step) < 1e-16 * max(1.0, abs(r)):
            break
    return r


def geometric_rep(knot: TwoBridgeKnot) -> ParabolicRep:
    """The selected discrete-faithful candidate: nonreal root, Im c > 0."""
    for rep in solve_parabolic(knot):
        if rep.geometric and rep.c.imag > 0:
            return rep
    raise NoNonrealRoot(f"{knot}: no root with positive imaginary part")


def cusp_parameter(rep: ParabolicRep, knot: Optional[TwoBridgeKnot] = None
                   ) -> complex:
    """Longitude translation once the meridian is normalized to z -> z + 1
    fixing infinity."""
    knot = knot or rep.knot
    if not rep.geometric:
        raise LongitudeNotParabolic("need a geometric representation")
    mer = rep.evaluator(words.parse_word("a"))
    lon = rep.evaluator(knot.longitude_word)
    q = _normalize_parabolic_to_unit_translation(mer)
    lonn = q @ lon @ q.inverse()
    m = lonn.matrix()
    if abs(m[0, 0]) < 0.5 or abs(m[1, 0]) > 1e-8 * max(1.0, abs(m[0, 1])):
        raise LongitudeNotParabolic("longitude does not fix infinity")
    tau0 = m[0, 1] / m[0, 0]
    if abs(m[0, 0] - m[1, 1]) > 1e-8 or abs(abs(m[0, 0]) - 1) > 1e-8:
        raise LongitudeNotParabolic("longitude image is not parabolic")
    return complex(tau0)


def _normalize_parabolic_to_unit_translation(g: HypIsometry) -> HypIsometry:
    """Conjugator q with q g q^-1 = [[1, 1], [0, 1]] (up to sign)."""
    tr = g.trace()
    sign = 1 if abs(tr - 2) < abs(tr + 2) else -1
    m = g.matrix() * sign
    if abs(m[1, 0]) < 1e-14:
        move = HypIsometry.identity()
    else:
        fp = (m[0, 0] - m[1, 1]) / (2 * m[1, 0])
        move = HypIsometry.from_matrix([[0, 1], [-1, fp]])  # sends fp to infinity
    g1 = (move @ HypIsometry.from_matrix(m) @ move.inverse()).matrix()
    mu = g1[0, 1] / g1[0, 0]
    lam = 1 / cmath.sqrt(mu)
    scale = HypIsometry(lam, 0, 0, 1 / lam)
    return scale @ move

# ---------------------------------------------------------------------------
# Dehn-filled representations
# ---------------------------------------------------------------------------

class CuspData:
    """Horoball height t0 (the horoball is {t >= t0}) and cusp parameter."""

    def __init__(self, t0: float, tau0: complex):
        if not t0 > 0:
            raise ValueError("t0 must be positive")
        if abs(tau0.imag) < 1e-12:
            raise ValueError("cusp parameter must be nonreal")
        self.t0 = float(t0)
        self.tau0 = complex(tau0)

    def longitude_translation(self) -> float:
        return h3.horosphere_translation(self.tau0, self.t0)

    def __repr__(self):
        return f"CuspData(t0={self.t0}, tau0={self.tau0})"


def _poly_mul(p1, p2):
    return np.convolve(p1, p2)

def _poly_add(p1, p2):
    n = max(len(p1), len(p2))
    return np.pad(p1, (0, n - len(p1))) + np.pad(p2, (0, n - len(p2)))

def _mat_poly_mul(m1, m2):
    out = [[None, None], [None, None]]
    for i in range(2):
        for j in range(2):
            out[i][j] = _poly_add(_poly_mul(m1[i][0], m2[0][j]),
                                  _poly_mul(m1[i][1], m2[1][j]))
    return out


def _condition_polys(knot: TwoBridgeKnot, s: complex) -> list[np.ndarray]:
    """Entries of rho(a) rho(w) - rho(w) rho(b) as polynomials in c
    (coefficient arrays, lowest degree first) at a fixed meridian eigenvalue."""
    one = lambda z: np.array([z], dtype=complex)
    A = [[one(s), one(1)], [one(0), one(1 / s)]]
    Ai = [[one(1 / s), one(-1)], [one(0), one(s)]]
    B = [[one(s), one(0)], [np.array([0, -1], dtype=complex), one(1 / s)]]
    Bi = [[one(1 / s), one(0)], [np.array([0, 1], dtype=complex), one(s)]]
    gens = (A, Ai, B, Bi)
    W = [[one(1), one(0)], [one(0), one(1)]]
    for code in knot.w_word:
        W = _mat_poly_mul(W, gens[code])
    AW = _mat_poly_mul(A, W)
    WB = _mat_poly_mul(W, B)
    return [_poly_add(AW[i][j], -WB[i][j]) for i in range(2) for j in range(2)]


def _gauss_newton_c(polys: Sequence[np.ndarray], c: complex,
                    tol: float = 1e-13, maxit: int = 60) -> tuple[complex, float]:
    """Solve the (consistent, overdetermined) polynomial system for c."""
    ders = [np.polyder(p[::-1])[::-1] for p in polys]
    for _ in range(maxit):
        F = np.array([np.polyval(p[::-1], c) for p in polys])
        J = np.array([np.polyval(d[::-1], c) for d in ders])
        jj = np.vdot(J, J).real
        if jj == 0:
            return c, float("inf")
        dc = -np.vdot(J, F) / jj
        c = c + dc
        if abs(dc) < tol:
            break
    F = np.array([np.polyval(p[::-1], c) for p in polys])
    return c, float(np.abs(F).max())


class _FillingPath:
    """Continuation state along a path in u = 2 log s: tracks the Riley
    parameter, the longitude's sign lift, and the branch of v."""

    def __init__(self, knot: TwoBridgeKnot, c0: complex):
        self.knot = knot
        self.c = c0
        self.v = 0.0 + 0.0j
        self.sign = None
        self.u = 0.0 + 0.0j
        self.residual = 0.0

    def _eval_at(self, u: complex) -> complex:
        s = cmath.exp(u / 2)
        c, res = _gauss_newton_c(_condition_polys(self.knot, s), self.c)
        if not math.isfinite(res) or res > 1e-9:
            raise ContinuationLost(f"lost the root near u = {u} (residual {res:.2e})")
        self.c = c
        self.residual = res
        ev = filled_evaluator(s, c)
        L = ev(self.knot.longitude_word).matrix()
        if abs(L[1, 0]) > 1e-6:
            raise ContinuationLost("longitude stopped sharing the meridian axis")
        lam = L[0, 0]
        if self.sign is None:
            self.sign = 1 if abs(lam - 1) < abs(lam + 1) else -1
        lam = self.sign * lam
        if lam.real < 0:  # keep the SL2 lift continuous
            self.sign, lam = -self.sign, -lam
        v = 2 * cmath.log(lam)
        k = round((self.v - v).imag / (4 * math.pi))
        v += 4j * math.pi * k
        self.v = v
        self.u = u
        return v

    def walk_to(self, u_target: complex, max_step: float = 0.02,
                max_halvings: int = 8) -> complex:
        """Move u to u_target in steps, halving the step on failures."""
        while abs(u_target - self.u) > 0:
            state = (self.c, self.v, self.sign, self.u)
            step = u_target - self.u
            n_sub = max(1, int(abs(step) / max_step))
            ok = False
            for halving in range(max_halvings):
                try:
                    for i in range(1, n_sub + 1):
                        self._eval_at(state[3] + step * i / n_sub)
                    ok = True
                    break
                except ContinuationLost:
                    self.c, self.v, self.sign, self.u = state
                    n_sub *= 2
            if not ok:
                raise ContinuationLost(f"continuation stalled near u = {self.u}")
        return self.v


def filled_evaluator(s: complex, c: complex) -> Callable[[Word], HypIsometry]:
    A = np.array([[s, 1], [0, 1 / s]], dtype=complex)
    B = np.array([[s, 0], [-c, 1 / s]], dtype=complex)
    return _word_evaluator(A, B)


@dataclass(frozen=True)
class FilledRep:
    """Holonomy of the (1, n)-filled knot group."""
    knot: TwoBridgeKnot
    n: int
    s: complex
    c: complex
    u: complex
    v: complex

    @property
    def tau(self) -> complex:
        return self.v / self.u

    @cached_property
    def evaluator(self) -> Callable[[Word], HypIsometry]:
        return filled_evaluator(self.s, self.c)

    def relator_residual(self) -> float:
        return h3.psl_distance(self.evaluator(self.knot.relator_word),
                               HypIsometry.identity())

    def filling_residual(self) -> float:
        return abs(self.u + self.n * self.v - TWO_PI_I)

    def meridian(self) -> HypIsometry:
        return self.evaluator(words.parse_word("a"))

    def longitude(self) -> HypIsometry:
        return self.evaluator(self.knot.longitude_word)

    def core_axis(self) -> h3.Geodesic:
        return h3.axis_endpoints(self.longitude())


def solve_filling(knot: TwoBridgeKnot, n: int,
                  seed_rep: Optional[ParabolicRep] = None,
                  tol: float = 1e-12, max_iter: int = 60) -> FilledRep:
    """Solve u + n v(u) = 2 pi i by a complex secant iteration on u, with the
    Riley parameter continued from the parabolic solution."""
    if seed_rep is None:
        seed_rep = geometric_rep(knot)
    tau0 = cusp_parameter(seed_rep)
    path = _FillingPath(knot, seed_rep.c)
    u0 = TWO_PI_I / (1 + n * tau0)
    v0 = path.walk_to(u0)
    h0 = u0 + n * v0 - TWO_PI_I
    u1 = u0 * 1.0005
    v1 = path.walk_to(u1)
    h1 = u1 + n * v1 - TWO_PI_I
    for _ in range(max_iter):
        if h1 == h0:
            break
        u2 = u1 - h1 * (u1 - u0) / (h1 - h0)
        v2 = path.walk_to(u2)
        h2 = u2 + n * v2 - TWO_PI_I
        u0, h0, u1, h1 = u1, h1, u2, h2
        if abs(h1) < tol:
            break
    if abs(h1) > 1e-10:
        raise NewtonDiverged(f"filling equation residual {abs(h1):.2e} at n={n}")
    fr = FilledRep(knot, n, cmath.exp(u1 / 2), path.c, u1, path.v)
    if fr.relator_residual() > 1e-8:
        raise NewtonDiverged("relator residual out of tolerance")
    return fr

# ---------------------------------------------------------------------------
# Peripheral normalization
# ---------------------------------------------------------------------------

def peripheral_forms(fr: FilledRep) -> tuple[HypIsometry, HypIsometry, HypIsometry]:
    """Closed-form peripheral matrices after normalization: the meridian
    W(z) = e^u z + tau (e^u - 1)/(e^v - 1), the longitude V(z) = e^v z + tau,
    and the limiting translation A(z) = z + tau/(1 - e^v) - 1/(1 - e^u)."""
    u, v, tau = fr.u, fr.v, fr.tau
    eu, ev = cmath.exp(u), cmath.exp(v)
    shu, shv = cmath.exp(u / 2), cmath.exp(v / 2)
    W = HypIsometry(shu, tau * (eu - 1) / (ev - 1) / shu, 0, 1 / shu)
    V = HypIsometry(shv, tau / shv, 0, 1 / shv)
    A = HypIsometry.translation(tau / (1 - ev) - 1 / (1 - eu))
    return W, V, A


def normalize_peripheral(fr: FilledRep, residual_tol: float = 1e-8
                         ) -> tuple[HypIsometry, HypIsometry, HypIsometry]:
    """Find the conjugation taking the computed meridian/longitude pair to
    the closed peripheral forms; returns (W, V, A) with residuals checked."""
    Wt, Vt, At = peripheral_forms(fr)
    M = fr.meridian().matrix()
    L = fr.longitude().matrix()
    if abs(L[1, 0]) > 1e-8 or abs(M[1, 0]) > 1e-12:
        raise NormalizationFailed("peripheral pair does not fix infinity")
    lam = L[0, 0]
    sgn = 1 if abs(lam - cmath.exp(fr.v / 2)) < abs(lam + cmath.exp(fr.v / 2)) else -1
    L = sgn * L
    # upper-triangular conjugator q = [[alpha, beta], [0, 1/alpha]]:
    # q X q^-1 keeps the diagonal and maps the corner x12 to
    # alpha^2 x12 + alpha beta (x22 - x11); solve the 2x2 linear system that
    # matches both target corners
    rows = np.array([[M[0, 1], M[1, 1] - M[0, 0]],
                     [L[0, 1], L[1, 1] - L[0, 0]]], dtype=complex)
    # align the sign lifts of the targets with the computed diagonals
    Ms = 1 if abs(M[0, 0] - cmath.exp(fr.u / 2)) < abs(M[0, 0] + cmath.exp(fr.u / 2)) else -1
    rhs = np.array([Wt.b * Ms, Vt.b], dtype=complex)
    try:
        x2, xy = np.linalg.solve(rows, rhs)
    except np.linalg.LinAlgError as exc:
        raise NormalizationFailed("degenerate peripheral configuration") from exc
    alpha = cmath.sqrt(x2)
    beta = xy / alpha
    q = HypIsometry(alpha, beta, 0, 1 / alpha)
    W = q @ fr.meridian() @ q.inverse()
    V = q @ fr.longitude() @ q.inverse()
    if h3.psl_distance(W, Wt) > residual_tol or h3.psl_distance(V, Vt) > residual_tol:
        raise NormalizationFailed(
            f"residuals {h3.psl_distance(W, Wt):.2e}, {h3.psl_distance(V, Vt):.2e}")
    # the normalized longitude must fix infinity and tau/(1 - e^v)
    fix = fr.tau / (1 - cmath.exp(fr.v))
    ax = h3.axis_endpoints(V)
    pts = [ax.e1, ax.e2]
    if not any(p is None for p in pts):
        raise NormalizationFailed("normalized longitude lost the fixed point at infinity")
    finite = pts[0] if pts[1] is None else pts[1]
    if abs(finite - fix) > 1e-6 * max(1.0, abs(fix)):
        raise NormalizationFailed("fixed point mismatch")
    return W, V, At


# ---------------------------------------------------------------------------
# Tube radii and the filling length table
# ---------------------------------------------------------------------------

def tube_radius(fr: FilledRep, cusp: CuspData) -> float:
    """Radius making the core tube's boundary translation of the longitude
    match the cusp value: sinh^2(r) = (cosh|l| - cosh(Re v)) / |cosh v - 1|,
    and r = 0 once |Re v| >= |l|."""
    l_h = cusp.longitude_translation()
    if abs(fr.v.real) >= l_h:
        return 0.0
    sinh2 = (math.cosh(l_h) - math.cosh(fr.v.real)) / abs(cmath.cosh(fr.v) - 1)
    return float(math.asinh(math.sqrt(sinh2)))


def tube_length_value(fr: FilledRep, r_n: float, N: int, k: int) -> float:
    """Boundary translation length of l^{N - k n} on the radius-r_n tube,
    computed through the congruence (N - k n) v = N v + k u (mod 2 pi i)."""
    z = N * fr.v + k * fr.u
    val = math.cosh(z.real) + math.sinh(r_n) ** 2 * abs(cmath.cosh(z) - 1)
    return float(np.arccosh(max(val, 1.0)))


def filling_length_table(frs: Sequence[FilledRep], cusp: CuspData,
                         N: int, k_range: Sequence[int]) -> list[dict]:
    """Tube translation lengths of l^{N-kn} against their cusp limits.

    Columns: the boundary-translation value, the limit
    arccosh(1 + |N tau0 + k|^2 / (2 t0^2)), the cosh-scale lower bound
    (|tau0|^2/(8 t0^2)) (|k Re u/|v|| - |N Re v/|v||)^2 when the three
    large-n conditions hold, and both sides of the Taylor ratio
    |cosh(Nv+ku)-1| / |cosh v - 1| ~ |N tau + k|^2 / |tau|^2."""
    tau0, t0 = cusp.tau0, cusp.t0
    rows = []
    for fr in frs:
        r_n = tube_radius(fr, cusp)
        u, v = fr.u, fr.v
        conds = (abs(N * v.real / abs(v)) < 1,
                 abs(v) * math.cosh(r_n) >= abs(tau0) / (2 * t0),
                 abs(u.real) / abs(v) > abs(tau0.imag) / (2 * abs(tau0) ** 2))
        for k in k_range:
            value = tube_length_value(fr, r_n, N, k)
            limit = float(np.arccosh(1 + abs(N * tau0 + k) ** 2 / (2 * t0 * t0)))
            bound = None
            if all(conds):
                b = (abs(tau0) ** 2 / (8 * t0 * t0)) * (
                    abs(k * u.real / abs(v)) - abs(N * v.real / abs(v))) ** 2
                bound = float(b)
            z = N * v + k * u
            ratio_lhs = abs(cmath.cosh(z) - 1) / abs(cmath.cosh(v) - 1)
            ratio_rhs = abs(N * fr.tau + k) ** 2 / abs(fr.tau) ** 2
            rows.append({"n": fr.n, "N": N, "k": k, "r_n": r_n,
                         "value": value, "limit": limit,
                         "cosh_lower_bound": bound,
                         "taylor_lhs": float(ratio_lhs),
                         "taylor_rhs": float(ratio_rhs)})
    return rows


def asymptotics_report(frs: Sequence[FilledRep], cusp: CuspData) -> dict:
    """Convergence of |Re v|/|v| -> 0, |Re u|/|v| -> |Im tau0|/|tau0|^2 and
    |v| cosh(r_n) -> |tau0|/t0 along a filling sequence."""
    if len(frs) < 3:
        raise ValueError("need at least three filled representations")
    tau0, t0 = cusp.tau0, cusp.t0
    lim_ru = abs(tau0.imag) / abs(tau0) ** 2
    lim_vr = abs(tau0) / t0
    rows = []
    for fr in sorted(frs, key=lambda f: f.n):
        r_n = tube_radius(fr, cusp)
        q1 = abs(fr.v.real) / abs(fr.v)
        q2 = abs(fr.u.real) / abs(fr.v)
        q3 = abs(fr.v) * math.cosh(r_n)
        rows.append({"n": fr.n, "re_v_ratio": q1,
                     "re_u_ratio": q2, "re_u_err": abs(q2 - lim_ru),
                     "v_cosh_r": q3, "v_cosh_r_err": abs(q3 - lim_vr)})
    return {"limits": {"re_v_ratio": 0.0, "re_u_ratio": lim_ru,
                       "v_cosh_r": lim_vr},
            "rows": rows}


# ---------------------------------------------------------------------------
# Tube separation report
# ---------------------------------------------------------------------------

def _reduced_words_in_ab(max_len: int):
    frontier = [bytes([c]) for c in range(4)]
    yield from frontier
    for _ in range(max_len - 1):
        nxt = []
        for w in frontier:
            for c in range(4):
                if w[-1] != c ^ 1:
                    nxt.append(w + bytes([c]))
        frontier = nxt
        yield from frontier


def tube_separation(fr: FilledRep, cusp: CuspData, word_length_bound: int,
                    C: float) -> dict:
    """Min over group elements (words up to the length bound, core powers
    excluded) of d(N_n, h N_n) = max(0, d(axis, h axis) - 2 r_n)."""
    r_n = tube_radius(fr, cusp)
    axis = fr.core_axis()
    lon = fr.longitude()
    # traces of core powers, for the exclusion test
    jmax = (fr.n + 1) * word_length_bound + 2
    core_traces = {}
    lam = lon.matrix()[0, 0]
    for j in range(-jmax, jmax + 1):
        core_traces.setdefault(round((lam ** j + lam ** (-j)).real, 6), []).append(j)
    rows = []
    minimum = math.inf
    for wd in _reduced_words_in_ab(word_length_bound):
        g = fr.evaluator(wd)
        tr = g.trace()
        key = round(tr.real, 6)
        if abs(tr.imag) < 1e-6 and key in core_traces:
            if any(h3.psl_distance(g, lon ** j) < 1e-6 for j in core_traces[key]):
                continue
        im = h3.Geodesic(h3.mobius_boundary(g, axis.e1),
                         h3.mobius_boundary(g, axis.e2))
        d_axes, _, _ = h3.geodesic_distance(axis, im)
        sep = max(0.0, d_axes - 2 * r_n)
        if sep < minimum:
            minimum = sep
            rows.append({"word": words.word_str(wd), "separation": sep})
    return {"r_n": r_n, "C": C, "min_separation": minimum,
            "passes": bool(minimum >= C), "trail": rows}
