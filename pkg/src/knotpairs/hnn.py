"""Generating-pair equivalence in the HNN extension <x, y | y x y^-1 = x^2>.

The group acts faithfully and affinely on dyadic rationals by t -> 2^k t + q,
which gives exact normal forms: an element is the pair (k, q) with k the
dilation exponent and q a dyadic rational.  The projection onto k is the
epimorphism to the underlying graph's fundamental group Z, and an element is
elliptic (conjugate into the vertex group <x>) exactly when k = 0.

Words use the same byte encoding as :mod:`knotpairs.words` with letters

    0 = x,  1 = x^-1,  2 = y,  3 = y^-1
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, NamedTuple, Optional

from . import words
from .words import ALL_MOVES, Move, Word, apply_move

_CODE_OF = {"x": 0, "X": 1, "y": 2, "Y": 3}
_CHAR_OF = "xXyY"


class NotElliptic(ValueError):
    """First component of a pair must lie in the kernel of the height map."""


def parse_hnn(s: str) -> Word:
    if s in ("", "1"):
        return words.EMPTY
    try:
        return words.reduce(_CODE_OF[ch] for ch in s)
    except KeyError:
        raise ValueError(f"bad word string {s!r}; letters must be in 'xXyY'")


def hnn_str(w: Word) -> str:
    return "".join(_CHAR_OF[c] for c in w) if w else "1"


@dataclass(frozen=True)
class AffineElem:
    """The map t -> 2^k t + q on dyadic rationals, with exact arithmetic."""

    k: int
    q: Fraction

    def __mul__(self, other: "AffineElem") -> "AffineElem":
        # (k1,q1)(k2,q2): t -> 2^k1 (2^k2 t + q2) + q1
        return AffineElem(self.k + other.k, _two_pow(self.k) * other.q + self.q)

    def inverse(self) -> "AffineElem":
        return AffineElem(-self.k, -_two_pow(-self.k) * self.q)

    def __pow__(self, n: int) -> "AffineElem":
        out = IDENTITY
        g = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            out = out * g
        return out


def _two_pow(k: int) -> Fraction:
    return Fraction(2) ** k


IDENTITY = AffineElem(0, Fraction(0))
GEN_X = AffineElem(0, Fraction(1))
GEN_Y = AffineElem(1, Fraction(0))

_GEN_TABLE = (GEN_X, GEN_X.inverse(), GEN_Y, GEN_Y.inverse())


def eval_affine(w: Word) -> AffineElem:
    out = IDENTITY
    for c in w:
        out = out * _GEN_TABLE[c]
    return out


def pi_height(e: AffineElem) -> int:
    """Height homomorphism onto Z; its kernel is generated by the elliptics."""
    return e.k


def is_elliptic(e: AffineElem) -> bool:
    return e.k == 0


def criterion_check(xp: Word, yp: Word, g: Word, k: int,
                    eps: int, eta: int) -> bool:
    """Check x' = g x^eps g^-1 and y' = g y^eta x^k g^-1 under evaluation."""
    if eps not in (-1, 1) or eta not in (-1, 1):
        raise ValueError("eps and eta must be +-1")
    G = eval_affine(g)
    Gi = G.inverse()
    lhs_x = eval_affine(xp)
    lhs_y = eval_affine(yp)
    rhs_x = G * (GEN_X ** eps) * Gi
    rhs_y = G * (GEN_Y ** eta) * (GEN_X ** k) * Gi
    return lhs_x == rhs_x and lhs_y == rhs_y


class Witness(NamedTuple):
    g: Word
    k: int
    eps: int
    eta: int


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    witness: Optional[Witness]
    #: a negative answer is conclusive only via the height obstruction
    conclusive: bool


def _reduced_words_up_to(radius: int) -> Iterable[Word]:
    yield words.EMPTY
    if radius < 1:
        return
    frontier = [bytes([c]) for c in range(4)]
    yield from frontier
    for _ in range(radius - 1):
        nxt = []
        for w in frontier:
            for c in range(4):
                if w[-1] != c ^ 1:
                    nxt.append(w + bytes([c]))
        frontier = nxt
        yield from frontier


def decide_equivalent(p1: tuple[Word, Word], p2: tuple[Word, Word],
                      conj_radius: int = 4, k_bound: int = 4) -> EquivalenceResult:
    """Search for a witness (g, k, eps, eta) relating the two pairs.

    Conjugators g run over all reduced words of length <= conj_radius
    (shortest first, then in generator order), |k| <= k_bound.  Failure is
    conclusive only when the height obstruction applies: every pair Nielsen
    equivalent to (x1, y1) has second-component height +-height(y1).
    """
    x1, y1 = p1
    x2, y2 = p2
    e_x1, e_x2 = eval_affine(x1), eval_affine(x2)
    if not is_elliptic(e_x1) or not is_elliptic(e_x2):
        raise NotElliptic("first components must have height 0")
    e_y1, e_y2 = eval_affine(y1), eval_affine(y2)
    if abs(pi_height(e_y2)) != abs(pi_height(e_y1)):
        return EquivalenceResult(False, None, conclusive=True)
    target_x, target_y = e_x2, e_y2
    for g in _reduced_words_up_to(conj_radius):
        G = eval_affine(g)
        Gi = G.inverse()
        for eps in (1, -1):
            if G * (e_x1 ** eps) * Gi != target_x:
                continue
            base = G * e_y1
            base_inv = G * e_y1.inverse()
            for eta in (1, -1):
                mid = base if eta == 1 else base_inv
                for k in range(-k_bound, k_bound + 1):
                    if mid * (GEN_X ** k) * Gi == target_y:
                        return EquivalenceResult(
                            True, Witness(g, k, eps, eta), conclusive=True)
    return EquivalenceResult(False, None, conclusive=False)


# ---------------------------------------------------------------------------
# Nielsen path search through the affine evaluation
# ---------------------------------------------------------------------------

def pair_ball_search(p1: tuple[Word, Word], p2: tuple[Word, Word],
                     radius: int) -> Optional[list[Move]]:
    """BFS for a Nielsen path between pairs, with states the exact affine
    images (so the search runs in the group, not in the free group)."""
    start = (eval_affine(p1[0]), eval_affine(p1[1]))
    goal = (eval_affine(p2[0]), eval_affine(p2[1]))
    if start == goal:
        return []
    seen = {start}
    frontier: list[tuple[tuple[AffineElem, AffineElem], list[Move]]] = [(start, [])]
    for _ in range(radius):
        nxt = []
        for (ex, ey), path in frontier:
            for move in ALL_MOVES:
                child = _apply_move_affine((ex, ey), move)
                if child in seen:
                    continue
                seen.add(child)
                cpath = path + [move]
                if child == goal:
                    return cpath
                nxt.append((child, cpath))
        frontier = nxt
        if not frontier:
            break
    return None


def _apply_move_affine(pair: tuple[AffineElem, AffineElem],
                       move: Move) -> tuple[AffineElem, AffineElem]:
    ex, ey = pair
    kind = move[0]
    if kind == "swap":
        return (ey, ex)
    if kind == "invert":
        return (ex.inverse(), ey) if move[1] == 1 else (ex, ey.inverse())
    _, i, j, eps = move
    if i == 1:
        return (ex * (ey ** eps), ey)
    return (ex, ey * (ex ** eps))
