"""Exact free-group engine for F(a,b).

Words are freely reduced byte strings over the letter codes

    0 = a,  1 = a^-1,  2 = b,  3 = b^-1

so that inverting a letter is ``code ^ 1`` and the byte order realizes the
global letter order a < a^-1 < b < b^-1 used by all canonical forms.  The
string encoding is ``aAbB`` with ``1`` for the empty word.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, NamedTuple, Optional, Sequence

Word = bytes
Pair = tuple[Word, Word]
Move = tuple

EMPTY: Word = b""
A, A_INV, B, B_INV = b"\x00", b"\x01", b"\x02", b"\x03"

_INVERT_TABLE = bytes.maketrans(bytes(range(4)), bytes([1, 0, 3, 2]))
_CODE_OF = {"a": 0, "A": 1, "b": 2, "B": 3}
_CHAR_OF = "aAbB"


class NotCoprime(ValueError):
    """Abelian image is not a primitive homology class."""


def parse_word(s: str) -> Word:
    """Parse the ``aAbB`` encoding (``1`` = empty) into a reduced word."""
    if s in ("", "1"):
        return EMPTY
    try:
        return reduce(_CODE_OF[ch] for ch in s)
    except KeyError:
        raise ValueError(f"bad word string {s!r}; letters must be in 'aAbB'")


def word_str(w: Word) -> str:
    return "".join(_CHAR_OF[c] for c in w) if w else "1"


def reduce(raw: Iterable[int]) -> Word:
    """Freely reduce a raw letter sequence."""
    out: list[int] = []
    for c in raw:
        if out and out[-1] == c ^ 1:
            out.pop()
        else:
            out.append(c)
    return bytes(out)


def inverse(w: Word) -> Word:
    return w.translate(_INVERT_TABLE)[::-1]


def concat(u: Word, v: Word) -> Word:
    """Product of two reduced words; cancellation happens only at the seam."""
    k = 0
    n = min(len(u), len(v))
    while k < n and u[-1 - k] == v[k] ^ 1:
        k += 1
    return u[: len(u) - k] + v[k:]


def power(w: Word, n: int) -> Word:
    if n < 0:
        return power(inverse(w), -n)
    out = EMPTY
    for _ in range(n):
        out = concat(out, w)
    return out


def commutator(x: Word, y: Word) -> Word:
    return concat(concat(concat(x, y), inverse(x)), inverse(y))


def cyclically_reduce(w: Word) -> Word:
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == w[j - 1] ^ 1:
        i += 1
        j -= 1
    return w[i:j]


def _least_rotation(s: bytes) -> int:
    """Booth's algorithm: index of the lexicographically least rotation."""
    n = len(s)
    if n <= 1:
        return 0
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j % n]
        i = f[j - k - 1]
        while i != -1 and sj != s[(k + i + 1) % n]:
            if sj < s[(k + i + 1) % n]:
                k = j - i - 1
            i = f[i]
        if sj != s[(k + i + 1) % n]:
            if sj < s[(k + i + 1) % n]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def conjugacy_rep(w: Word) -> Word:
    """Canonical conjugacy-class representative: least rotation of the cyclic
    reduction."""
    c = cyclically_reduce(w)
    if len(c) <= 1:
        return c
    k = _least_rotation(c)
    return c[k:] + c[:k]


def is_conjugate(u: Word, v: Word) -> bool:
    return conjugacy_rep(u) == conjugacy_rep(v)


class AbelianImage(NamedTuple):
    na: int
    nb: int


def abelianize(w: Word) -> AbelianImage:
    return AbelianImage(
        w.count(0) - w.count(1),
        w.count(2) - w.count(3),
    )


# ---------------------------------------------------------------------------
# Nielsen moves on pairs
# ---------------------------------------------------------------------------

SWAP: Move = ("swap",)


def invert_move(i: int) -> Move:
    return ("invert", i)


def rmul_move(i: int, j: int, eps: int) -> Move:
    return ("rmul", i, j, eps)


#: all elementary moves in the canonical (deterministic) search order
ALL_MOVES: tuple[Move, ...] = (
    SWAP,
    ("invert", 1),
    ("invert", 2),
    ("rmul", 1, 2, 1),
    ("rmul", 1, 2, -1),
    ("rmul", 2, 1, 1),
    ("rmul", 2, 1, -1),
)


def apply_move(pair: Pair, move: Move) -> Pair:
    x, y = pair
    kind = move[0]
    if kind == "swap":
        return (y, x)
    if kind == "invert":
        return (inverse(x), y) if move[1] == 1 else (x, inverse(y))
    if kind == "rmul":
        _, i, j, eps = move
        if i == j or i not in (1, 2) or j not in (1, 2) or eps not in (-1, 1):
            raise ValueError(f"bad move {move}")
        if i == 1:
            return (concat(x, y if eps == 1 else inverse(y)), y)
        return (x, concat(y, x if eps == 1 else inverse(x)))
    raise ValueError(f"unknown move {move}")


def apply_moves(pair: Pair, moves: Iterable[Move]) -> Pair:
    for m in moves:
        pair = apply_move(pair, m)
    return pair


def commutator_class(pair: Pair) -> Word:
    """Canonical form of [x,y] up to conjugation *and* inversion: least word
    among all rotations of the cyclic reduction and of its inverse."""
    c = cyclically_reduce(commutator(*pair))
    return min(conjugacy_rep(c), conjugacy_rep(inverse(c)))


# ---------------------------------------------------------------------------
# Primitive elements
# ---------------------------------------------------------------------------

def canonical_primitive_lift(img: AbelianImage) -> tuple[int, int, Word]:
    """Positive word in a^eps, b^eta lifting a primitive homology class.

    Walks the subtractive Euclidean tree on basis pairs of Z^2 (each step an
    elementary transformation) and replays the inverse steps on word pairs
    starting from (a^eps, b^eta); the lift is the unique primitive conjugacy
    class over its homology class.
    """
    na, nb = img
    if math.gcd(abs(na), abs(nb)) != 1:
        raise NotCoprime(f"gcd of |{na}|, |{nb}| is not 1")
    eps = 1 if na >= 0 else -1
    eta = 1 if nb >= 0 else -1
    n, m = abs(na), abs(nb)
    x: Word = A if eps == 1 else A_INV
    y: Word = B if eta == 1 else B_INV
    if (n, m) == (1, 0):
        return eps, eta, x
    if (n, m) == (0, 1):
        return eps, eta, y
    # cone descent: (uL, uR) is a nonnegative basis whose cone contains (n, m)
    uL, uR = (1, 0), (0, 1)
    pL, pR = x, y
    while True:
        s = (uL[0] + uR[0], uL[1] + uR[1])
        if s == (n, m):
            return eps, eta, pL + pR
        # coordinates of the target in the (uL, uR) basis (determinant 1)
        alpha = n * uR[1] - m * uR[0]
        beta = uL[0] * m - uL[1] * n
        if alpha > beta:
            uR, pR = s, pL + pR
        else:
            uL, pL = s, pL + pR


def is_primitive(w: Word) -> bool:
    """True iff w belongs to some basis of F(a,b).

    Decision: the abelian image must be a primitive class, and w must be
    conjugate to the canonical positive lift of that class (primitive words
    over a fixed primitive homology class form one conjugacy class).
    """
    na, nb = abelianize(w)
    if math.gcd(abs(na), abs(nb)) != 1:
        return False
    _, _, lift = canonical_primitive_lift(AbelianImage(na, nb))
    return conjugacy_rep(w) == conjugacy_rep(lift)


# ---------------------------------------------------------------------------
# Basis detection and equivalence search
# ---------------------------------------------------------------------------

_STANDARD_PAIRS = frozenset(
    (x, y)
    for x in (A, A_INV)
    for y in (B, B_INV)
) | frozenset(
    (y, x)
    for x in (A, A_INV)
    for y in (B, B_INV)
)


def is_basis(pair: Pair, max_states: int = 1_000_000) -> bool:
    """True iff the pair is Nielsen equivalent to (a, b).

    Applies length-reducing moves greedily, exploring the full non-increasing
    closure through plateaus (a generating pair reduces to total length 2
    without the total ever increasing, so the closure decides membership).
    The abelianized determinant is a +-1 screen and is asserted on acceptance.
    """
    x, y = pair
    (na1, nb1), (na2, nb2) = abelianize(x), abelianize(y)
    det = na1 * nb2 - nb1 * na2
    if det not in (-1, 1):
        return False
    if not x or not y:
        return False
    start = (x, y)
    if start in _STANDARD_PAIRS:
        return True
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        budget = len(cur[0]) + len(cur[1])
        for move in ALL_MOVES:
            nxt = apply_move(cur, move)
            if nxt in seen or len(nxt[0]) + len(nxt[1]) > budget:
                continue
            if nxt in _STANDARD_PAIRS:
                assert det in (-1, 1)
                return True
            seen.add(nxt)
            queue.append(nxt)
            if len(seen) > max_states:
                raise RuntimeError("is_basis state budget exceeded")
    return False


def ball_search(p1: Pair, p2: Pair, radius: int) -> Optional[list[Move]]:
    """BFS over move sequences of length <= radius from p1; returns the first
    (shortest, move-order-lexicographic) witness sequence reaching p2."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if p1 == p2:
        return []
    parents: dict[Pair, tuple[Pair, Move]] = {}
    seen = {p1}
    frontier = [p1]
    for _ in range(radius):
        nxt: list[Pair] = []
        for cur in frontier:
            for move in ALL_MOVES:
                child = apply_move(cur, move)
                if child in seen:
                    continue
                seen.add(child)
                parents[child] = (cur, move)
                if child == p2:
                    path: list[Move] = []
                    node = child
                    while node != p1:
                        node, mv = parents[node]
                        path.append(mv)
                    path.reverse()
                    return path
                nxt.append(child)
        frontier = nxt
        if not frontier:
            break
    return None
