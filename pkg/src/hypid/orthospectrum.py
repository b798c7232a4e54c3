"""Orthogeodesics of a hyperbolic pair of pants, enumerated as double cosets.

The pants is glued from two right-angled hexagons. Its universal cover is
tiled by copies of one hexagon under the group generated by reflections
r1, r2, r3 in the seams M1, M2, M3; the pants group is the index-two
subgroup of even words, generated by A = r3 r2 and B = r1 r3.

Enumeration walks the tile tree outward from a fundamental segment of a
boundary lift, crossing a seam only when that seam is within the cutoff
of the lift. Everything beyond a seam is at least that far away, so the
walk is complete for the cutoff.

Words are tuples over {1, -1, 2, -2} for A, A^-1, B, B^-1.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import CutoffTooLargeError, DomainError
from .moebius import INF, Geodesic, Matrix2, axis, is_inf, reflection
from .numerics import check_real
from .panttorus import PantsMetric, pants_perpendiculars

LETTERS = {1: "a", -1: "A", 2: "b", -2: "B"}
_FROM_LETTER = {v: k for k, v in LETTERS.items()}
_ORDER = {1: 0, -1: 1, 2: 2, -2: 3}
BOUNDARY_WORDS = {1: (1,), 2: (2,), 3: (-2, -1)}

# even pairs of seam reflections as words in A, B
_PAIR = {
    (3, 2): (1,), (2, 3): (-1,),
    (1, 3): (2,), (3, 1): (-2,),
    (2, 1): (-1, -2), (1, 2): (2, 1),
}


def reduce_word(word):
    out = []
    for g in word:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


def invert_word(word):
    return tuple(-g for g in reversed(word))


def multiply(*words):
    return reduce_word(tuple(g for w in words for g in w))


def word_to_str(word):
    return "".join(LETTERS[g] for g in word) or "e"


def word_from_str(s):
    if s in ("", "e", "1"):
        return ()
    try:
        return reduce_word(tuple(_FROM_LETTER[ch] for ch in s))
    except KeyError as exc:
        raise DomainError(f"bad word {s!r}") from exc


def word_key(word):
    return (len(word), tuple(_ORDER[g] for g in word))


def canonical_double_coset(word, left, right, limit=20000):
    """Shortlex-least representative of <left> word <right> (left, right are words)."""
    moves = (
        lambda w: multiply(left, w),
        lambda w: multiply(invert_word(left), w),
        lambda w: multiply(w, right),
        lambda w: multiply(w, invert_word(right)),
    )
    current = reduce_word(word)
    while True:
        shorter = [m(current) for m in moves]
        shorter = [w for w in shorter if len(w) < len(current)]
        if not shorter:
            break
        current = min(shorter, key=word_key)
    # explore the plateau of equal-length words reachable without growing
    best_len = len(current)
    seen = {current}
    queue = deque([current])
    while queue:
        w = queue.popleft()
        for m in moves:
            v = m(w)
            if len(v) > best_len or v in seen:
                continue
            if len(v) < best_len:
                return canonical_double_coset(v, left, right, limit)
            seen.add(v)
            queue.append(v)
            if len(seen) > limit:
                raise CutoffTooLargeError("double-coset plateau exploration too large")
    return min(seen, key=word_key)


@dataclass(frozen=True)
class PantsGroup:
    """Pants group with generators A, B and boundary elements A, B, (AB)^-1."""

    A: Matrix2
    B: Matrix2
    l1: float
    l2: float
    l3: float
    metric: PantsMetric = field(repr=False)
    seams: tuple = field(repr=False)
    cuffs: tuple = field(repr=False)
    reflections: tuple = field(repr=False)

    @property
    def lengths(self):
        return (self.l1, self.l2, self.l3)

    def boundary_matrix(self, i):
        if i == 1:
            return self.A
        if i == 2:
            return self.B
        return (self.A @ self.B).inverse()

    def word_matrix(self, word):
        m = Matrix2.identity()
        gens = {1: self.A, -1: self.A.inverse(), 2: self.B, -2: self.B.inverse()}
        for g in word:
            m = m @ gens[g]
        return m


def pants_group(l1, l2, l3):
    """Pants group built from the right-angled hexagon with alternate sides l_i / 2."""
    met = pants_perpendiculars(l1, l2, l3)
    s = math.exp(0.5 * met.l1)
    L1 = Geodesic(0.0, INF)
    M2 = Geodesic(-1.0, 1.0)
    M3 = Geodesic(-s, s)
    L3 = Geodesic(math.tanh(0.5 * met.m2), 1.0 / math.tanh(0.5 * met.m2))
    L2 = Geodesic(s * math.tanh(0.5 * met.m3), s / math.tanh(0.5 * met.m3))
    M1, _ = axis(reflection(L2) @ reflection(L3))
    seams = (M1, M2, M3)
    refl = tuple(reflection(g) for g in seams)
    A = refl[2] @ refl[1]
    B = refl[0] @ refl[2]
    return PantsGroup(A, B, met.l1, met.l2, met.l3, met, seams, (L1, L2, L3), refl)


@dataclass(frozen=True, order=True)
class OrthoRecord:
    """Oriented orthogeodesic from boundary ``from_boundary`` to ``to_boundary``.

    It is the common perpendicular of axis(h_from) and word . axis(h_to),
    with ``word`` the canonical representative of its double coset.
    """

    length: float
    from_boundary: int
    to_boundary: int
    word: tuple

    @property
    def word_str(self):
        return word_to_str(self.word)

    def reversed_key(self):
        return (self.to_boundary, self.from_boundary, canonical_double_coset(
            invert_word(self.word), BOUNDARY_WORDS[self.to_boundary],
            BOUNDARY_WORDS[self.from_boundary]))


def _distance_to_imaginary_axis(p, q):
    """Distance from (0, inf) to the geodesic (p, q); 0 when they meet."""
    if is_inf(p) or is_inf(q) or p == 0 or q == 0 or (p < 0) != (q < 0):
        return 0.0
    p, q = abs(p), abs(q)
    if p > q:
        p, q = q, p
    return 2.0 * math.atanh(math.sqrt(p / q))


def _reflection_word_to_gamma(rword):
    if len(rword) % 2:
        raise AssertionError("odd reflection word")
    out = []
    for k in range(0, len(rword), 2):
        out.extend(_PAIR[(rword[k], rword[k + 1])])
    return reduce_word(tuple(out))


def _append(rword, k):
    if rword and rword[-1] == k:
        return rword[:-1]
    return rword + (k,)


def _enumerate_from(G, i, cutoff, max_depth):
    """Yield (length, target boundary, gamma word) for lifts within cutoff of axis(h_i)."""
    base_word = (3,) if i == 3 else ()
    base_line = G.cuffs[i - 1]
    if i == 3:
        base_line = base_line.mapped(G.reflections[2])
    p, q = base_line.p, base_line.q
    if is_inf(p) or is_inf(q):
        g = Matrix2.identity() if is_inf(q) and p == 0 else None
        if g is None:
            fin = q if is_inf(p) else p
            g = Matrix2(0.0, 1.0, 1.0, -fin)  # fin -> inf, inf -> 0
    else:
        g = Matrix2(1.0, -p, 1.0, -q)  # p -> 0, q -> inf
    refl = [g @ r @ g.inverse() for r in G.reflections]
    seams = [s.mapped(g) for s in G.seams]
    cuffs = [c.mapped(g) for c in G.cuffs]

    def tile_matrix(rword):
        m = Matrix2.identity()
        for k in rword:
            m = m @ refl[k - 1]
        return m

    other = min(a for a in (1, 2, 3) if a != i)
    starts = [base_word, _append(base_word, other)]
    for start in starts:
        W = tile_matrix(start)
        for k in (1, 2, 3):
            if k == i:
                continue
            yield from _record(W, start, k, cuffs, cutoff)
        seam = seams[i - 1].mapped(W)
        dist = _distance_to_imaginary_axis(seam.p, seam.q)
        if dist > cutoff:
            continue
        stack = [(_append(start, i), W @ refl[i - 1], i, 1)]
        while stack:
            rword, W, came, depth = stack.pop()
            if depth > max_depth:
                raise CutoffTooLargeError(
                    f"cutoff {cutoff} needs more than {max_depth} tile crossings"
                )
            for k in (1, 2, 3):
                yield from _record(W, rword, k, cuffs, cutoff)
            for k in (3, 2, 1):
                if k == came:
                    continue
                seam = seams[k - 1].mapped(W)
                if _distance_to_imaginary_axis(seam.p, seam.q) <= cutoff:
                    stack.append((_append(rword, k), W @ refl[k - 1], k, depth + 1))


def _record(W, rword, k, cuffs, cutoff):
    line = cuffs[k - 1].mapped(W)
    dist = _distance_to_imaginary_axis(line.p, line.q)
    if dist <= 0.0 or dist > cutoff:
        return
    w = rword
    parity = (len(w) + (1 if k == 3 else 0)) % 2
    if parity:
        w = _append(w, min(a for a in (1, 2, 3) if a != k))
    if k == 3:
        w = _append(w, 3)
    yield dist, k, _reflection_word_to_gamma(w)


def enumerate_orthogeodesics(G, length_cutoff, max_depth=400):
    """All oriented orthogeodesics of length <= cutoff, sorted by (length, from, to, word)."""
    cutoff = check_real("length_cutoff", length_cutoff)
    if cutoff <= 0:
        raise DomainError("length cutoff must be > 0")
    found = {}
    for i in (1, 2, 3):
        for dist, k, gword in _enumerate_from(G, i, cutoff, max_depth):
            key = (i, k, canonical_double_coset(gword, BOUNDARY_WORDS[i], BOUNDARY_WORDS[k]))
            if key in found:
                continue
            rec = OrthoRecord(dist, i, k, key[2])
            rkey = rec.reversed_key()
            found[key] = rec
            if rkey not in found:
                found[rkey] = OrthoRecord(dist, rkey[0], rkey[1], rkey[2])
    return sorted(found.values(), key=lambda r: (r.length, r.from_boundary, r.to_boundary,
                                                  word_key(r.word)))


def record_length(G, rec):
    """Recompute a record's length from the matrices (independent of the tile walk)."""
    from .moebius import geodesic_distance
    hi, _ = axis(G.boundary_matrix(rec.from_boundary))
    hj, _ = axis(G.boundary_matrix(rec.to_boundary))
    return geodesic_distance(hi, hj.mapped(G.word_matrix(rec.word)))


@lru_cache(maxsize=32)
def cached_spectrum(l1, l2, l3, cutoff, max_depth=400):
    return tuple(enumerate_orthogeodesics(pants_group(l1, l2, l3), cutoff, max_depth))


def unoriented(records):
    """One representative per unoriented orthogeodesic (the lexicographically first orientation)."""
    seen = set()
    out = []
    for rec in records:
        key = (rec.from_boundary, rec.to_boundary, rec.word)
        if key in seen:
            continue
        seen.add(key)
        seen.add(rec.reversed_key())
        out.append(rec)
    return out


__all__ = [
    "PantsGroup", "OrthoRecord", "pants_group", "enumerate_orthogeodesics", "cached_spectrum",
    "canonical_double_coset", "reduce_word", "invert_word", "multiply", "word_to_str",
    "word_from_str", "record_length", "unoriented", "BOUNDARY_WORDS",
]
