"""Trace triples on the trivalent tree of a one-holed torus group.

A vertex of the tree is a triple (x, y, z) = (tr X, tr Y, tr XY) for a
generating pair; the three complementary regions around it are labelled by
those traces. Flipping slot k replaces its value c by (product of the other
two) - c, which creates exactly one new region. Every primitive class
(simple closed geodesic) is a region, reached for the first time by a
unique flip path from the seed vertex.

Pruning certificate: if a flip produces w in slot k with |w| >= |a|, |b|
(the two kept values) and min(|a|, |b|) > 2, then every further flip away
from this vertex produces a value at least as large in modulus, so the
subtree can be cut as soon as |w| exceeds the cutoff.
"""

from __future__ import annotations

import cmath
import enum
import math
from collections import deque
from dataclasses import dataclass

from .errors import BudgetExceededError, DomainError, NonHyperbolicError
from .moebius import Matrix2
from .numerics import check_complex

ELLIPTIC_TOL = 1e-12


def _clean(v):
    v = check_complex("trace", v)
    return v.real if v.imag == 0 else v


@dataclass(frozen=True)
class TraceTriple:
    x: complex
    y: complex
    z: complex

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, _clean(getattr(self, name)))

    @property
    def mu(self):
        x, y, z = self.x, self.y, self.z
        return x * x + y * y + z * z - x * y * z

    @property
    def tau(self):
        return self.mu - 2

    @property
    def values(self):
        return (self.x, self.y, self.z)

    @property
    def is_real(self):
        return all(isinstance(v, float) for v in self.values)

    def normalized_signs(self):
        """Flip signs of pairs so that a real triple has as many positive entries as possible."""
        if not self.is_real:
            return self
        v = list(self.values)
        neg = [i for i in range(3) if v[i] < 0]
        while len(neg) >= 2:
            i, j = neg[0], neg[1]
            v[i], v[j] = -v[i], -v[j]
            neg = neg[2:]
        return TraceTriple(*v)


@dataclass(frozen=True)
class PrimitiveTrace:
    """Trace of a primitive class, labelled by the flip path that first reaches its region."""

    value: complex
    depth: int
    path: tuple = ()
    slot: int = 0

    @property
    def label(self):
        return (self.path, self.slot)


def flip(t, slot):
    """Replace coordinate ``slot`` (1, 2 or 3) by the product of the other two minus itself."""
    if slot not in (1, 2, 3):
        raise DomainError("slot must be 1, 2 or 3")
    v = list(t.values)
    i = slot - 1
    a, b = v[(i + 1) % 3], v[(i + 2) % 3]
    v[i] = a * b - v[i]
    return TraceTriple(*v)


def _flip_values(vals, i):
    v = list(vals)
    v[i] = v[(i + 1) % 3] * v[(i + 2) % 3] - v[i]
    return tuple(v)


def _certified(vals, i):
    w = abs(vals[i])
    a, b = abs(vals[(i + 1) % 3]), abs(vals[(i + 2) % 3])
    return w >= max(a, b) and min(a, b) > 2.0


def enumerate_primitives(seed, trace_cutoff, *, order="dfs", max_uncertified=200000,
                         normalize=True):
    """Every primitive-class trace with |x| <= cutoff, each region exactly once.

    ``max_uncertified`` bounds the number of visited vertices that have not
    yet been shown to grow; it is what stops a non-BQ seed from running forever.
    """
    cutoff = float(trace_cutoff)
    if not cutoff > 0 or math.isnan(cutoff):
        raise DomainError("trace cutoff must be > 0")
    if normalize:
        seed = seed.normalized_signs()
    out = [PrimitiveTrace(v, 0, (), k + 1) for k, v in enumerate(seed.values) if abs(v) <= cutoff]
    # each work item: (values, path, previous slot, certified)
    work = deque((seed.values, (k,), None, False) for k in (3, 2, 1))
    pop = work.pop if order == "dfs" else work.popleft
    uncertified = 0
    while work:
        vals, path, _, cert = pop()
        i = path[-1] - 1
        new = _flip_values(vals, i)
        cert = cert or _certified(new, i)
        if cert and abs(new[i]) > cutoff:
            continue
        if not cert:
            uncertified += 1
            if uncertified > max_uncertified:
                raise BudgetExceededError(
                    "trace enumeration could not certify growth within budget"
                )
        if abs(new[i]) <= cutoff:
            out.append(PrimitiveTrace(new[i], len(path), path, path[-1]))
        for k in (3, 2, 1):
            if k - 1 != i:
                work.append((new, path + (k,), i, cert))
    out.sort(key=lambda p: (abs(p.value), p.depth, p.path, p.slot))
    return out


class BQStatus(enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class BQResult:
    status: BQStatus
    witness: PrimitiveTrace | None = None
    explored: int = 0
    reason: str = ""

    @property
    def satisfied(self):
        return self.status is BQStatus.SATISFIED


def in_elliptic_interval(v, tol=ELLIPTIC_TOL):
    v = complex(v)
    return abs(v.imag) <= tol * max(1.0, abs(v)) and -2.0 - tol <= v.real <= 2.0 + tol


def bq_check(seed, depth_budget=40):
    """Semi-decide the BQ-conditions by breadth-first search to ``depth_budget`` flips.

    Violated when some region has trace in [-2, 2]; satisfied when every branch
    reaches a growth certificate within the budget; undetermined otherwise.
    Finitely many regions of modulus <= 2 off the real interval are allowed, so
    an infinite such family is never claimed: it shows up as undetermined.
    """
    if depth_budget < 0:
        raise DomainError("depth budget must be >= 0")
    seed = seed.normalized_signs()
    for k, v in enumerate(seed.values):
        if in_elliptic_interval(v):
            return BQResult(BQStatus.VIOLATED, PrimitiveTrace(v, 0, (), k + 1), 0,
                            "seed trace in [-2, 2]")
    queue = deque((seed.values, (k,)) for k in (1, 2, 3))
    explored = 0
    open_branches = 0
    while queue:
        vals, path = queue.popleft()
        i = path[-1] - 1
        new = _flip_values(vals, i)
        explored += 1
        if not all(math.isfinite(abs(v)) for v in new):
            open_branches += 1
            continue
        if in_elliptic_interval(new[i]):
            return BQResult(BQStatus.VIOLATED, PrimitiveTrace(new[i], len(path), path, path[-1]),
                            explored, "primitive trace in [-2, 2]")
        if _certified(new, i):
            continue
        if len(path) >= depth_budget:
            open_branches += 1
            continue
        for k in (1, 2, 3):
            if k - 1 != i:
                queue.append((new, path + (k,)))
    if open_branches:
        return BQResult(BQStatus.UNDETERMINED, None, explored,
                        f"{open_branches} branches uncertified at depth {depth_budget}")
    return BQResult(BQStatus.SATISFIED, None, explored, "every branch certified")


def lambda_from_trace(x):
    """Eigenvalue of modulus >= 1 of a matrix with trace x: lambda + 1/lambda = x."""
    x = complex(x)
    r = cmath.sqrt(x * x - 4.0)
    lam = 0.5 * (x + r)
    lam2 = 0.5 * (x - r)
    return lam if abs(lam) >= abs(lam2) else lam2


def complex_length(x):
    """Complex length l with e^l = lambda^2 (real part >= 0)."""
    x = check_complex("x", x)
    if in_elliptic_interval(x, 0.0):
        raise NonHyperbolicError(f"trace {x} is elliptic or parabolic")
    return 2.0 * cmath.log(lambda_from_trace(x))


def length_from_trace(x):
    """Real translation length: 2 acosh(|x|/2) for real x, 2 Re acosh(x/2) for complex x."""
    x = check_complex("x", x)
    if x.imag == 0:
        if abs(x.real) <= 2.0:
            raise NonHyperbolicError(f"|trace| = {abs(x.real)} <= 2")
        return 2.0 * math.acosh(abs(x.real) / 2.0)
    if in_elliptic_interval(x, 0.0):
        raise NonHyperbolicError(f"trace {x} lies in [-2, 2]")
    return abs(2.0 * cmath.acosh(x / 2.0).real)


def triple_from_matrices(X, Y):
    """(tr X, tr Y, tr XY) for determinant-one generators."""
    X, Y = X.normalized(), Y.normalized()
    return TraceTriple(X.trace, Y.trace, (X @ Y).trace)


def torus_matrices(boundary_length, twist=0.0, a=None):
    """Discrete generators X, Y of a one-holed torus group with tr[X, Y] = -2 cosh(L/2).

    X translates by the length ``a`` of an interior curve; Y is built from
    the seam of the cut pants (a, a, L) plus a Fenchel-Nielsen ``twist``.
    ``a`` defaults to 2 acosh(t/2), t the trace of the symmetric triple (t, t, t)
    with the same commutator, so that tr X = t.
    """
    from .panttorus import pants_perpendiculars

    L = float(boundary_length)
    if L < 0:
        raise DomainError("boundary length must be >= 0")
    if a is None:
        a = 2.0 * math.acosh(symmetric_torus_trace(L) / 2.0)
    met = pants_perpendiculars(a, a, L) if L > 0 else None
    if met is None:
        raise DomainError("torus_matrices needs L > 0; use the Markov seed for the cusped torus")
    d = met.m3  # distance between the two copies of the cuff in the cut pants
    X = Matrix2.diagonal_translation(a)
    ch, sh = math.cosh(0.5 * d), math.sinh(0.5 * d)
    T = Matrix2(math.exp(0.5 * twist), 0.0, 0.0, math.exp(-0.5 * twist))
    Y = Matrix2(ch, sh, sh, ch) @ T
    return X, Y


def symmetric_torus_trace(boundary_length):
    """t > 2 with 3 t^2 - t^3 = 2 - 2 cosh(L/2): the triple (t, t, t) has the right mu."""
    L = float(boundary_length)
    target = 2.0 - 2.0 * math.cosh(0.5 * L)
    lo, hi = 3.0, 3.0
    while 3 * hi * hi - hi ** 3 > target:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if 3 * mid * mid - mid ** 3 > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def fuchsian_torus_seed(boundary_length, twist=0.0, a=None):
    """Trace triple of a discrete one-holed torus group built from explicit matrices."""
    X, Y = torus_matrices(boundary_length, twist, a)
    return triple_from_matrices(X, Y).normalized_signs()


__all__ = [
    "TraceTriple", "PrimitiveTrace", "flip", "enumerate_primitives", "BQStatus", "BQResult",
    "bq_check", "length_from_trace", "complex_length", "lambda_from_trace",
    "triple_from_matrices", "torus_matrices", "fuchsian_torus_seed", "symmetric_torus_trace",
    "in_elliptic_interval",
]
