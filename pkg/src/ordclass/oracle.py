"""Finite-grid decision procedure for the <=1 relation.

The relation is the greatest self-consistent fixpoint, reached from the full
order relation by removal-only rounds, of the check:

    alpha <=1 beta  iff  for every finite B of grid points below beta with at most
    `subset_cap` points of B above alpha, there is an embedding h of B into
    the ordinals below alpha that fixes the part of B below alpha pointwise, is strictly
    increasing, and preserves sum triples and the current relation facts.

Restricting h's images to grid points empties the relation on any finite
grid (the largest grid point below alpha blocks every image), so images are
drawn from the witness family the anchor theorems guarantee below an epsilon
point: a tall additive principal V above every grid point below alpha, with
window points alpha*mu + delta mapped to V*mu + delta.  Sum triples are then
preserved automatically, and the relation facts of images are decidable:
V reaches its own translates V + delta and nothing at or beyond V*2, points
with delta != 0 or mu >= 2 reach nothing, and a low point c reaches an image
iff it reaches alpha.  Below a non-epsilon point no such family exists and
the row collapses to reflexivity, a documented under-approximation.  The
per-pair check therefore reduces to window-consistency conditions; the
module keeps a slow subset-enumerating checker for cross-validation.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass

from . import terms as tm
from .errors import GridCapExceeded, OrdinalError
from .grammar import parse_ord, render_ord
from .terms import EQ, GT, LT


@dataclass(frozen=True)
class GridOps:
    """Closure operations, with the finiteness knobs recorded alongside."""

    add: bool = True
    double: bool = True
    succ: bool = True
    tower_height: int = 2
    coeff_cap: int | None = None
    tail_cap: int | None = None
    max_monomials: int | None = None

    def admits(self, t: tm.OrdTerm) -> bool:
        monos = tm.monomials_of(t)
        if self.max_monomials is not None and len(monos) > self.max_monomials:
            return False
        for exp, coeff in monos:
            if isinstance(exp, tm.Zero):
                if self.tail_cap is not None and coeff > self.tail_cap:
                    return False
            elif self.coeff_cap is not None and coeff > self.coeff_cap:
                return False
        return True


@dataclass(frozen=True)
class Grid:
    points: tuple[tm.OrdTerm, ...]
    bound: tm.OrdTerm
    ops: GridOps

    def index(self, t: tm.OrdTerm) -> int:
        lo, hi = 0, len(self.points)
        while lo < hi:
            mid = (lo + hi) // 2
            c = tm.compare(self.points[mid], t)
            if c is EQ:
                return mid
            if c is LT:
                lo = mid + 1
            else:
                hi = mid
        raise OrdinalError(f"{render_ord(t)} is not a grid point")

    def __contains__(self, t):
        try:
            self.index(t)
            return True
        except OrdinalError:
            return False

    def digest(self) -> str:
        payload = ";".join(render_ord(p) for p in self.points)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _sorted_terms(terms_it):
    import functools

    return tuple(
        sorted(set(terms_it), key=functools.cmp_to_key(tm.compare))
    )


def build_grid(bound, seeds=(), ops: GridOps | None = None, cap: int = 400) -> Grid:
    """Smallest closure of seeds + {0, 1, w} under ops, strictly below bound."""
    ops = ops or GridOps()
    points = {tm.ZERO, tm.one(), tm.omega()}
    points.update(seeds)
    points = {p for p in points if tm.lt(p, bound) and ops.admits(p)}

    def overflow():
        raise GridCapExceeded(_sorted_terms(points)[:cap], cap)

    if len(points) > cap:
        overflow()
    frontier = set(points)
    while frontier:
        new = set()

        def offer(t):
            if t not in points and t not in new and tm.lt(t, bound) and ops.admits(t):
                new.add(t)

        for t in frontier:
            if ops.succ:
                offer(tm.add(t, tm.one()))
            if ops.double:
                offer(tm.mul(t, tm.nat(2)))
            if ops.tower_height and isinstance(t, tm.Leaf):
                for j in range(1, ops.tower_height + 1):
                    offer(tm.omega_tower(t.leaf, j))
        if ops.add:
            for a in points | frontier:
                for b in frontier:
                    offer(tm.add(a, b))
                    offer(tm.add(b, a))
        if len(points) + len(new) > cap:
            points |= new
            overflow()
        points |= new
        frontier = new
    return Grid(_sorted_terms(points), bound, ops)


# ---------------------------------------------------------------------------
# the relation


@dataclass
class Leq1Relation:
    grid: Grid
    frontiers: tuple[int, ...]
    subset_cap: int
    rounds: int

    # -- queries -------------------------------------------------------------

    def leq1(self, a: tm.OrdTerm, b: tm.OrdTerm) -> bool:
        i = self.grid.index(a)
        j = self.grid.index(b)
        return j <= self.frontiers[i] if i <= j else False

    def m_hat(self, t: tm.OrdTerm) -> tm.OrdTerm:
        return self.grid.points[self.frontiers[self.grid.index(t)]]

    def points_in(self, lo: tm.OrdTerm, hi: tm.OrdTerm):
        """Grid points r with lo < r <= hi."""
        return [
            p
            for p in self.grid.points
            if tm.compare(p, lo) is GT and tm.compare(p, hi) is not GT
        ]

    def boundary_suspect(self, t: tm.OrdTerm) -> bool:
        """The frontier of t runs into the grid edge."""
        return self.frontiers[self.grid.index(t)] == len(self.grid.points) - 1

    def class_detect(self, j: int):
        """Grid points with a <1-chain of length j, with witnesses."""
        pts = self.grid.points
        level: dict[int, list[int]] = {}
        members = []
        for i, p in enumerate(pts):
            if not tm.is_epsilon(p):
                continue
            double = tm.mul(p, tm.nat(2))
            try:
                d = self.grid.index(double)
            except OrdinalError:
                continue
            if self.frontiers[i] >= d:
                members.append(i)
                level[i] = [i, d]
        for _ in range(j - 1):
            nxt = []
            nxt_wit = {}
            for i in range(len(pts)):
                for b in members:
                    if i < b and self.frontiers[i] >= b:
                        nxt.append(i)
                        nxt_wit[i] = [i] + level[b]
                        break
            members, level = nxt, nxt_wit
        return [
            (pts[i], tuple(pts[w] for w in level[i])) for i in sorted(members)
        ]

    def class_level_of(self, t: tm.OrdTerm) -> int:
        if t not in self.grid:
            return 0
        j = 0
        while True:
            hits = [p for p, _ in self.class_detect(j + 1)]
            if not any(tm.eq(p, t) for p in hits):
                return j
            j += 1

    # -- exports ---------------------------------------------------------------

    def to_json(self):
        n = len(self.grid.points)
        return {
            "points": [render_ord(p) for p in self.grid.points],
            "frontiers": list(self.frontiers),
            "matrix": [
                "0" * i + "1" * (fi - i + 1) + "0" * (n - fi - 1)
                for i, fi in enumerate(self.frontiers)
            ],
            "subset_cap": self.subset_cap,
            "rounds": self.rounds,
        }

    @classmethod
    def from_json(cls, data, bound=None, ops=None) -> "Leq1Relation":
        points = tuple(parse_ord(p) for p in data["points"])
        grid = Grid(points, bound or points[-1], ops or GridOps())
        return cls(
            grid,
            tuple(data["frontiers"]),
            data["subset_cap"],
            data["rounds"],
        )

    def strict_pairs(self):
        for i, fi in enumerate(self.frontiers):
            for j in range(i + 1, fi + 1):
                yield i, j

    def to_dot(self) -> str:
        """Covering relation of <1 as a DOT digraph."""
        pts = self.grid.points
        strict = {(i, j) for i, j in self.strict_pairs()}
        lines = ["digraph leq1 {", "  rankdir=BT;"]
        for i, p in enumerate(pts):
            lines.append(f'  n{i} [label="{render_ord(p)}"];')
        for i, j in sorted(strict):
            if any((i, k) in strict and (k, j) in strict for k in range(i + 1, j)):
                continue
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _decomposition_bounds(points):
    """For each point, the least grid level below which it splits as a sum."""
    index = {p: i for i, p in enumerate(points)}
    best = [None] * len(points)
    for i, a in enumerate(points):
        if isinstance(a, tm.Zero):
            continue
        for j, b in enumerate(points):
            if isinstance(b, tm.Zero):
                continue
            s = tm.add(a, b)
            k = index.get(s)
            if k is not None:
                cut = max(i, j)
                if best[k] is None or cut < best[k]:
                    best[k] = cut
    return best


def leq1_fixpoint(grid: Grid, subset_cap: int = 4, max_rounds: int = 64) -> Leq1Relation:
    if subset_cap < 2:
        raise OrdinalError("subset_cap must be >= 2")
    pts = grid.points
    n = len(pts)
    is_eps = [tm.is_epsilon(p) for p in pts]
    doubles = [tm.mul(p, tm.nat(2)) if is_eps[i] else None for i, p in enumerate(pts)]
    decomp = _decomposition_bounds(pts)
    f = [n - 1] * n
    rounds = 0
    changed = True
    while changed:
        rounds += 1
        if rounds > max_rounds:
            raise OrdinalError("leq1 fixpoint did not converge")
        changed = False
        for i in range(n - 1, -1, -1):
            new = _row_frontier(i, f, pts, is_eps, doubles[i], decomp)
            if new < f[i]:
                f[i] = new
                changed = True
    return Leq1Relation(grid, tuple(f), subset_cap, rounds)


def _row_frontier(i, f, pts, is_eps, alpha2, decomp):
    if not is_eps[i]:
        return i
    best = i
    for cand in range(i + 1, f[i] + 1):
        w_hi = cand - 1
        if w_hi > i:
            # every already-accepted window point must sit below alpha*2
            if tm.compare(pts[w_hi], alpha2) is not LT:
                break
            # window rows other than alpha must be reflexive-only
            if any(f[x] >= w_hi for x in range(i + 1, w_hi)):
                break
            # no window point may split as a sum of two lower grid points
            if decomp[w_hi] is not None and decomp[w_hi] < i:
                break
        # a low row's frontier may not end inside the window
        stop = False
        for c in range(i):
            if i <= f[c] < w_hi:
                stop = True
                break
        if stop:
            break
        best = cand
    return best


# ---------------------------------------------------------------------------
# slow reference checker (tests cross-validate the collapsed row conditions)


def _eps_split(y, alpha_leaf):
    """y = alpha*mu + delta with delta < alpha; returns (mu, delta)."""
    a = tm.Leaf(alpha_leaf)
    head = []
    tail = []
    for exp, coeff in tm.monomials_of(y):
        if tm.compare(exp, a) is not LT:
            head.append((tm.left_subtract(a, exp), coeff))
        else:
            tail.append((exp, coeff))
    return tm.from_monomials(head), tm.from_monomials(tail)


def slow_check_pair(rel_frontiers, grid, i, j, subset_cap):
    """Literal subset-enumerating check of the pair (points[i], points[j])."""
    pts = grid.points
    alpha = pts[i]
    if not tm.is_epsilon(alpha):
        return j <= i
    window = list(range(i, j))

    def fact(a_idx, b_idx):
        return b_idx <= rel_frontiers[a_idx]

    def image(x_idx):
        return _eps_split(pts[x_idx], alpha.leaf)

    def image_fact(low_or_img_a, img_b):
        # (c <1 V-form) := (c <1 alpha); V reaches exactly its own translates
        kind_a, a = low_or_img_a
        mu_b, delta_b = img_b
        if kind_a == "low":
            return fact(a, i)
        mu_a, delta_a = a
        if not (tm.eq(mu_a, tm.one()) and isinstance(delta_a, tm.Zero)):
            return False
        return tm.eq(mu_b, tm.one())

    for size in range(1, subset_cap + 1):
        for high in itertools.combinations(window, size):
            imgs = {x: image(x) for x in high}
            ok = True
            # sum triples among highs and against every low, both directions
            members = [("low", c) for c in range(i)] + [("high", x) for x in high]
            for a_kind, a in members:
                for b_kind, b in members:
                    s = tm.add(pts[a], pts[b])
                    sa = pts[a] if a_kind == "low" else _img_term(imgs[a])
                    sb = pts[b] if b_kind == "low" else _img_term(imgs[b])
                    mapped = tm.add(sa, sb)
                    for c_kind, c in members:
                        sc = pts[c] if c_kind == "low" else _img_term(imgs[c])
                        if tm.eq(mapped, sc) != tm.eq(s, pts[c]):
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                return False
            # relation facts, low->high and high->high
            for x in high:
                for c in range(i):
                    if fact(c, x) != image_fact(("low", c), imgs[x]):
                        return False
                for y in high:
                    if y <= x:
                        continue
                    if fact(x, y) != image_fact(("img", imgs[x]), imgs[y]):
                        return False
    return True


_V = tm.ClassAtom("__V__", 1, 10**9)


def _img_term(img):
    mu, delta = img
    return tm.add(tm.mul(tm.Leaf(_V), mu), delta)


def cache_path(cache_dir, grid: Grid, subset_cap: int):
    import os

    return os.path.join(cache_dir, f"leq1_{grid.digest()}_s{subset_cap}.json")


def leq1_cached(grid: Grid, subset_cap: int = 4, cache_dir=None) -> Leq1Relation:
    """Compute or reload the relation; snapshots keyed by grid digest and cap."""
    import os

    if cache_dir is None:
        return leq1_fixpoint(grid, subset_cap)
    path = cache_path(cache_dir, grid, subset_cap)
    if os.path.exists(path):
        with open(path) as fh:
            data = json.load(fh)
        rel = Leq1Relation.from_json(data, bound=grid.bound, ops=grid.ops)
        return Leq1Relation(grid, rel.frontiers, rel.subset_cap, rel.rounds)
    rel = leq1_fixpoint(grid, subset_cap)
    os.makedirs(cache_dir, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(rel.to_json(), fh, sort_keys=True)
    return rel
