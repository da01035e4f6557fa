"""Simultaneous substitution of epsilon leaves and the map algebra around it.

A SubstMap is a strictly increasing partial map on epsilon leaves: finite
overrides, an optional identity-below-threshold region, and an optional
rebase rule used by the interval-transport maps of the class skeleton
(identity below min(alpha, c), alpha -> c, and towers over alpha rebuilt
over c).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import terms as tm
from .errors import (
    CompositionUnsupported,
    LeafOutsideDomain,
    LevelViolation,
    MapInvalid,
)
from .terms import EQ, GT, LT


class MapOrder(Enum):
    EQ = "EQ"
    LT = "LT"
    GT = "GT"
    LE = "LE"
    GE = "GE"
    INCOMPARABLE = "INCOMPARABLE"


@dataclass(frozen=True)
class SubstMap:
    overrides: tuple[tuple[tm.EpsLeaf, tm.EpsLeaf], ...]
    threshold: tm.EpsLeaf | None = None
    rebase: tuple[int, tm.EpsLeaf, tm.EpsLeaf] | None = None  # (n, alpha, c)

    def lookup(self, e: tm.EpsLeaf) -> tm.EpsLeaf:
        for src, dst in self.overrides:
            if src == e:
                return dst
        if self.threshold is not None and tm.compare_leaves(e, self.threshold) is LT:
            return e
        if self.rebase is not None:
            n, alpha, c = self.rebase
            moved = _rebase_leaf(e, n, alpha, c)
            if moved is not None:
                return moved
        raise LeafOutsideDomain(e)

    def contains(self, e: tm.EpsLeaf) -> bool:
        try:
            self.lookup(e)
            return True
        except LeafOutsideDomain:
            return False

    def domain_leaves(self) -> tuple[tm.EpsLeaf, ...]:
        """The explicit (finite) part of the domain, increasing."""
        return tuple(src for src, _ in self.overrides)

    def to_json(self):
        from .grammar import render_leaf

        data = {
            "overrides": [
                [render_leaf(s), render_leaf(d)] for s, d in self.overrides
            ],
            "rule": "identity-below" if self.threshold is not None else "none",
        }
        if self.threshold is not None:
            data["threshold"] = render_leaf(self.threshold)
        if self.rebase is not None:
            n, alpha, c = self.rebase
            data["rule"] = "rebase-above"
            data["level"] = n
            data["from"] = render_leaf(alpha)
            data["to"] = render_leaf(c)
        return data


def _tower_over(e: tm.EpsLeaf, root: tm.EpsLeaf):
    """Constructor stack of e over root, innermost first, or None."""
    stack = []
    cur = e
    while cur != root:
        if isinstance(cur, tm.Succ):
            stack.append(("succ", cur.k))
        elif isinstance(cur, tm.CanonicalPoint):
            stack.append(("cp", cur.level, cur.k))
        else:
            return None
        cur = cur.base
    stack.reverse()
    return stack


def _rebase_leaf(e, n, alpha, c):
    """Transport e in [alpha, alpha(+^n)) to the interval over c, else None."""
    if e == alpha:
        return c
    stack = _tower_over(e, alpha)
    if stack is None:
        return None
    out = c
    for step in stack:
        if step[0] == "succ":
            if step[1] >= n:
                return None
            out = tm.mk_succ(out, step[1])
        else:
            if step[1] + 1 > n:
                return None
            out = tm.mk_canonical(step[1], out, step[2])
    return out


def make_map(pairs, threshold=None, rebase=None) -> SubstMap:
    """Validate and build a strictly increasing map from (from, to) pairs."""
    pairs = list(pairs)
    seen = []
    for src, dst in pairs:
        if any(src == s for s in seen):
            raise MapInvalid(f"duplicate domain leaf {src!r}")
        seen.append(src)
    pairs.sort(key=lambda p: tm._LeafKey(p[0]))
    for (s1, d1), (s2, d2) in zip(pairs, pairs[1:]):
        if tm.compare_leaves(s1, s2) is not LT:
            raise MapInvalid(f"domain not strictly increasing at {s1!r}, {s2!r}")
        if tm.compare_leaves(d1, d2) is not LT:
            raise MapInvalid(
                f"map not strictly increasing: {s1!r}->{d1!r} but {s2!r}->{d2!r}"
            )
    if threshold is not None:
        for src, dst in pairs:
            if tm.compare_leaves(src, threshold) is LT:
                raise MapInvalid(
                    f"override {src!r} lies inside the identity region"
                )
            if tm.compare_leaves(dst, threshold) is LT:
                raise MapInvalid(
                    f"image {dst!r} falls below the identity region"
                )
    return SubstMap(tuple(pairs), threshold, rebase)


def identity_map() -> SubstMap:
    return SubstMap(())


def apply_subst(x: tm.OrdTerm, f: SubstMap) -> tm.OrdTerm:
    """x[f]: replace every epsilon leaf of the normal form through f."""
    if isinstance(x, tm.Leaf):
        return tm.Leaf(f.lookup(x.leaf))
    if isinstance(x, (tm.Zero, tm.NatSum)):
        return x
    return tm.from_monomials(
        tuple((apply_subst(e, f), c) for e, c in x.monomials)
    )


def invert_map(f: SubstMap) -> SubstMap:
    if f.rebase is not None:
        n, alpha, c = f.rebase
        return SubstMap(
            tuple((d, s) for s, d in f.overrides),
            f.threshold,
            (n, c, alpha),
        )
    return make_map([(d, s) for s, d in f.overrides], f.threshold)


def compose_maps(outer: SubstMap, inner: SubstMap) -> SubstMap:
    """The map e -> outer(inner(e)); t[compose(f,g)] = t[g][f]."""
    if inner.rebase is not None or outer.rebase is not None:
        return _compose_rebase(outer, inner)
    new_threshold = None
    if inner.threshold is not None and outer.threshold is not None:
        new_threshold = (
            inner.threshold
            if tm.compare_leaves(inner.threshold, outer.threshold) is not GT
            else outer.threshold
        )
    pairs = []
    for src, mid in inner.overrides:
        try:
            pairs.append((src, outer.lookup(mid)))
        except LeafOutsideDomain as exc:
            raise CompositionUnsupported(
                f"image {mid!r} of {src!r} escapes the outer domain"
            ) from exc
    if inner.threshold is not None:
        for src, dst in outer.overrides:
            if tm.compare_leaves(src, inner.threshold) is LT and not any(
                src == s for s, _ in pairs
            ):
                pairs.append((src, dst))
    return make_map(pairs, new_threshold)


def _compose_rebase(outer, inner):
    if (
        inner.rebase is not None
        and outer.rebase is not None
        and inner.rebase[0] == outer.rebase[0]
        and inner.rebase[2] == outer.rebase[1]
    ):
        n, alpha, _ = inner.rebase
        c = outer.rebase[2]
        new_threshold = None
        if inner.threshold is not None and outer.threshold is not None:
            new_threshold = (
                inner.threshold
                if tm.compare_leaves(inner.threshold, outer.threshold) is not GT
                else outer.threshold
            )
        return SubstMap(((alpha, c),), new_threshold, (n, alpha, c))
    raise CompositionUnsupported(
        "composition of these transport maps is not representable"
    )


def compare_maps(f: SubstMap, g: SubstMap) -> MapOrder:
    """Pointwise comparison on a shared domain."""
    if f.rebase is not None or g.rebase is not None:
        if f == g:
            return MapOrder.EQ
        if (
            f.rebase is None
            or g.rebase is None
            or f.rebase[:2] != g.rebase[:2]
            or f.threshold != g.threshold
        ):
            raise MapInvalid("maps have different domains")
    else:
        if (f.threshold is None) != (g.threshold is None) or (
            f.threshold is not None
            and tm.compare_leaves(f.threshold, g.threshold) is not EQ
        ):
            raise MapInvalid("maps have different domains")
        if f.domain_leaves() != g.domain_leaves():
            raise MapInvalid("maps have different domains")
    saw_lt = saw_gt = False
    for src in f.domain_leaves():
        c = tm.compare_leaves(f.lookup(src), g.lookup(src))
        if c is LT:
            saw_lt = True
        elif c is GT:
            saw_gt = True
    if saw_lt and saw_gt:
        return MapOrder.INCOMPARABLE
    if saw_lt:
        return MapOrder.LT
    if saw_gt:
        return MapOrder.GT
    return MapOrder.EQ


def map_leq(order: MapOrder) -> bool:
    return order in (MapOrder.EQ, MapOrder.LT, MapOrder.LE)


def map_from_json(data, atoms=None) -> SubstMap:
    from .grammar import parse_ord

    def leaf_of(text):
        t = parse_ord(text, atoms)
        if not isinstance(t, tm.Leaf):
            raise MapInvalid(f"{text!r} is not an epsilon leaf")
        return t.leaf

    pairs = [(leaf_of(s), leaf_of(d)) for s, d in data.get("overrides", ())]
    threshold = None
    if data.get("rule") in ("identity-below", "rebase-above"):
        threshold = leaf_of(data["threshold"]) if "threshold" in data else None
    rebase = None
    if data.get("rule") == "rebase-above":
        rebase = (int(data["level"]), leaf_of(data["from"]), leaf_of(data["to"]))
    return SubstMap(tuple(pairs), threshold, rebase)
