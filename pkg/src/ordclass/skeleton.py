"""Class(n) machinery over declared atoms (structural) and grid ordinals
(oracle): eta/l operators, canonical sequences, T-sets, f/S-sets, g-maps.

Modes are explicit and never mixed: `structural` works from the context's
m-annotations and the derivation rules in ClassContext.m_of; `oracle` works
from a computed grid relation and its m-hat frontier.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import terms as tm
from .context import ClassContext, chain_bound, lambda_locate
from .errors import (
    IterationCapExceeded,
    LevelViolation,
    MissingMValue,
    RegimeMixed,
    Undecidable,
)
from .subst import SubstMap, apply_subst, make_map
from .terms import EQ, GT, LT

STRUCTURAL = "structural"
ORACLE = "oracle"

O_RECURSION_CAP = 16


def _check_interval(k, alpha, t):
    if k < 1:
        raise LevelViolation("class level must be >= 1")
    if tm.leaf_level(alpha) < k:
        raise LevelViolation(
            f"{alpha!r} has level {tm.leaf_level(alpha)} < {k}"
        )
    a = tm.Leaf(alpha)
    if tm.compare(t, a) is LT:
        raise LevelViolation(f"{t!r} lies below {alpha!r}")
    upper = tm.Leaf(tm.mk_succ(alpha, k))
    if tm.compare(t, upper) is not LT:
        raise LevelViolation(f"{t!r} is not below {alpha!r}(+^{k})")


def _mode_args(mode, ctx, rel):
    if mode == STRUCTURAL:
        if ctx is None:
            raise RegimeMixed("structural mode requires a context")
        return
    if mode == ORACLE:
        if rel is None:
            raise RegimeMixed("oracle mode requires a computed relation")
        return
    raise RegimeMixed(f"unknown mode {mode!r}")


def _structural_candidates(ctx, k, alpha, t):
    """(r, m(r)) for every known r in (alpha, t] whose m is available."""
    a = tm.Leaf(alpha)

    def inside(r):
        return tm.compare(r, a) is GT and tm.compare(r, t) is not GT

    out = {}
    cur = alpha
    for j in range(k - 1, 0, -1):
        cur = tm.mk_succ(cur, j)
        r = tm.Leaf(cur)
        if inside(r):
            out[r] = chain_bound(alpha, k)
    for r, m in ctx.m_table.items():
        if inside(r):
            out[r] = m
    for leaf in ctx.known_leaves:
        r = tm.Leaf(leaf)
        if r not in out and inside(r) and ctx.has_m(r):
            out[r] = ctx.m_of(r)
    if t not in out:
        out[t] = ctx.m_of(t)
    return out


def eta_compute(k, alpha, t, mode=STRUCTURAL, *, ctx=None, rel=None):
    """max m over (alpha, t], with the degenerate chain value on the low part."""
    _mode_args(mode, ctx, rel)
    _check_interval(k, alpha, t)
    bound = chain_bound(alpha, k)
    if tm.compare(t, bound) is not GT:
        return bound
    if mode == ORACLE:
        rel.m_hat(t)  # t must be a grid point
        values = [rel.m_hat(r) for r in rel.points_in(tm.Leaf(alpha), t)]
        best = values[0]
        for v in values[1:]:
            if tm.compare(v, best) is GT:
                best = v
        return best
    best = None
    for _, m in _structural_candidates(ctx, k, alpha, t).items():
        if best is None or tm.compare(m, best) is GT:
            best = m
    return best


def l_compute(k, alpha, t, mode=STRUCTURAL, *, ctx=None, rel=None):
    """Least r in (alpha, t] whose m realizes the eta maximum."""
    _mode_args(mode, ctx, rel)
    _check_interval(k, alpha, t)
    bound = chain_bound(alpha, k)
    if tm.compare(t, bound) is not GT:
        return bound
    eta = eta_compute(k, alpha, t, mode, ctx=ctx, rel=rel)
    if mode == ORACLE:
        for r in rel.points_in(tm.Leaf(alpha), t):
            if tm.compare(rel.m_hat(r), eta) is EQ:
                return r
        raise AssertionError("eta maximum vanished")
    hits = [
        r
        for r, m in _structural_candidates(ctx, k, alpha, t).items()
        if tm.compare(m, eta) is EQ
    ]
    best = hits[0]
    for r in hits[1:]:
        if tm.compare(r, best) is LT:
            best = r
    return best


# ---------------------------------------------------------------------------
# canonical sequences


@dataclass(frozen=True)
class CanonicalData:
    x: tm.OrdTerm
    gamma: tm.OrdTerm
    o_chain: tuple[tm.EpsLeaf, ...]  # o_1 > ... > o_i = e (empty for i = 1)


def _symbolic_gamma(e: tm.EpsLeaf, k: int) -> tm.OrdTerm:
    """Symbolic stand-in for m(w_k(e)): w_k(e) + w_{k-1}(e)."""
    return tm.add(tm.omega_tower(e, k), tm.omega_tower(e, k - 1))


def canonical_point(ctx, i, e, k, mode=STRUCTURAL, *, rel=None) -> CanonicalData:
    """The paper-indexed point x_k(i, e) and its reach gamma_k(i, e)."""
    _mode_args(mode, ctx if mode == STRUCTURAL else None, rel)
    if i < 1 or k < 1:
        raise LevelViolation("canonical sequence needs i >= 1 and k >= 1")
    if tm.leaf_level(e) < i:
        raise LevelViolation(f"{e!r} has level below {i}")
    if i == 1:
        x = tm.omega_tower(e, k)
        if mode == ORACLE:
            gamma = rel.m_hat(x)
        else:
            gamma = _symbolic_gamma(e, k)
            ctx.set_m(x, gamma)
        return CanonicalData(x, gamma, (e,))
    if mode == ORACLE:
        raise RegimeMixed("oracle mode only carries level-1 canonical data")
    # o_{i-1} = x_k(i, e), o_{j-1} = x_k(j, o_j); gamma = m(o_1)
    chain = [e]
    cur = e
    for j in range(i, 1, -1):
        cur = tm.mk_canonical(j - 1, cur, k)
        ctx.register(cur)
        chain.append(cur)
    o1 = chain[-1]
    gamma = _symbolic_gamma(o1, k)
    ctx.set_m(tm.omega_tower(o1, k), gamma)
    for leaf in chain[1:]:
        ctx.set_m(tm.Leaf(leaf), gamma)
    o_chain = tuple(reversed(chain))
    return CanonicalData(tm.Leaf(chain[1]), gamma, o_chain)


# ---------------------------------------------------------------------------
# T-sets


@dataclass(frozen=True)
class TSet:
    elements: tuple[tm.EpsLeaf, ...]  # strictly decreasing

    def __contains__(self, leaf):
        return leaf in self.elements

    def intersect_below(self, cut: tm.EpsLeaf) -> tuple[tm.EpsLeaf, ...]:
        return tuple(
            e for e in self.elements if tm.compare_leaves(e, cut) is LT
        )


@dataclass(frozen=True)
class FSet:
    elements: tuple[tm.EpsLeaf, ...]  # sigma_1 > ... > sigma_q


def _exact_level(e: tm.EpsLeaf, k: int) -> bool:
    return tm.leaf_level(e) == k


def T_set(ctx: ClassContext, n: int, alpha: tm.EpsLeaf, t: tm.OrdTerm) -> TSet:
    if n < 1:
        raise LevelViolation("T-set level must be >= 1")
    upper = tm.Leaf(tm.mk_succ(alpha, n))
    if tm.compare(t, upper) is not LT:
        raise LevelViolation(f"{t!r} is not below {alpha!r}(+^{n})")
    if n == 1:
        return TSet(tm.ep_set(t))
    a = tm.Leaf(alpha)
    if not isinstance(t, tm.Leaf):
        acc: list[tm.EpsLeaf] = []
        for e in tm.ep_set(t):
            for member in T_set(ctx, n, alpha, tm.Leaf(e)).elements:
                if member not in acc:
                    acc.append(member)
        return TSet(tm.sort_leaves(acc, reverse=True))
    leaf = t.leaf
    if tm.compare(t, a) is not GT:
        return TSet((leaf,))
    # t is an epsilon inside (alpha, alpha(+^n)): iterate the O-recursion
    m_t = ctx.m_of(t)
    chain = []
    cur = lambda_locate(ctx, 1, m_t)
    chain.append(cur)
    for j in range(2, n + 1):
        cur = lambda_locate(ctx, j, tm.Leaf(cur))
        chain.append(cur)
    members = set()
    frontier = [c for c in chain if _in_open_interval(c, a, upper)]
    for _ in range(O_RECURSION_CAP):
        new = set()
        for delta in frontier:
            k = tm.leaf_level(delta)
            if not 1 <= k <= n - 1:
                continue
            lam = lambda_locate(ctx, k + 1, tm.Leaf(delta))
            if not isinstance(lam, (tm.ConcreteEps, tm.ClassAtom, tm.Succ, tm.CanonicalPoint)):
                raise Undecidable(f"lambda({k + 1}, {delta!r}) is not an ordinal")
            fset = f_and_S(ctx, k + 1, lam, delta)[1]
            for x in fset.elements:
                new.add(x)
            for x in tm.ep_set(ctx.m_of(tm.Leaf(delta))):
                new.add(x)
            new.add(lam)
        if new <= members:
            return TSet(tm.sort_leaves(members, reverse=True))
        members |= new
        frontier = [c for c in members if _in_open_interval(c, a, upper)]
    raise IterationCapExceeded(
        f"O-recursion did not stabilize within {O_RECURSION_CAP} rounds",
        trace=tm.sort_leaves(members, reverse=True),
    )


def _in_open_interval(e: tm.EpsLeaf, lo: tm.OrdTerm, hi: tm.OrdTerm) -> bool:
    le = tm.Leaf(e)
    return tm.compare(le, lo) is GT and tm.compare(le, hi) is LT


# ---------------------------------------------------------------------------
# f- and S-sets


def f_and_S(ctx: ClassContext, n: int, alpha: tm.EpsLeaf, delta: tm.EpsLeaf):
    """S(n, alpha)(delta) over the known skeleton, and f(n, alpha)(delta)."""
    if n == 1:
        return (), FSet(())
    a = tm.Leaf(alpha)
    upper = tm.Leaf(tm.mk_succ(alpha, n))
    d = tm.Leaf(delta)
    m_delta = ctx.m_of(d)
    s_members = []
    for e in ctx.leaves_between(a, d, min_level=n - 1):
        if not _in_open_interval(e, a, upper):
            continue
        g = g_map(ctx, n - 1, e, delta)
        moved = apply_subst(ctx.m_of(tm.Leaf(e)), g)
        if tm.compare(moved, m_delta) is not LT:
            s_members.append(e)
    s_members = tm.sort_leaves(s_members)
    f_elems = [delta]
    if s_members:
        sup = s_members[-1]
        f_elems.extend(f_and_S(ctx, n, alpha, sup)[1].elements)
    return tuple(s_members), FSet(tuple(f_elems))


# ---------------------------------------------------------------------------
# g-maps


def g_map(ctx, n: int, alpha: tm.EpsLeaf, c: tm.EpsLeaf) -> SubstMap:
    """The interval-transport substitution g(n, alpha, c)."""
    if n < 1:
        raise LevelViolation("g-map level must be >= 1")
    if tm.leaf_level(alpha) < n:
        raise LevelViolation(f"{alpha!r} has level below {n}")
    if tm.leaf_level(c) < n:
        raise LevelViolation(f"{c!r} has level below {n}")
    threshold = (
        alpha if tm.compare_leaves(alpha, c) is not GT else c
    )
    if n == 1:
        return make_map([(alpha, c)], threshold=threshold)
    return make_map([(alpha, c)], threshold=threshold, rebase=(n, alpha, c))
