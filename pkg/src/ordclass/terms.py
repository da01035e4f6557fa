"""Exact Cantor-Normal-Form ordinal terms over epsilon-number leaves.

A term is Zero, a finite ordinal, a CNF sum of omega-power monomials, or a
single epsilon leaf.  Leaves are concrete epsilons, declared class atoms,
successor-functional points b(+^k), or canonical points x_k(j+1, b).  All
values are immutable and hashable; arithmetic and comparison are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from .errors import LevelViolation, OrderUndecidable


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


LT, EQ, GT = Ordering.LT, Ordering.EQ, Ordering.GT


# ---------------------------------------------------------------------------
# leaves


@dataclass(frozen=True)
class ConcreteEps:
    """eps(index): the index-th epsilon number, index an atom-free term."""

    index: "OrdTerm"

    def __repr__(self):
        return f"eps({self.index!r})"


@dataclass(frozen=True)
class ClassAtom:
    """A declared symbolic ordinal of the given class level."""

    name: str
    level: int
    rank: int

    def __repr__(self):
        return f"{self.name}@{self.level}"


@dataclass(frozen=True)
class Succ:
    """base(+^k): least Class(k) element above base; requires level(base) >= k."""

    base: "EpsLeaf"
    k: int

    def __repr__(self):
        return f"{self.base!r}(+{self.k})"


@dataclass(frozen=True)
class CanonicalPoint:
    """k-th canonical point of level `level` over base, i.e. x_k(level+1, base).

    Requires level(base) >= level + 1.
    """

    level: int
    base: "EpsLeaf"
    k: int

    def __repr__(self):
        return f"cp({self.level + 1},{self.k},{self.base!r})"


EpsLeaf = ConcreteEps | ClassAtom | Succ | CanonicalPoint


def leaf_level(e: EpsLeaf) -> int:
    if isinstance(e, ConcreteEps):
        return 1
    if isinstance(e, ClassAtom):
        return e.level
    if isinstance(e, Succ):
        return e.k
    return e.level


def mk_succ(base: EpsLeaf, k: int) -> EpsLeaf:
    """base(+^k), normalizing the concrete case eps(g)(+1) = eps(g+1)."""
    if k < 1:
        raise LevelViolation(f"successor level must be >= 1, got {k}")
    if leaf_level(base) < k:
        raise LevelViolation(
            f"cannot apply (+^{k}) to a level-{leaf_level(base)} leaf {base!r}"
        )
    if isinstance(base, ConcreteEps):
        return ConcreteEps(add(base.index, one()))
    return Succ(base, k)


def mk_canonical(level: int, base: EpsLeaf, k: int) -> EpsLeaf:
    if level < 1 or k < 1:
        raise LevelViolation("canonical point needs level >= 1 and k >= 1")
    if leaf_level(base) < level + 1:
        raise LevelViolation(
            f"canonical point of level {level} needs a base of level >= {level + 1},"
            f" got {base!r}"
        )
    return CanonicalPoint(level, base, k)


def leaf_root(e: EpsLeaf) -> EpsLeaf:
    while isinstance(e, (Succ, CanonicalPoint)):
        e = e.base
    return e


def leaf_path(e: EpsLeaf):
    """Constructor keys from the root outward; see compare for the order."""
    keys = []
    while isinstance(e, (Succ, CanonicalPoint)):
        if isinstance(e, Succ):
            keys.append((e.k, 0, 0))
        else:
            keys.append((e.level, 1, e.k))
        e = e.base
    keys.reverse()
    return e, tuple(keys)


def leaf_base_chain(e: EpsLeaf):
    """The leaf followed by its bases down to the root (levels weakly increase)."""
    chain = [e]
    while isinstance(e, (Succ, CanonicalPoint)):
        e = e.base
        chain.append(e)
    return chain


def _escape_level(path) -> int:
    """Least class level whose members above the root bound the whole tower."""
    if not path:
        return 0
    return 1 + max(key[0] for key in path)


def compare_leaves(a: EpsLeaf, b: EpsLeaf) -> Ordering:
    if a == b:
        return EQ
    ra, pa = leaf_path(a)
    rb, pb = leaf_path(b)
    a_concrete = isinstance(ra, ConcreteEps)
    b_concrete = isinstance(rb, ConcreteEps)
    if a_concrete and b_concrete:
        # concrete leaves never carry constructors (mk_succ normalizes)
        return compare(ra.index, rb.index)
    if a_concrete != b_concrete:
        # declared atoms live above the concrete notation range
        return LT if a_concrete else GT
    if ra == rb:
        if pa == pb[: len(pa)]:
            return LT
        if pb == pa[: len(pb)]:
            return GT
        return LT if pa < pb else GT
    if ra.rank == rb.rank:
        raise OrderUndecidable(a, b)
    root_cmp = LT if ra.rank < rb.rank else GT
    lower_path = pa if root_cmp is LT else pb
    upper_root = rb if root_cmp is LT else ra
    if _escape_level(lower_path) <= leaf_level(upper_root):
        return root_cmp
    raise OrderUndecidable(a, b)


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Zero:
    def __repr__(self):
        return "0"


@dataclass(frozen=True)
class NatSum:
    """A finite ordinal n >= 1."""

    n: int

    def __repr__(self):
        return str(self.n)


@dataclass(frozen=True)
class Cnf:
    """Sum of monomials (exponent, coefficient), exponents strictly decreasing."""

    monomials: tuple[tuple["OrdTerm", int], ...]

    def __repr__(self):
        return "+".join(
            f"w^({e!r})*{c}" if c > 1 else f"w^({e!r})" for e, c in self.monomials
        )


@dataclass(frozen=True)
class Leaf:
    leaf: EpsLeaf

    def __repr__(self):
        return repr(self.leaf)


OrdTerm = Zero | NatSum | Cnf | Leaf

ZERO = Zero()


def one() -> OrdTerm:
    return NatSum(1)


def nat(n: int) -> OrdTerm:
    if n < 0:
        raise ValueError("ordinals are non-negative")
    return ZERO if n == 0 else NatSum(n)


def omega() -> OrdTerm:
    return Cnf(((one(), 1),))


def monomials_of(t: OrdTerm) -> tuple[tuple[OrdTerm, int], ...]:
    if isinstance(t, Zero):
        return ()
    if isinstance(t, NatSum):
        return ((ZERO, t.n),)
    if isinstance(t, Leaf):
        return ((t, 1),)
    return t.monomials


def from_monomials(monos) -> OrdTerm:
    """Rebuild a normal-form term from strictly-decreasing monomials."""
    monos = tuple((e, c) for e, c in monos if c > 0)
    if not monos:
        return ZERO
    if len(monos) == 1:
        (e, c) = monos[0]
        if isinstance(e, Zero):
            return NatSum(c)
        if c == 1 and isinstance(e, Leaf):
            # epsilon fixed point: w^e = e
            return e
    return Cnf(monos)


def is_epsilon(t: OrdTerm) -> bool:
    return isinstance(t, Leaf)


def compare(a: OrdTerm, b: OrdTerm) -> Ordering:
    if a == b:
        return EQ
    if isinstance(a, Leaf) and isinstance(b, Leaf):
        return compare_leaves(a.leaf, b.leaf)
    ma, mb = monomials_of(a), monomials_of(b)
    for (ea, ca), (eb, cb) in zip(ma, mb):
        c = compare(ea, eb)
        if c is not EQ:
            return c
        if ca != cb:
            return LT if ca < cb else GT
    if len(ma) == len(mb):
        return EQ
    return LT if len(ma) < len(mb) else GT


def lt(a, b):
    return compare(a, b) is LT


def le(a, b):
    return compare(a, b) is not GT


def eq(a, b):
    return compare(a, b) is EQ


def add(a: OrdTerm, b: OrdTerm) -> OrdTerm:
    ma, mb = monomials_of(a), monomials_of(b)
    if not mb:
        return a
    if not ma:
        return b
    head_b = mb[0][0]
    keep = [m for m in ma if compare(m[0], head_b) is GT]
    merged = list(mb)
    if len(keep) < len(ma) and eq(ma[len(keep)][0], head_b):
        merged[0] = (head_b, ma[len(keep)][1] + mb[0][1])
    return from_monomials(keep + merged)


def mul(a: OrdTerm, b: OrdTerm) -> OrdTerm:
    ma = monomials_of(a)
    if not ma or isinstance(b, Zero):
        return ZERO
    lead_exp, lead_coeff = ma[0]
    out: OrdTerm = ZERO
    for e, c in monomials_of(b):
        if isinstance(e, Zero):
            # right-multiplication by a finite part scales the head once
            out = add(out, from_monomials(((lead_exp, lead_coeff * c),) + ma[1:]))
        else:
            out = add(out, from_monomials(((add(lead_exp, e), c),)))
    return out


def omega_pow(a: OrdTerm) -> OrdTerm:
    return from_monomials(((a, 1),))


def left_subtract(a: OrdTerm, b: OrdTerm) -> OrdTerm:
    """The unique c with a + c = b; requires a <= b."""
    ma, mb = monomials_of(a), monomials_of(b)
    i = 0
    while i < len(ma) and i < len(mb) and mb[i] == ma[i]:
        i += 1
    if i == len(ma):
        return from_monomials(mb[i:])
    if i == len(mb):
        raise ValueError("left_subtract requires a <= b")
    ea, ca = ma[i]
    eb, cb = mb[i]
    c = compare(ea, eb)
    if c is GT or (c is EQ and ca >= cb):
        raise ValueError("left_subtract requires a <= b")
    if c is EQ:
        return from_monomials(((eb, cb - ca),) + mb[i + 1 :])
    return from_monomials(mb[i:])


@dataclass(frozen=True)
class Flags:
    is_zero: bool
    is_successor: bool
    is_limit: bool
    is_principal: bool
    is_epsilon: bool


def classify(t: OrdTerm) -> Flags:
    monos = monomials_of(t)
    zero = not monos
    successor = bool(monos) and isinstance(monos[-1][0], Zero)
    principal = len(monos) == 1 and monos[0][1] == 1
    return Flags(
        is_zero=zero,
        is_successor=successor,
        is_limit=bool(monos) and not successor,
        is_principal=principal,
        is_epsilon=isinstance(t, Leaf),
    )


def pi_head(t: OrdTerm) -> OrdTerm:
    """Leading additive-principal summand of a nonzero term."""
    monos = monomials_of(t)
    if not monos:
        raise ValueError("pi_head of 0")
    return from_monomials(((monos[0][0], 1),))


def ep_set(t: OrdTerm) -> tuple[EpsLeaf, ...]:
    """Epsilon leaves of the normal form, in strictly decreasing order."""
    found: list[EpsLeaf] = []

    def walk(u: OrdTerm):
        if isinstance(u, Leaf):
            if u.leaf not in found:
                found.append(u.leaf)
            return
        for e, _ in monomials_of(u):
            walk(e)

    walk(t)
    found.sort(key=_LeafKey, reverse=True)
    return tuple(found)


class _LeafKey:
    """Total-order adapter so leaves can be sorted via compare_leaves."""

    __slots__ = ("leaf",)

    def __init__(self, leaf):
        self.leaf = leaf

    def __lt__(self, other):
        return compare_leaves(self.leaf, other.leaf) is LT

    def __eq__(self, other):
        return self.leaf == other.leaf


def sort_leaves(leaves, reverse=False):
    return tuple(sorted(set(leaves), key=_LeafKey, reverse=reverse))


def omega_tower(e: EpsLeaf, k: int) -> OrdTerm:
    """w_0(e) = e + 1, w_{j+1}(e) = w^(w_j(e))."""
    if k < 0:
        raise ValueError("tower height must be >= 0")
    t = add(Leaf(e), one())
    for _ in range(k):
        t = omega_pow(t)
    return t


def rebuild(t: OrdTerm) -> OrdTerm:
    """Re-normalize a term bottom-up through the smart constructors."""
    if isinstance(t, (Zero, NatSum, Leaf)):
        return from_monomials(monomials_of(t))
    return from_monomials(tuple((rebuild(e), c) for e, c in t.monomials))
