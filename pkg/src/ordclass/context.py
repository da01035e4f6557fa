"""Declaration environment for the symbolic regime.

A ClassContext holds the declared class atoms, the partial table of known
m-values, and every leaf materialized so far (the "skeleton"), which the
S-set and T-set computations enumerate over.
"""

from __future__ import annotations

import json

from . import terms as tm
from .errors import LevelViolation, MissingMValue, UndeclaredAtom, Undecidable
from .terms import GT, LT


class NegInfinity:
    """Sentinel below every ordinal; the 'no Class(j) element <= t' answer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-inf"


NEG_INFINITY = NegInfinity()


class ClassContext:
    def __init__(self):
        self.atoms: dict[str, tm.ClassAtom] = {}
        self.m_table: dict[tm.OrdTerm, tm.OrdTerm] = {}
        self.known_leaves: list[tm.EpsLeaf] = []

    # -- declarations -------------------------------------------------------

    def declare(self, name: str, level: int) -> tm.ClassAtom:
        if level < 1:
            raise LevelViolation(f"atom level must be >= 1, got {level}")
        if name in self.atoms:
            raise LevelViolation(f"atom {name!r} already declared")
        atom = tm.ClassAtom(name, level, rank=len(self.atoms))
        self.atoms[name] = atom
        self.register(atom)
        return atom

    def atom(self, name: str) -> tm.ClassAtom:
        try:
            return self.atoms[name]
        except KeyError:
            raise UndeclaredAtom(name) from None

    @property
    def n_max(self) -> int:
        return max((a.level for a in self.atoms.values()), default=1)

    def register(self, leaf: tm.EpsLeaf):
        if leaf not in self.known_leaves:
            self.known_leaves.append(leaf)

    def leaves_between(self, lo: tm.OrdTerm, hi: tm.OrdTerm, min_level=1):
        """Known leaves in the open interval (lo, hi), increasing."""
        out = [
            e
            for e in self.known_leaves
            if tm.leaf_level(e) >= min_level
            and tm.compare(tm.Leaf(e), lo) is GT
            and tm.compare(tm.Leaf(e), hi) is LT
        ]
        return tm.sort_leaves(out)

    # -- m-values ------------------------------------------------------------

    def set_m(self, term: tm.OrdTerm, value: tm.OrdTerm):
        if tm.compare(value, term) is LT:
            raise LevelViolation(
                f"m-annotation below its argument: m({term!r}) = {value!r}"
            )
        self.m_table[term] = value

    def m_of(self, term: tm.OrdTerm) -> tm.OrdTerm:
        """Annotated or structurally forced m-value; loud on genuine gaps."""
        hit = self.m_table.get(term)
        if hit is not None:
            return hit
        flags = tm.classify(term)
        if flags.is_zero or flags.is_successor:
            return term
        if isinstance(term, tm.Leaf) and isinstance(term.leaf, tm.Succ):
            # a (+^k)-point is not a limit of Class(k); its reach is the
            # degenerate chain bound
            return chain_bound(term.leaf, term.leaf.k)
        if not flags.is_principal:
            # non-principal limits reach no further than themselves
            return term
        raise MissingMValue(term)

    def has_m(self, term: tm.OrdTerm) -> bool:
        try:
            self.m_of(term)
            return True
        except MissingMValue:
            return False

    # -- serialization -------------------------------------------------------

    def to_json(self):
        from .grammar import render_ord

        return {
            "atoms": [
                {"name": a.name, "level": a.level}
                for a in sorted(self.atoms.values(), key=lambda a: a.rank)
            ],
            "m_annotations": [
                [render_ord(k), render_ord(v)] for k, v in self.m_table.items()
            ],
        }

    @classmethod
    def from_json(cls, data) -> "ClassContext":
        from .grammar import parse_ord

        ctx = cls()
        for a in data.get("atoms", ()):
            ctx.declare(a["name"], int(a["level"]))
        for key, value in data.get("m_annotations", ()):
            ctx.set_m(parse_ord(key, ctx.atoms), parse_ord(value, ctx.atoms))
        return ctx

    @classmethod
    def load(cls, path) -> "ClassContext":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# skeleton basics


def class_succ(ctx: ClassContext | None, a: tm.EpsLeaf, k: int) -> tm.EpsLeaf:
    """a(+^k); for concrete epsilons and k = 1 the next epsilon."""
    leaf = tm.mk_succ(a, k)
    if ctx is not None:
        ctx.register(leaf)
    return leaf


def chain_down(ctx: ClassContext, a: tm.EpsLeaf) -> list[tm.EpsLeaf]:
    """[a_n, ..., a_1] with a_{j-1} = a_j(+^{j-1}); annotates m(a_j) = a_1*2."""
    n = tm.leaf_level(a)
    chain = [a]
    cur = a
    for j in range(n - 1, 0, -1):
        cur = tm.mk_succ(cur, j)
        chain.append(cur)
    bound = tm.mul(tm.Leaf(chain[-1]), tm.nat(2))
    for leaf in chain:
        ctx.register(leaf)
    for leaf in chain[1:]:
        ctx.set_m(tm.Leaf(leaf), bound)
    return chain


def chain_bound(a: tm.EpsLeaf, k: int) -> tm.OrdTerm:
    """a(+^{k-1})(+^{k-2})...(+^1)*2, read as a*2 when k = 1."""
    cur = a
    for j in range(k - 1, 0, -1):
        cur = tm.mk_succ(cur, j)
    return tm.mul(tm.Leaf(cur), tm.nat(2))


def class_level(x: tm.OrdTerm, rel=None) -> int:
    """Largest j with x in Class(j) readable from the leaf structure."""
    if not isinstance(x, tm.Leaf):
        if rel is not None:
            return rel.class_level_of(x)
        return 0
    return tm.leaf_level(x.leaf)


def _leading_leaf(t: tm.OrdTerm) -> tm.EpsLeaf | None:
    """The largest epsilon leaf <= t, or None when t < eps_0."""
    while True:
        if isinstance(t, tm.Leaf):
            return t.leaf
        monos = tm.monomials_of(t)
        if not monos:
            return None
        head = monos[0][0]
        if isinstance(head, tm.Zero):
            return None
        t = head


def lambda_locate(ctx: ClassContext | None, j: int, t: tm.OrdTerm):
    """The unique delta in Class(j) with t in [delta, delta(+^j)), or -inf."""
    if j < 1:
        raise LevelViolation("lambda level must be >= 1")
    leaf = _leading_leaf(t)
    if leaf is None:
        return NEG_INFINITY
    if tm.leaf_level(leaf) >= j:
        return leaf
    for base in tm.leaf_base_chain(leaf)[1:]:
        if tm.leaf_level(base) >= j:
            # all constructors above `base` have level < j, so t < base(+^j)
            return base
    if isinstance(tm.leaf_root(leaf), tm.ConcreteEps):
        return NEG_INFINITY
    raise Undecidable(
        f"no Class({j}) element below {t!r} is derivable from its structure"
    )
