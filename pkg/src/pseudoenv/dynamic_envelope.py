"""Fully dynamic lower envelope of pseudo-lines.

The outer tree is a leaf-oriented AVL tree over the pseudo-lines in their
order at x = -inf.  Each node ``v`` represents the envelope ``L(v)`` of its
subtree but stores only the part of it that does not appear on its parent's
envelope, in ``v.hidden``:

* a left child keeps the segments after the bridge (a suffix of ``L(v)``),
* a right child keeps the segments before the bridge (a prefix),
* the root keeps the whole envelope.

The pseudo-line whose segment the bridge cuts stays visible in the parent,
so each pseudo-line has exactly one segment across all ``hidden`` trees.

An update walks down from the root, rebuilding the full envelope of every
node it passes (``_expand``), then walks back up recomputing bridges
(``_combine``).  Each level costs one intersection search plus O(1) splits
and joins, for O(log^2 n) per update.  Ray shooting is one search in the
root envelope.
"""
from __future__ import annotations

from typing import Hashable, Iterable

from . import envelope_tree as et
from .envelope_tree import EnvelopeTree, singleton
from .errors import (
    DuplicateId,
    EmptyStructure,
    FamilyMismatch,
    InadmissiblePair,
    InvariantViolation,
    UnknownId,
)
from .geometry import NEG_INF, POS_INF, Point, PseudoLine, below_at_neg_inf, sort_by_order, x_greater, x_less
from .tentative_search import find_intersection


class XiNode:
    __slots__ = ("parent", "left", "right", "height", "max", "line", "hidden", "bridge")

    def __init__(self, line: PseudoLine | None = None):
        self.parent = None
        self.left = None
        self.right = None
        self.height = 0
        self.max = line
        self.line = line
        self.hidden = EnvelopeTree()
        self.bridge = None

    @property
    def is_leaf(self) -> bool:
        return self.line is not None

    def _attach(self, left: XiNode, right: XiNode) -> None:
        self.left, self.right = left, right
        left.parent = right.parent = self
        self.height = max(left.height, right.height) + 1
        self.max = right.max

    def __repr__(self):
        if self.line is not None:
            return f"<XiLeaf {self.line.id!r}>"
        return f"<XiNode h={self.height} bridge={self.bridge}>"


def _expand(node: XiNode, env: EnvelopeTree) -> tuple[EnvelopeTree, EnvelopeTree]:
    """Rebuild the children's full envelopes from ``env`` = L(node)."""
    q = node.bridge
    qx = q.x
    vis_l, vis_r = et.split_where(env, lambda s: x_less(s.left, qx))
    hid_l, hid_r = node.left.hidden, node.right.hidden
    node.left.hidden = EnvelopeTree()
    node.right.hidden = EnvelopeTree()
    vis_l = et.with_last_right(vis_l, hid_l.first.left if hid_l else POS_INF)
    vis_r = et.with_first_left(vis_r, hid_r.last.right if hid_r else NEG_INF)
    return et.concat(vis_l, hid_l), et.concat(hid_r, vis_r)


def _combine(node: XiNode, env_l: EnvelopeTree, env_r: EnvelopeTree) -> EnvelopeTree:
    """Compute the bridge of ``node``, strand the hidden parts at its children,
    and return L(node)."""
    q, _, _ = find_intersection(env_l, env_r)
    qx = q.x
    vis_l, hid_l = et.split_where(env_l, lambda s: x_less(s.left, qx))
    hid_r, vis_r = et.split_where(env_r, lambda s: not x_greater(s.right, qx))
    node.left.hidden = hid_l
    node.right.hidden = hid_r
    node.bridge = q
    return et.concat(et.with_last_right(vis_l, q), et.with_first_left(vis_r, q))


class DynamicEnvelope:
    """Lower envelope of a changing set of pseudo-lines of one family."""

    def __init__(self, lines: Iterable[PseudoLine] = (), family: type | None = None):
        self.root: XiNode | None = None
        self.family = family
        self._lines: dict[Hashable, PseudoLine] = {}
        lines = list(lines)
        if lines:
            self._bulk_load(lines)

    def __len__(self) -> int:
        return len(self._lines)

    def __contains__(self, ident) -> bool:
        return ident in self._lines

    def lines(self) -> list[PseudoLine]:
        return list(self._lines.values())

    def get(self, ident) -> PseudoLine:
        return self._lines[ident]

    @property
    def envelope(self) -> EnvelopeTree:
        """The root envelope tree, i.e. the lower envelope of the whole set."""
        return self.root.hidden if self.root is not None else EnvelopeTree()

    def _check_family(self, pl: PseudoLine) -> None:
        if self.family is None:
            return
        if type(pl) is not self.family:
            raise FamilyMismatch(f"{type(pl).__name__} {pl.id!r} in a {self.family.__name__} structure")

    def _bulk_load(self, lines: list[PseudoLine]) -> None:
        if self.family is None:
            self.family = type(lines[0])
        for pl in lines:
            self._check_family(pl)
            if pl.id in self._lines:
                raise DuplicateId(pl.id)
            self._lines[pl.id] = pl
        ordered = sort_by_order(lines)

        def build(lo: int, hi: int) -> tuple[XiNode, EnvelopeTree]:
            if hi - lo == 1:
                return XiNode(ordered[lo]), singleton(ordered[lo])
            mid = (lo + hi) // 2
            left, env_l = build(lo, mid)
            right, env_r = build(mid, hi)
            node = XiNode()
            node._attach(left, right)
            return node, _combine(node, env_l, env_r)

        try:
            self.root, env = build(0, len(ordered))
        except Exception:
            self._lines.clear()
            self.root = None
            raise
        self.root.hidden = env

    # -- updates ----------------------------------------------------------

    def insert(self, pl: PseudoLine) -> None:
        if pl.id in self._lines:
            raise DuplicateId(f"id {pl.id!r} already present")
        if self.family is None:
            self.family = type(pl)
        self._check_family(pl)
        if self.root is None:
            self.root = XiNode(pl)
            self.root.hidden = singleton(pl)
            self._lines[pl.id] = pl
            return
        self._probe(pl)
        root, env = self._insert(self.root, self.root.hidden, pl)
        self._set_root(root, env)
        self._lines[pl.id] = pl

    def _probe(self, pl: PseudoLine) -> None:
        # read-only descent; raises InadmissiblePair before anything is modified
        node = self.root
        while node.line is None:
            node = node.left if below_at_neg_inf(pl, node.left.max) else node.right
        below_at_neg_inf(pl, node.line)

    def _insert(self, node: XiNode, env: EnvelopeTree, pl: PseudoLine) -> tuple[XiNode, EnvelopeTree]:
        if node.line is not None:
            leaf = XiNode(pl)
            parent = XiNode()
            if below_at_neg_inf(pl, node.line):
                parent._attach(leaf, node)
                return parent, _combine(parent, singleton(pl), env)
            parent._attach(node, leaf)
            return parent, _combine(parent, env, singleton(pl))
        env_l, env_r = _expand(node, env)
        if below_at_neg_inf(pl, node.left.max):
            child, env_l = self._insert(node.left, env_l, pl)
            node.left = child
        else:
            child, env_r = self._insert(node.right, env_r, pl)
            node.right = child
        return self._rebalance(node, env_l, env_r)

    def delete(self, ident) -> None:
        pl = self._lines.get(ident)
        if pl is None:
            raise UnknownId(f"id {ident!r} not present")
        if self.root.line is not None:
            self.root = None
        else:
            root, env = self._delete(self.root, self.root.hidden, pl)
            self._set_root(root, env)
        del self._lines[ident]

    def _delete(self, node: XiNode, env: EnvelopeTree, pl: PseudoLine) -> tuple[XiNode, EnvelopeTree]:
        env_l, env_r = _expand(node, env)
        left = node.left
        if left.max is pl or below_at_neg_inf(pl, left.max):
            if left.line is not None:
                return node.right, env_r
            node.left, env_l = self._delete(left, env_l, pl)
        else:
            right = node.right
            if right.line is not None:
                return left, env_l
            node.right, env_r = self._delete(right, env_r, pl)
        return self._rebalance(node, env_l, env_r)

    def _set_root(self, root: XiNode, env: EnvelopeTree) -> None:
        root.parent = None
        root.hidden = env
        self.root = root

    def _rebalance(self, node: XiNode, env_l: EnvelopeTree, env_r: EnvelopeTree) -> tuple[XiNode, EnvelopeTree]:
        a, b = node.left, node.right
        if b.height > a.height + 1:
            return self._rotate_left(node, env_l, env_r)
        if a.height > b.height + 1:
            return self._rotate_right(node, env_l, env_r)
        node._attach(a, b)
        return node, _combine(node, env_l, env_r)

    def _rotate_left(self, node, env_a, env_r):
        a, r = node.left, node.right
        env_rl, env_rr = _expand(r, env_r)
        rl, rr = r.left, r.right
        if rr.height >= rl.height:
            node._attach(a, rl)
            env_n = _combine(node, env_a, env_rl)
            r._attach(node, rr)
            return r, _combine(r, env_n, env_rr)
        env_b1, env_b2 = _expand(rl, env_rl)
        b1, b2 = rl.left, rl.right
        node._attach(a, b1)
        env_n = _combine(node, env_a, env_b1)
        r._attach(b2, rr)
        env_m = _combine(r, env_b2, env_rr)
        rl._attach(node, r)
        return rl, _combine(rl, env_n, env_m)

    def _rotate_right(self, node, env_l, env_b):
        l, b = node.left, node.right
        env_ll, env_lr = _expand(l, env_l)
        ll, lr = l.left, l.right
        if ll.height >= lr.height:
            node._attach(lr, b)
            env_n = _combine(node, env_lr, env_b)
            l._attach(ll, node)
            return l, _combine(l, env_ll, env_n)
        env_a1, env_a2 = _expand(lr, env_lr)
        a1, a2 = lr.left, lr.right
        l._attach(ll, a1)
        env_m = _combine(l, env_ll, env_a1)
        node._attach(a2, b)
        env_n = _combine(node, env_a2, env_b)
        lr._attach(l, node)
        return lr, _combine(lr, env_m, env_n)

    # -- queries ----------------------------------------------------------

    def ray_shoot(self, x0) -> PseudoLine:
        """Pseudo-line of the envelope at x = x0 (the left one at a breakpoint)."""
        if self.root is None:
            raise EmptyStructure("ray shooting into an empty structure")
        return et.locate(self.root.hidden, x0)

    def segments(self) -> list[et.EnvelopeSegment]:
        return self.envelope.segments()

    def storage(self) -> int:
        """Total number of segment leaves over all hidden trees."""
        total = 0
        stack = [self.root] if self.root is not None else []
        while stack:
            n = stack.pop()
            total += len(n.hidden)
            if n.line is None:
                stack.append(n.left)
                stack.append(n.right)
        return total

    def leaves(self) -> list[XiNode]:
        out = []
        stack = [self.root] if self.root is not None else []
        while stack:
            n = stack.pop()
            if n.line is not None:
                out.append(n)
            else:
                stack.append(n.right)
                stack.append(n.left)
        return out

    # -- validation -------------------------------------------------------

    def validate(self, *, oracle: bool = True) -> None:
        """Check every structural invariant; raise InvariantViolation naming the first broken one."""
        if self.root is None:
            if self._lines:
                raise InvariantViolation("id map: entries in an empty structure")
            return
        if self.root.parent is not None:
            raise InvariantViolation("parent pointer: root has a parent")
        self._validate_shape(self.root)

        leaves = self.leaves()
        if {n.line.id for n in leaves} != set(self._lines) or len(leaves) != len(self._lines):
            raise InvariantViolation("id map: leaves and id map disagree")
        for a, b in zip(leaves, leaves[1:]):
            if not below_at_neg_inf(a.line, b.line):
                raise InvariantViolation("leaf order")
        if self.root.height > et.height_bound(len(leaves)):
            raise InvariantViolation("height bound")

        owners: dict = {}
        stack = [self.root]
        while stack:
            n = stack.pop()
            for seg in n.hidden:
                if seg.line.id in owners:
                    raise InvariantViolation("storage: a pseudo-line has two segment leaves")
                owners[seg.line.id] = n
            if n.line is None:
                stack.extend((n.left, n.right))
        if self.storage() != len(self._lines):
            raise InvariantViolation("storage: total leaf count differs from n")

        et.check_tree(self.root.hidden, full_span=True)
        self._validate_envelopes(self.root, self.root.hidden)

        if oracle:
            from .oracle import sweep_envelope

            if [tuple(s) for s in self.root.hidden] != sweep_envelope(self._lines.values()):
                raise InvariantViolation("root envelope differs from the brute-force envelope")

    def _validate_shape(self, n: XiNode) -> None:
        if n.line is not None:
            if n.left is not None or n.right is not None or n.height != 0 or n.max is not n.line:
                raise InvariantViolation("leaf fields")
            if n is not self.root and n.hidden:
                raise InvariantViolation("hidden part of a leaf must be empty")
            return
        for c in (n.left, n.right):
            if c is None:
                raise InvariantViolation("inner node with a missing child")
            if c.parent is not n:
                raise InvariantViolation("parent pointer")
            self._validate_shape(c)
        if n.height != max(n.left.height, n.right.height) + 1:
            raise InvariantViolation("height field")
        if abs(n.left.height - n.right.height) > 1:
            raise InvariantViolation("AVL balance")
        if n.max is not n.right.max:
            raise InvariantViolation("max pointer")
        if n.bridge is None or not n.bridge.finite:
            raise InvariantViolation("bridge point")

    def _validate_envelopes(self, n: XiNode, env: EnvelopeTree) -> None:
        if n.line is not None:
            if env.segments() != [(n.line, NEG_INF, POS_INF)]:
                raise InvariantViolation("leaf envelope is its own pseudo-line")
            return
        q = n.bridge
        hid_l, hid_r = n.left.hidden, n.right.hidden
        if hid_l and not x_greater(hid_l.first.right, q.x):
            raise InvariantViolation("left child must hide a suffix beyond the bridge")
        if hid_r and not x_less(hid_r.last.left, q.x):
            raise InvariantViolation("right child must hide a prefix before the bridge")
        split = [i for i, s in enumerate(env) if s.right == q]
        if len(split) != 1:
            raise InvariantViolation("bridge is a breakpoint of the node envelope")
        vis_l, vis_r = et.split_where(env, lambda s: x_less(s.left, q.x))
        last = vis_l.last
        if last.line.at(q.x) != q.y:
            raise InvariantViolation("bridge lies on both child envelopes")
        # rebuild children without touching the stored trees
        vis_l = et.with_last_right(vis_l, hid_l.first.left if hid_l else POS_INF)
        vis_r = et.with_first_left(vis_r, hid_r.last.right if hid_r else NEG_INF)
        env_l = et.concat(vis_l, hid_l)
        env_r = et.concat(hid_r, vis_r)
        for child_env in (env_l, env_r):
            et.check_tree(child_env, full_span=True)
        if et.locate(env_l, q.x).at(q.x) != q.y or et.locate(env_r, q.x).at(q.x) != q.y:
            raise InvariantViolation("bridge lies on both child envelopes")
        self._validate_envelopes(n.left, env_l)
        self._validate_envelopes(n.right, env_r)
