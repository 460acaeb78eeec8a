"""Balanced ordered set of the currently visible viewpoints.

An AVL tree whose ordering key is the (metric) distance from each viewpoint
to the current sweep position, with the viewpoint index as tie-break. Keys
are never stored: they are recomputed from the query position on demand, so
the stored order stays valid between reorder events. Deletions go by node
reference (viewpoint -> node map) so they cannot be misrouted while a
pending pair swap makes key-directed descent ambiguous.
"""

from __future__ import annotations

from typing import Iterator, List, Optional, Tuple

from .geometry import Metric, Terrain, TerrainPoint, metric_key
from .intervals import SweepStats


class _Node:
    __slots__ = ("vp", "left", "right", "parent", "height")

    def __init__(self, vp: int, parent: Optional["_Node"]):
        self.vp = vp
        self.left: Optional[_Node] = None
        self.right: Optional[_Node] = None
        self.parent = parent
        self.height = 1


def _h(node: Optional[_Node]) -> int:
    return node.height if node else 0


class VisibleSet:
    def __init__(self, terrain: Terrain, metric: Metric = "euclidean",
                 stats: Optional[SweepStats] = None):
        self._terrain = terrain
        self._metric = metric
        self._stats = stats
        self._root: Optional[_Node] = None
        self._nodes: dict[int, _Node] = {}

    def key(self, vp: int, pos: TerrainPoint) -> Tuple[float, int]:
        return (metric_key(self._terrain, self._metric, vp, pos), vp)

    def __len__(self) -> int:
        return len(self._nodes)

    def __contains__(self, vp: int) -> bool:
        return vp in self._nodes

    def insert(self, vp: int, pos: TerrainPoint) -> None:
        """Insert keyed by the distance to pos; O(log m)."""
        if self._stats is not None:
            self._stats.tree_ops += 1
        if vp in self._nodes:
            raise ValueError(f"viewpoint {vp} already in the visible set")
        k = self.key(vp, pos)
        if self._root is None:
            self._root = _Node(vp, None)
            self._nodes[vp] = self._root
            return
        cur = self._root
        while True:
            if k < self.key(cur.vp, pos):
                if cur.left is None:
                    cur.left = _Node(vp, cur)
                    self._nodes[vp] = cur.left
                    self._retrace(cur)
                    return
                cur = cur.left
            else:
                if cur.right is None:
                    cur.right = _Node(vp, cur)
                    self._nodes[vp] = cur.right
                    self._retrace(cur)
                    return
                cur = cur.right

    def remove(self, vp: int) -> None:
        """Remove by reference; O(log m). KeyError if absent."""
        if self._stats is not None:
            self._stats.tree_ops += 1
        node = self._nodes.pop(vp)
        if node.left is not None and node.right is not None:
            succ = node.right
            while succ.left is not None:
                succ = succ.left
            node.vp = succ.vp
            self._nodes[succ.vp] = node
            node = succ  # physically unlink the successor instead
        child = node.left if node.left is not None else node.right
        parent = node.parent
        if child is not None:
            child.parent = parent
        if parent is None:
            self._root = child
        elif parent.left is node:
            parent.left = child
        else:
            parent.right = child
        if parent is not None:
            self._retrace(parent)

    def min(self) -> Optional[int]:
        if self._root is None:
            return None
        cur = self._root
        while cur.left is not None:
            cur = cur.left
        return cur.vp

    def max(self) -> Optional[int]:
        if self._root is None:
            return None
        cur = self._root
        while cur.right is not None:
            cur = cur.right
        return cur.vp

    def successor(self, vp: int) -> Optional[int]:
        node = self._nodes[vp]
        if node.right is not None:
            cur = node.right
            while cur.left is not None:
                cur = cur.left
            return cur.vp
        cur = node
        while cur.parent is not None and cur.parent.right is cur:
            cur = cur.parent
        return cur.parent.vp if cur.parent else None

    def predecessor(self, vp: int) -> Optional[int]:
        node = self._nodes[vp]
        if node.left is not None:
            cur = node.left
            while cur.right is not None:
                cur = cur.right
            return cur.vp
        cur = node
        while cur.parent is not None and cur.parent.left is cur:
            cur = cur.parent
        return cur.parent.vp if cur.parent else None

    def inorder(self) -> Iterator[int]:
        stack: List[_Node] = []
        cur = self._root
        while stack or cur:
            while cur:
                stack.append(cur)
                cur = cur.left
            cur = stack.pop()
            yield cur.vp
            cur = cur.right

    def first(self, count: int) -> List[int]:
        out: List[int] = []
        for vp in self.inorder():
            if len(out) >= count:
                break
            out.append(vp)
        return out

    # ---- AVL plumbing ----

    def _retrace(self, node: Optional[_Node]) -> None:
        while node is not None:
            node.height = 1 + max(_h(node.left), _h(node.right))
            balance = _h(node.left) - _h(node.right)
            if balance > 1:
                if _h(node.left.left) < _h(node.left.right):
                    self._rotate_left(node.left)
                node = self._rotate_right(node)
            elif balance < -1:
                if _h(node.right.right) < _h(node.right.left):
                    self._rotate_right(node.right)
                node = self._rotate_left(node)
            node = node.parent

    def _rotate_left(self, x: _Node) -> _Node:
        y = x.right
        x.right = y.left
        if y.left is not None:
            y.left.parent = x
        self._replace_in_parent(x, y)
        y.left = x
        x.parent = y
        x.height = 1 + max(_h(x.left), _h(x.right))
        y.height = 1 + max(_h(y.left), _h(y.right))
        return y

    def _rotate_right(self, x: _Node) -> _Node:
        y = x.left
        x.left = y.right
        if y.right is not None:
            y.right.parent = x
        self._replace_in_parent(x, y)
        y.right = x
        x.parent = y
        x.height = 1 + max(_h(x.left), _h(x.right))
        y.height = 1 + max(_h(y.left), _h(y.right))
        return y

    def _replace_in_parent(self, old: _Node, new: _Node) -> None:
        parent = old.parent
        new.parent = parent
        if parent is None:
            self._root = new
        elif parent.left is old:
            parent.left = new
        else:
            parent.right = new

    def check_structure(self, pos: Optional[TerrainPoint] = None) -> None:
        """Test hook: verify AVL shape and, given pos, the key ordering."""
        def walk(node: Optional[_Node]) -> int:
            if node is None:
                return 0
            hl, hr = walk(node.left), walk(node.right)
            assert node.height == 1 + max(hl, hr), "stale height"
            assert abs(hl - hr) <= 1, "unbalanced"
            if node.left is not None:
                assert node.left.parent is node
            if node.right is not None:
                assert node.right.parent is node
            return node.height

        walk(self._root)
        if pos is not None:
            keys = [self.key(vp, pos) for vp in self.inorder()]
            assert keys == sorted(keys), "in-order keys not sorted"
