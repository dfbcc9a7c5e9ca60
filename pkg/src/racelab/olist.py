"""Move-to-front ordered-list timestamps with copy-on-write sharing.

An OrderedList stores a vector timestamp as a doubly linked sequence of
(tid, time) nodes, exactly one node per thread, ordered by recency of update:
every set/increment moves the touched node to the head.  The d most recently
changed entries are therefore always a prefix.

Sharing is single-writer copy-on-write.  ``shallow_copy`` publishes a
read-only view (as a lock's timestamp) and flags the list shared; the flag is
sticky until ``deep_copy`` materializes an exclusive copy.  Mutating a shared
list is a contract violation and raises.
"""

from __future__ import annotations

from typing import Iterator, List, Optional, Tuple


class SharedMutationError(RuntimeError):
    """A set/increment was attempted through a shared (published) list."""


class _Node:
    __slots__ = ("tid", "time", "prev", "next")

    def __init__(self, tid: int, time: int):
        self.tid = tid
        self.time = time
        self.prev: Optional[_Node] = None
        self.next: Optional[_Node] = None


class OrderedList:
    """Doubly linked (tid, time) list with O(1) get/set/increment.

    ``op_steps`` counts node touches inside the constant-time operations so
    tests can assert the bound; prefix traversal is charged to the caller.
    """

    __slots__ = ("width", "_head", "_tail", "_nodes", "shared", "refs", "op_steps")

    def __init__(self, width: int):
        self.width = width
        self._nodes: List[_Node] = [_Node(t, 0) for t in range(width)]
        for a, b in zip(self._nodes, self._nodes[1:]):
            a.next = b
            b.prev = a
        self._head: Optional[_Node] = self._nodes[0] if width else None
        self._tail: Optional[_Node] = self._nodes[-1] if width else None
        self.shared = False
        self.refs = 1  # owning thread; shallow copies add views
        self.op_steps = 0

    def get(self, tid: int) -> int:
        self.op_steps += 1
        return self._nodes[tid].time

    def _move_to_head(self, node: _Node) -> None:
        if node is self._head:
            return
        self.op_steps += 2
        if node.prev is not None:
            node.prev.next = node.next
        if node.next is not None:
            node.next.prev = node.prev
        else:
            self._tail = node.prev
        node.prev = None
        node.next = self._head
        assert self._head is not None
        self._head.prev = node
        self._head = node

    def set(self, tid: int, time: int) -> None:
        if self.shared:
            raise SharedMutationError("set() on a shared ordered list")
        self.op_steps += 1
        node = self._nodes[tid]
        node.time = time
        self._move_to_head(node)

    def increment(self, tid: int, k: int = 1) -> None:
        if self.shared:
            raise SharedMutationError("increment() on a shared ordered list")
        self.op_steps += 1
        node = self._nodes[tid]
        node.time += k
        self._move_to_head(node)

    def prefix(self, k: int) -> List[Tuple[int, int]]:
        """First min(k, width) (tid, time) pairs in list order; read-only."""
        out: List[Tuple[int, int]] = []
        node = self._head
        while node is not None and len(out) < k:
            out.append((node.tid, node.time))
            node = node.next
        return out

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        node = self._head
        while node is not None:
            yield (node.tid, node.time)
            node = node.next

    def snapshot(self) -> List[int]:
        """Dense clock view: component t = get(t)."""
        return [n.time for n in self._nodes]

    def shallow_copy(self) -> "SharedList":
        """Publish a read-only view over the same nodes; marks the list shared."""
        self.shared = True
        self.refs += 1
        return SharedList(self)

    def deep_copy(self) -> "OrderedList":
        """Structurally identical, exclusively owned copy (same values, same order)."""
        out = OrderedList.__new__(OrderedList)
        out.width = self.width
        out._nodes = [_Node(t, self._nodes[t].time) for t in range(self.width)]
        prev: Optional[_Node] = None
        head = tail = None
        for tid, _ in self:
            node = out._nodes[tid]
            node.prev = prev
            if prev is not None:
                prev.next = node
            else:
                head = node
            prev = node
        if prev is not None:
            prev.next = None
            tail = prev
        out._head = head
        out._tail = tail
        out.shared = False
        out.refs = 1
        out.op_steps = 0
        return out

    def render(self) -> str:
        """Debug rendering, head first: ``(tid:time) -> (tid:time) -> ...``."""
        return " -> ".join(f"({tid}:{time})" for tid, time in self)

    __str__ = render

    def __repr__(self) -> str:
        return f"OrderedList<{self.render()}>"


class SharedList:
    """A read-only handle onto an OrderedList published at a release."""

    __slots__ = ("_list",)

    def __init__(self, lst: OrderedList):
        self._list = lst

    @property
    def target(self) -> OrderedList:
        return self._list

    def get(self, tid: int) -> int:
        return self._list.get(tid)

    def prefix(self, k: int) -> List[Tuple[int, int]]:
        return self._list.prefix(k)

    def snapshot(self) -> List[int]:
        return self._list.snapshot()

    def release(self) -> None:
        """Drop this view (share accounting only; the shared flag is sticky)."""
        self._list.refs -= 1
