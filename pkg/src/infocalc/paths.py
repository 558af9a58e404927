"""Path-enumeration view of d-separation.

This is the slow, obviously-correct counterpart to the reachability
algorithm in :mod:`infocalc.graph`: enumerate every simple trail between
the two sets and apply the blocking rules literally.  It exists to check
the fast implementation and to name concrete open paths in error
messages; never use it where performance matters.
"""

from __future__ import annotations

from typing import FrozenSet, Iterable, List, Optional

from .graph import Dag, ancestors_with


def _trails(dag: Dag, src: str, dst: str):
    """All simple undirected paths from src to dst, as node lists."""
    neighbours = {v: sorted(dag.parents[v] | dag.children[v]) for v in dag.nodes}
    path = [src]
    on_path = {src}

    def walk(v):
        if v == dst:
            yield list(path)
            return
        for n in neighbours[v]:
            if n not in on_path:
                path.append(n)
                on_path.add(n)
                yield from walk(n)
                path.pop()
                on_path.remove(n)

    yield from walk(src)


def trail_is_open(dag: Dag, trail: List[str], d: Iterable[str]) -> bool:
    """Blocking rules on one trail: a non-collider blocks when conditioned,
    a collider blocks unless it is conditioned or has a conditioned
    descendant."""
    d_set = frozenset(d)
    opened = ancestors_with(dag, d_set) if d_set else frozenset()
    for i in range(1, len(trail) - 1):
        prev, here, nxt = trail[i - 1], trail[i], trail[i + 1]
        collider = (prev, here) in dag.edge_set and (nxt, here) in dag.edge_set
        if collider:
            if here not in opened:
                return False
        else:
            if here in d_set:
                return False
    return True


def find_open_trail(dag: Dag, b: Iterable[str], c: Iterable[str],
                    d: Iterable[str]) -> Optional[List[str]]:
    """First open trail between the sets in deterministic order, or None."""
    d_set = frozenset(d)
    for x in sorted(frozenset(b)):
        for y in sorted(frozenset(c)):
            for trail in _trails(dag, x, y):
                if trail_is_open(dag, trail, d_set):
                    return trail
    return None


def d_separated_by_paths(dag: Dag, b: Iterable[str], c: Iterable[str],
                         d: Iterable[str]) -> bool:
    b_set, c_set = frozenset(b), frozenset(c)
    if not b_set or not c_set:
        return True
    return find_open_trail(dag, b_set, c_set, d) is None


def format_trail(dag: Dag, trail: List[str]) -> str:
    out = [trail[0]]
    for i in range(1, len(trail)):
        arrow = " -> " if (trail[i - 1], trail[i]) in dag.edge_set else " <- "
        out.append(arrow)
        out.append(trail[i])
    return "".join(out)


def has_directed_path(dag: Dag, src: Iterable[str], dst: Iterable[str],
                      avoiding: Iterable[str] = ()) -> Optional[List[str]]:
    """A directed path from ``src`` to ``dst`` whose interior avoids
    ``avoiding``, or None.  Endpoints in ``avoiding`` also disqualify."""
    avoid: FrozenSet[str] = frozenset(avoiding)
    dst_set = frozenset(dst) - avoid
    for start in sorted(frozenset(src) - avoid):
        stack = [[start]]
        while stack:
            path = stack.pop()
            v = path[-1]
            if v in dst_set and len(path) > 1:
                return path
            for n in sorted(dag.children[v], reverse=True):
                if n not in avoid and n not in path:
                    stack.append(path + [n])
    return None
