"""Directed acyclic graphs, reachability, d-separation, and graph surgery.

All types are immutable values; all operations are pure functions, so they
are safe to share between threads.  Iteration order is deterministic
(sorted by identifier) wherever it can leak into output.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from heapq import heapify, heappop, heappush
from typing import FrozenSet, Iterable, Mapping, Tuple

from .errors import (
    CycleError,
    DuplicateNode,
    NameCollision,
    OverlappingSets,
    UnknownEdge,
    UnknownNode,
)

Edge = Tuple[str, str]

INFO_NODE_FMT = "N__{tail}__{head}"


@dataclass(frozen=True)
class Dag:
    """A directed acyclic graph over named nodes with optional latent marks.

    Construct through :func:`build_dag`, which validates all invariants;
    the surgery functions below construct instances directly because they
    can only remove edges, which preserves acyclicity.
    """

    nodes: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    latent: FrozenSet[str] = field(default_factory=frozenset)

    @cached_property
    def node_set(self) -> FrozenSet[str]:
        return frozenset(self.nodes)

    @cached_property
    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.edges)

    @cached_property
    def parents(self) -> Mapping[str, FrozenSet[str]]:
        pa = {v: set() for v in self.nodes}
        for t, h in self.edges:
            pa[h].add(t)
        return {v: frozenset(s) for v, s in pa.items()}

    @cached_property
    def children(self) -> Mapping[str, FrozenSet[str]]:
        ch = {v: set() for v in self.nodes}
        for t, h in self.edges:
            ch[t].add(h)
        return {v: frozenset(s) for v, s in ch.items()}

    @cached_property
    def _index(self):
        # Integer-indexed adjacency for the d-separation inner loop.
        idx = {v: i for i, v in enumerate(self.nodes)}
        pa = [[] for _ in self.nodes]
        ch = [[] for _ in self.nodes]
        for t, h in self.edges:
            pa[idx[h]].append(idx[t])
            ch[idx[t]].append(idx[h])
        return idx, pa, ch

    def topological_order(self) -> Tuple[str, ...]:
        """Topological order, lexicographic among incomparable nodes."""
        indeg = {v: len(self.parents[v]) for v in self.nodes}
        ready = [v for v in self.nodes if indeg[v] == 0]
        heapify(ready)
        order = []
        while ready:
            v = heappop(ready)
            order.append(v)
            for c in sorted(self.children[v]):
                indeg[c] -= 1
                if indeg[c] == 0:
                    heappush(ready, c)
        return tuple(order)

    def __repr__(self):
        return "Dag(nodes=%r, edges=%r, latent=%r)" % (
            list(self.nodes),
            list(self.edges),
            sorted(self.latent),
        )


def _find_cycle(nodes, children):
    """Return one directed cycle as a node list ending where it starts."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {v: WHITE for v in nodes}
    stack = []

    def visit(v):
        color[v] = GREY
        stack.append(v)
        for c in sorted(children[v]):
            if color[c] == GREY:
                return stack[stack.index(c):] + [c]
            if color[c] == WHITE:
                found = visit(c)
                if found:
                    return found
        stack.pop()
        color[v] = BLACK
        return None

    for v in nodes:
        if color[v] == WHITE:
            found = visit(v)
            if found:
                return found
    return None


def build_dag(nodes: Iterable[str], edges: Iterable[Edge],
              latent: Iterable[str] = ()) -> Dag:
    """Validate and build a :class:`Dag`.

    Raises :class:`DuplicateNode`, :class:`UnknownNode` for undeclared edge
    endpoints or latent marks, and :class:`CycleError` naming one cycle.
    """
    node_tuple = tuple(nodes)
    seen = set()
    for v in node_tuple:
        if v in seen:
            raise DuplicateNode("node %r declared twice" % v)
        seen.add(v)
    edge_list = []
    edge_seen = set()
    for t, h in edges:
        if t not in seen:
            raise UnknownNode("edge tail %r is not a declared node" % t)
        if h not in seen:
            raise UnknownNode("edge head %r is not a declared node" % h)
        if (t, h) not in edge_seen:
            edge_seen.add((t, h))
            edge_list.append((t, h))
    latent_set = frozenset(latent)
    for v in latent_set:
        if v not in seen:
            raise UnknownNode("latent mark on undeclared node %r" % v)

    children = {v: set() for v in node_tuple}
    for t, h in edge_list:
        children[t].add(h)
    cycle = _find_cycle(node_tuple, children)
    if cycle:
        raise CycleError(cycle)
    return Dag(nodes=node_tuple, edges=tuple(sorted(edge_list)), latent=latent_set)


def _check_subset(dag: Dag, members: Iterable[str], what: str = "set"):
    out = frozenset(members)
    missing = out - dag.node_set
    if missing:
        raise UnknownNode("%s mentions undeclared node(s): %s"
                          % (what, ", ".join(sorted(missing))))
    return out


def relatives(dag: Dag, seed: Iterable[str], kind: str) -> FrozenSet[str]:
    """Parents, children, ancestors or descendants of a seed set.

    Transitive kinds are strict: a seed member appears in the result only
    if it is reachable from another seed member.
    """
    seed_set = _check_subset(dag, seed, "seed")
    if kind == "parents":
        out = set()
        for v in seed_set:
            out |= dag.parents[v]
        return frozenset(out)
    if kind == "children":
        out = set()
        for v in seed_set:
            out |= dag.children[v]
        return frozenset(out)
    if kind in ("ancestors", "descendants"):
        step = dag.parents if kind == "ancestors" else dag.children
        out = set()
        frontier = deque()
        for v in seed_set:
            frontier.extend(step[v])
        while frontier:
            v = frontier.popleft()
            if v not in out:
                out.add(v)
                frontier.extend(step[v])
        return frozenset(out)
    raise ValueError("unknown relative kind %r" % kind)


def ancestors_with(dag: Dag, seed: Iterable[str]) -> FrozenSet[str]:
    """anc(seed) together with the seed itself."""
    return relatives(dag, seed, "ancestors") | frozenset(seed)


def d_separated(dag: Dag, b: Iterable[str], c: Iterable[str],
                d: Iterable[str]) -> bool:
    """True iff every path between ``b`` and ``c`` is blocked by ``d``.

    Reachability ("Bayes ball") formulation: a node visited from a child
    passes unless conditioned; a node visited from a parent passes down
    unless conditioned and opens upward only if it is a conditioning node
    or an ancestor of one.
    """
    b_set = _check_subset(dag, b, "B")
    c_set = _check_subset(dag, c, "C")
    d_set = _check_subset(dag, d, "D")
    if b_set & c_set or b_set & d_set or c_set & d_set:
        raise OverlappingSets("B, C, D must be pairwise disjoint")
    if not b_set or not c_set:
        return True

    idx, pa, ch = dag._index
    n = len(dag.nodes)
    cond = bytearray(n)
    for v in d_set:
        cond[idx[v]] = 1

    # ancestors of the conditioning set, conditioning set included
    anc = bytearray(n)
    stack = [idx[v] for v in d_set]
    while stack:
        i = stack.pop()
        if not anc[i]:
            anc[i] = 1
            stack.extend(pa[i])

    target = bytearray(n)
    for v in c_set:
        target[idx[v]] = 1

    UP, DOWN = 0, 1
    seen_up = bytearray(n)
    seen_down = bytearray(n)
    queue = deque((idx[v], UP) for v in sorted(b_set))
    while queue:
        i, direction = queue.popleft()
        if direction == UP:
            if seen_up[i]:
                continue
            seen_up[i] = 1
            if cond[i]:
                continue
            if target[i]:
                return False
            for p in pa[i]:
                queue.append((p, UP))
            for cc in ch[i]:
                queue.append((cc, DOWN))
        else:
            if seen_down[i]:
                continue
            seen_down[i] = 1
            if not cond[i]:
                if target[i]:
                    return False
                for cc in ch[i]:
                    queue.append((cc, DOWN))
            if anc[i]:
                for p in pa[i]:
                    queue.append((p, UP))
    return True


def remove_incoming(dag: Dag, a: Iterable[str]) -> Dag:
    """Delete every arrow pointing into a node of ``a``."""
    a_set = _check_subset(dag, a, "A")
    return Dag(nodes=dag.nodes,
               edges=tuple(e for e in dag.edges if e[1] not in a_set),
               latent=dag.latent)


def remove_outgoing(dag: Dag, a: Iterable[str]) -> Dag:
    """Delete every arrow leaving a node of ``a``."""
    a_set = _check_subset(dag, a, "A")
    return Dag(nodes=dag.nodes,
               edges=tuple(e for e in dag.edges if e[0] not in a_set),
               latent=dag.latent)


def info_node_name(edge: Edge) -> str:
    return INFO_NODE_FMT.format(tail=edge[0], head=edge[1])


@dataclass(frozen=True)
class AugmentedDag:
    """A :class:`Dag` with an information node spliced into every edge.

    ``info_nodes`` maps each base edge to its fresh node identifier.  The
    plain-graph view (:attr:`dag`) is what d-separation runs on; an
    information node is marked latent iff either endpoint of its base edge
    is latent (presentation only, semantics are unaffected).
    """

    base: Dag
    info_nodes: Tuple[Tuple[Edge, str], ...]
    edges: Tuple[Edge, ...]

    @cached_property
    def info_map(self) -> Mapping[Edge, str]:
        return dict(self.info_nodes)

    @cached_property
    def dag(self) -> Dag:
        names = [name for _, name in self.info_nodes]
        latent = set(self.base.latent)
        for (t, h), name in self.info_nodes:
            if t in self.base.latent or h in self.base.latent:
                latent.add(name)
        return Dag(nodes=self.base.nodes + tuple(sorted(names)),
                   edges=self.edges,
                   latent=frozenset(latent))


def _augment_edges(dag: Dag):
    info = []
    for t, h in sorted(dag.edges):
        name = info_node_name((t, h))
        info.append(((t, h), name))
    names = [name for _, name in info]
    collisions = set(names) & dag.node_set
    if collisions:
        raise NameCollision("base node(s) named like information nodes: %s"
                            % ", ".join(sorted(collisions)))
    if len(set(names)) != len(names):
        raise NameCollision("information node names collide; "
                            "node identifiers containing '__' are ambiguous")
    return tuple(info)


def augment(dag: Dag) -> AugmentedDag:
    """Insert an information node on every edge."""
    info = _augment_edges(dag)
    edges = []
    for (t, h), name in info:
        edges.append((t, name))
        edges.append((name, h))
    return AugmentedDag(base=dag, info_nodes=info, edges=tuple(sorted(edges)))


def intervention_augmented(dag: Dag, f_edges: Iterable[Edge],
                           constant_flags: Mapping[Edge, bool]) -> AugmentedDag:
    """Augmented graph of an edge intervention.

    The tail arrow into an information node is deleted exactly when the
    intervened edge carries a constant information function.
    """
    f_set = frozenset(f_edges)
    unknown = f_set - dag.edge_set
    if unknown:
        raise UnknownEdge("intervened edge(s) not in graph: %s"
                          % ", ".join("%s->%s" % e for e in sorted(unknown)))
    info = _augment_edges(dag)
    info_map = dict(info)
    drop = {(t, info_map[(t, h)])
            for (t, h) in f_set if constant_flags.get((t, h), False)}
    edges = []
    for (t, h), name in info:
        if (t, name) not in drop:
            edges.append((t, name))
        edges.append((name, h))
    return AugmentedDag(base=dag, info_nodes=info, edges=tuple(sorted(edges)))
