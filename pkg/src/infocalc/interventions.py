"""The three intervention semantics at the distribution level.

* ``do``: factors of intervened nodes are replaced by point masses and the
  rest of the factorization is kept.
* ``info``: every factor is kept, but any parent slot fed by an intervened
  node reads the intervention value instead of the parent's own value.
* generalized ``info``: a per-edge information function transforms the
  parent value seen by one child.

Each operation returns a full table over every node (latent included),
normalized to 1 within 1e-9.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional, Tuple, Union

from .dist import (
    Assignment,
    FactoredDistribution,
    ProbTable,
    Value,
    check_assignment,
)
from .errors import (
    DomainError,
    DuplicateEdgeFunction,
    LatentQueried,
    OverlappingSets,
    PartialAssignment,
    UnknownEdge,
    UnknownNode,
)
from .graph import Dag, Edge, relatives, remove_incoming, remove_outgoing


@dataclass(frozen=True)
class Do:
    """Force nodes to fixed values, severing their incoming mechanisms."""

    assignment: Mapping[str, Value]


@dataclass(frozen=True)
class Info:
    """Send the message "these nodes have these values" to all descendants."""

    assignment: Mapping[str, Value]


@dataclass(frozen=True)
class InfoFunction:
    """An information function on one edge: the child of ``edge`` sees
    ``mapping[x]`` whenever the tail's value is ``x``."""

    edge: Edge
    mapping: Mapping[Value, Value]
    name: Optional[str] = None

    @cached_property
    def is_constant(self) -> bool:
        return len(set(self.mapping.values())) == 1

    def validate(self, dag: Dag, domains: Mapping[str, Tuple[Value, ...]]):
        tail, head = self.edge
        if self.edge not in dag.edge_set:
            raise UnknownEdge("no edge %s->%s in the graph" % (tail, head))
        dom = tuple(domains[tail])
        if set(self.mapping) != set(dom):
            raise DomainError("information function on %s->%s is not total "
                              "over the domain of %r" % (tail, head, tail))
        for val in self.mapping.values():
            if val not in dom:
                raise DomainError("information function on %s->%s maps outside "
                                  "the domain of %r: %r" % (tail, head, tail, val))


@dataclass(frozen=True)
class GeneralizedInfo:
    """A collection of information functions, at most one per edge."""

    functions: Tuple[InfoFunction, ...]


InterventionSpec = Union[Do, Info, GeneralizedInfo]


@dataclass(frozen=True)
class InterventionGraph:
    """Post-surgery graph plus presentation metadata.

    ``counterfactual_labels`` carries the display name of each descendant
    of the intervention set; ``info_edges`` are the surviving edges that
    carry a non-constant information function.
    """

    dag: Dag
    counterfactual_labels: Mapping[str, str]
    info_edges: frozenset


def _check_intervention_nodes(dag: Dag, nodes: Iterable[str]):
    for v in nodes:
        if v not in dag.node_set:
            raise UnknownNode("intervention on undeclared node %r" % v)
        if v in dag.latent:
            raise LatentQueried("cannot intervene on latent node %r" % v)


def check_functions(fd_or_dag, domains, functions: Iterable[InfoFunction]):
    """Validate a function set: known edges, total maps, one per edge."""
    dag = fd_or_dag if isinstance(fd_or_dag, Dag) else fd_or_dag.dag
    seen = set()
    for fn in functions:
        if fn.edge in seen:
            raise DuplicateEdgeFunction("two information functions on edge %s->%s"
                                        % fn.edge)
        seen.add(fn.edge)
        fn.validate(dag, domains)


# --- distribution-level semantics -------------------------------------------

def do_joint(fd: FactoredDistribution, x: Assignment, a: Assignment) -> float:
    """P(x | do(a)) for one total assignment ``x``."""
    return _do_plan(fd, a)(_total_tuple(fd, x))


def info_joint(fd: FactoredDistribution, x: Assignment, a: Assignment) -> float:
    """P(x | sigma(a)) for one total assignment ``x``."""
    return _info_plan(fd, a)(_total_tuple(fd, x))


def generalized_info_joint(fd: FactoredDistribution, x: Assignment,
                           functions: Iterable[InfoFunction]) -> float:
    """P(x | sigma(F)) for one total assignment ``x``."""
    return _generalized_plan(fd, tuple(functions))(_total_tuple(fd, x))


def do_distribution(fd: FactoredDistribution, a: Assignment) -> ProbTable:
    """The full table of P(. | do(a))."""
    return _table(fd, _do_plan(fd, a))


def info_distribution(fd: FactoredDistribution, a: Assignment) -> ProbTable:
    """The full table of P(. | sigma(a)); intervened nodes stay random."""
    return _table(fd, _info_plan(fd, a))


def generalized_info_distribution(fd: FactoredDistribution,
                                  functions: Iterable[InfoFunction]) -> ProbTable:
    """The full table of P(. | sigma(F)) for per-edge information functions."""
    return _table(fd, _generalized_plan(fd, tuple(functions)))


def intervention_distribution(fd: FactoredDistribution,
                              spec: InterventionSpec) -> ProbTable:
    if isinstance(spec, Do):
        return do_distribution(fd, spec.assignment)
    if isinstance(spec, Info):
        return info_distribution(fd, spec.assignment)
    if isinstance(spec, GeneralizedInfo):
        return generalized_info_distribution(fd, spec.functions)
    raise TypeError("unknown intervention spec %r" % (spec,))


def intervention_query(fd: FactoredDistribution, spec: InterventionSpec,
                       b: Iterable[str], given: Assignment) -> ProbTable:
    """Conditional of the intervention distribution: P(b | spec, given).

    Both ``b`` and ``given`` may mention observed nodes only; latent nodes
    are always summed out.
    """
    b_set = frozenset(b)
    given_nodes = frozenset(given)
    unknown = (b_set | given_nodes) - fd.dag.node_set
    if unknown:
        raise UnknownNode("query mentions undeclared node(s): %s"
                          % ", ".join(sorted(unknown)))
    hidden = (b_set | given_nodes) & fd.dag.latent
    if hidden:
        raise LatentQueried("query mentions latent node(s): %s"
                            % ", ".join(sorted(hidden)))
    if b_set & given_nodes:
        raise OverlappingSets("query targets overlap the conditioning set")
    check_assignment(fd.domains, given, "evidence")
    return intervention_distribution(fd, spec).condition(b_set, given)


# --- intervention graphs -----------------------------------------------------

def _label_value(val: Value) -> str:
    return str(val)


def counterfactual_label(node: str, parts: Iterable[str]) -> str:
    return "X_%s^{sigma(%s)}" % (node, ",".join(parts))


def intervention_graph(dag: Dag, spec: InterventionSpec) -> InterventionGraph:
    """Graph surgery plus counterfactual labels for one intervention.

    ``do`` removes arrows into the intervened nodes.  ``sigma`` removes the
    arrows out of them and labels every descendant with the part of the
    message that can reach it.  A generalized intervention deletes an edge
    only when its information function is constant; otherwise the edge
    survives as an information edge.
    """
    if isinstance(spec, Do):
        a_nodes = frozenset(spec.assignment)
        _check_intervention_nodes(dag, a_nodes)
        return InterventionGraph(dag=remove_incoming(dag, a_nodes),
                                 counterfactual_labels={},
                                 info_edges=frozenset())

    if isinstance(spec, Info):
        a_nodes = frozenset(spec.assignment)
        _check_intervention_nodes(dag, a_nodes)
        labels = {}
        for node in sorted(relatives(dag, a_nodes, "descendants")):
            heard = [a for a in sorted(a_nodes)
                     if node in relatives(dag, {a}, "descendants")]
            parts = ["%s=%s" % (a, _label_value(spec.assignment[a])) for a in heard]
            labels[node] = counterfactual_label(node, parts)
        return InterventionGraph(dag=remove_outgoing(dag, a_nodes),
                                 counterfactual_labels=labels,
                                 info_edges=frozenset())

    if isinstance(spec, GeneralizedInfo):
        edges = []
        seen = set()
        for fn in spec.functions:
            if fn.edge in seen:
                raise DuplicateEdgeFunction("two information functions on edge %s->%s"
                                            % fn.edge)
            seen.add(fn.edge)
            if fn.edge not in dag.edge_set:
                raise UnknownEdge("no edge %s->%s in the graph" % fn.edge)
            edges.append(fn)
        tails = frozenset(fn.edge[0] for fn in edges)
        constant_edges = frozenset(fn.edge for fn in edges if fn.is_constant)
        info_edges = frozenset(fn.edge for fn in edges if not fn.is_constant)
        surgered = Dag(nodes=dag.nodes,
                       edges=tuple(e for e in dag.edges if e not in constant_edges),
                       latent=dag.latent)
        labels = {}
        for node in sorted(relatives(dag, tails, "descendants")):
            heard = [fn for fn in sorted(edges, key=lambda f: f.edge)
                     if node in relatives(dag, {fn.edge[0]}, "descendants")]
            parts = ["%s->%s:%s" % (fn.edge[0], fn.edge[1], fn.name or "f")
                     for fn in heard]
            labels[node] = counterfactual_label(node, parts)
        return InterventionGraph(dag=surgered,
                                 counterfactual_labels=labels,
                                 info_edges=info_edges)

    raise TypeError("unknown intervention spec %r" % (spec,))


# --- factor plans ------------------------------------------------------------
# A plan maps a total assignment tuple (canonical node order) to its
# intervened probability; building the plan once keeps table construction
# out of per-assignment dictionary churn.

def _total_tuple(fd: FactoredDistribution, x: Assignment):
    check_assignment(fd.domains, x)
    missing = [v for v in fd.order if v not in x]
    if missing:
        raise PartialAssignment("assignment missing node(s): %s"
                                % ", ".join(missing))
    return tuple(x[v] for v in fd.order)


def _table(fd: FactoredDistribution, plan) -> ProbTable:
    probs = {values: plan(values) for values in fd.assignments()}
    return ProbTable(nodes=fd.order, domains=fd.domains, probs=probs)


def _check_do_info_assignment(fd: FactoredDistribution, a: Assignment):
    _check_intervention_nodes(fd.dag, a)
    check_assignment(fd.domains, a, "intervention")


def _do_plan(fd: FactoredDistribution, a: Assignment):
    _check_do_info_assignment(fd, a)
    a_nodes = frozenset(a)
    forced = [(fd.pos[v], a[v]) for v in sorted(a_nodes)]
    factors = [f for f, v in zip(fd._factors, fd.order) if v not in a_nodes]

    def plan(values):
        for pos, val in forced:
            if values[pos] != val:
                return 0.0
        p = 1.0
        for node_pos, parent_pos, table, vindex in factors:
            row = table[tuple(values[i] for i in parent_pos)]
            p *= row[vindex[values[node_pos]]]
            if p == 0.0:
                return 0.0
        return p

    return plan


def _slot_plan(fd: FactoredDistribution, slot_for):
    """Common core of the two sigma semantics.

    ``slot_for(parent, child)`` returns how the factor of ``child`` reads
    the value of ``parent``: ("const", v), ("var", position), or
    ("map", position, mapping).
    """
    factors = []
    for v in fd.order:
        cpt = fd.cpts[v]
        slots = tuple(slot_for(p, v) for p in cpt.parents)
        factors.append((fd.pos[v], slots, cpt.table, fd.value_index[v]))

    def plan(values):
        p = 1.0
        for node_pos, slots, table, vindex in factors:
            key = []
            for slot in slots:
                kind = slot[0]
                if kind == "v":
                    key.append(values[slot[1]])
                elif kind == "c":
                    key.append(slot[1])
                else:
                    key.append(slot[2][values[slot[1]]])
            p *= table[tuple(key)][vindex[values[node_pos]]]
            if p == 0.0:
                return 0.0
        return p

    return plan


def _info_plan(fd: FactoredDistribution, a: Assignment):
    _check_do_info_assignment(fd, a)

    def slot_for(parent, _child):
        if parent in a:
            return ("c", a[parent])
        return ("v", fd.pos[parent])

    return _slot_plan(fd, slot_for)


def _generalized_plan(fd: FactoredDistribution, functions: Tuple[InfoFunction, ...]):
    check_functions(fd, fd.domains, functions)
    by_edge = {fn.edge: fn.mapping for fn in functions}

    def slot_for(parent, child):
        fn = by_edge.get((parent, child))
        if fn is None:
            return ("v", fd.pos[parent])
        return ("m", fd.pos[parent], fn)

    return _slot_plan(fd, slot_for)
