"""Exact discrete probability over a causal DAG.

CPT storage, the Markov factorization, and queries by full enumeration.
Enumeration doubles as its own oracle at the scale this engine targets
(at most 8 nodes with domains of size at most 4), so there is no separate
variable-elimination path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .errors import (
    CptError,
    DomainError,
    OverlappingSets,
    PartialAssignment,
    UnknownNode,
    ZERO_EVIDENCE_TOL,
    ZeroProbabilityEvidence,
)
from .graph import Dag

Value = object  # str or int
Assignment = Mapping[str, Value]

ROW_TOL = 1e-9


def check_assignment(domains: Mapping[str, Sequence], x: Assignment,
                     what: str = "assignment"):
    """Validate that every (node, value) pair lies in the declared domains."""
    for v, val in x.items():
        if v not in domains:
            raise UnknownNode("%s mentions undeclared node %r" % (what, v))
        if val not in domains[v]:
            raise DomainError("%s: value %r not in domain of %r" % (what, val, v))


@dataclass(frozen=True)
class Cpt:
    """P(node | parents) as a dense table.

    ``table`` maps a tuple of parent values (in ``parents`` order) to a
    probability vector over the node's domain order.
    """

    node: str
    parents: Tuple[str, ...]
    table: Mapping[Tuple[Value, ...], Tuple[float, ...]]

    def validate(self, domains: Mapping[str, Sequence]):
        dom = domains[self.node]
        expected = list(itertools.product(*(tuple(domains[p]) for p in self.parents)))
        if set(self.table) != set(expected):
            raise CptError("CPT of %r does not cover the parent domain product"
                           % self.node)
        for key, row in self.table.items():
            if len(row) != len(dom):
                raise CptError("CPT row of %r has %d entries for domain size %d"
                               % (self.node, len(row), len(dom)))
            if any(p < 0 for p in row):
                raise CptError("CPT of %r has a negative entry at %r"
                               % (self.node, key))
            if abs(sum(row) - 1.0) > ROW_TOL:
                raise CptError("CPT row of %r at %r sums to %.12g, not 1"
                               % (self.node, key, sum(row)))


@dataclass(frozen=True)
class FactoredDistribution:
    """A DAG, per-node domains, and one CPT per node (latent ones included)."""

    dag: Dag
    domains: Mapping[str, Tuple[Value, ...]]
    cpts: Mapping[str, Cpt]

    def __post_init__(self):
        for v in self.dag.nodes:
            if v not in self.domains or not self.domains[v]:
                raise DomainError("node %r has no declared domain" % v)
            if len(set(self.domains[v])) != len(self.domains[v]):
                raise DomainError("domain of %r has duplicate values" % v)
            if v not in self.cpts:
                raise CptError("node %r has no CPT" % v)
            cpt = self.cpts[v]
            if frozenset(cpt.parents) != self.dag.parents[v]:
                raise CptError("CPT parents of %r are %r, graph parents are %r"
                               % (v, sorted(cpt.parents), sorted(self.dag.parents[v])))
            cpt.validate(self.domains)

    @cached_property
    def order(self) -> Tuple[str, ...]:
        """Canonical enumeration order: sorted node identifiers."""
        return tuple(sorted(self.dag.nodes))

    @cached_property
    def pos(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.order)}

    @cached_property
    def value_index(self) -> Dict[str, Dict[Value, int]]:
        return {v: {val: i for i, val in enumerate(self.domains[v])}
                for v in self.dag.nodes}

    @cached_property
    def _factors(self):
        # per node: (position of node, parent positions, cpt table, value index)
        out = []
        for v in self.order:
            cpt = self.cpts[v]
            out.append((self.pos[v],
                        tuple(self.pos[p] for p in cpt.parents),
                        cpt.table,
                        self.value_index[v]))
        return out

    def assignments(self):
        """All total assignments as value tuples in canonical order."""
        return itertools.product(*(self.domains[v] for v in self.order))

    def prob_of_tuple(self, values: Tuple[Value, ...]) -> float:
        p = 1.0
        for node_pos, parent_pos, table, vindex in self._factors:
            row = table[tuple(values[i] for i in parent_pos)]
            p *= row[vindex[values[node_pos]]]
            if p == 0.0:
                return 0.0
        return p


@dataclass(frozen=True)
class ProbTable:
    """A probability table over a subset of nodes, deterministic to iterate."""

    nodes: Tuple[str, ...]
    domains: Mapping[str, Tuple[Value, ...]]
    probs: Mapping[Tuple[Value, ...], float]

    def items(self):
        for key in itertools.product(*(self.domains[v] for v in self.nodes)):
            yield key, self.probs.get(key, 0.0)

    def prob(self, x: Assignment) -> float:
        missing = [v for v in self.nodes if v not in x]
        if missing:
            raise PartialAssignment("missing value(s) for %s" % ", ".join(missing))
        return self.probs.get(tuple(x[v] for v in self.nodes), 0.0)

    def total(self) -> float:
        return sum(self.probs.values())

    def max_abs_diff(self, other: "ProbTable") -> float:
        if self.nodes != other.nodes:
            raise ValueError("tables are over different node sets")
        worst = 0.0
        for key, p in self.items():
            worst = max(worst, abs(p - other.probs.get(key, 0.0)))
        return worst

    def marginalize(self, keep: Iterable[str]) -> "ProbTable":
        keep_sorted = tuple(sorted(frozenset(keep)))
        unknown = frozenset(keep_sorted) - frozenset(self.nodes)
        if unknown:
            raise UnknownNode("marginal over unknown node(s): %s"
                              % ", ".join(sorted(unknown)))
        positions = tuple(self.nodes.index(v) for v in keep_sorted)
        out = {}
        for key, p in self.probs.items():
            sub = tuple(key[i] for i in positions)
            out[sub] = out.get(sub, 0.0) + p
        return ProbTable(nodes=keep_sorted, domains=self.domains, probs=out)

    def condition(self, b: Iterable[str], given: Assignment) -> "ProbTable":
        """P(b | given) computed as a ratio of marginals of this table."""
        b_set = frozenset(b)
        given_nodes = frozenset(given)
        if b_set & given_nodes:
            raise OverlappingSets("target and conditioning sets overlap")
        evidence = self.marginalize(given_nodes).prob(given) if given_nodes else 1.0
        if abs(evidence) <= ZERO_EVIDENCE_TOL:
            raise ZeroProbabilityEvidence(
                "conditioning event %r has probability %.3g"
                % (dict(sorted(given.items())), evidence))
        joint_bg = self.marginalize(b_set | given_nodes)
        b_sorted = tuple(sorted(b_set))
        given_sorted = [(v, given[v]) for v in joint_bg.nodes if v in given_nodes]
        out = {}
        for key in itertools.product(*(self.domains[v] for v in b_sorted)):
            x = dict(zip(b_sorted, key))
            x.update(given_sorted)
            out[key] = joint_bg.prob(x) / evidence
        return ProbTable(nodes=b_sorted, domains=self.domains, probs=out)


def _check_total(fd: FactoredDistribution, x: Assignment) -> Tuple[Value, ...]:
    check_assignment(fd.domains, x)
    missing = [v for v in fd.order if v not in x]
    if missing:
        raise PartialAssignment("assignment missing node(s): %s"
                                % ", ".join(missing))
    return tuple(x[v] for v in fd.order)


def joint(fd: FactoredDistribution, x: Assignment) -> float:
    """Markov-factorized probability of one total assignment."""
    return fd.prob_of_tuple(_check_total(fd, x))


def joint_table(fd: FactoredDistribution) -> ProbTable:
    """The full joint as a table over every node, latent ones included."""
    probs = {values: fd.prob_of_tuple(values) for values in fd.assignments()}
    return ProbTable(nodes=fd.order, domains=fd.domains, probs=probs)


def marginal(fd: FactoredDistribution, s: Iterable[str]) -> ProbTable:
    """Marginal over ``s``; every other node (latent or not) is summed out."""
    s_set = frozenset(s)
    unknown = s_set - fd.dag.node_set
    if unknown:
        raise UnknownNode("marginal over unknown node(s): %s"
                          % ", ".join(sorted(unknown)))
    return joint_table(fd).marginalize(s_set)


def conditional(fd: FactoredDistribution, b: Iterable[str],
                given: Assignment) -> ProbTable:
    """P(b | given); raises ZeroProbabilityEvidence on impossible evidence."""
    check_assignment(fd.domains, given, "evidence")
    b_set = frozenset(b)
    unknown = b_set - fd.dag.node_set
    if unknown:
        raise UnknownNode("conditional over unknown node(s): %s"
                          % ", ".join(sorted(unknown)))
    return joint_table(fd).condition(b_set, given)
