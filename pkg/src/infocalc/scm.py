"""Structural causal models with explicit exogenous noise.

Structural equations are extensional lookup tables, so a model
serializes, hashes and replays deterministically.  Exogenous enumeration
is the universal oracle here: every query is answered by walking the full
noise space, which is capped at 2**20 joint values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Mapping, Tuple

from .dist import Cpt, FactoredDistribution, ProbTable, Value, check_assignment
from .errors import (
    DomainError,
    NonMarkovian,
    PartialAssignment,
    SizeError,
    UnknownNode,
    ZERO_EVIDENCE_TOL,
    ZeroProbabilityEvidence,
)
from .graph import Dag
from .interventions import (
    Do,
    GeneralizedInfo,
    Info,
    InfoFunction,
    InterventionSpec,
    check_functions,
)

EXO_SPACE_CAP = 2 ** 20
DIST_TOL = 1e-9


@dataclass(frozen=True)
class StructuralEquation:
    """A total lookup table from input-value tuples to an output value."""

    node: str
    inputs: Tuple[str, ...]
    table: Mapping[Tuple[Value, ...], Value]

    def validate(self, domains: Mapping[str, Tuple[Value, ...]]):
        expected = list(itertools.product(*(tuple(domains[p]) for p in self.inputs)))
        if set(self.table) != set(expected):
            raise DomainError("equation of %r is not total over its input domains"
                              % self.node)
        dom = tuple(domains[self.node])
        for key, out in self.table.items():
            if out not in dom:
                raise DomainError("equation of %r emits %r outside its domain"
                                  % (self.node, out))


@dataclass(frozen=True)
class Scm:
    """Graph over V and U, noise distributions, and one equation per V-node.

    The graph marks exogenous nodes as latent.  Exogenous nodes are
    parentless and mutually independent; endogenous values are the unique
    solution of the equations, which exists by acyclicity.
    """

    graph: Dag
    domains: Mapping[str, Tuple[Value, ...]]
    exogenous: Mapping[str, Mapping[Value, float]]
    equations: Mapping[str, StructuralEquation]

    def __post_init__(self):
        exo = frozenset(self.exogenous)
        if exo != self.graph.latent:
            raise DomainError("exogenous nodes must be exactly the latent-marked "
                              "nodes of the graph")
        for v in self.graph.nodes:
            if v not in self.domains or not self.domains[v]:
                raise DomainError("node %r has no declared domain" % v)
        for u in sorted(exo):
            if self.graph.parents[u]:
                raise DomainError("exogenous node %r has parents" % u)
            dist = self.exogenous[u]
            if set(dist) != set(self.domains[u]):
                raise DomainError("noise distribution of %r does not cover its domain" % u)
            if any(p < 0 for p in dist.values()):
                raise DomainError("noise distribution of %r has a negative mass" % u)
            if abs(sum(dist.values()) - 1.0) > DIST_TOL:
                raise DomainError("noise distribution of %r sums to %.12g"
                                  % (u, sum(dist.values())))
        endo = frozenset(self.graph.nodes) - exo
        if frozenset(self.equations) != endo:
            raise DomainError("equations must cover exactly the endogenous nodes")
        for v in sorted(endo):
            eq = self.equations[v]
            if frozenset(eq.inputs) != self.graph.parents[v]:
                raise DomainError("equation inputs of %r are %r, graph parents are %r"
                                  % (v, sorted(eq.inputs), sorted(self.graph.parents[v])))
            eq.validate(self.domains)

    @cached_property
    def endogenous(self) -> Tuple[str, ...]:
        return tuple(sorted(frozenset(self.graph.nodes) - self.graph.latent))

    @cached_property
    def exo_order(self) -> Tuple[str, ...]:
        return tuple(sorted(self.graph.latent))

    @cached_property
    def _endo_topo(self) -> Tuple[str, ...]:
        return tuple(v for v in self.graph.topological_order()
                     if v not in self.graph.latent)

    @cached_property
    def endo_dag(self) -> Dag:
        endo = frozenset(self.endogenous)
        return Dag(nodes=tuple(v for v in self.graph.nodes if v in endo),
                   edges=tuple(e for e in self.graph.edges
                               if e[0] in endo and e[1] in endo),
                   latent=frozenset())

    def exo_assignments(self):
        """Every total noise assignment, with its prior probability."""
        size = 1
        for u in self.exo_order:
            size *= len(self.domains[u])
            if size > EXO_SPACE_CAP:
                raise SizeError("exogenous space exceeds %d joint values"
                                % EXO_SPACE_CAP)
        for values in itertools.product(*(self.domains[u] for u in self.exo_order)):
            p = 1.0
            for u, val in zip(self.exo_order, values):
                p *= self.exogenous[u][val]
            yield dict(zip(self.exo_order, values)), p


def _check_noise(scm: Scm, u: Mapping[str, Value]) -> Dict[str, Value]:
    check_assignment(scm.domains, u, "noise assignment")
    extra = frozenset(u) - frozenset(scm.exo_order)
    if extra:
        raise UnknownNode("noise assignment mentions endogenous node(s): %s"
                          % ", ".join(sorted(extra)))
    missing = [x for x in scm.exo_order if x not in u]
    if missing:
        raise PartialAssignment("noise assignment missing: %s" % ", ".join(missing))
    return dict(u)


def _solve(scm: Scm, u: Mapping[str, Value], read_slot) -> Dict[str, Value]:
    values = dict(u)
    for v in scm._endo_topo:
        eq = scm.equations[v]
        key = tuple(read_slot(j, v, values) for j in eq.inputs)
        values[v] = eq.table[key]
    return {v: values[v] for v in scm.endogenous}


def evaluate(scm: Scm, u: Mapping[str, Value]) -> Dict[str, Value]:
    """The unique solution of the structural equations under noise ``u``."""
    u = _check_noise(scm, u)
    return _solve(scm, u, lambda j, v, values: values[j])


def do_evaluate(scm: Scm, u: Mapping[str, Value],
                forced: Mapping[str, Value]) -> Dict[str, Value]:
    """Solve with the equations of the forced nodes replaced by constants."""
    u = _check_noise(scm, u)
    _check_endo_assignment(scm, forced, "do intervention")
    values = dict(u)
    for v in scm._endo_topo:
        if v in forced:
            values[v] = forced[v]
        else:
            eq = scm.equations[v]
            key = tuple(values[j] for j in eq.inputs)
            values[v] = eq.table[key]
    return {v: values[v] for v in scm.endogenous}


def info_evaluate(scm: Scm, u: Mapping[str, Value],
                  message: Mapping[str, Value]) -> Dict[str, Value]:
    """Solve with every parent slot fed by a message node reading the
    message value; all mechanisms are kept, so the message nodes keep
    their own (factual) values."""
    u = _check_noise(scm, u)
    _check_endo_assignment(scm, message, "info intervention")

    def read_slot(j, _v, values):
        return message[j] if j in message else values[j]

    return _solve(scm, u, read_slot)


def generalized_info_evaluate(scm: Scm, u: Mapping[str, Value],
                              functions: Iterable[InfoFunction]) -> Dict[str, Value]:
    """Solve with the slot of every intervened edge reading the information
    function of the solved tail value."""
    u = _check_noise(scm, u)
    fns = tuple(functions)
    check_functions(scm.graph, scm.domains, fns)
    endo = frozenset(scm.endogenous)
    for fn in fns:
        if fn.edge[0] not in endo or fn.edge[1] not in endo:
            raise DomainError("information function on non-endogenous edge %s->%s"
                              % fn.edge)
    by_slot = {fn.edge: fn.mapping for fn in fns}

    def read_slot(j, v, values):
        mapping = by_slot.get((j, v))
        return values[j] if mapping is None else mapping[values[j]]

    return _solve(scm, u, read_slot)


def _check_endo_assignment(scm: Scm, x: Mapping[str, Value], what: str):
    check_assignment(scm.domains, x, what)
    exo = frozenset(x) & frozenset(scm.exo_order)
    if exo:
        raise UnknownNode("%s mentions exogenous node(s): %s"
                          % (what, ", ".join(sorted(exo))))


def induced_distribution(scm: Scm) -> FactoredDistribution:
    """The CPT factorization over the endogenous nodes of a Markovian SCM.

    Raises :class:`NonMarkovian` when an exogenous node feeds two
    endogenous nodes, in which case the pushforward need not factorize
    over the endogenous graph and callers should enumerate instead.
    """
    for u in scm.exo_order:
        if len(scm.graph.children[u]) > 1:
            raise NonMarkovian("exogenous node %r feeds %s"
                               % (u, ", ".join(sorted(scm.graph.children[u]))))
    endo_dag = scm.endo_dag
    cpts = {}
    for v in scm.endogenous:
        eq = scm.equations[v]
        endo_parents = tuple(sorted(endo_dag.parents[v]))
        exo_parents = tuple(sorted(frozenset(eq.inputs) - frozenset(endo_parents)))
        dom = tuple(scm.domains[v])
        vindex = {val: i for i, val in enumerate(dom)}
        table = {}
        for pvals in itertools.product(*(scm.domains[p] for p in endo_parents)):
            base = dict(zip(endo_parents, pvals))
            row = [0.0] * len(dom)
            for evals in itertools.product(*(scm.domains[x] for x in exo_parents)):
                weight = 1.0
                for x, val in zip(exo_parents, evals):
                    weight *= scm.exogenous[x][val]
                slot = dict(base)
                slot.update(zip(exo_parents, evals))
                out = eq.table[tuple(slot[j] for j in eq.inputs)]
                row[vindex[out]] += weight
            table[pvals] = tuple(row)
        cpts[v] = Cpt(node=v, parents=endo_parents, table=table)
    domains = {v: tuple(scm.domains[v]) for v in scm.endogenous}
    return FactoredDistribution(dag=endo_dag, domains=domains, cpts=cpts)


def _evaluator_for(scm: Scm, spec: InterventionSpec):
    if isinstance(spec, Do):
        return lambda u: do_evaluate(scm, u, spec.assignment)
    if isinstance(spec, Info):
        return lambda u: info_evaluate(scm, u, spec.assignment)
    if isinstance(spec, GeneralizedInfo):
        return lambda u: generalized_info_evaluate(scm, u, spec.functions)
    raise TypeError("unknown intervention spec %r" % (spec,))


def pushforward_distribution(scm: Scm, spec: InterventionSpec = None) -> ProbTable:
    """The distribution of the (possibly intervened) solution over all noise."""
    if spec is None:
        run = lambda u: evaluate(scm, u)
    else:
        run = _evaluator_for(scm, spec)
    order = scm.endogenous
    probs = {}
    for u, p in scm.exo_assignments():
        if p == 0.0:
            continue
        values = run(u)
        key = tuple(values[v] for v in order)
        probs[key] = probs.get(key, 0.0) + p
    domains = {v: tuple(scm.domains[v]) for v in order}
    return ProbTable(nodes=order, domains=domains, probs=probs)


def counterfactual_query(scm: Scm, evidence: Mapping[str, Value],
                         spec: InterventionSpec,
                         target: Iterable[str]) -> ProbTable:
    """Abduction, action, prediction by exhaustive noise enumeration.

    Conditions the noise prior on the factual evidence, re-evaluates the
    model under the hypothetical message, and returns the distribution of
    the counterfactual target values.
    """
    if isinstance(spec, Do):
        raise TypeError("counterfactual queries take info interventions")
    _check_endo_assignment(scm, evidence, "evidence")
    target_nodes = tuple(sorted(frozenset(target)))
    unknown = frozenset(target_nodes) - frozenset(scm.endogenous)
    if unknown:
        raise UnknownNode("counterfactual target mentions: %s"
                          % ", ".join(sorted(unknown)))
    run = _evaluator_for(scm, spec)

    posterior = []
    total = 0.0
    for u, p in scm.exo_assignments():
        if p == 0.0:
            continue
        factual = evaluate(scm, u)
        if all(factual[v] == val for v, val in evidence.items()):
            posterior.append((u, p))
            total += p
    if total <= ZERO_EVIDENCE_TOL:
        raise ZeroProbabilityEvidence("evidence %r has probability %.3g"
                                      % (dict(sorted(evidence.items())), total))

    probs = {}
    for u, p in posterior:
        values = run(u)
        key = tuple(values[v] for v in target_nodes)
        probs[key] = probs.get(key, 0.0) + p / total
    domains = {v: tuple(scm.domains[v]) for v in target_nodes}
    return ProbTable(nodes=target_nodes, domains=domains, probs=probs)
