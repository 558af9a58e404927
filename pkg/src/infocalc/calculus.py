"""Identification machinery.

Adjustment criteria, the three rewriting rules (full and simplified), the
checking-condition equivalences, the generalized rules on augmented DAGs,
and a budgeted breadth-first identifier that rewrites an interventional
query into an expression over observational probabilities.

An :class:`Expression` is a tree of P(.|.) terms, sums over node domains
and products.  Value references inside a term are either literals or
symbols: a bare symbol named like a node is bound by the nearest
enclosing sum (or by the query target environment), while symbols of the
form ``~A`` stand for the intervention value of node ``A`` and are
supplied through the evaluation environment or substituted before
printing.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union

from .dist import FactoredDistribution, ProbTable, Value, conditional
from .errors import (
    CriterionFails,
    DomainError,
    LatentQueried,
    OverlappingInfoNodes,
    OverlappingSets,
    QueryParseError,
    UnknownEdge,
    UnknownNode,
    ZeroProbabilityEvidence,
)
from .graph import (
    Dag,
    Edge,
    d_separated,
    intervention_augmented,
    relatives,
    remove_incoming,
    remove_outgoing,
)
from .interventions import Do, GeneralizedInfo, Info, InterventionSpec
from .paths import find_open_trail, format_trail, has_directed_path


# --- expression tree ---------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    value: Value


@dataclass(frozen=True)
class Sym:
    name: str


Ref = Union[Lit, Sym]


@dataclass(frozen=True)
class PTerm:
    """An observational conditional probability P(targets | given)."""

    targets: Tuple[Tuple[str, Ref], ...]
    given: Tuple[Tuple[str, Ref], ...] = ()


@dataclass(frozen=True)
class Sum:
    """Sum of the body over the full domains of the named nodes."""

    over: Tuple[str, ...]
    body: "Expression"


@dataclass(frozen=True)
class Product:
    factors: Tuple["Expression", ...]


Expression = Union[PTerm, Sum, Product]


def intervention_sym(node: str) -> Sym:
    return Sym("~" + node)


def _entries(nodes: Iterable[str], ref_for) -> Tuple[Tuple[str, Ref], ...]:
    return tuple((v, ref_for(v)) for v in sorted(frozenset(nodes)))


def free_symbols(expr: Expression, bound: FrozenSet[str] = frozenset()):
    if isinstance(expr, PTerm):
        out = set()
        for _, ref in expr.targets + expr.given:
            if isinstance(ref, Sym) and ref.name not in bound:
                out.add(ref.name)
        return out
    if isinstance(expr, Sum):
        return free_symbols(expr.body, bound | frozenset(expr.over))
    if isinstance(expr, Product):
        out = set()
        for f in expr.factors:
            out |= free_symbols(f, bound)
        return out
    raise TypeError("not an expression: %r" % (expr,))


def substitute(expr: Expression, env: Mapping[str, Value],
               bound: FrozenSet[str] = frozenset()) -> Expression:
    """Replace free symbols by literal values (sum variables shadow)."""
    def subst_ref(ref):
        if isinstance(ref, Sym) and ref.name not in bound and ref.name in env:
            return Lit(env[ref.name])
        return ref

    if isinstance(expr, PTerm):
        return PTerm(targets=tuple((v, subst_ref(r)) for v, r in expr.targets),
                     given=tuple((v, subst_ref(r)) for v, r in expr.given))
    if isinstance(expr, Sum):
        inner = bound | frozenset(expr.over)
        return Sum(over=expr.over, body=substitute(expr.body, env, inner))
    if isinstance(expr, Product):
        return Product(factors=tuple(substitute(f, env, bound)
                                     for f in expr.factors))
    raise TypeError("not an expression: %r" % (expr,))


# --- serialization -----------------------------------------------------------

def _format_entry(node: str, ref: Ref) -> str:
    if isinstance(ref, Sym):
        if ref.name == node:
            return node
        return "%s=%s" % (node, ref.name)
    return "%s=%s" % (node, ref.value)


def format_expression(expr: Expression) -> str:
    """Parenthesized text form, e.g. ``sum{C}( P(B|A=a,C) * P(C) )``."""
    if isinstance(expr, PTerm):
        head = ",".join(_format_entry(v, r) for v, r in expr.targets)
        if expr.given:
            tail = ",".join(_format_entry(v, r) for v, r in expr.given)
            return "P(%s|%s)" % (head, tail)
        return "P(%s)" % head
    if isinstance(expr, Sum):
        return "sum{%s}( %s )" % (",".join(expr.over),
                                  format_expression(expr.body))
    if isinstance(expr, Product):
        return " * ".join(format_expression(f) for f in expr.factors)
    raise TypeError("not an expression: %r" % (expr,))


_EXPR_TOKEN = re.compile(r"\s*(sum|P|\{|\}|\(|\)|\||,|\*|=|[A-Za-z0-9_.~+-]+)")


class _ExprTokens:
    def __init__(self, text: str):
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _EXPR_TOKEN.match(text, pos)
            if not m:
                if text[pos:].strip():
                    raise QueryParseError("unexpected character %r in expression"
                                          % text[pos])
                break
            self.tokens.append(m.group(1))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self, expected=None):
        tok = self.peek()
        if tok is None:
            raise QueryParseError("unexpected end of expression")
        if expected is not None and tok != expected:
            raise QueryParseError("expected %r, found %r" % (expected, tok))
        self.i += 1
        return tok


def _parse_entry(toks: _ExprTokens) -> Tuple[str, Ref]:
    node = toks.next()
    if toks.peek() == "=":
        toks.next("=")
        val = toks.next()
        if val.startswith("~"):
            return node, Sym(val)
        return node, Lit(val)
    return node, Sym(node)


def _parse_entry_list(toks: _ExprTokens, stop: Tuple[str, ...]):
    out = [_parse_entry(toks)]
    while toks.peek() == ",":
        toks.next(",")
        out.append(_parse_entry(toks))
    if toks.peek() not in stop:
        raise QueryParseError("expected one of %r, found %r" % (stop, toks.peek()))
    return tuple(out)


def _parse_atom(toks: _ExprTokens) -> Expression:
    tok = toks.peek()
    if tok == "P":
        toks.next("P")
        toks.next("(")
        targets = _parse_entry_list(toks, ("|", ")"))
        given = ()
        if toks.peek() == "|":
            toks.next("|")
            given = _parse_entry_list(toks, (")",))
        toks.next(")")
        return PTerm(targets=targets, given=given)
    if tok == "sum":
        toks.next("sum")
        toks.next("{")
        over = [toks.next()]
        while toks.peek() == ",":
            toks.next(",")
            over.append(toks.next())
        toks.next("}")
        toks.next("(")
        body = _parse_product(toks)
        toks.next(")")
        return Sum(over=tuple(over), body=body)
    if tok == "(":
        toks.next("(")
        inner = _parse_product(toks)
        toks.next(")")
        return inner
    raise QueryParseError("expected a probability term or sum, found %r" % tok)


def _parse_product(toks: _ExprTokens) -> Expression:
    factors = [_parse_atom(toks)]
    while toks.peek() == "*":
        toks.next("*")
        factors.append(_parse_atom(toks))
    if len(factors) == 1:
        return factors[0]
    return Product(factors=tuple(factors))


def parse_expression(text: str) -> Expression:
    toks = _ExprTokens(text)
    expr = _parse_product(toks)
    if toks.peek() is not None:
        raise QueryParseError("trailing tokens after expression: %r" % toks.peek())
    return expr


# --- evaluation --------------------------------------------------------------

def _resolve_value(fd: FactoredDistribution, node: str, ref: Ref,
                   env: Mapping[str, Value]) -> Value:
    if isinstance(ref, Sym):
        if ref.name not in env:
            raise DomainError("unbound symbol %r in expression" % ref.name)
        raw = env[ref.name]
    else:
        raw = ref.value
    if raw in fd.domains[node]:
        return raw
    for candidate in fd.domains[node]:
        if str(candidate) == str(raw):
            return candidate
    raise DomainError("value %r not in domain of %r" % (raw, node))


class ExpressionEvaluator:
    """Evaluates expressions against one distribution, caching conditionals."""

    def __init__(self, fd: FactoredDistribution):
        self.fd = fd
        self._cache: Dict[tuple, ProbTable] = {}

    def _conditional(self, b_nodes: Tuple[str, ...],
                     given_items: Tuple[Tuple[str, Value], ...]) -> ProbTable:
        key = (b_nodes, given_items)
        table = self._cache.get(key)
        if table is None:
            table = conditional(self.fd, b_nodes, dict(given_items))
            self._cache[key] = table
        return table

    def evaluate(self, expr: Expression, env: Mapping[str, Value]) -> float:
        if isinstance(expr, PTerm):
            targets = {v: _resolve_value(self.fd, v, r, env)
                       for v, r in expr.targets}
            given = tuple(sorted((v, _resolve_value(self.fd, v, r, env))
                                 for v, r in expr.given))
            table = self._conditional(tuple(sorted(targets)), given)
            return table.prob(targets)
        if isinstance(expr, Sum):
            for v in expr.over:
                if v not in self.fd.domains:
                    raise UnknownNode("sum over undeclared node %r" % v)
            total = 0.0
            inner = dict(env)
            domains = [self.fd.domains[v] for v in expr.over]

            def rec(i):
                nonlocal total
                if i == len(expr.over):
                    total += self.evaluate(expr.body, inner)
                    return
                for val in domains[i]:
                    inner[expr.over[i]] = val
                    rec(i + 1)

            rec(0)
            return total
        if isinstance(expr, Product):
            # A zero factor absorbs a zero-evidence error elsewhere in the
            # same product; otherwise the error propagates.
            values: List[Optional[float]] = []
            pending: Optional[ZeroProbabilityEvidence] = None
            for f in expr.factors:
                try:
                    values.append(self.evaluate(f, env))
                except ZeroProbabilityEvidence as exc:
                    pending = pending or exc
                    values.append(None)
            if pending is not None:
                if any(v == 0.0 for v in values if v is not None):
                    return 0.0
                raise pending
            out = 1.0
            for v in values:
                out *= v
            return out
        raise TypeError("not an expression: %r" % (expr,))


def evaluate_expression(expr: Expression, fd: FactoredDistribution,
                        env: Mapping[str, Value]) -> float:
    return ExpressionEvaluator(fd).evaluate(expr, env)


def evaluate_expression_table(expr: Expression, fd: FactoredDistribution,
                              targets: Iterable[str],
                              env: Mapping[str, Value]) -> ProbTable:
    """Evaluate the expression for every value combination of the targets."""
    evaluator = ExpressionEvaluator(fd)
    nodes = tuple(sorted(frozenset(targets)))
    probs = {}
    for values in itertools.product(*(fd.domains[v] for v in nodes)):
        point = dict(env)
        point.update(zip(nodes, values))
        probs[values] = evaluator.evaluate(expr, point)
    return ProbTable(nodes=nodes, domains=fd.domains, probs=probs)


# --- adjustment criteria -----------------------------------------------------

def _checked_sets(dag: Dag, named: Mapping[str, Iterable[str]],
                  observational: Tuple[str, ...] = ()):
    out = {}
    taken = {}
    for name, members in named.items():
        s = frozenset(members)
        unknown = s - dag.node_set
        if unknown:
            raise UnknownNode("%s mentions undeclared node(s): %s"
                              % (name, ", ".join(sorted(unknown))))
        for other, t in taken.items():
            if s & t:
                raise OverlappingSets("%s and %s overlap on %s"
                                      % (other, name, ", ".join(sorted(s & t))))
        taken[name] = s
        out[name] = s
    for name in observational:
        hidden = out[name] & dag.latent
        if hidden:
            raise LatentQueried("%s mentions latent node(s): %s"
                                % (name, ", ".join(sorted(hidden))))
    return out


def backdoor_adjust(dag: Dag, a: Iterable[str], b: Iterable[str],
                    c: Iterable[str]) -> Expression:
    """Adjustment over ``c``: sum_c P(b | a~, c) P(c).

    Requires that no node of ``c`` descends from ``a`` and that ``c``
    blocks every back-door path from ``a`` to ``b``.
    """
    sets = _checked_sets(dag, {"A": a, "B": b, "C": c}, ("A", "B", "C"))
    a_set, b_set, c_set = sets["A"], sets["B"], sets["C"]
    bad = c_set & relatives(dag, a_set, "descendants")
    if bad:
        raise CriterionFails("adjustment set contains descendant(s) of the "
                             "intervention: %s" % ", ".join(sorted(bad)))
    backdoor_graph = remove_outgoing(dag, a_set)
    if not d_separated(backdoor_graph, a_set, b_set, c_set):
        trail = find_open_trail(backdoor_graph, a_set, b_set, c_set)
        raise CriterionFails("unblocked back-door path: %s"
                             % format_trail(backdoor_graph, trail))

    term = PTerm(targets=_entries(b_set, Sym),
                 given=_entries(a_set, intervention_sym) + _entries(c_set, Sym))
    if not c_set:
        return term
    return Sum(over=tuple(sorted(c_set)),
               body=Product(factors=(term, PTerm(targets=_entries(c_set, Sym)))))


def frontdoor_adjust(dag: Dag, a: Iterable[str], b: Iterable[str],
                     c: Iterable[str]) -> Expression:
    """Mediator adjustment: sum_c P(c | a~) sum_a' P(b | c, a') P(a').

    Requires that ``c`` intercepts every directed path from ``a`` to ``b``,
    that no back-door path from ``a`` to ``c`` is open, and that ``a``
    blocks every back-door path from ``c`` to ``b``.
    """
    sets = _checked_sets(dag, {"A": a, "B": b, "C": c}, ("A", "B", "C"))
    a_set, b_set, c_set = sets["A"], sets["B"], sets["C"]
    leak = has_directed_path(dag, a_set, b_set, avoiding=c_set)
    if leak:
        raise CriterionFails("directed path avoids the mediator set: %s"
                             % " -> ".join(leak))
    a_backdoor = remove_outgoing(dag, a_set)
    if not d_separated(a_backdoor, a_set, c_set, frozenset()):
        trail = find_open_trail(a_backdoor, a_set, c_set, frozenset())
        raise CriterionFails("unblocked back-door path to the mediator: %s"
                             % format_trail(a_backdoor, trail))
    c_backdoor = remove_outgoing(dag, c_set)
    if not d_separated(c_backdoor, c_set, b_set, a_set):
        trail = find_open_trail(c_backdoor, c_set, b_set, a_set)
        raise CriterionFails("back-door path from mediator to target not "
                             "blocked by the intervention: %s"
                             % format_trail(c_backdoor, trail))

    inner = Sum(over=tuple(sorted(a_set)),
                body=Product(factors=(
                    PTerm(targets=_entries(b_set, Sym),
                          given=_entries(c_set, Sym) + _entries(a_set, Sym)),
                    PTerm(targets=_entries(a_set, Sym)),
                )))
    mediator = PTerm(targets=_entries(c_set, Sym),
                     given=_entries(a_set, intervention_sym))
    return Sum(over=tuple(sorted(c_set)),
               body=Product(factors=(mediator, inner)))


# --- the three rules ---------------------------------------------------------

def _not_ancestors_of(dag: Dag, c_set: FrozenSet[str],
                      d_set: FrozenSet[str]) -> FrozenSet[str]:
    # The C-nodes that are not ancestors of any D-node, in the base graph.
    if not d_set:
        return c_set
    return c_set - relatives(dag, d_set, "ancestors")


def check_rule(dag: Dag, rule: int, a: Iterable[str], b: Iterable[str],
               c: Iterable[str], d: Iterable[str]) -> bool:
    """Graphical condition of rewriting rule 1, 2 or 3.

    Rule 1 licenses dropping the observation ``c``; rule 2 exchanges the
    intervention on ``c`` for conditioning; rule 3 drops the intervention
    on ``c`` entirely.
    """
    sets = _checked_sets(dag, {"A": a, "B": b, "C": c, "D": d})
    a_set, b_set, c_set, d_set = sets["A"], sets["B"], sets["C"], sets["D"]
    if rule == 1:
        return d_separated(remove_outgoing(dag, a_set), b_set, c_set, d_set)
    if rule == 2:
        return d_separated(remove_outgoing(dag, a_set | c_set),
                           b_set, c_set, d_set)
    if rule == 3:
        cut = _not_ancestors_of(dag, c_set, d_set)
        graph = remove_incoming(remove_outgoing(dag, a_set), cut)
        return d_separated(graph, b_set, c_set, d_set)
    raise ValueError("rule must be 1, 2 or 3")


def check_rule_simple(dag: Dag, rule: int, a: Iterable[str], b: Iterable[str],
                      c: Iterable[str]) -> bool:
    """Simplified rules: rule 1 with an empty extra conditioning set,
    rule 2 checked directly against the intervention set, rule 3 as the
    absence of any causal path."""
    sets = _checked_sets(dag, {"A": a, "B": b, "C": c})
    a_set, b_set, c_set = sets["A"], sets["B"], sets["C"]
    if rule == 1:
        return d_separated(remove_outgoing(dag, a_set), b_set, c_set, frozenset())
    if rule == 2:
        return d_separated(remove_outgoing(dag, a_set), b_set, a_set, c_set)
    if rule == 3:
        return not (relatives(dag, a_set, "descendants") & b_set)
    raise ValueError("rule must be 1, 2 or 3")


def check_equivalence(dag: Dag, which: str, a: Iterable[str], b: Iterable[str],
                      c: Iterable[str], d: Iterable[str]) -> Tuple[bool, bool]:
    """Both sides of one checking-condition equivalence, as a pair.

    Each pair compares a condition in an outgoing-surgery graph without
    the intervention nodes in the conditioning set against the classical
    condition in an incoming-surgery graph with them conditioned.
    """
    sets = _checked_sets(dag, {"A": a, "B": b, "C": c, "D": d})
    a_set, b_set, c_set, d_set = sets["A"], sets["B"], sets["C"], sets["D"]
    if which == "i":
        lhs = d_separated(remove_outgoing(dag, a_set), b_set, c_set, d_set)
        rhs = d_separated(remove_incoming(dag, a_set), b_set, c_set,
                          a_set | d_set)
        return lhs, rhs
    if which == "ii":
        lhs = d_separated(remove_outgoing(dag, a_set | c_set),
                          b_set, c_set, d_set)
        rhs = d_separated(remove_outgoing(remove_incoming(dag, a_set), c_set),
                          b_set, c_set, a_set | d_set)
        return lhs, rhs
    if which == "iii":
        cut = _not_ancestors_of(dag, c_set, d_set)
        lhs = d_separated(remove_incoming(remove_outgoing(dag, a_set), cut),
                          b_set, c_set, d_set)
        rhs = d_separated(remove_incoming(dag, a_set | cut),
                          b_set, c_set, a_set | d_set)
        return lhs, rhs
    raise ValueError("which must be 'i', 'ii' or 'iii'")


def _edge_flags(functions) -> Dict[Edge, bool]:
    if isinstance(functions, Mapping):
        return {tuple(e): bool(flag) for e, flag in functions.items()}
    out = {}
    for fn in functions:
        if fn.edge in out:
            raise OverlappingInfoNodes("two information functions on edge %s->%s"
                                       % fn.edge)
        out[fn.edge] = fn.is_constant
    return out


def check_generalized_rule(dag: Dag, rule: int, f1, f2,
                           b: Iterable[str], c: Iterable[str],
                           d: Iterable[str]) -> bool:
    """Rules 1 and 3 on the augmented graph of an edge intervention.

    ``f1``/``f2`` are iterables of :class:`InfoFunction` or mappings
    edge -> is_constant.  Rule 1 ignores ``f2``; rule 3 tests separation
    from the information nodes of ``f2``.
    """
    flags1, flags2 = _edge_flags(f1), _edge_flags(f2)
    shared = frozenset(flags1) & frozenset(flags2)
    if shared:
        raise OverlappingInfoNodes("interventions share edge(s): %s"
                                   % ", ".join("%s->%s" % e for e in sorted(shared)))
    aug = intervention_augmented(dag, frozenset(flags1), flags1)
    graph = aug.dag
    sets = _checked_sets(graph, {"B": b, "C": c, "D": d})
    b_set, c_set, d_set = sets["B"], sets["C"], sets["D"]
    if rule == 1:
        return d_separated(graph, b_set, c_set, d_set)
    if rule == 3:
        unknown = frozenset(flags2) - dag.edge_set
        if unknown:
            raise UnknownEdge("intervened edge(s) not in graph: %s"
                              % ", ".join("%s->%s" % e for e in sorted(unknown)))
        n_f2 = frozenset(aug.info_map[e] for e in flags2)
        cut = _not_ancestors_of(graph, n_f2, d_set)
        return d_separated(remove_incoming(graph, cut), b_set, n_f2, d_set)
    raise ValueError("generalized rules are 1 and 3")


# --- bounded identification --------------------------------------------------

@dataclass(frozen=True)
class Query:
    """An interventional query to identify.

    ``observations`` may be a mapping with values or a bare iterable of
    node names; identification is symbolic in the observed values either
    way.
    """

    targets: Tuple[str, ...]
    interventions: Tuple[InterventionSpec, ...]
    observations: Tuple[str, ...] = ()

    @staticmethod
    def build(targets, interventions, observations=()) -> "Query":
        obs = tuple(sorted(observations))
        return Query(targets=tuple(sorted(frozenset(targets))),
                     interventions=tuple(interventions),
                     observations=obs)


@dataclass(frozen=True)
class NotIdentifiedWithinBudget:
    """Search gave up; says nothing about true non-identifiability."""

    frontier: int


@dataclass(frozen=True)
class _SearchState:
    actions: Tuple[Tuple[str, Ref], ...]       # pending sigma interventions
    observations: Tuple[Tuple[str, Ref], ...]  # conditioning items


class _Budget:
    def __init__(self, limit: int):
        self.left = limit

    def spend(self) -> bool:
        if self.left <= 0:
            return False
        self.left -= 1
        return True


def _merged_intervention(dag: Dag, query: Query) -> Dict[str, Ref]:
    merged: Dict[str, Ref] = {}
    for spec in query.interventions:
        if isinstance(spec, GeneralizedInfo):
            raise QueryParseError("identification handles node interventions "
                                  "only, not per-edge information functions")
        if not isinstance(spec, (Do, Info)):
            raise TypeError("unknown intervention spec %r" % (spec,))
        # do and sigma agree on conditionals of non-intervened nodes, so
        # identification treats both as sigma.
        for node in spec.assignment:
            if node in merged:
                raise OverlappingSets("node %r intervened twice" % node)
            merged[node] = intervention_sym(node)
    unknown = frozenset(merged) - dag.node_set
    if unknown:
        raise UnknownNode("intervention on undeclared node(s): %s"
                          % ", ".join(sorted(unknown)))
    return merged


def identify(dag: Dag, query: Query, budget: int = 2000):
    """Budgeted breadth-first rewriting search.

    Moves, tried in a fixed order (observation deletion, action deletion,
    action-to-observation exchange, back-door, front-door, then
    marginalization splits), transform the query until no intervention
    remains.  Returns an :class:`Expression` whose free symbols are the
    target nodes, the observed nodes and one ``~A`` symbol per intervened
    node; or :class:`NotIdentifiedWithinBudget`.
    """
    merged = _merged_intervention(dag, query)
    sets = _checked_sets(dag,
                         {"targets": query.targets,
                          "interventions": tuple(merged),
                          "observations": query.observations},
                         ("targets", "interventions", "observations"))
    b_set = sets["targets"]
    if not b_set:
        raise QueryParseError("empty target set")
    state = _SearchState(
        actions=tuple(sorted(merged.items())),
        observations=tuple((v, Sym(v)) for v in sorted(sets["observations"])))
    return _solve(dag, tuple(sorted(b_set)), state, _Budget(budget))


def _terminal(targets: Tuple[str, ...], state: _SearchState) -> Expression:
    return PTerm(targets=tuple((v, Sym(v)) for v in targets),
                 given=state.observations)


def _solve(dag: Dag, targets: Tuple[str, ...], start: _SearchState,
           budget: _Budget):
    if not start.actions:
        return _terminal(targets, start)
    b_set = frozenset(targets)
    frontier: List[_SearchState] = [start]
    seen = {start}
    overflow = False

    while frontier:
        if not budget.spend():
            overflow = True
            break
        state = frontier.pop(0)
        for result in _moves(dag, targets, b_set, state, budget):
            if isinstance(result, _SearchState):
                if result in seen:
                    continue
                seen.add(result)
                if not result.actions:
                    return _terminal(targets, result)
                frontier.append(result)
            elif result is not None:
                return result  # a finished Expression from a composite move
    return NotIdentifiedWithinBudget(frontier=len(frontier) + (1 if overflow else 0))


def _moves(dag: Dag, targets: Tuple[str, ...], b_set: FrozenSet[str],
           state: _SearchState, budget: _Budget):
    action_nodes = frozenset(v for v, _ in state.actions)
    obs_nodes = frozenset(v for v, _ in state.observations)

    # rule 1: delete one observation
    for node, _ in state.observations:
        if d_separated(remove_outgoing(dag, action_nodes), b_set, {node},
                       obs_nodes - {node}):
            yield replace(state, observations=_without(state.observations, node))

    # rule 3: delete one action
    for node, _ in state.actions:
        rest = action_nodes - {node}
        cut = _not_ancestors_of(dag, frozenset({node}), obs_nodes)
        graph = remove_incoming(remove_outgoing(dag, rest), cut)
        if d_separated(graph, b_set, {node}, obs_nodes):
            yield replace(state, actions=_without(state.actions, node))

    # rule 2: exchange one action for an observation of its value
    for node, ref in state.actions:
        if d_separated(remove_outgoing(dag, action_nodes), b_set, {node},
                       obs_nodes):
            yield _SearchState(
                actions=_without(state.actions, node),
                observations=tuple(sorted(state.observations + ((node, ref),))))

    if state.observations:
        return

    eligible = sorted(dag.node_set - dag.latent - action_nodes - b_set)

    for criterion in (backdoor_adjust, frontdoor_adjust):
        for cand in _subsets(eligible):
            try:
                expr = criterion(dag, action_nodes, b_set, cand)
            except CriterionFails:
                continue
            yield expr
            break

    # marginalization split: P(B|sigma) = sum_z P(B|sigma,z) P(z|sigma)
    for z in eligible:
        with_z = replace(state,
                         observations=tuple(sorted(state.observations
                                                   + ((z, Sym(z)),))))
        left = _solve(dag, targets, with_z, budget)
        if not isinstance(left, (PTerm, Sum, Product)):
            continue
        right = _solve(dag, (z,), state, budget)
        if not isinstance(right, (PTerm, Sum, Product)):
            continue
        yield Sum(over=(z,), body=Product(factors=(left, right)))


def _without(items: Tuple[Tuple[str, Ref], ...], node: str):
    return tuple(item for item in items if item[0] != node)


def _subsets(pool: List[str]):
    for size in range(len(pool) + 1):
        for combo in itertools.combinations(pool, size):
            yield frozenset(combo)
