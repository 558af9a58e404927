"""Random instance generation and brute-force verification suites.

Every registered suite samples instances from a seeded generator, checks
the graphical hypothesis of one identity, and when the hypothesis holds
asserts the identity numerically against full enumeration.  Reports carry
the hypothesis-held count so a vacuous pass (condition never held) is
visible; a suite with fewer held trials than ``min_held`` is flagged
INCONCLUSIVE.

A trial counts as held only when the identity was actually checked; a
trial whose sampled evidence has no positive-probability value is
recorded as a skip, never as a silent pass.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Tuple

from . import calculus
from .dist import (
    Cpt,
    FactoredDistribution,
    ProbTable,
    conditional,
    joint,
    joint_table,
    marginal,
)
from .errors import DEFAULT_TOL, ConfigError, UnknownTheorem
from .graph import Dag, build_dag, d_separated, relatives, remove_outgoing
from .interventions import (
    Info,
    InfoFunction,
    do_distribution,
    generalized_info_distribution,
    info_distribution,
    info_joint,
)
from .paths import d_separated_by_paths
from .scm import (
    Scm,
    StructuralEquation,
    evaluate,
    generalized_info_evaluate,
    induced_distribution,
    info_evaluate,
    pushforward_distribution,
    counterfactual_query,
)

EVIDENCE_FLOOR = 1e-8


@dataclass(frozen=True)
class InstanceConfig:
    """Bounds for the random-instance generators; same seed, same bytes."""

    seed: int
    n_nodes: int = 5
    edge_prob: float = 0.5
    max_domain: int = 3
    latent_prob: float = 0.0

    def __post_init__(self):
        if not 1 <= self.n_nodes <= 8:
            raise ConfigError("n_nodes must be within 1..8")
        if not 0.0 <= self.edge_prob <= 1.0:
            raise ConfigError("edge_prob must be within [0, 1]")
        if not 2 <= self.max_domain <= 4:
            raise ConfigError("max_domain must be within 2..4")
        if not 0.0 <= self.latent_prob <= 1.0:
            raise ConfigError("latent_prob must be within [0, 1]")


def _random_dag(rng: random.Random, cfg: InstanceConfig) -> Dag:
    names = ["X%d" % i for i in range(1, cfg.n_nodes + 1)]
    order = list(names)
    rng.shuffle(order)
    edges = []
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if rng.random() < cfg.edge_prob:
                edges.append((order[i], order[j]))
    latent = [v for v in names if rng.random() < cfg.latent_prob]
    return build_dag(names, sorted(edges), latent)


def _random_row(rng: random.Random, size: int) -> Tuple[float, ...]:
    # normalized uniform positives; 1 - random() keeps every entry in (0, 1]
    raw = [1.0 - rng.random() for _ in range(size)]
    total = sum(raw)
    return tuple(x / total for x in raw)


def _random_cpts(rng: random.Random, dag: Dag, max_domain: int,
                 domain_sizes: Optional[Dict[str, int]] = None) -> FactoredDistribution:
    domains = {}
    for v in sorted(dag.nodes):
        size = domain_sizes[v] if domain_sizes else rng.randint(2, max_domain)
        domains[v] = tuple(range(size))
    cpts = {}
    for v in sorted(dag.nodes):
        parents = tuple(sorted(dag.parents[v]))
        table = {}
        for key in itertools.product(*(domains[p] for p in parents)):
            table[key] = _random_row(rng, len(domains[v]))
        cpts[v] = Cpt(node=v, parents=parents, table=table)
    return FactoredDistribution(dag=dag, domains=domains, cpts=cpts)


def random_dag(cfg: InstanceConfig) -> Dag:
    return _random_dag(random.Random(cfg.seed), cfg)


def random_instance(cfg: InstanceConfig) -> FactoredDistribution:
    """A random DAG with strictly positive random CPTs."""
    rng = random.Random(cfg.seed)
    dag = _random_dag(rng, cfg)
    return _random_cpts(rng, dag, cfg.max_domain)


def random_scm(cfg: InstanceConfig) -> Scm:
    """A Markovian SCM: one private noise parent per endogenous node."""
    rng = random.Random(cfg.seed)
    endo = _random_dag(rng, replace(cfg, latent_prob=0.0))
    exo_names = {v: "U_%s" % v for v in endo.nodes}
    nodes = tuple(endo.nodes) + tuple(exo_names[v] for v in endo.nodes)
    edges = tuple(endo.edges) + tuple((exo_names[v], v) for v in endo.nodes)
    graph = build_dag(nodes, sorted(edges), latent=sorted(exo_names.values()))

    domains = {}
    for v in sorted(endo.nodes):
        domains[v] = tuple(range(rng.randint(2, cfg.max_domain)))
    for v in sorted(endo.nodes):
        domains[exo_names[v]] = tuple(range(rng.randint(2, cfg.max_domain)))

    exogenous = {}
    for v in sorted(endo.nodes):
        u = exo_names[v]
        row = _random_row(rng, len(domains[u]))
        exogenous[u] = dict(zip(domains[u], row))

    equations = {}
    for v in sorted(endo.nodes):
        inputs = tuple(sorted(endo.parents[v])) + (exo_names[v],)
        table = {}
        for key in itertools.product(*(domains[p] for p in inputs)):
            table[key] = domains[v][rng.randrange(len(domains[v]))]
        equations[v] = StructuralEquation(node=v, inputs=inputs, table=table)
    return Scm(graph=graph, domains=domains, exogenous=exogenous,
               equations=equations)


# --- fixed worked-example topologies -----------------------------------------

def backdoor_topology() -> Dag:
    """Confounder adjustment shape: C confounds A and B, A causes B."""
    return build_dag(["A", "B", "C"], [("A", "B"), ("C", "A"), ("C", "B")])


def frontdoor_topology() -> Dag:
    """Mediator shape with a latent common cause of treatment and outcome."""
    return build_dag(["A", "B", "C", "D"],
                     [("A", "C"), ("C", "B"), ("D", "A"), ("D", "B")],
                     latent=["D"])


def staged_topology() -> Dag:
    """Two intervention stages with a latent confounder of the second."""
    return build_dag(["A1", "A2", "B", "C", "D"],
                     [("A1", "C"), ("A2", "B"), ("C", "A2"), ("C", "B"),
                      ("D", "A2"), ("D", "C")],
                     latent=["D"])


def parameterize(dag: Dag, seed: int, max_domain: int = 2) -> FactoredDistribution:
    """Random positive CPTs on a fixed topology."""
    return _random_cpts(random.Random(seed), dag, max_domain)


# --- reporting ---------------------------------------------------------------

@dataclass
class TrialRecord:
    trial: int
    seed: int
    held: bool
    deviation: float
    note: str = ""


@dataclass
class VerificationReport:
    theorem: str
    trials: int
    condition_held: int
    max_abs_deviation: float
    tolerance: float
    failures: List[dict] = field(default_factory=list)
    inconclusive: bool = False
    records: List[TrialRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.inconclusive

    def summary(self) -> dict:
        return {
            "theorem": self.theorem,
            "trials": self.trials,
            "condition_held": self.condition_held,
            "max_abs_deviation": self.max_abs_deviation,
            "tolerance": self.tolerance,
            "failures": len(self.failures),
            "inconclusive": self.inconclusive,
        }


def verify(theorem: str, cfg: InstanceConfig, trials: int,
           tol: float = DEFAULT_TOL, min_held: int = 10) -> VerificationReport:
    """Run one registered suite for ``trials`` seeded instances."""
    if theorem not in SUITES:
        raise UnknownTheorem("no suite named %r; known: %s"
                             % (theorem, ", ".join(sorted(SUITES))))
    suite = SUITES[theorem]
    master = random.Random(cfg.seed)
    report = VerificationReport(theorem=theorem, trials=trials,
                                condition_held=0, max_abs_deviation=0.0,
                                tolerance=tol)
    for t in range(trials):
        seed = master.getrandbits(48)
        held, deviation, note = suite(seed, cfg, tol)
        report.records.append(TrialRecord(trial=t, seed=seed, held=held,
                                          deviation=deviation, note=note))
        if held:
            report.condition_held += 1
            report.max_abs_deviation = max(report.max_abs_deviation, deviation)
            if deviation > tol:
                report.failures.append({"trial": t, "seed": seed,
                                        "deviation": deviation, "note": note})
    report.inconclusive = report.condition_held < min_held
    return report


# --- sampling helpers ---------------------------------------------------------

def _disjoint_sets(rng, pool, sizes):
    pool = sorted(pool)
    total = sum(sizes)
    if total > len(pool):
        return None
    picked = rng.sample(pool, total)
    out = []
    at = 0
    for size in sizes:
        out.append(frozenset(picked[at:at + size]))
        at += size
    return out


def _random_values(rng, fd, nodes):
    return {v: fd.domains[v][rng.randrange(len(fd.domains[v]))]
            for v in sorted(nodes)}


def _pick_positive(rng, table: ProbTable, nodes, floor=EVIDENCE_FLOOR):
    """A value assignment of ``nodes`` with marginal probability > floor."""
    nodes = frozenset(nodes)
    if not nodes:
        return {}
    marg = table.marginalize(nodes)
    options = [key for key, p in marg.items() if p > floor]
    if not options:
        return None
    return dict(zip(marg.nodes, options[rng.randrange(len(options))]))


def _observed_pool(fd):
    return sorted(fd.dag.node_set - fd.dag.latent)


def _instance(rng, cfg, min_nodes=3, latent_prob=None):
    n = rng.randint(min_nodes, cfg.n_nodes) if cfg.n_nodes > min_nodes else cfg.n_nodes
    sub = replace(cfg, seed=rng.getrandbits(48), n_nodes=n,
                  latent_prob=cfg.latent_prob if latent_prob is None else latent_prob)
    return random_instance(sub)


def _table_conditional_diff(lhs: ProbTable, rhs: ProbTable, b, lhs_given, rhs_given):
    left = lhs.condition(b, lhs_given)
    right = rhs.condition(b, rhs_given)
    return left.max_abs_diff(right)


def _random_info_function(rng, fd, edge, constant) -> InfoFunction:
    dom = fd.domains[edge[0]]
    if constant:
        val = dom[rng.randrange(len(dom))]
        mapping = {x: val for x in dom}
    else:
        mapping = {x: dom[rng.randrange(len(dom))] for x in dom}
        if len(set(mapping.values())) == 1:
            # force a second output value to keep the function non-constant
            x0 = dom[0]
            current = mapping[x0]
            alternatives = [v for v in dom if v != current]
            mapping[x0] = alternatives[rng.randrange(len(alternatives))]
    return InfoFunction(edge=edge, mapping=mapping)


# --- suites -------------------------------------------------------------------

def _suite_do_info_equivalence(seed, cfg, tol):
    rng = random.Random(seed)
    fd = _instance(rng, cfg)
    pool = _observed_pool(fd)
    if len(pool) < 2:
        return False, 0.0, "instance too small"
    a_size = rng.randint(1, min(2, len(pool) - 1))
    b_size = rng.randint(1, min(2, len(pool) - a_size))
    c_size = rng.randint(0, min(1, len(pool) - a_size - b_size))
    sets = _disjoint_sets(rng, pool, [a_size, b_size, c_size])
    a, b, c = sets
    values = _random_values(rng, fd, a)
    info_table = info_distribution(fd, values)
    evidence = _pick_positive(rng, info_table, c)
    if evidence is None:
        return False, 0.0, "no positive evidence"
    do_table = do_distribution(fd, values)
    dev = _table_conditional_diff(do_table, info_table, b, evidence, evidence)
    return True, dev, ""


def _suite_consistency(seed, cfg, tol):
    """The five consistency identities of a factual-value message."""
    rng = random.Random(seed)
    fd = _instance(rng, cfg)
    pool = _observed_pool(fd)
    if len(pool) < 3:
        return False, 0.0, "instance too small"
    a, b, c = _disjoint_sets(rng, pool, [1, 1, 1])

    # (i) the factual message changes nothing, term by term and exactly
    exact_dev = 0.0
    for values in fd.assignments():
        x = dict(zip(fd.order, values))
        factual = {v: x[v] for v in a}
        exact_dev = max(exact_dev, abs(info_joint(fd, x, factual) - joint(fd, x)))

    observational = joint_table(fd)
    a_sorted = tuple(sorted(a))
    b_sorted = tuple(sorted(b))
    dev = 0.0
    c_values = _random_values(rng, fd, c)
    plain_c = info_distribution(fd, c_values)
    for key in itertools.product(*(fd.domains[v] for v in a_sorted)):
        factual = dict(zip(a_sorted, key))
        intervened = info_distribution(fd, factual)
        stacked = info_distribution(fd, {**factual, **c_values})
        for bkey in itertools.product(*(fd.domains[v] for v in b_sorted)):
            point = dict(factual)
            point.update(zip(b_sorted, bkey))
            # (ii) the joint of message nodes and any others is untouched
            dev = max(dev, abs(intervened.marginalize(a | b).prob(point)
                               - observational.marginalize(a | b).prob(point)))
            # (iv) a factual message stacked on another message is a no-op
            dev = max(dev, abs(stacked.marginalize(a | b).prob(point)
                               - plain_c.marginalize(a | b).prob(point)))
        # (iii) conditioning on the factual values is untouched
        if observational.marginalize(a).prob(factual) > EVIDENCE_FLOOR:
            dev = max(dev, _table_conditional_diff(
                intervened, observational, b, factual, factual))
        # (v) item (iii) inside another message's world
        if plain_c.marginalize(a).prob(factual) > EVIDENCE_FLOOR:
            dev = max(dev, _table_conditional_diff(
                stacked, plain_c, b, factual, factual))
    if exact_dev != 0.0:
        return True, max(1.0, exact_dev), "factual identity not exact"
    return True, dev, ""


def _suite_backdoor(seed, cfg, tol):
    rng = random.Random(seed)
    fd = parameterize(backdoor_topology(), rng.getrandbits(48), cfg.max_domain)
    expr = calculus.backdoor_adjust(fd.dag, {"A"}, {"B"}, {"C"})
    value = _random_values(rng, fd, {"A"})["A"]
    table = calculus.evaluate_expression_table(expr, fd, {"B"}, {"~A": value})
    target = info_distribution(fd, {"A": value}).marginalize({"B"})
    return True, table.max_abs_diff(target), ""


def _suite_frontdoor(seed, cfg, tol):
    rng = random.Random(seed)
    fd = parameterize(frontdoor_topology(), rng.getrandbits(48), cfg.max_domain)
    expr = calculus.frontdoor_adjust(fd.dag, {"A"}, {"B"}, {"C"})
    value = _random_values(rng, fd, {"A"})["A"]
    table = calculus.evaluate_expression_table(expr, fd, {"B"}, {"~A": value})
    target = info_distribution(fd, {"A": value}).marginalize({"B"})
    return True, table.max_abs_diff(target), ""


def _suite_frontdoor_generalized(seed, cfg, tol):
    """Closed form of a mediator effect under a per-edge message function."""
    rng = random.Random(seed)
    fd = parameterize(frontdoor_topology(), rng.getrandbits(48), cfg.max_domain)
    fn = _random_info_function(rng, fd, ("A", "C"), constant=rng.random() < 0.5)
    lhs = generalized_info_distribution(fd, [fn]).marginalize({"B"})
    from .dist import conditional, marginal
    p_a = marginal(fd, {"A"})
    dev = 0.0
    for b_val in fd.domains["B"]:
        total = 0.0
        for c_val in fd.domains["C"]:
            for a_val in fd.domains["A"]:
                e_ac = fn.mapping[a_val]
                p_c = conditional(fd, {"C"}, {"A": e_ac}).prob({"C": c_val})
                p_b = conditional(fd, {"B"}, {"C": c_val, "A": a_val}).prob({"B": b_val})
                total += p_c * p_b * p_a.prob({"A": a_val})
        dev = max(dev, abs(lhs.prob({"B": b_val}) - total))
    return True, dev, ""


def _rule_sets(rng, fd, with_d=True):
    pool = _observed_pool(fd)
    if len(pool) < 3:
        return None
    d_size = rng.randint(0, 1) if with_d and len(pool) >= 4 else 0
    return _disjoint_sets(rng, pool, [1, 1, 1, d_size])


def _suite_rule1(seed, cfg, tol):
    rng = random.Random(seed)
    fd = _instance(rng, cfg)
    sets = _rule_sets(rng, fd)
    if sets is None:
        return False, 0.0, "instance too small"
    a, b, c, d = sets
    if not calculus.check_rule(fd.dag, 1, a, b, c, d):
        return False, 0.0, ""
    values = _random_values(rng, fd, a)
    table = info_distribution(fd, values)
    evidence = _pick_positive(rng, table, c | d)
    if evidence is None:
        return False, 0.0, "no positive evidence"
    d_part = {v: evidence[v] for v in d}
    dev = _table_conditional_diff(table, table, b, evidence, d_part)
    return True, dev, ""


def _suite_rule2(seed, cfg, tol):
    rng = random.Random(seed)
    fd = _instance(rng, cfg)
    sets = _rule_sets(rng, fd)
    if sets is None:
        return False, 0.0, "instance too small"
    a, b, c, d = sets
    if not calculus.check_rule(fd.dag, 2, a, b, c, d):
        return False, 0.0, ""
    a_values = _random_values(rng, fd, a)
    c_values = _random_values(rng, fd, c)
    both = info_distribution(fd, {**a_values, **c_values})
    a_only = info_distribution(fd, a_values)
    d_evidence = _pick_positive(rng, both, d)
    if d_evidence is None:
        return False, 0.0, "no positive evidence"
    rhs_given = {**c_values, **d_evidence}
    if a_only.marginalize(frozenset(rhs_given)).prob(rhs_given) <= EVIDENCE_FLOOR:
        return False, 0.0, "no positive evidence"
    dev = _table_conditional_diff(both, a_only, b, d_evidence, rhs_given)
    return True, dev, ""


def _suite_rule3(seed, cfg, tol):
    rng = random.Random(seed)
    fd = _instance(rng, cfg)
    sets = _rule_sets(rng, fd)
    if sets is None:
        return False, 0.0, "instance too small"
    a, b, c, d = sets
    if not calculus.check_rule(fd.dag, 3, a, b, c, d):
        return False, 0.0, ""
    a_values = _random_values(rng, fd, a)
    c_values = _random_values(rng, fd, c)
    both = info_distribution(fd, {**a_values, **c_values})
    a_only = info_distribution(fd, a_values)
    d_evidence = _pick_positive(rng, both, d)
    if d_evidence is None or (
            d and a_only.marginalize(frozenset(d)).prob(d_evidence) <= EVIDENCE_FLOOR):
        return False, 0.0, "no positive evidence"
    dev = _table_conditional_diff(both, a_only, b, d_evidence, d_evidence)
    return True, dev, ""


def _suite_simple_rule1(seed, cfg, tol):
    rng = random.Random(seed)
    fd = _instance(rng, cfg)
    sets = _rule_sets(rng, fd, with_d=False)
    if sets is None:
        return False, 0.0, "instance too small"
    a, b, c, _ = sets
    if not calculus.check_rule_simple(fd.dag, 1, a, b, c):
        return False, 0.0, ""
    values = _random_values(rng, fd, a)
    table = info_distribution(fd, values)
    evidence = _pick_positive(rng, table, c)
    if evidence is None:
        return False, 0.0, "no positive evidence"
    dev = _table_conditional_diff(table, table, b, evidence, {})
    return True, dev, ""


def _suite_simple_rule2(seed, cfg, tol):
    rng = random.Random(seed)
    fd = _instance(rng, cfg)
    sets = _rule_sets(rng, fd, with_d=False)
    if sets is None:
        return False, 0.0, "instance too small"
    a, b, c, _ = sets
    if not calculus.check_rule_simple(fd.dag, 2, a, b, c):
        return False, 0.0, ""
    a_values = _random_values(rng, fd, a)
    table = info_distribution(fd, a_values)
    observational = joint_table(fd)
    evidence = _pick_positive(rng, table, c)
    if evidence is None:
        return False, 0.0, "no positive evidence"
    rhs_given = {**a_values, **evidence}
    if observational.marginalize(frozenset(rhs_given)).prob(rhs_given) <= EVIDENCE_FLOOR:
        return False, 0.0, "no positive evidence"
    dev = _table_conditional_diff(table, observational, b, evidence, rhs_given)
    return True, dev, ""


def _suite_simple_rule3(seed, cfg, tol):
    rng = random.Random(seed)
    fd = _instance(rng, cfg)
    sets = _rule_sets(rng, fd, with_d=False)
    if sets is None:
        return False, 0.0, "instance too small"
    a, b, c, _ = sets
    if not calculus.check_rule_simple(fd.dag, 3, a, b, c):
        return False, 0.0, ""
    values = _random_values(rng, fd, a)
    lhs = info_distribution(fd, values).marginalize(b)
    rhs = joint_table(fd).marginalize(b)
    return True, lhs.max_abs_diff(rhs), ""


def _suite_check_equivalence(seed, cfg, tol):
    rng = random.Random(seed)
    dag = _random_dag(rng, replace(cfg, seed=seed))
    pool = sorted(dag.node_set)
    if len(pool) < 3:
        return False, 0.0, "instance too small"
    d_size = rng.randint(0, 1) if len(pool) >= 4 else 0
    a_size = rng.randint(0, 1)
    sets = _disjoint_sets(rng, pool, [a_size, 1, 1, d_size])
    if sets is None:
        return False, 0.0, "instance too small"
    a, b, c, d = sets
    agree = all(lhs == rhs
                for lhs, rhs in (calculus.check_equivalence(dag, w, a, b, c, d)
                                 for w in ("i", "ii", "iii")))
    return True, 0.0 if agree else 1.0, "" if agree else "pair disagrees"


def _suite_generalized_rule1(seed, cfg, tol):
    rng = random.Random(seed)
    fd = _instance(rng, cfg, latent_prob=0.0)
    edges = sorted(fd.dag.edges)
    pool = _observed_pool(fd)
    if not edges or len(pool) < 2:
        return False, 0.0, "instance too small"
    count = rng.randint(1, min(2, len(edges)))
    f_edges = [edges[i] for i in sorted(rng.sample(range(len(edges)), count))]
    fns = [_random_info_function(rng, fd, e, constant=rng.random() < 0.5)
           for e in f_edges]
    d_size = rng.randint(0, 1) if len(pool) >= 3 else 0
    sets = _disjoint_sets(rng, pool, [1, 1, d_size])
    if sets is None:
        return False, 0.0, "instance too small"
    b, c, d = sets
    if not calculus.check_generalized_rule(fd.dag, 1, fns, (), b, c, d):
        return False, 0.0, ""
    table = generalized_info_distribution(fd, fns)
    evidence = _pick_positive(rng, table, c | d)
    if evidence is None:
        return False, 0.0, "no positive evidence"
    d_part = {v: evidence[v] for v in d}
    dev = _table_conditional_diff(table, table, b, evidence, d_part)
    return True, dev, ""


def _suite_generalized_rule3(seed, cfg, tol):
    rng = random.Random(seed)
    fd = _instance(rng, cfg, latent_prob=0.0)
    edges = sorted(fd.dag.edges)
    pool = _observed_pool(fd)
    if len(edges) < 2 or len(pool) < 1:
        return False, 0.0, "instance too small"
    picked = [edges[i] for i in sorted(rng.sample(range(len(edges)), 2))]
    f1 = [_random_info_function(rng, fd, picked[0], constant=rng.random() < 0.5)]
    f2 = [_random_info_function(rng, fd, picked[1], constant=rng.random() < 0.5)]
    d_size = rng.randint(0, 1) if len(pool) >= 2 else 0
    sets = _disjoint_sets(rng, pool, [1, d_size])
    if sets is None:
        return False, 0.0, "instance too small"
    b, d = sets
    if not calculus.check_generalized_rule(fd.dag, 3, f1, f2, b, (), d):
        return False, 0.0, ""
    both = generalized_info_distribution(fd, f1 + f2)
    f1_only = generalized_info_distribution(fd, f1)
    evidence = _pick_positive(rng, both, d)
    if evidence is None or (
            d and f1_only.marginalize(frozenset(d)).prob(evidence) <= EVIDENCE_FLOOR):
        return False, 0.0, "no positive evidence"
    dev = _table_conditional_diff(both, f1_only, b, evidence, evidence)
    return True, dev, ""


def _suite_deletion_lemma_sep(seed, cfg, tol):
    rng = random.Random(seed)
    fd = _instance(rng, cfg)
    pool = _observed_pool(fd)
    if len(pool) < 3:
        return False, 0.0, "instance too small"
    d_size = rng.randint(0, 1) if len(pool) >= 4 else 0
    sets = _disjoint_sets(rng, pool, [1, 1, 1, d_size])
    if sets is None:
        return False, 0.0, "instance too small"
    b, c1, c2, d = sets
    if not d_separated(remove_outgoing(fd.dag, c2), b, c1, d):
        return False, 0.0, ""
    v1 = _random_values(rng, fd, c1)
    v2 = _random_values(rng, fd, c2)
    both = info_distribution(fd, {**v1, **v2})
    c2_only = info_distribution(fd, v2)
    evidence = _pick_positive(rng, both, d)
    if evidence is None or (
            d and c2_only.marginalize(frozenset(d)).prob(evidence) <= EVIDENCE_FLOOR):
        return False, 0.0, "no positive evidence"
    dev = _table_conditional_diff(both, c2_only, b, evidence, evidence)
    return True, dev, ""


def _suite_deletion_lemma_nopath(seed, cfg, tol):
    rng = random.Random(seed)
    fd = _instance(rng, cfg)
    pool = _observed_pool(fd)
    if len(pool) < 2:
        return False, 0.0, "instance too small"
    d_size = rng.randint(0, 1) if len(pool) >= 3 else 0
    sets = _disjoint_sets(rng, pool, [1, 1, d_size])
    if sets is None:
        return False, 0.0, "instance too small"
    b, c2, d = sets
    if relatives(fd.dag, c2, "descendants") & (b | d):
        return False, 0.0, ""
    v2 = _random_values(rng, fd, c2)
    intervened = info_distribution(fd, v2)
    observational = joint_table(fd)
    evidence = _pick_positive(rng, intervened, d)
    if evidence is None or (
            d and observational.marginalize(frozenset(d)).prob(evidence) <= EVIDENCE_FLOOR):
        return False, 0.0, "no positive evidence"
    dev = _table_conditional_diff(intervened, observational, b, evidence, evidence)
    return True, dev, ""


def _suite_dsep_oracle(seed, cfg, tol):
    rng = random.Random(seed)
    dag = _random_dag(rng, replace(cfg, seed=seed))
    pool = sorted(dag.node_set)
    if len(pool) < 2:
        return False, 0.0, "instance too small"
    mismatches = 0
    checks = 0
    for _ in range(40):
        b_size = rng.randint(1, min(2, len(pool) - 1))
        c_size = rng.randint(1, min(2, len(pool) - b_size))
        d_size = rng.randint(0, max(0, len(pool) - b_size - c_size))
        sets = _disjoint_sets(rng, pool, [b_size, c_size, d_size])
        if sets is None:
            continue
        b, c, d = sets
        checks += 1
        if d_separated(dag, b, c, d) != d_separated_by_paths(dag, b, c, d):
            mismatches += 1
    if checks == 0:
        return False, 0.0, "no checks"
    return True, float(mismatches), "" if mismatches == 0 else "disagreement"


def _suite_scm_commutativity(seed, cfg, tol):
    rng = random.Random(seed)
    scm = random_scm(replace(cfg, seed=seed, n_nodes=min(cfg.n_nodes, 4)))
    endo = list(scm.endogenous)
    if len(endo) < 2:
        return False, 0.0, "instance too small"
    i_set, j_set = _disjoint_sets(rng, endo, [1, 1])
    vi = {v: scm.domains[v][rng.randrange(len(scm.domains[v]))] for v in i_set}
    vj = {v: scm.domains[v][rng.randrange(len(scm.domains[v]))] for v in j_set}
    endo_edges = sorted(scm.endo_dag.edges)
    fns = []
    if len(endo_edges) >= 2:
        picked = [endo_edges[i] for i in sorted(rng.sample(range(len(endo_edges)), 2))]
        fd_like = induced_distribution(scm)
        fns = [_random_info_function(rng, fd_like, e, constant=rng.random() < 0.5)
               for e in picked]
    outside = frozenset(endo) - relatives(scm.endo_dag, i_set | j_set, "descendants")
    dev = 0.0
    for u, p in scm.exo_assignments():
        if p == 0.0:
            continue
        one = info_evaluate(scm, u, {**vi, **vj})
        two = info_evaluate(scm, u, {**vj, **vi})
        if one != two:
            dev = 1.0
        plain = evaluate(scm, u)
        if any(one[v] != plain[v] for v in outside):
            dev = 1.0
        if fns:
            left = generalized_info_evaluate(scm, u, [fns[0], fns[1]])
            right = generalized_info_evaluate(scm, u, [fns[1], fns[0]])
            if left != right:
                dev = 1.0
    return True, dev, "" if dev == 0.0 else "order dependence"


def _suite_scm_pushforward(seed, cfg, tol):
    rng = random.Random(seed)
    scm = random_scm(replace(cfg, seed=seed, n_nodes=min(cfg.n_nodes, 4)))
    fd = induced_distribution(scm)
    dev = joint_table(fd).max_abs_diff(pushforward_distribution(scm))
    endo = list(scm.endogenous)
    i_set = frozenset(rng.sample(endo, rng.randint(1, len(endo))))
    values = {v: scm.domains[v][rng.randrange(len(scm.domains[v]))] for v in i_set}
    lhs = info_distribution(fd, values)
    rhs = pushforward_distribution(scm, Info(values))
    dev = max(dev, lhs.max_abs_diff(rhs))
    return True, dev, ""


def _suite_counterfactual_consistency(seed, cfg, tol):
    rng = random.Random(seed)
    scm = random_scm(replace(cfg, seed=seed, n_nodes=min(cfg.n_nodes, 4)))
    endo = list(scm.endogenous)
    choices = [(u, p) for u, p in scm.exo_assignments() if p > 0.0]
    u_star, _ = choices[rng.randrange(len(choices))]
    evidence = evaluate(scm, u_star)
    i_set = frozenset(rng.sample(endo, rng.randint(1, len(endo))))
    factual = {v: evidence[v] for v in i_set}
    target = frozenset(rng.sample(endo, rng.randint(1, len(endo))))
    table = counterfactual_query(scm, evidence, Info(factual), target)
    dev = 0.0
    for key, p in table.items():
        expected = 1.0 if key == tuple(evidence[v] for v in table.nodes) else 0.0
        dev = max(dev, abs(p - expected))
    return True, dev, ""


SUITES: Dict[str, Callable] = {
    "do_info_equivalence": _suite_do_info_equivalence,
    "consistency": _suite_consistency,
    "backdoor": _suite_backdoor,
    "frontdoor": _suite_frontdoor,
    "frontdoor_generalized": _suite_frontdoor_generalized,
    "rule1": _suite_rule1,
    "rule2": _suite_rule2,
    "rule3": _suite_rule3,
    "simple_rule1": _suite_simple_rule1,
    "simple_rule2": _suite_simple_rule2,
    "simple_rule3": _suite_simple_rule3,
    "check_equivalence": _suite_check_equivalence,
    "generalized_rule1": _suite_generalized_rule1,
    "generalized_rule3": _suite_generalized_rule3,
    "deletion_lemma_sep": _suite_deletion_lemma_sep,
    "deletion_lemma_nopath": _suite_deletion_lemma_nopath,
    "dsep_oracle": _suite_dsep_oracle,
    "scm_commutativity": _suite_scm_commutativity,
    "scm_pushforward": _suite_scm_pushforward,
    "counterfactual_consistency": _suite_counterfactual_consistency,
}
