"""Validity and satisfiability over general concurrent game models, with
certified countermodels.

A formula of modal depth 0 is valid exactly when it is a propositional
tautology (any labelling is realized by some one-state model).  Deeper
formulas are normalized; a standard clause is valid exactly when

  (a) its gamma part is a tautology, or
  (b) some negative entry <A_i>phi_i and positive entry <B_j>psi_j with
      A_i a subset of B_j make (phi_NI0 & phi_i) -> psi_j valid,

where phi_NI0 conjoins the goals of the empty-coalition negative entries.
The recursion strictly lowers modal depth, so it terminates.

When a clause fails both cases, a refuting pointed model is assembled by
grafting: one fresh hub state plays a one-round game whose outcomes are the
entry states of disjointly renamed sub-models, one per pair (i, j) with
A_i a subset of B_j, each satisfying phi_NI0 & phi_i & ~psi_j.  At the hub,
profile sigma^i has all agents play the action alpha_i and leads to the
sub-models for row i; for every pair with A_i not a subset of B_j, a spoiler
profile lambda^(i,j) differs from sigma^i only in that a witness agent from
A_i - B_j plays beta_(i,j) instead, and it leads everywhere.  Every verdict
that reports "invalid" carries a countermodel on which the model checker
confirms falsity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import (AgentUniverse, And, Atom, Can, Formula, Neg,
                      atoms_of, canonical_key, coalitions_of, conj, implies,
                      modal_depth)
from .model import GameModel, JointAction, rename_disjoint
from .normalform import (StandardFormula, gamma_is_tautology, ni0,
                         to_standard_conjunction)
from .semantics import PointedModel, holds


@dataclass(frozen=True)
class ClauseOutcome:
    """How one standard clause was settled.

    ``case`` is "gamma" (tautological gamma), "pair" (some (i, j) reduction
    succeeded), "refuted" (every pair failed; ``failed_pairs`` lists them),
    or "propositional" (depth-0 input, no clause).
    """

    clause: StandardFormula | None
    case: str
    pair: tuple[int, int] | None = None
    failed_pairs: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class Verdict:
    valid: bool
    countermodel: PointedModel | None
    trace: tuple[ClauseOutcome, ...]


@dataclass(frozen=True)
class SatVerdict:
    satisfiable: bool
    witness: PointedModel | None
    trace: tuple[ClauseOutcome, ...]


@dataclass(frozen=True)
class GameForm:
    """The one-round game grafted at the hub state."""

    hub: str
    targets: tuple[str, ...]
    actions: tuple[str, ...]
    av0: tuple[JointAction, ...]
    out0: dict[JointAction, frozenset[str]]


class CertificationError(RuntimeError):
    """A produced countermodel failed its own model-checking certificate."""


def decide_valid(f: Formula, universe: AgentUniverse) -> Verdict:
    """Decide whether ``f`` holds at every pointed GCGM over ``universe``.

    Invalid verdicts carry a pointed countermodel, re-checked here with the
    model checker before being returned.
    """
    _check_universe(f, universe)
    return _decide(f, universe, {})


def decide_sat(f: Formula, universe: AgentUniverse) -> SatVerdict:
    """Satisfiability via validity of the negation; the witness (when
    satisfiable) is the countermodel of ``~f``."""
    _check_universe(f, universe)
    verdict = _decide(Neg(f), universe, {})
    witness = verdict.countermodel
    if not verdict.valid:
        if not holds(witness, f):
            raise CertificationError("witness does not satisfy the formula")
    return SatVerdict(not verdict.valid, witness, verdict.trace)


def _check_universe(f: Formula, universe: AgentUniverse) -> None:
    for coalition in coalitions_of(f):
        if coalition.universe != universe:
            raise ValueError("formula mentions a different agent universe")


def _decide(f: Formula, universe: AgentUniverse,
            memo: dict[str, Verdict]) -> Verdict:
    key = canonical_key(f)
    hit = memo.get(key)
    if hit is not None:
        return hit

    if modal_depth(f) == 0:
        verdict = _decide_propositional(f, universe)
    else:
        verdict = _decide_modal(f, universe, memo)

    if not verdict.valid:
        pm = verdict.countermodel
        model = pm.model.with_atoms(sorted(atoms_of(f)))
        pm = PointedModel(model, pm.state)
        if holds(pm, f):
            raise CertificationError("countermodel does not refute the formula")
        verdict = Verdict(False, pm, verdict.trace)

    memo[key] = verdict
    return verdict


# -- propositional base case ----------------------------------------------------

def _eval_prop(f: Formula, assignment: dict[str, bool]) -> bool:
    if isinstance(f, Atom):
        return assignment[f.name]
    if isinstance(f, Neg):
        return not _eval_prop(f.child, assignment)
    if isinstance(f, And):
        return _eval_prop(f.left, assignment) and _eval_prop(f.right, assignment)
    return True  # Top


def _decide_propositional(f: Formula, universe: AgentUniverse) -> Verdict:
    names = sorted(atoms_of(f))
    trace = (ClauseOutcome(None, "propositional"),)
    for mask in range(1 << len(names)):
        assignment = {name: bool(mask >> k & 1) for k, name in enumerate(names)}
        if not _eval_prop(f, assignment):
            pm = _assignment_model(assignment, universe)
            return Verdict(False, pm, trace)
    return Verdict(True, None, trace)


def _assignment_model(assignment: dict[str, bool],
                      universe: AgentUniverse) -> PointedModel:
    """A single dead-end state realizing the assignment (no coalition has an
    available joint action there)."""
    model = GameModel(
        universe=universe,
        atoms=tuple(sorted(assignment)),
        actions=("idle",),
        states=("s0",),
        label={"s0": frozenset(n for n, v in assignment.items() if v)},
        out_ag={},
    )
    return PointedModel(model, "s0")


# -- modal case -------------------------------------------------------------------

def pair_implication(sf: StandardFormula, i: int, j: int) -> Formula:
    """(phi_NI0 & phi_i) -> psi_j, the reduction goal for a pair."""
    return implies(And(ni0(sf).phi, sf.ni[i][1]), sf.pi[j][1])


def _decide_modal(f: Formula, universe: AgentUniverse,
                  memo: dict[str, Verdict]) -> Verdict:
    trace: list[ClauseOutcome] = []
    for sf in to_standard_conjunction(f, universe):
        outcome = _decide_clause(sf, universe, memo)
        trace.append(outcome)
        if outcome.case == "refuted":
            pm, _ = _graft_countermodel(sf, universe, memo)
            return Verdict(False, pm, tuple(trace))
    return Verdict(True, None, tuple(trace))


def _decide_clause(sf: StandardFormula, universe: AgentUniverse,
                   memo: dict[str, Verdict]) -> ClauseOutcome:
    if gamma_is_tautology(sf.gamma):
        return ClauseOutcome(sf, "gamma")
    failed: list[tuple[int, int]] = []
    for i, (coal_a, _) in enumerate(sf.ni):
        for j, (coal_b, _) in enumerate(sf.pi):
            if not coal_a.issubset(coal_b):
                continue
            if _decide(pair_implication(sf, i, j), universe, memo).valid:
                return ClauseOutcome(sf, "pair", pair=(i, j))
            failed.append((i, j))
    return ClauseOutcome(sf, "refuted", failed_pairs=tuple(failed))


# -- countermodel construction ------------------------------------------------------

def build_countermodel(sf: StandardFormula, universe: AgentUniverse) -> PointedModel:
    """A pointed GCGM falsifying the clause ``sf``.

    Precondition: gamma is not a tautology and every pair reduction fails;
    raises ValueError otherwise.
    """
    memo: dict[str, Verdict] = {}
    outcome = _decide_clause(sf, universe, memo)
    if outcome.case != "refuted":
        raise ValueError("clause is valid; no countermodel exists")
    pm, _ = _graft_countermodel(sf, universe, memo)
    return pm


def build_countermodel_detailed(sf: StandardFormula,
                                universe: AgentUniverse) -> tuple[PointedModel, GameForm | None]:
    """As ``build_countermodel``, also returning the hub game form (None for
    the dead-end case with an empty negative side)."""
    memo: dict[str, Verdict] = {}
    outcome = _decide_clause(sf, universe, memo)
    if outcome.case != "refuted":
        raise ValueError("clause is valid; no countermodel exists")
    return _graft_countermodel(sf, universe, memo)


def _falsifying_label(sf: StandardFormula) -> frozenset[str]:
    """Atoms made true by the elementary conjunction equivalent to ~gamma
    (atoms outside gamma default to false)."""
    return frozenset(lit.child.name for lit in sf.gamma if isinstance(lit, Neg))


def _clause_atoms(sf: StandardFormula) -> tuple[str, ...]:
    return tuple(sorted(atoms_of(sf.to_formula())))


def _graft_countermodel(sf: StandardFormula, universe: AgentUniverse,
                        memo: dict[str, Verdict]) -> tuple[PointedModel, GameForm | None]:
    hub_label = _falsifying_label(sf)

    if not sf.ni:
        model = GameModel(
            universe=universe,
            atoms=_clause_atoms(sf),
            actions=("idle",),
            states=("s0",),
            label={"s0": hub_label},
            out_ag={},
        )
        pm = PointedModel(model, "s0")
        _certify_clause(pm, sf)
        return pm, None

    pairs_in = [(i, j)
                for i in range(len(sf.ni)) for j in range(len(sf.pi))
                if sf.ni[i][0].issubset(sf.pi[j][0])]
    pairs_out = [(i, j)
                 for i in range(len(sf.ni)) for j in range(len(sf.pi))
                 if not sf.ni[i][0].issubset(sf.pi[j][0])]

    submodels = []
    entry_states = []
    for i, j in pairs_in:
        verdict = _decide(pair_implication(sf, i, j), universe, memo)
        if verdict.valid:
            raise ValueError(f"pair ({i}, {j}) reduction is valid; "
                             "clause has no countermodel")
        submodels.append(verdict.countermodel.model)
        entry_states.append(verdict.countermodel.state)

    renamed = rename_disjoint(submodels)
    targets = tuple(f"g{k}." + entry_states[k] for k in range(len(pairs_in)))
    target_of_pair = dict(zip(pairs_in, targets))
    all_targets = frozenset(targets)

    alpha = {i: f"alpha{i}" for i in range(len(sf.ni))}
    beta = {(i, j): f"beta{i}_{j}" for i, j in pairs_out}
    hub_actions = tuple(alpha[i] for i in sorted(alpha)) + \
        tuple(beta[p] for p in pairs_out)

    agents = universe.agents
    hub_rows: dict[JointAction, frozenset[str]] = {}
    for i in range(len(sf.ni)):
        profile = JointAction.of({a: alpha[i] for a in agents})
        hub_rows[profile] = frozenset(target_of_pair[(i2, j)]
                                      for (i2, j) in pairs_in if i2 == i)
    for i, j in pairs_out:
        coal_a, coal_b = sf.ni[i][0], sf.pi[j][0]
        witness_agent = next(a for a in agents
                             if a in coal_a.members and a not in coal_b.members)
        assignment = {a: alpha[i] for a in agents}
        assignment[witness_agent] = beta[(i, j)]
        hub_rows[JointAction.of(assignment)] = all_targets

    game_form = GameForm(
        hub="s0",
        targets=targets,
        actions=hub_actions,
        av0=tuple(hub_rows),
        out0=dict(hub_rows),
    )

    atoms: list[str] = list(_clause_atoms(sf))
    actions: list[str] = list(hub_actions)
    states: list[str] = ["s0"]
    label: dict[str, frozenset[str]] = {"s0": hub_label}
    out_ag: dict[tuple[str, JointAction], frozenset[str]] = {
        ("s0", profile): ts for profile, ts in hub_rows.items()}
    for m in renamed:
        atoms.extend(a for a in m.atoms if a not in atoms)
        actions.extend(m.actions)
        states.extend(m.states)
        label.update(m.label)
        out_ag.update(m.out_ag)

    model = GameModel(universe, tuple(atoms), tuple(actions), tuple(states),
                      label, out_ag)
    pm = PointedModel(model, "s0")
    _certify_clause(pm, sf)
    return pm, game_form


def _certify_clause(pm: PointedModel, sf: StandardFormula) -> None:
    if holds(pm, sf.to_formula()):
        raise CertificationError("grafted model does not refute the clause")


def hub_facts(sf: StandardFormula) -> Formula:
    """The conjunction that must hold at the hub of a grafted countermodel:
    ~gamma, every <A_i>phi_i, and the negation of every <B_j>psi_j."""
    parts: list[Formula] = [Neg(sf.gamma_formula())]
    parts.extend(Can(c, g) for c, g in sf.ni)
    parts.extend(Neg(Can(c, g)) for c, g in sf.pi)
    return conj(parts)
