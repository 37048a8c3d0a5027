"""Game models driven by the grand coalition's outcome table.

A model stores only ``out_ag``: the outcome sets of grand-coalition action
profiles at each state (absent entries mean the empty set).  Availability
and outcomes for every coalition are derived, never stored:

* the available profiles at a state are those with a nonempty outcome,
* a coalition's available joint actions are the restrictions of the
  available profiles,
* a coalition's outcomes are the union over all extending profiles.

Any model built this way is a general concurrent game model (GCGM) by
construction.  ``classify`` reports the three extra properties that single
out concurrent game models (CGMs): seriality, independence of agents, and
determinism.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from typing import Callable, Iterable, Mapping, Sequence

from .formula import AgentUniverse, Coalition


class ModelError(ValueError):
    """Malformed model data (construction or file loading)."""


@dataclass(frozen=True)
class JointAction:
    """A partial assignment of actions to agents, keyed by agent name.

    ``items`` is sorted by agent name, so structurally equal assignments
    compare and hash equal.  The empty coalition has exactly one joint
    action: the empty assignment.
    """

    items: tuple[tuple[str, str], ...]

    @classmethod
    def of(cls, mapping: Mapping[str, str]) -> JointAction:
        return cls(tuple(sorted(mapping.items())))

    @property
    def domain(self) -> frozenset[str]:
        return frozenset(a for a, _ in self.items)

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self.items)

    def get(self, agent: str) -> str:
        for a, x in self.items:
            if a == agent:
                return x
        raise KeyError(agent)

    def restrict(self, members: frozenset[str] | Coalition) -> JointAction:
        if isinstance(members, Coalition):
            members = members.members
        return JointAction(tuple((a, x) for a, x in self.items if a in members))

    def union(self, other: JointAction) -> JointAction:
        if self.domain & other.domain:
            raise ValueError("joint actions overlap on "
                             f"{sorted(self.domain & other.domain)}")
        return JointAction(tuple(sorted(self.items + other.items)))

    def extends(self, other: JointAction) -> bool:
        return set(other.items) <= set(self.items)

    def render(self, universe: AgentUniverse) -> str:
        """``(w,n)`` for full profiles, ``(a:w)`` for proper partial ones."""
        if self.domain == frozenset(universe.agents):
            return "(" + ",".join(self.mapping[a] for a in universe.agents) + ")"
        ordered = [a for a in universe.agents if a in self.domain]
        return "(" + ",".join(f"{a}:{self.mapping[a]}" for a in ordered) + ")"


EMPTY_ACTION = JointAction(())


def oplus(family: Sequence[tuple[Coalition, Iterable[JointAction]]]) -> set[JointAction]:
    """All unions of one pick per member set, for pairwise disjoint coalitions.

    The empty family yields the singleton {empty assignment}; a family
    containing an empty pick set yields the empty set (no choice function).
    """
    claimed: set[str] = set()
    for coalition, _ in family:
        if claimed & coalition.members:
            raise ValueError("coalitions overlap on "
                             f"{sorted(claimed & coalition.members)}")
        claimed |= coalition.members
    pick_sets = [list(choices) for _, choices in family]
    out: set[JointAction] = set()
    for picks in itertools.product(*pick_sets):
        joint = EMPTY_ACTION
        for p in picks:
            joint = joint.union(p)
        out.add(joint)
    return out


@dataclass(frozen=True, eq=True)
class GameModel:
    """An explicit game arena over a fixed agent universe.

    ``out_ag`` maps (state, full action profile) to the nonempty set of
    outcome states; pairs not present have no outcome and the profile is
    unavailable there.  Instances are immutable; derived availability data
    is cached lazily.
    """

    universe: AgentUniverse
    atoms: tuple[str, ...]
    actions: tuple[str, ...]
    states: tuple[str, ...]
    label: dict[str, frozenset[str]]
    out_ag: dict[tuple[str, JointAction], frozenset[str]]

    def __post_init__(self):
        if not self.states:
            raise ModelError("model must have at least one state")
        if not self.actions:
            raise ModelError("model must have at least one action")
        for seq, what in ((self.states, "state"), (self.actions, "action"),
                          (self.atoms, "atom")):
            if len(set(seq)) != len(seq):
                raise ModelError(f"duplicate {what} names")
        state_set = set(self.states)
        atom_set = set(self.atoms)
        action_set = set(self.actions)
        agent_set = frozenset(self.universe.agents)
        for s in self.states:
            marks = self.label.get(s, frozenset())
            if not marks <= atom_set:
                raise ModelError(f"undeclared atoms {sorted(marks - atom_set)} "
                                 f"labelling state {s!r}")
        unknown_labels = set(self.label) - state_set
        if unknown_labels:
            raise ModelError(f"labels for unknown states {sorted(unknown_labels)}")
        cleaned = {}
        for (s, profile), targets in self.out_ag.items():
            if s not in state_set:
                raise ModelError(f"transition from unknown state {s!r}")
            if profile.domain != agent_set:
                raise ModelError(f"profile {profile.items} does not cover the "
                                 "grand coalition")
            bad_actions = {x for _, x in profile.items} - action_set
            if bad_actions:
                raise ModelError(f"undeclared actions {sorted(bad_actions)}")
            if not targets <= state_set:
                raise ModelError(f"unknown outcome states {sorted(targets - state_set)}")
            if targets:
                cleaned[(s, profile)] = frozenset(targets)
        object.__setattr__(self, "out_ag", cleaned)

    # -- derived structure ---------------------------------------------------

    @cached_property
    def _rows_by_state(self) -> dict[str, tuple[tuple[JointAction, frozenset[str]], ...]]:
        rows: dict[str, list[tuple[JointAction, frozenset[str]]]] = {s: [] for s in self.states}
        for (s, profile), targets in self.out_ag.items():
            rows[s].append((profile, targets))
        return {s: tuple(pairs) for s, pairs in rows.items()}

    def _check_state(self, state: str) -> None:
        if state not in self._rows_by_state:
            raise ModelError(f"unknown state {state!r}")

    def available_profiles(self, state: str) -> frozenset[JointAction]:
        """Grand-coalition profiles with a nonempty outcome at ``state``."""
        self._check_state(state)
        return frozenset(p for p, _ in self._rows_by_state[state])

    def outcome(self, state: str, profile: JointAction) -> frozenset[str]:
        """Stored outcome set of a full profile (empty if unavailable)."""
        self._check_state(state)
        return self.out_ag.get((state, profile), frozenset())

    def av(self, coalition: Coalition, state: str) -> frozenset[JointAction]:
        """Available joint actions of ``coalition``: projections of the
        available profiles."""
        self._check_coalition(coalition)
        return frozenset(p.restrict(coalition)
                         for p in self.available_profiles(state))

    def out(self, coalition: Coalition, state: str, action: JointAction) -> frozenset[str]:
        """Union of the outcomes of every profile extending ``action``."""
        self._check_coalition(coalition)
        if action.domain != coalition.members:
            raise ValueError(f"action domain {sorted(action.domain)} differs from "
                             f"coalition {sorted(coalition.members)}")
        bad = {x for _, x in action.items} - set(self.actions)
        if bad:
            raise ModelError(f"undeclared actions {sorted(bad)}")
        self._check_state(state)
        acc: frozenset[str] = frozenset()
        for profile, targets in self._rows_by_state[state]:
            if profile.extends(action):
                acc |= targets
        return acc

    def successors(self, state: str) -> frozenset[str]:
        return self.out(self.universe.empty, state, EMPTY_ACTION)

    def _check_coalition(self, coalition: Coalition) -> None:
        if coalition.universe != self.universe:
            raise ValueError("coalition universe differs from the model's")

    def profiles(self) -> tuple[JointAction, ...]:
        """All grand-coalition profiles, in binary-counter order: agents in
        canonical order, actions in declaration order."""
        agents = self.universe.agents
        return tuple(JointAction.of(dict(zip(agents, combo)))
                     for combo in itertools.product(self.actions, repeat=len(agents)))

    def with_atoms(self, extra: Iterable[str]) -> GameModel:
        """The same model with additional declared atoms (labels unchanged)."""
        merged = list(self.atoms) + [a for a in extra if a not in self.atoms]
        if merged == list(self.atoms):
            return self
        return GameModel(self.universe, tuple(merged), self.actions, self.states,
                         dict(self.label), dict(self.out_ag))


# -- classification ------------------------------------------------------------

@dataclass(frozen=True)
class ModelClassification:
    """GCGM property report; witnesses name the first violation in canonical
    order (states by declaration, profiles by binary counter)."""

    serial: bool
    independent: bool
    deterministic: bool
    serial_witness: str | None
    independence_witness: tuple[str, JointAction] | None
    determinism_witness: tuple[str, JointAction] | None
    universe: AgentUniverse

    is_gcgm: bool = True

    @property
    def is_cgm(self) -> bool:
        return self.serial and self.independent and self.deterministic

    @property
    def witnesses(self) -> list[str]:
        out = []
        if not self.serial:
            out.append(f"not serial: {self.serial_witness}")
        if not self.independent:
            s, p = self.independence_witness
            out.append(f"not independent: {s}, {p.render(self.universe)}")
        if not self.deterministic:
            s, p = self.determinism_witness
            out.append(f"not deterministic: {s}, {p.render(self.universe)}")
        return out


def classify(model: GameModel) -> ModelClassification:
    """Test seriality, independence of agents, and determinism.

    * serial: every state has an available profile;
    * independent: at every state the available profiles form the full
      product of the agents' individually available actions;
    * deterministic: every available profile has exactly one outcome.
    """
    universe = model.universe
    agents = universe.agents

    serial_witness = None
    for s in model.states:
        if not model.available_profiles(s):
            serial_witness = s
            break

    independence_witness = None
    for s in model.states:
        avail = model.available_profiles(s)
        per_agent: list[list[str]] = []
        for a in agents:
            acts = [x for x in model.actions
                    if any(p.get(a) == x for p in avail)]
            per_agent.append(acts)
        for combo in itertools.product(*per_agent):
            candidate = JointAction.of(dict(zip(agents, combo)))
            if candidate not in avail:
                independence_witness = (s, candidate)
                break
        if independence_witness:
            break

    determinism_witness = None
    for s in model.states:
        avail = model.available_profiles(s)
        for profile in model.profiles():
            if profile in avail and len(model.outcome(s, profile)) != 1:
                determinism_witness = (s, profile)
                break
        if determinism_witness:
            break

    return ModelClassification(
        serial=serial_witness is None,
        independent=independence_witness is None,
        deterministic=determinism_witness is None,
        serial_witness=serial_witness,
        independence_witness=independence_witness,
        determinism_witness=determinism_witness,
        universe=universe,
    )


# -- combination and generation -------------------------------------------------

def rename_disjoint(models: Sequence[GameModel],
                    prefix: Callable[[int], str] | None = None) -> list[GameModel]:
    """Isomorphic copies with states and actions prefixed (``g0.`` by default,
    then ``g1.`` and so on) so that all state sets and all action sets are
    pairwise disjoint."""
    if prefix is None:
        prefix = lambda i: f"g{i}."
    out = []
    for i, m in enumerate(models):
        p = prefix(i)
        out.append(GameModel(
            universe=m.universe,
            atoms=m.atoms,
            actions=tuple(p + x for x in m.actions),
            states=tuple(p + s for s in m.states),
            label={p + s: marks for s, marks in m.label.items()},
            out_ag={(p + s,
                     JointAction(tuple((a, p + x) for a, x in profile.items))):
                    frozenset(p + t for t in targets)
                    for (s, profile), targets in m.out_ag.items()},
        ))
    return out


def random_model(universe: AgentUniverse, n_states: int, n_actions: int,
                 density: float, seed: int,
                 atoms: Sequence[str] = ("p", "q")) -> GameModel:
    """Seeded random GCGM: every (state, profile, target) edge is kept
    independently with probability ``density``; each (state, atom) label is a
    fair coin.  Identical seeds give identical models."""
    if n_states < 1 or n_actions < 1:
        raise ValueError("need at least one state and one action")
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must be within [0, 1]")
    rng = random.Random(seed)
    states = tuple(f"s{i}" for i in range(n_states))
    actions = tuple(f"x{i}" for i in range(n_actions))
    label = {s: frozenset(a for a in atoms if rng.random() < 0.5) for s in states}
    agents = universe.agents
    out_ag = {}
    for s in states:
        for combo in itertools.product(actions, repeat=len(agents)):
            profile = JointAction.of(dict(zip(agents, combo)))
            targets = frozenset(t for t in states if rng.random() < density)
            if targets:
                out_ag[(s, profile)] = targets
    return GameModel(universe, tuple(atoms), actions, states, label, out_ag)


def random_cgm(universe: AgentUniverse, n_states: int, n_actions: int,
               seed: int, atoms: Sequence[str] = ("p", "q")) -> GameModel:
    """Seeded random CGM: per state, each agent gets a nonempty action set,
    the available profiles are their full product, and every available
    profile gets exactly one outcome state."""
    if n_states < 1 or n_actions < 1:
        raise ValueError("need at least one state and one action")
    rng = random.Random(seed)
    states = tuple(f"s{i}" for i in range(n_states))
    actions = tuple(f"x{i}" for i in range(n_actions))
    label = {s: frozenset(a for a in atoms if rng.random() < 0.5) for s in states}
    agents = universe.agents
    out_ag = {}
    for s in states:
        per_agent = []
        for _ in agents:
            size = rng.randint(1, n_actions)
            per_agent.append(rng.sample(actions, size))
        for combo in itertools.product(*per_agent):
            profile = JointAction.of(dict(zip(agents, combo)))
            out_ag[(s, profile)] = frozenset((rng.choice(states),))
    return GameModel(universe, tuple(atoms), actions, states, label, out_ag)


# -- serialization ---------------------------------------------------------------

def to_json_dict(model: GameModel) -> dict:
    """Plain-data form of a model; deterministic given the model."""
    transitions = []
    for s in model.states:
        stored = {p: ts for (s2, p), ts in model.out_ag.items() if s2 == s}
        for profile in model.profiles():
            if profile in stored:
                targets = stored[profile]
                transitions.append({
                    "from": s,
                    "profile": profile.mapping,
                    "to": [t for t in model.states if t in targets],
                })
    return {
        "agents": list(model.universe.agents),
        "atoms": list(model.atoms),
        "actions": list(model.actions),
        "states": [{"name": s,
                    "label": [a for a in model.atoms
                              if a in model.label.get(s, frozenset())]}
                   for s in model.states],
        "transitions": transitions,
    }


def from_json_dict(data: dict) -> GameModel:
    try:
        universe = AgentUniverse(tuple(data["agents"]))
        atoms = tuple(data["atoms"])
        actions = tuple(data["actions"])
        states = tuple(entry["name"] for entry in data["states"])
        label = {entry["name"]: frozenset(entry.get("label", []))
                 for entry in data["states"]}
        out_ag: dict[tuple[str, JointAction], frozenset[str]] = {}
        for tr in data.get("transitions", []):
            profile = JointAction.of(dict(tr["profile"]))
            key = (tr["from"], profile)
            if key in out_ag:
                raise ModelError(f"duplicate transition entry for {tr['from']!r}, "
                                 f"{profile.render(universe)}")
            out_ag[key] = frozenset(tr["to"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ModelError):
            raise
        raise ModelError(f"malformed model document: {exc}") from exc
    return GameModel(universe, atoms, actions, states, label, out_ag)


def dumps(model: GameModel) -> str:
    return json.dumps(to_json_dict(model), indent=2, sort_keys=True)


def loads(text: str) -> GameModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"not valid JSON: {exc}") from exc
    return from_json_dict(data)


def save(model: GameModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(model) + "\n")


def load(path: str) -> GameModel:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def load_fixture(name: str) -> GameModel:
    """Load a bundled example model (``two_masks`` or ``one_mask``)."""
    ref = resources.files("mcl") / "fixtures" / f"{name}.json"
    try:
        text = ref.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ModelError(f"no bundled model named {name!r}") from None
    return loads(text)
