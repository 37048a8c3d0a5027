"""Model checking for the coalition-ability language.

Truth is compositional: ``<A>phi`` holds at a state when some available
joint action of ``A`` there has all its outcome states satisfying ``phi``.
``eval_all`` fills one truth column per subformula bottom-up, so every
(subformula, state) pair is evaluated once; ``holds`` and ``ensures`` are
thin wrappers over it.  All functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import (And, Atom, Can, Coalition, Formula, Neg, Top, atoms_of,
                      coalitions_of, subformulas)
from .model import GameModel, JointAction


@dataclass(frozen=True)
class PointedModel:
    """A model with a designated state."""

    model: GameModel
    state: str

    def __post_init__(self):
        if self.state not in self.model.states:
            raise ValueError(f"state {self.state!r} not in the model")


def check_compatible(model: GameModel, f: Formula) -> None:
    """Reject formulas with undeclared atoms or a different agent universe."""
    missing = atoms_of(f) - set(model.atoms)
    if missing:
        raise ValueError(f"atoms {sorted(missing)} are not declared in the model")
    for coalition in coalitions_of(f):
        if coalition.universe != model.universe:
            raise ValueError("formula coalition universe differs from the model's")


def eval_all(model: GameModel, f: Formula) -> dict[str, bool]:
    """Truth value of ``f`` at every state of ``model``."""
    check_compatible(model, f)
    table: dict[Formula, dict[str, bool]] = {}
    for g in subformulas(f):
        if isinstance(g, Top):
            col = {s: True for s in model.states}
        elif isinstance(g, Atom):
            col = {s: g.name in model.label.get(s, frozenset())
                   for s in model.states}
        elif isinstance(g, Neg):
            child = table[g.child]
            col = {s: not child[s] for s in model.states}
        elif isinstance(g, And):
            left, right = table[g.left], table[g.right]
            col = {s: left[s] and right[s] for s in model.states}
        elif isinstance(g, Can):
            col = _can_column(model, g.coalition, table[g.child])
        else:
            raise TypeError(f"not a core formula: {g!r}")
        table[g] = col
    return dict(table[f])


def _can_column(model: GameModel, coalition: Coalition,
                child: dict[str, bool]) -> dict[str, bool]:
    members = coalition.members
    col = {}
    for s in model.states:
        # ensured[sigma_A] stays true while every outcome of every extending
        # profile satisfies the child formula
        ensured: dict[JointAction, bool] = {}
        for profile in model.available_profiles(s):
            restricted = profile.restrict(members)
            ok = ensured.get(restricted, True)
            if ok:
                ok = all(child[t] for t in model.outcome(s, profile))
            ensured[restricted] = ok
        col[s] = any(ensured.values())
    return col


def holds(pm: PointedModel, f: Formula) -> bool:
    """Truth of ``f`` at the designated state."""
    return eval_all(pm.model, f)[pm.state]


def ensures(pm: PointedModel, coalition: Coalition, action: JointAction,
            f: Formula) -> bool:
    """True when every outcome state of ``action`` at the point satisfies
    ``f``.  The action must be available there."""
    model, s = pm.model, pm.state
    if action not in model.av(coalition, s):
        raise ValueError(f"{action.render(model.universe)} is not available for "
                         f"{coalition.render()} at {s!r}")
    column = eval_all(model, f)
    return all(column[t] for t in model.out(coalition, s, action))
