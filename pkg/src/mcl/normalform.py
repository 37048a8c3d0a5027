"""Normal form: every formula of modal depth >= 1 is equivalent to a
conjunction of *standard formulas*.

A standard formula is a clause

    gamma | (<A_1>phi_1 & ... & <A_m>phi_m  ->  <B_1>psi_1 | ... | <B_n>psi_n)

where gamma is a disjunction of propositional literals (the empty gamma
renders false), the positive side always contains ``<AG>false``, and a
nonempty negative side always contains ``<{}>true``.  Both paddings are
harmless: ``~<AG>false`` is valid, and any ``<A>phi`` already implies
``<{}>true``.

The conversion treats maximal modal subformulas as opaque atoms, pushes
negations to the literals, and distributes to CNF.  No fresh-variable
tricks: those are only equisatisfiable, which is unsound for validity
clauses.  The exponential blowup of plain distribution is accepted at desk
scale.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import (TOP, AgentUniverse, And, Atom, Can, Coalition, Formula,
                      Neg, Top, bot, conj, disj, implies, modal_depth, pretty)


@dataclass(frozen=True)
class StandardFormula:
    """One clause of the normal form.

    ``gamma`` lists propositional literals (atoms, negated atoms, or the
    constant true); ``ni`` and ``pi`` list (coalition, goal) pairs for the
    negative and positive side.
    """

    universe: AgentUniverse
    gamma: tuple[Formula, ...]
    ni: tuple[tuple[Coalition, Formula], ...]
    pi: tuple[tuple[Coalition, Formula], ...]

    def __post_init__(self):
        for lit in self.gamma:
            if not _is_gamma_literal(lit):
                raise ValueError(f"not a propositional literal: {lit!r}")
        if not self.pi:
            raise ValueError("the positive side must not be empty")
        if (self.universe.grand, bot()) not in self.pi:
            raise ValueError("the positive side must contain <AG>false")
        if self.ni and (self.universe.empty, TOP) not in self.ni:
            raise ValueError("a nonempty negative side must contain <{}>true")

    def gamma_formula(self) -> Formula:
        return disj(self.gamma)

    def to_formula(self) -> Formula:
        antecedent = conj(Can(c, g) for c, g in self.ni)
        consequent = disj(Can(c, g) for c, g in self.pi)
        return disj((self.gamma_formula(), implies(antecedent, consequent)))

    def render(self) -> str:
        """Clause text in the surface grammar; parsing it back yields exactly
        ``to_formula()``."""
        gamma_txt = " | ".join(pretty(lit) for lit in self.gamma) or "false"
        ant = " & ".join(pretty(Can(c, g)) for c, g in self.ni) or "true"
        cons = " | ".join(pretty(Can(c, g)) for c, g in self.pi)
        return f"{gamma_txt} | ({ant} -> {cons})"

    def max_inner_depth(self) -> int:
        return max(modal_depth(g) for _, g in self.ni + self.pi)

    @property
    def depth(self) -> int:
        return 1 + self.max_inner_depth()


@dataclass(frozen=True)
class Ni0Summary:
    """Negative-side entries with the empty coalition, and their conjunction."""

    indices: tuple[int, ...]
    phi: Formula


def ni0(sf: StandardFormula) -> Ni0Summary:
    indices = tuple(i for i, (c, _) in enumerate(sf.ni) if not c.members)
    phi = conj(sf.ni[i][1] for i in indices)
    return Ni0Summary(indices, phi)


def _is_gamma_literal(f: Formula) -> bool:
    return (isinstance(f, (Top, Atom))
            or (isinstance(f, Neg) and isinstance(f.child, Atom)))


def gamma_is_tautology(gamma: tuple[Formula, ...]) -> bool:
    """Complete for elementary disjunctions: true iff the constant true or a
    complementary literal pair occurs."""
    lits = set(gamma)
    if TOP in lits:
        return True
    return any(isinstance(lit, Atom) and Neg(lit) in lits for lit in lits)


# -- conversion ----------------------------------------------------------------

_Lit = tuple[bool, Formula]  # (polarity, leaf); leaf is Top, Atom, or Can


def _cnf(f: Formula, positive: bool) -> list[list[_Lit]]:
    """CNF of the propositional skeleton, treating Can nodes as leaves."""
    if isinstance(f, (Top, Atom, Can)):
        return [[(positive, f)]]
    if isinstance(f, Neg):
        return _cnf(f.child, not positive)
    if isinstance(f, And):
        left = _cnf(f.left, positive)
        right = _cnf(f.right, positive)
        if positive:
            return left + right
        return [c1 + c2 for c1 in left for c2 in right]
    raise TypeError(f"not a core formula: {f!r}")


def _literal_depth(lit: _Lit) -> int:
    _, leaf = lit
    return modal_depth(leaf)


def _clause_depth(clause: list[_Lit]) -> int:
    return max((_literal_depth(lit) for lit in clause), default=0)


def _dedup_clause(clause: list[_Lit]) -> list[_Lit]:
    seen = set()
    out = []
    for lit in clause:
        if lit == (False, TOP):
            continue  # a false disjunct adds nothing
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return out


def _prune(clauses: list[list[_Lit]], target_depth: int) -> list[list[_Lit]]:
    """Drop duplicate and absorbed clauses, but never let the maximal clause
    depth fall below ``target_depth`` (equivalence would survive, depth
    preservation would not)."""
    unique: list[list[_Lit]] = []
    keys: list[frozenset[_Lit]] = []
    for clause in clauses:
        key = frozenset(clause)
        if key not in keys:
            keys.append(key)
            unique.append(clause)
    kept = [True] * len(unique)
    for i, ki in enumerate(keys):
        if not kept[i]:
            continue
        for j, kj in enumerate(keys):
            if i != j and kept[j] and ki < kj:
                kept[j] = False
    survivors = [c for c, k in zip(unique, kept) if k]
    if max((_clause_depth(c) for c in survivors), default=0) < target_depth:
        for c, k in zip(unique, kept):
            if not k and _clause_depth(c) == target_depth:
                survivors.append(c)
                break
    return survivors


def _clause_to_standard(clause: list[_Lit], universe: AgentUniverse) -> StandardFormula:
    gamma: list[Formula] = []
    ni: list[tuple[Coalition, Formula]] = []
    pi: list[tuple[Coalition, Formula]] = []
    for positive, leaf in clause:
        if isinstance(leaf, Can):
            pair = (leaf.coalition, leaf.child)
            side = pi if positive else ni
            if pair not in side:
                side.append(pair)
        elif positive:
            gamma.append(leaf)
        else:
            gamma.append(Neg(leaf))
    falsum_pair = (universe.grand, bot())
    if falsum_pair not in pi:
        pi.append(falsum_pair)
    top_pair = (universe.empty, TOP)
    if ni and top_pair not in ni:
        ni.append(top_pair)
    return StandardFormula(universe, tuple(gamma), tuple(ni), tuple(pi))


def to_standard_conjunction(f: Formula,
                            universe: AgentUniverse) -> tuple[StandardFormula, ...]:
    """Equivalent conjunction of standard formulas with the same modal depth.

    Only defined for modal depth >= 1; propositional inputs belong to the
    truth-table path of the decision procedure (padding a depth-0 formula
    would raise its depth).
    """
    depth = modal_depth(f)
    if depth < 1:
        raise ValueError("normal form is defined for modal depth >= 1")
    clauses = [_dedup_clause(c) for c in _cnf(f, True)]
    clauses = _prune(clauses, depth)
    return tuple(_clause_to_standard(c, universe) for c in clauses)
