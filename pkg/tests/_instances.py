"""Cached instances shared by the test modules."""

from __future__ import annotations

from functools import lru_cache

from cohconf.algebra import algebra_closure
from cohconf.architecture import (
    canonical_affine_architecture,
    canonical_clique_architecture,
    canonical_projective_architecture,
    verify_architecture,
)
from cohconf.geometry import (
    affine_symmetries,
    clique_symmetries,
    petersen_symmetries,
    projective_symmetries,
)
from cohconf.graph import adjacency_operators
from cohconf.groups import architecture_from_action

# Coxeter-basis expressions in the order the Petersen example numbers them
PETERSEN_PAPER_EXPRESSIONS = [
    "I", "T1", "T2", "T2T1", "T1T2", "T1T2T1", "T2T1T2",
    "T1T2T1T2", "T2T1T2T1", "T1T2T1T2T1", "T2T1T2T1T2 - T1T2T1T2T1",
]

PETERSEN_PAPER_WORDS = [
    (), (1,), (2,), (2, 1), (1, 2), (1, 2, 1), (2, 1, 2),
    (1, 2, 1, 2), (2, 1, 2, 1), (1, 2, 1, 2, 1), (2, 1, 2, 1, 2),
]

SYMMETRIES = {
    "ag": affine_symmetries,
    "pg": projective_symmetries,
    "clique": clique_symmetries,
}

CANONICAL = {
    "ag": lambda q, ls, g, idx: canonical_affine_architecture(ls, g, idx),
    "pg": lambda q, ls, g, idx: canonical_projective_architecture(ls, g, idx),
    "clique": lambda q, ls, g, idx: canonical_clique_architecture(q, g, idx),
}


class Instance:
    def __init__(self, name, q, ls, g, flag_index, action):
        self.name, self.q = name, q
        self.ls, self.g, self.flag_index, self.action = ls, g, flag_index, action
        self.ab = algebra_closure(adjacency_operators(g), dim_cap=g.vertex_count ** 2)
        self._canonical = self._from_action = None

    def __repr__(self):
        return f"Instance({self.name}, q={self.q})"

    @property
    def canonical(self):
        if self._canonical is None and self.name in CANONICAL:
            cands = CANONICAL[self.name](self.q, self.ls, self.g, self.flag_index)
            self._canonical = verify_architecture(self.g, self.ab, cands)
        return self._canonical

    @property
    def from_action(self):
        if self._from_action is None:
            self._from_action = architecture_from_action(self.g, self.action, self.ab)
        return self._from_action


@lru_cache(maxsize=None)
def instance(name: str, q: int | None = None) -> Instance:
    if name == "petersen":
        return Instance(name, None, *petersen_symmetries())
    return Instance(name, q, *SYMMETRIES[name](q))


def petersen_paper_order(cc) -> list[int]:
    """Permutation taking the computed class order to the example's numbering."""
    texts = cc.expression_texts()
    return [texts.index(e) for e in PETERSEN_PAPER_EXPRESSIONS]


# every geometry instance the suites sweep over
ALL = [("petersen", None)] + [("ag", q) for q in (2, 3, 4, 5)] + \
      [("pg", q) for q in (2, 3)] + [("clique", q) for q in (2, 3, 4)]
# ones with a group action small enough to sweep base points cheaply
WITH_ACTION = [("petersen", None), ("ag", 2), ("ag", 3), ("pg", 2), ("pg", 3),
               ("clique", 2), ("clique", 3), ("clique", 4)]
