"""Classification of group elements and subgroups by moved rank.

The moved rank of g is the rank of g - I, i.e. the rank of the sublattice
of differences g(m) - m.  Elements of moved rank 1 are reflections, rank 2
bireflections.  For a subgroup the moved rank is the rank of the combined
difference lattice, which always complements the fixed lattice:
moved_rank_subgroup(H) + rank(fixed lattice of H) = rank L.  That equality
is also the height of the ideal the subgroup generates in the Laurent
algebra, so no prime-ideal machinery is needed here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .intlinalg import IntMatrix, rank
from .groups import FiniteMatrixGroup, Subgroup, subgroup_generated, commutator_subgroup


@dataclass(frozen=True)
class ReflectionProfile:
    element_index: int
    moved_rank: int
    classification: str


def classify(moved: int) -> str:
    if moved == 0:
        return "identity"
    if moved == 1:
        return "reflection"
    if moved == 2:
        return "bireflection"
    return f"{moved}-reflection"


def moved_rank(g: IntMatrix) -> int:
    """rank(g - I)."""
    if g.rows != g.cols:
        raise ValueError("group elements are square matrices")
    return rank(g - IntMatrix.identity(g.rows))


def reflection_profile(G: FiniteMatrixGroup) -> list[ReflectionProfile]:
    return [
        ReflectionProfile(i, G.moved_rank(i), classify(G.moved_rank(i))) for i in range(G.order)
    ]


def moved_rank_subgroup(h: Subgroup) -> int:
    """Rank of the difference lattice of h, from a generating set.

    Stacks the columns of g - I over the generators; the column span of
    the stack is the full difference lattice of the subgroup.
    """
    G = h.parent
    n = G.lattice.rank
    gens = h.generating_set()
    if not gens:
        return 0
    ident = IntMatrix.identity(n)
    stacked = IntMatrix.hstack([G.element(i) - ident for i in gens])
    return rank(stacked)


def in_Xk(h: Subgroup, k: int) -> bool:
    """Does the subgroup move a sublattice of rank at most k?"""
    return moved_rank_subgroup(h) <= k


def bireflection_subgroup(h: Subgroup) -> Subgroup:
    """Subgroup generated by all bireflections of h.

    Scans every element of h, not just generators: the bireflection set
    of a subgroup is not determined by a generating set.
    """
    seeds = [i for i in h.indices if h.parent.moved_rank(i) <= 2]
    return subgroup_generated(h.parent, seeds)


def is_perfect_mod_bireflections(h: Subgroup) -> bool:
    """True when h is generated by its bireflections plus its commutators,
    i.e. exactly when h modulo its bireflection subgroup is perfect."""
    m = bireflection_subgroup(h)
    k = commutator_subgroup(h)
    combined = subgroup_generated(h.parent, set(m.indices) | set(k.indices))
    return combined.order == h.order
