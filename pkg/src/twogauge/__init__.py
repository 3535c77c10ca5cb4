"""Finite 2-group gauge theory workbench.

Exact-arithmetic implementations of flat connections and their gauge
orbits on ordered simplicial complexes, state-sum partition functions and
the lattice cobordism maps, the 3+1D commuting-projector model with its
string operators, the skeletal data of the gauge group's double, and the
two-element stabilizer fast path on the cubic torus.
"""

from .groups import (
    AbelianGroup,
    Cocycle3,
    FiniteGroup,
    GAction,
    TwoGroup,
    shipped_two_groups,
    two_group_bz2,
    two_group_z2,
    two_group_z2z2,
    verify_two_group,
)
from .scalars import Phase, Scalar

__all__ = [
    "AbelianGroup",
    "Cocycle3",
    "FiniteGroup",
    "GAction",
    "Phase",
    "Scalar",
    "TwoGroup",
    "shipped_two_groups",
    "two_group_bz2",
    "two_group_z2",
    "two_group_z2z2",
    "verify_two_group",
]
