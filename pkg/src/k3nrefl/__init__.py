"""Exact lattice arithmetic for reflective classes on K3^[n]-type manifolds."""

from .catalog import CatalogEntry, all_entries, full_table, row_entries, worked_examples
from .effectivity import ClassificationReport, Verdict, classify
from .k3n import MukaiVector, canonical_embedding, make_k3n, mukai_lattice, theta_transport, transport_class
from .kernels import BACKEND
from .lattice import IntegralLattice, Isometry, LatticeVector, divisibility, reflection, saturate, square
from .monodromy import is_monodromy_reflective, mon2_membership, random_monodromy
from .rs import RSInvariant, rs_closed_form, rs_via_saturation

__all__ = [
    "BACKEND",
    "CatalogEntry",
    "ClassificationReport",
    "IntegralLattice",
    "Isometry",
    "LatticeVector",
    "MukaiVector",
    "RSInvariant",
    "Verdict",
    "all_entries",
    "canonical_embedding",
    "classify",
    "divisibility",
    "full_table",
    "is_monodromy_reflective",
    "make_k3n",
    "mon2_membership",
    "mukai_lattice",
    "random_monodromy",
    "reflection",
    "row_entries",
    "rs_closed_form",
    "rs_via_saturation",
    "saturate",
    "square",
    "theta_transport",
    "transport_class",
    "worked_examples",
]
