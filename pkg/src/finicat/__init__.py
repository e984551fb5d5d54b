"""Finite category theory: colimits, presheaves, sheaves and model axioms on explicit finite data."""

from .diagram import FinFunctor, NatTrans, SetFunctor, make_presheaf, make_set_functor
from .errors import FinicatError
from .finab import FgAbGroup, IntMatrix, smith_normal_form, tensor_product
from .fincat import FinCat, Morphism, opposite, poset_category
from .modelcheck import MorphismClasses, check_model_axioms
from .setcolim import colimit, find_colimit_in_category, limit, verify_universal
from .sheaves import check_sheaf, sheafify
from .sites import GrothendieckTopology, Sieve, check_topology_axioms, saturate_coverage
from .workspace import Workspace, load_corpus, parse_workspace

__all__ = [
    "FgAbGroup",
    "FinCat",
    "FinFunctor",
    "FinicatError",
    "GrothendieckTopology",
    "IntMatrix",
    "Morphism",
    "MorphismClasses",
    "NatTrans",
    "SetFunctor",
    "Sieve",
    "Workspace",
    "check_model_axioms",
    "check_sheaf",
    "check_topology_axioms",
    "colimit",
    "find_colimit_in_category",
    "limit",
    "load_corpus",
    "make_presheaf",
    "make_set_functor",
    "opposite",
    "parse_workspace",
    "poset_category",
    "saturate_coverage",
    "sheafify",
    "smith_normal_form",
    "tensor_product",
    "verify_universal",
]
