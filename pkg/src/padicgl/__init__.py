"""Exact local Langlands data for GL(n) over p-adic fields."""

from .qexact import (
    ExactScalar,
    GaussianRational,
    LFactor,
    LocalFieldContext,
    PosQMonomial,
    equals_one,
    norm_sq,
    norm_sq_compare,
    render_lfactor,
    render_scalar,
)
from .bzclass import (
    Atom,
    ClassData,
    InertialLabel,
    LabelRegistry,
    Segment,
    dualize,
    linked,
    load_registry,
    precedes,
    standard_order,
    unramified_atom,
)
from .weildeligne import WDBlock, WDRep, clebsch_gordan, sp_rep, wd_dual
from .factors import EpsValue, conductor, tate_char, wd_eps, wd_l_factor, wd_pair_l
from .langlands import dictionary_report, rec_forward, rec_inverse, satake_class_data
from .wittring import GFRing, IntegerRing, ModRing, RationalField, WittContext
from .cyclicalg import CyclicAlgebra, UnramifiedContext, brauer_invariant, dieudonne_standard

__version__ = "0.1.0"
