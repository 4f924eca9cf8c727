"""Exact computation of elementary roots, low elements, gates and the
finite-state automata recognizing reduced words in a Coxeter system."""

from .scalar import FieldContext, FieldError, Scalar, cos_pi_over, make_context, sign
from .core import (
    CoxeterMatrix,
    CoxeterSystem,
    Element,
    INFINITY,
    MismatchError,
    ValidationError,
    inverse,
    is_prefix,
    is_spherical,
    is_suffix,
    left_descents,
    length,
    longest_element,
    multiply,
    reduced_word,
    right_descents,
)
from .roots import (
    Root,
    RootTable,
    act,
    base,
    elementary_roots,
    final_roots,
    inner,
    inversion_ids,
    inversion_set,
    reflect,
    reflection_of,
    spherical_positive_roots,
    table,
)
from .lowgate import (
    GateSet,
    LowSet,
    boundary_roots,
    gate_projection,
    gates,
    low_elements,
    super_elementary_roots,
    ultra_low,
    witness,
)
from .automata import (
    DEAD,
    Automaton,
    JoinClosureError,
    LanguageMismatchError,
    ResourceLimitError,
    automaton_from_json,
    brute_force_counts,
    build_canonical,
    build_garside,
    build_gate_automaton,
    classify,
    export_dot,
    export_json,
    isomorphic,
    language_leq,
    minimize,
    refines,
    word_counts,
)
from .analysis import (
    Report,
    check_gate_join_closure,
    check_order_isomorphism,
    check_shi_gated,
    pipeline_counts,
    verify_invariants,
)
