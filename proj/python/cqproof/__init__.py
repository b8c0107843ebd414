"""Explanation proofs for conjunctive query answers over DL-Lite ontologies.

Thin wrapper around the C++ core; see the project README for the file
formats and the CLI.
"""

from _cqproof import (  # noqa: F401
    CapExceeded,
    InputError,
    ParseError,
    PreconditionError,
    decide,
    eval_temporal,
    expand_next_form,
    export_dot,
    gen_chain,
    gen_sat,
    is_tree_shaped,
    prove,
    temporal_prove,
    translate,
    validate,
)

__all__ = [
    "CapExceeded",
    "InputError",
    "ParseError",
    "PreconditionError",
    "decide",
    "eval_temporal",
    "expand_next_form",
    "export_dot",
    "gen_chain",
    "gen_sat",
    "is_tree_shaped",
    "prove",
    "temporal_prove",
    "translate",
    "validate",
]
