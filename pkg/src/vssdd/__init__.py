"""Variable shift SDDs: offset-parameterized sentential decision diagrams."""
from .convert import to_baseline_sdd
from .frontend import (
    Cnf,
    compile_cnf,
    gen_grid_matching,
    gen_matching_tree,
    gen_nqueens,
    parse_dimacs,
    to_dimacs,
)
from .manager import AND, NORMALIZED, OR, TRIMMED, XOR, InvariantError, VsError, VsManager, VsSdd
from .queries import (
    CountContext,
    clausal_entails,
    count,
    entails,
    enumerate_models,
    equivalent,
    forget_singleton,
    is_implicant,
    satisfiable,
    valid,
)
from .sdd import SddManager
from .serialize import read_diagram, to_dot, write_diagram
from .vtree import Vtree, build_balanced, build_right_linear, parse_vtree, random_vtree, serialize_vtree

__version__ = "0.1.0"

__all__ = [
    "AND", "OR", "XOR", "TRIMMED", "NORMALIZED",
    "Vtree", "build_balanced", "build_right_linear", "random_vtree", "parse_vtree", "serialize_vtree",
    "VsManager", "VsSdd", "VsError", "InvariantError", "SddManager", "to_baseline_sdd",
    "CountContext", "count", "enumerate_models", "entails", "equivalent", "satisfiable", "valid",
    "clausal_entails", "is_implicant", "forget_singleton",
    "Cnf", "parse_dimacs", "to_dimacs", "compile_cnf", "gen_nqueens", "gen_grid_matching", "gen_matching_tree",
    "write_diagram", "read_diagram", "to_dot",
]
