"""Homology, collapse moves and certified reduction of Martelli graphs."""

from .checks import checked_mode
from .errors import ShadowError
from .generate import random_graph
from .graph import (
    Edge,
    End,
    MartelliGraph,
    VertexKind,
    cut_edge,
    disk_graph,
    export_dot,
    parse_document,
    parse_graph,
    serialize,
    validate,
)
from .homology import (
    HomologyProfile,
    euler_characteristic,
    homology_profile,
    is_acyclic,
    reduced_profile,
    split_classification,
)
from .moves import Move, MoveKind, MoveRecord, applicable_moves, apply_move
from .reducer import CollapseCertificate, find_root, reduce_to_disk, verify_certificate
from .regions import GleamLedger, extract_regions, init_gleams, transfer_gleams

__all__ = [
    "CollapseCertificate",
    "Edge",
    "End",
    "GleamLedger",
    "HomologyProfile",
    "MartelliGraph",
    "Move",
    "MoveKind",
    "MoveRecord",
    "ShadowError",
    "VertexKind",
    "applicable_moves",
    "apply_move",
    "checked_mode",
    "cut_edge",
    "disk_graph",
    "euler_characteristic",
    "export_dot",
    "extract_regions",
    "find_root",
    "homology_profile",
    "init_gleams",
    "is_acyclic",
    "parse_document",
    "parse_graph",
    "random_graph",
    "reduce_to_disk",
    "reduced_profile",
    "serialize",
    "split_classification",
    "transfer_gleams",
    "validate",
    "verify_certificate",
]
