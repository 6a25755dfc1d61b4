"""Incremental process-tree discovery from event logs."""

from .alignment import Alignment, Move, MoveKind, align, conformance_report, is_fitting
from .eventlog import (
    Event,
    EventLog,
    Trace,
    TraceVariant,
    extract_variants,
    list_activities,
    parse_xes,
    parse_xes_file,
)
from .incremental import add_trace, locate_deviation_scope
from .miner import Dfg, build_dfg, discover, discover_from_variants
from .petri import LabeledPetriNet, Marking, enabled, fire, serialize_pnml, tree_to_petri_net
from .tree import (
    Op,
    ProcessTree,
    TreeNode,
    Violation,
    accepts,
    activity,
    enumerate_language,
    format_tree,
    insert_node,
    leaf_labels,
    loop,
    node_at,
    par,
    parse_ptml,
    relabel_node,
    remove_subtree,
    replace_at,
    seq,
    serialize_ptml,
    shift_subtree,
    tau,
    tree_from_dict,
    tree_to_dict,
    validate,
    xor,
)

__version__ = "0.1.0"
