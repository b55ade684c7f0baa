"""Static traversal-cost accounting and pruned-tree export."""

from __future__ import annotations

import numpy as np

from .core import CodeSpec, FastPolarCode, PatternTag, TraversalStats
from .decoder import PatternLimits, TreeNode, build_tree, tree_stats

STATS_CSV_HEADER = (
    "N,K,terminal_nodes,visited_nodes,edges,edges_directed,f_ops,"
    + ",".join(tag.value for tag in PatternTag if tag is not PatternTag.SLOW)
)


def traversal_stats(
    layout: CodeSpec | FastPolarCode, limits: PatternLimits | None = None
) -> TraversalStats:
    """Dispatch the decode tree symbolically (no LLRs) and count the traversal."""
    return tree_stats(build_tree(layout, limits))


def _node_doc(node: TreeNode) -> dict:
    doc = {
        "stage": int(np.log2(node.size)),
        "span": [node.start, node.start + node.size],
        "tag": node.tag.value if node.tag is not None else "branch",
    }
    if node.children:
        doc["children"] = [_node_doc(child) for child in node.children]
    return doc


def export_pruned_tree(
    layout: CodeSpec | FastPolarCode, limits: PatternLimits | None = None
) -> dict:
    """Hierarchical JSON-ready document of the pruned tree plus its counters.

    Both edge conventions are included: "edges" counts each parent-to-child
    edge once, "edges_directed" counts the down and up traversals separately.
    """
    spec = layout.spec if isinstance(layout, FastPolarCode) else layout
    root = build_tree(layout, limits)
    return {
        "N": spec.N,
        "K": spec.K,
        "stats": tree_stats(root).as_dict(),
        "root": _node_doc(root),
    }


def reduction_ratios(baseline: TraversalStats, other: TraversalStats) -> dict:
    """Fractional savings of `other` relative to `baseline` per counter."""
    return {
        "nodes": 1.0 - other.terminal_nodes / baseline.terminal_nodes,
        "edges": 1.0 - other.edges / baseline.edges,
        "f_ops": 1.0 - other.f_ops / baseline.f_ops,
    }


def stats_csv_row(layout: CodeSpec | FastPolarCode, stats: TraversalStats) -> str:
    """One CSV row matching STATS_CSV_HEADER."""
    spec = layout.spec if isinstance(layout, FastPolarCode) else layout
    tags = [tag for tag in PatternTag if tag is not PatternTag.SLOW]
    counts = [stats.histogram.get(tag, 0) for tag in tags]
    fields = [spec.N, spec.K, stats.terminal_nodes, stats.visited_nodes,
              stats.edges, 2 * stats.edges, stats.f_ops, *counts]
    return ",".join(str(v) for v in fields)
