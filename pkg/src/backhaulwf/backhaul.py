"""Tree backhaul: topology validation, recursive achievable rates, rate
differentials, three-level node states, path-worst effective states, and the
base-3 feedback codec.

Nodes are numbered 1..N. Nodes 1..K are the APs (leaves), node N is the
destination (root), and everything in between is an intermediate backhaul
node. Each non-root node p has one parent and one outgoing link of capacity
capacity_bps[p].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import (
    CycleError,
    InvalidParameterError,
    LeafChildError,
    MissingCapacityError,
    RootParentError,
    UnreachableNodeError,
)

__all__ = [
    "BackhaulTree",
    "NodeStateReport",
    "validate_tree",
    "achievable_rates",
    "rate_differentials",
    "classify_states",
    "effective_states",
    "node_state_report",
    "encode_feedback",
    "decode_feedback",
    "feedback_bit_length",
]

STATE_UNDER_UTILIZED = 1
STATE_BALANCED = 2
STATE_OVER_LOADED = 3


@dataclass(frozen=True)
class BackhaulTree:
    """A validated backhaul tree; treat instances as immutable.

    post_order lists every node with children before parents (root last);
    ap_paths[k] is the node sequence from AP k up to, but excluding, the
    root. Both are derived once by validate_tree.
    """

    num_aps: int
    num_nodes: int
    parent: dict[int, int]
    capacity_bps: dict[int, float]
    children: dict[int, tuple[int, ...]]
    post_order: tuple[int, ...]
    ap_paths: dict[int, tuple[int, ...]]

    @property
    def root(self) -> int:
        return self.num_nodes

    def aps(self) -> range:
        return range(1, self.num_aps + 1)


def validate_tree(
    parent_map: Mapping[int, int],
    capacities: Mapping[int, float],
    num_aps: int,
    num_nodes: int,
) -> BackhaulTree:
    """Check the topology invariants and return a BackhaulTree.

    Raises a distinct TreeValidationError subclass per defect: RootParentError,
    UnreachableNodeError (missing parent entry or node on no AP-to-root walk),
    CycleError, LeafChildError, MissingCapacityError.
    """
    k, n = int(num_aps), int(num_nodes)
    if k < 1:
        raise InvalidParameterError(f"num_aps must be >= 1, got {k}")
    if n < k + 1:
        raise InvalidParameterError(f"num_nodes must be > num_aps, got N={n}, K={k}")

    parent = {int(p): int(j) for p, j in dict(parent_map).items()}
    if n in parent:
        raise RootParentError(f"destination node {n} must not have a parent link")
    unknown = sorted(p for p in parent if not 1 <= p < n)
    if unknown:
        raise InvalidParameterError(f"parent entries for unknown nodes {unknown}")
    missing = sorted(p for p in range(1, n) if p not in parent)
    if missing:
        raise UnreachableNodeError(f"nodes {missing} have no parent link to the root")
    bad_targets = sorted(p for p, j in parent.items() if not 1 <= j <= n)
    if bad_targets:
        raise InvalidParameterError(
            f"nodes {bad_targets} point at parents outside 1..{n}"
        )

    # Walk each node to the root before judging pointer domains, so a
    # degenerate input like {1->2, 2->1} reports the cycle it contains.
    for start in range(1, n):
        seen = {start}
        p = start
        while p != n:
            p = parent[p]
            if p in seen:
                raise CycleError(f"parent links cycle through node {p}")
            seen.add(p)

    ap_parents = sorted(p for p, j in parent.items() if j <= k)
    if ap_parents:
        raise LeafChildError(
            f"nodes {ap_parents} name an AP as parent; APs must be leaves"
        )

    children: dict[int, list[int]] = {p: [] for p in range(1, n + 1)}
    for p, j in parent.items():
        children[j].append(p)
    childless = sorted(
        p for p in range(k + 1, n) if not children[p]
    )
    if childless:
        raise UnreachableNodeError(
            f"intermediate nodes {childless} lie on no AP-to-root walk"
        )

    caps = {}
    for p in range(1, n):
        if p not in capacities:
            raise MissingCapacityError(f"node {p} has no outgoing capacity entry")
        c = float(capacities[p])
        if math.isnan(c) or c < 0:
            raise InvalidParameterError(f"capacity_bps[{p}] must be >= 0, got {c}")
        caps[p] = c

    depth = {n: 0}
    for start in range(1, n):
        chain = []
        p = start
        while p not in depth:
            chain.append(p)
            p = parent[p]
        base = depth[p]
        for i, q in enumerate(chain):
            depth[q] = base + len(chain) - i
    post_order = tuple(sorted(range(1, n + 1), key=lambda p: (-depth[p], p)))

    ap_paths = {}
    for ap in range(1, k + 1):
        path = [ap]
        p = ap
        while parent[p] != n:
            p = parent[p]
            path.append(p)
        ap_paths[ap] = tuple(path)

    return BackhaulTree(
        num_aps=k,
        num_nodes=n,
        parent=parent,
        capacity_bps=caps,
        children={p: tuple(sorted(c)) for p, c in children.items()},
        post_order=post_order,
        ap_paths=ap_paths,
    )


def achievable_rates(
    tree: BackhaulTree, uplink_rates_bps: Sequence[float]
) -> tuple[dict[int, float], float]:
    """Recursive achievable rate at every node, plus the root rate R_N.

    A leaf's rate is min(capacity, uplink rate); an intermediate node's is
    min(capacity, sum of children); the root just sums its children. This is
    the max-flow value from the uplinks to the destination (min-cut), done in
    one post-order pass.
    """
    k, n = tree.num_aps, tree.num_nodes
    if len(uplink_rates_bps) != k:
        raise InvalidParameterError(
            f"expected {k} uplink rates, got {len(uplink_rates_bps)}"
        )
    if any(r < 0 for r in uplink_rates_bps):
        raise InvalidParameterError("uplink rates must be >= 0")

    rates: dict[int, float] = {}
    for p in tree.post_order:
        if p <= k:
            inflow = float(uplink_rates_bps[p - 1])
        else:
            inflow = sum(rates[c] for c in tree.children[p])
        rates[p] = inflow if p == n else min(tree.capacity_bps[p], inflow)
    return rates, rates[n]


def rate_differentials(
    tree: BackhaulTree,
    uplink_rates_bps: Sequence[float],
    rates_bps: Mapping[int, float],
) -> dict[int, float]:
    """Outgoing capacity minus incoming load, V_p, for every non-root node.

    Negative V_p marks the outgoing link of p as a bottleneck. Leaves compare
    against their raw uplink rate, intermediates against the sum of their
    children's achieved rates.
    """
    k, n = tree.num_aps, tree.num_nodes
    diffs = {}
    for p in range(1, n):
        if p <= k:
            load = float(uplink_rates_bps[p - 1])
        else:
            load = sum(rates_bps[c] for c in tree.children[p])
        diffs[p] = tree.capacity_bps[p] - load
    return diffs


def classify_states(
    differentials_bps: Mapping[int, float], tau_bps: float
) -> dict[int, int]:
    """Three-way node state from V_p: 1 under-utilized (V >= 0), 2 balanced
    (-tau <= V < 0), 3 over-loaded (V < -tau)."""
    if not tau_bps > 0:
        raise InvalidParameterError(f"tau_bps must be > 0, got {tau_bps}")
    states = {}
    for p, v in differentials_bps.items():
        if math.isnan(v):
            raise InvalidParameterError(f"differential for node {p} is NaN")
        if v >= 0:
            states[p] = STATE_UNDER_UTILIZED
        elif v >= -tau_bps:
            states[p] = STATE_BALANCED
        else:
            states[p] = STATE_OVER_LOADED
    return states


def effective_states(tree: BackhaulTree, states: Mapping[int, int]) -> dict[int, int]:
    """Worst (max) node state along each AP's path to the root.

    The destination itself never constrains anything, so it contributes
    state 1 and is simply omitted from the path max.
    """
    return {
        ap: max(states[p] for p in tree.ap_paths[ap]) for ap in tree.aps()
    }


@dataclass(frozen=True)
class NodeStateReport:
    """Per-node rates, differentials and states for one power allocation."""

    rates_bps: dict[int, float]
    root_rate_bps: float
    differentials_bps: dict[int, float]
    states: dict[int, int]
    effective_states: dict[int, int]


def node_state_report(
    tree: BackhaulTree, uplink_rates_bps: Sequence[float], tau_bps: float
) -> NodeStateReport:
    """Evaluate rates, V_p, S_p and S_eff in one shot."""
    rates, root_rate = achievable_rates(tree, uplink_rates_bps)
    diffs = rate_differentials(tree, uplink_rates_bps, rates)
    states = classify_states(diffs, tau_bps)
    eff = effective_states(tree, states)
    return NodeStateReport(
        rates_bps=rates,
        root_rate_bps=root_rate,
        differentials_bps=diffs,
        states=states,
        effective_states=eff,
    )


def feedback_bit_length(num_aps: int) -> int:
    """Bits needed to feed back K three-way states: ceil(K * log2(3))."""
    if num_aps < 1:
        raise InvalidParameterError(f"num_aps must be >= 1, got {num_aps}")
    return math.ceil(num_aps * math.log2(3.0))


def encode_feedback(effective_states: Sequence[int]) -> tuple[int, int]:
    """Pack K effective states into one base-3 word.

    AP k (1-based) contributes digit (state - 1) at weight 3^(k-1). Returns
    (word, bit_length).
    """
    states = list(effective_states)
    if not states:
        raise InvalidParameterError("effective_states must be nonempty")
    word = 0
    weight = 1
    for i, s in enumerate(states):
        if s not in (1, 2, 3):
            raise InvalidParameterError(f"state for AP {i + 1} must be in {{1,2,3}}, got {s}")
        word += (s - 1) * weight
        weight *= 3
    return word, feedback_bit_length(len(states))


def decode_feedback(word: int, num_aps: int) -> tuple[int, ...]:
    """Invert encode_feedback: base-3 digits back to per-AP states."""
    if num_aps < 1:
        raise InvalidParameterError(f"num_aps must be >= 1, got {num_aps}")
    if not 0 <= word < 3**num_aps:
        raise InvalidParameterError(
            f"word {word} out of range for {num_aps} APs (0..{3**num_aps - 1})"
        )
    states = []
    for _ in range(num_aps):
        word, digit = divmod(word, 3)
        states.append(digit + 1)
    return tuple(states)
