# -*- coding: utf-8

"""Module for the evaluation benchmark.

Full evaluation of a permission graph visits every node once and merges m̄
entries per parent, so its wall time should grow linearly with the node count
N at fixed m̄ and fan-out. The benchmark generates layered random graphs of
growing size and reports the wall time ratios of successive sizes.

SPDX-License-Identifier: MIT
"""
import time

import numpy as np
import pandas as pd

from pmspy.graphs.graph import PermissionGraph
from pmspy.permissions.algebra import PermissionSet
from pmspy.permissions.resource_name import CondValue
from pmspy.permissions.resource_name import ResourceName
from pmspy.tools import logger


def layered_graph(
        node_count, entries=8, fan_out=2, layers=4, key_universe=None,
        value_share=0.25, seed=0, order=None):
    r"""
    Generate a layered random permission graph.

    Layer 0 holds the consumers, the last layer the roots. Every node outside
    the last layer inherits from :code:`fan_out` distinct nodes of the next
    layer.

    Parameters
    ----------
    node_count : int
        Number of nodes N.

    entries : int
        Own entries per node m̄, drawn without repetition from the key
        universe.

    fan_out : int
        Parents per node outside the root layer.

    layers : int
        Number of layers, at least 2.

    key_universe : int
        Number of distinct :code:`(base, identifier, scope)` keys, default
        :code:`4 * entries`. A smaller universe raises the conflict count.

    value_share : float
        Share of conditional entries, all with integer values.

    seed : int
        Seed of the random generator, equal seeds give equal graphs.

    Returns
    -------
    graph : pmspy.graphs.graph.PermissionGraph

    Example
    -------
    >>> from pmspy.tools.benchmark import layered_graph
    >>> g = layered_graph(40, entries=3, fan_out=2, seed=7)
    >>> stats = g.stats()
    >>> stats.node_count, stats.avg_entries
    (40, 3.0)
    >>> g.has_cycle()
    False
    """
    if key_universe is None:
        key_universe = 4 * entries
    if node_count < layers or layers < 2 or entries > key_universe:
        msg = (
            f"Cannot build {layers} layers from {node_count} nodes with "
            f"{entries} entries out of {key_universe} keys."
        )
        logger.error(msg)
        raise ValueError(msg)

    rng = np.random.default_rng(seed)
    order = PermissionGraph(order).order
    words = order.words()
    keys = [('res', str(k), 'act') for k in range(key_universe)]

    bounds = np.linspace(0, node_count, layers + 1).astype(int)
    nodes = [
        [ResourceName('node', str(i), f"l{layer}")
         for i in range(bounds[layer], bounds[layer + 1])]
        for layer in range(layers)
    ]

    own = {}
    for layer in nodes:
        for key in layer:
            picked = rng.choice(key_universe, size=entries, replace=False)
            levels = rng.integers(0, len(words), size=entries)
            conditional = rng.random(entries) < value_share
            magnitudes = rng.integers(0, 100, size=entries)
            own[key] = PermissionSet([
                ResourceName(
                    *keys[k], words[lv],
                    CondValue.integer(int(m)) if c else None
                )
                for k, lv, c, m in zip(picked, levels, conditional, magnitudes)
            ])

    edges = []
    for upper, lower in zip(nodes[:-1], nodes[1:]):
        width = min(fan_out, len(lower))
        for child in upper:
            for j in rng.choice(len(lower), size=width, replace=False):
                edges.append((child, lower[j]))

    return PermissionGraph.restore(own, edges, 0, order)


def time_evaluation(graph, repeats=5):
    """Return the wall times of full evaluations from an empty memo."""
    times = []
    for _ in range(repeats):
        graph.clear_memo()
        start = time.perf_counter()
        graph.effective_all()
        times.append(time.perf_counter() - start)
    return times


def bench(sizes, entries=8, fan_out=2, seed=0, repeats=5, layers=4):
    r"""
    Time full graph evaluations for growing node counts.

    Parameters
    ----------
    sizes : list
        Node counts N to benchmark.

    entries : int
        Own entries per node m̄.

    fan_out : int
        Parents per node.

    seed : int
        Seed of the graph generator.

    repeats : int
        Runs per size, the median is reported.

    Returns
    -------
    report : pandas.DataFrame
        One row per size with N, m̄, the conflict count n(C), the number of
        edges, the median wall time and its ratio to the previous row.
    """
    rows = []
    for i, n in enumerate(sizes):
        logger.progress(
            100 * i // len(sizes), f"Timing graph {i + 1} of {len(sizes)}."
        )
        graph = layered_graph(
            n, entries=entries, fan_out=fan_out, layers=layers, seed=seed
        )
        seconds = float(np.median(time_evaluation(graph, repeats)))
        stats = graph.stats()
        rows.append({
            'N': stats.node_count,
            'm': stats.avg_entries,
            'conflicts': stats.conflict_count,
            'edges': stats.edge_count,
            'seconds': seconds,
        })
        logger.result(
            f"N={stats.node_count}, m={stats.avg_entries:.2f}, "
            f"n(C)={stats.conflict_count}: {seconds:.4f} s"
        )
    report = pd.DataFrame(rows)
    report['ratio'] = report['seconds'] / report['seconds'].shift(1)
    return report
