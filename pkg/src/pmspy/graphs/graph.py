# -*- coding: utf-8

"""Module for the permission graph.

The permission graph is the container of every permission management
system. Nodes are keyed by item resource names and hold their own permission
set, an edge :code:`child -> parent` lets the child inherit the parent's
effective set. Nodes without incoming edges are the consumers on whose behalf
access is checked.

SPDX-License-Identifier: MIT
"""
import threading

import pandas as pd

from pmspy.permissions import algebra
from pmspy.permissions.algebra import PermissionSet
from pmspy.permissions.resource_name import DEFAULT_ORDER
from pmspy.permissions.resource_name import LevelOrder
from pmspy.permissions.resource_name import ResourceName
from pmspy.permissions.resource_name import format_name
from pmspy.permissions.resource_name import parse_item
from pmspy.permissions.resource_name import parse_name
from pmspy.tools import logger
from pmspy.tools.data_containers import GraphStats
from pmspy.tools.helpers import CycleRejected
from pmspy.tools.helpers import DuplicateEdge
from pmspy.tools.helpers import DuplicateNode
from pmspy.tools.helpers import ItemEntryInSet
from pmspy.tools.helpers import MalformedName
from pmspy.tools.helpers import NodeHasEdges
from pmspy.tools.helpers import SelfLoop
from pmspy.tools.helpers import UnknownEdge
from pmspy.tools.helpers import UnknownEntry
from pmspy.tools.helpers import UnknownNode


def as_item(key):
    r"""
    Return a node key as item resource name.

    Parameters
    ----------
    key : str, ResourceName
        Canonical string or resource name of item kind.
    """
    if isinstance(key, str):
        return parse_item(key)
    if isinstance(key, ResourceName) and key.is_item:
        return key
    msg = f"Node keys must be item resource names, got {key!r}."
    logger.error(msg)
    raise MalformedName(msg)


def as_entry(entry):
    """Return an entry given as canonical string or resource name."""
    return parse_name(entry) if isinstance(entry, str) else entry


class PermissionGraph:
    r"""
    Acyclic directed graph of permission nodes.

    Parameters
    ----------
    order : LevelOrder, list
        Permission level order used by every comparison of the graph,
        default view < edit < admin. It is fixed for the lifetime of the
        graph.

    Note
    ----
    The graph follows a single writer, multiple reader contract: mutations
    are serialized by an internal lock, the memoized effective sets are
    rebuilt under the same lock after a mutation invalidated them.

    Mutation listeners (see :meth:`subscribe`) are called with the numbered
    changes of every valid mutation before it is applied, which is how the
    journal of :py:mod:`pmspy.graphs.graph_store` records changes. A listener
    failing rejects the mutation.

    Example
    -------
    A consumer inherits from a role, the role inherits from a root. The
    role's own edit entry overwrites the inherited view entry.

    >>> from pmspy.graphs import PermissionGraph
    >>> g = PermissionGraph()
    >>> g.add_node('rn:alice:1:user')
    >>> g.add_node('rn:team:ops:role', ['rn:cam:42:stream:edit'])
    >>> g.add_node('rn:org:1:root', ['rn:cam:42:stream:view',
    ...                              'rn:door:7:open:admin'])
    >>> g.add_edge('rn:alice:1:user', 'rn:team:ops:role')
    >>> g.add_edge('rn:team:ops:role', 'rn:org:1:root')
    >>> g.effective_set('rn:alice:1:user').to_strings()
    ['rn:cam:42:stream:edit', 'rn:door:7:open:admin']
    >>> [str(c) for c in g.consumers()]
    ['rn:alice:1:user']
    >>> g.version
    8
    """

    def __init__(self, order=None):
        if order is None:
            order = DEFAULT_ORDER
        elif not isinstance(order, LevelOrder):
            order = LevelOrder.from_words(order)
        self.order = order
        self.version = 0

        self._own = {}
        # outgoing (parents) and incoming (children) adjacency
        self._parents = {}
        self._children = {}

        self._memo = {}
        self._memo_version = 0
        self._last_conflicts = 0
        self._listeners = []
        self._lock = threading.RLock()

    @classmethod
    def restore(cls, own, edges, version, order=None):
        r"""
        Rebuild a graph from stored records without replaying mutations.

        Parameters
        ----------
        own : dict
            Node key to own PermissionSet.

        edges : iterable
            :code:`(child, parent)` pairs of node keys.

        version : int
            Graph version to restore.

        Note
        ----
        Endpoints, self loops and duplicates are checked per edge, acyclicity
        is left to the caller (see :meth:`has_cycle`).
        """
        graph = cls(order)
        for key, ps in own.items():
            if key in graph._own:
                msg = f"The graph already has a node {format_name(key)}."
                logger.error(msg)
                raise DuplicateNode(msg)
            graph._own[key] = ps
            graph._parents[key] = set()
            graph._children[key] = set()
        for child, parent in edges:
            child, parent = graph._node(child), graph._node(parent)
            label = f"{format_name(child)} -> {format_name(parent)}"
            if child == parent:
                msg = f"The edge {label} is a self loop."
                logger.error(msg)
                raise SelfLoop(msg)
            if parent in graph._parents[child]:
                msg = f"The graph already has the edge {label}."
                logger.error(msg)
                raise DuplicateEdge(msg)
            graph._parents[child].add(parent)
            graph._children[parent].add(child)
        graph.version = version
        graph._memo_version = version
        return graph

    def subscribe(self, callback):
        """Register callback(changes) to be called before every mutation."""
        self._listeners.append(callback)

    def unsubscribe(self, callback):
        self._listeners.remove(callback)

    def _commit(self, changes, apply):
        r"""
        Publish a mutation to the listeners, then apply it.

        Parameters
        ----------
        changes : list
            :code:`(op, operands)` pairs, they are numbered with the graph
            versions following the current one.

        apply : callable
            Changes the graph state, must not fail.

        Note
        ----
        A raising listener rejects the whole mutation and the graph stays
        unchanged.
        """
        numbered = [
            (self.version + i, op, operands)
            for i, (op, operands) in enumerate(changes, start=1)
        ]
        for callback in list(self._listeners):
            callback(numbered)
        apply()
        self.version += len(numbered)
        self._memo = {}
        for version, op, operands in numbered:
            logger.debug(f"{op} {' '.join(operands)} (graph version {version}).")

    def _node(self, key):
        key = as_item(key)
        if key not in self._own:
            msg = f"The graph has no node {format_name(key)}."
            logger.error(msg)
            raise UnknownNode(msg)
        return key

    def __contains__(self, key):
        try:
            return as_item(key) in self._own
        except MalformedName:
            return False

    def __len__(self):
        return len(self._own)

    def node_keys(self):
        """Return all node keys sorted by their canonical string."""
        return sorted(self._own, key=format_name)

    def edges(self):
        """Return all :code:`(child, parent)` pairs sorted canonically."""
        pairs = [
            (child, parent)
            for child, parents in self._parents.items() for parent in parents
        ]
        return sorted(pairs, key=lambda e: (format_name(e[0]), format_name(e[1])))

    def own_set(self, key):
        """Return the node's own permission set."""
        return self._own[self._node(key)]

    def parents(self, key):
        """Return the nodes the node inherits from (edge targets)."""
        return sorted(self._parents[self._node(key)], key=format_name)

    def children(self, key):
        """Return the nodes inheriting from the node (edge sources)."""
        return sorted(self._children[self._node(key)], key=format_name)

    def consumers(self):
        """Return the nodes without incoming edges."""
        return sorted(
            (k for k, children in self._children.items() if not children),
            key=format_name
        )

    def is_consumer(self, key):
        return not self._children[self._node(key)]

    def roots(self):
        """Return the nodes without outgoing edges."""
        return sorted(
            (k for k, parents in self._parents.items() if not parents),
            key=format_name
        )

    def add_node(self, key, own=None):
        r"""
        Add a node to the graph.

        Parameters
        ----------
        key : str, ResourceName
            Item name of the node.

        own : PermissionSet, iterable
            The node's own entries, canonical strings or resource names.

        Note
        ----
        The node and every own entry are committed as one mutation of
        separate changes, so the version grows by one plus the number of own
        entries.
        """
        key = as_item(key)
        own = self._as_set(key, own)
        with self._lock:
            if key in self._own:
                msg = f"The graph already has a node {format_name(key)}."
                logger.error(msg)
                raise DuplicateNode(msg)
            name = format_name(key)
            # one grant per own entry, journal records carry two operands max
            changes = [('add_node', (name,))] + [
                ('grant', (name, format_name(entry))) for entry in own
            ]

            def apply():
                self._own[key] = own
                self._parents[key] = set()
                self._children[key] = set()

            self._commit(changes, apply)

    def _as_set(self, key, own):
        if own is None:
            return PermissionSet()
        if isinstance(own, PermissionSet):
            return own
        entries = [as_entry(e) for e in own]
        items = [format_name(e) for e in entries if e.is_item]
        if items:
            msg = (
                f"The own set of node {format_name(key)} must not hold item "
                f"names: {', '.join(items)}."
            )
            logger.error(msg)
            raise ItemEntryInSet(msg)
        return algebra.normalize(entries, self.order)

    def remove_node(self, key):
        """Remove a node without incident edges."""
        with self._lock:
            key = self._node(key)
            if self._parents[key] or self._children[key]:
                msg = (
                    f"The node {format_name(key)} still has "
                    f"{len(self._parents[key]) + len(self._children[key])} "
                    "incident edges, remove them first."
                )
                logger.error(msg)
                raise NodeHasEdges(msg)

            def apply():
                del self._own[key], self._parents[key], self._children[key]

            self._commit([('remove_node', (format_name(key),))], apply)

    def add_edge(self, child, parent):
        r"""
        Let child inherit from parent.

        The edge is only added if the graph stays acyclic, a rejected call
        leaves the graph unchanged.

        Example
        -------
        >>> from pmspy.graphs import PermissionGraph
        >>> g = PermissionGraph()
        >>> for n in ['rn:n:a:x', 'rn:n:b:x', 'rn:n:c:x']:
        ...     g.add_node(n)
        >>> g.add_edge('rn:n:a:x', 'rn:n:b:x')
        >>> g.add_edge('rn:n:b:x', 'rn:n:c:x')
        >>> g.add_edge('rn:n:c:x', 'rn:n:a:x')
        Traceback (most recent call last):
        ...
        pmspy.tools.helpers.CycleRejected: The edge rn:n:c:x -> rn:n:a:x would close a directed cycle.
        >>> g.version
        5
        """
        with self._lock:
            child, parent = self._node(child), self._node(parent)
            label = f"{format_name(child)} -> {format_name(parent)}"
            if child == parent:
                msg = f"The edge {label} is a self loop."
                logger.error(msg)
                raise SelfLoop(msg)
            if parent in self._parents[child]:
                msg = f"The graph already has the edge {label}."
                logger.error(msg)
                raise DuplicateEdge(msg)
            if self._reaches(parent, child):
                msg = f"The edge {label} would close a directed cycle."
                logger.error(msg)
                raise CycleRejected(msg)

            def apply():
                self._parents[child].add(parent)
                self._children[parent].add(child)

            self._commit(
                [('add_edge', (format_name(child), format_name(parent)))], apply
            )

    def _reaches(self, start, target):
        # depth first search along outgoing edges
        stack, seen = [start], {start}
        while stack:
            node = stack.pop()
            if node == target:
                return True
            for nxt in self._parents[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return False

    def remove_edge(self, child, parent):
        """Remove the edge child -> parent."""
        with self._lock:
            child, parent = self._node(child), self._node(parent)
            if parent not in self._parents[child]:
                msg = (
                    f"The graph has no edge {format_name(child)} -> "
                    f"{format_name(parent)}."
                )
                logger.error(msg)
                raise UnknownEdge(msg)

            def apply():
                self._parents[child].discard(parent)
                self._children[parent].discard(child)

            self._commit(
                [('remove_edge', (format_name(child), format_name(parent)))],
                apply
            )

    def grant(self, key, entry):
        r"""
        Insert a permission entry into a node's own set.

        A collision with an existing entry of the same key resolves to the
        greater entry.
        """
        entry = as_entry(entry)
        with self._lock:
            key = self._node(key)
            own = self._own[key].with_entry(entry, self.order)

            def apply():
                self._own[key] = own

            self._commit(
                [('grant', (format_name(key), format_name(entry)))], apply
            )

    def revoke(self, key, entry_key):
        r"""
        Delete an entry from a node's own set.

        Parameters
        ----------
        key : str, ResourceName
            The node.

        entry_key : tuple, str, ResourceName
            The :code:`(base, identifier, scope)` of the entry, or any
            resource name sharing it.
        """
        if not isinstance(entry_key, tuple):
            entry_key = as_entry(entry_key).key
        with self._lock:
            key = self._node(key)
            if entry_key not in self._own[key]:
                msg = (
                    f"The node {format_name(key)} has no own entry for "
                    f"{format_name(ResourceName(*entry_key))}."
                )
                logger.error(msg)
                raise UnknownEntry(msg)
            own = self._own[key].without_key(entry_key)

            def apply():
                self._own[key] = own

            name = format_name(ResourceName(*entry_key))
            self._commit([('revoke', (format_name(key), name))], apply)

    def clear_memo(self):
        """Drop the memoized effective sets, e.g. for timing a full sweep."""
        with self._lock:
            self._memo = {}
            self._memo_version = self.version

    def _memo_for_version(self):
        if self._memo_version != self.version:
            self._memo = {}
            self._memo_version = self.version
        return self._memo

    def effective_set(self, key):
        r"""
        Return the effective permission set of a node.

        The node's own set overwrites the unite of the effective sets of its
        parents. Results are memoized per graph version, every reachable node
        is evaluated once.
        """
        with self._lock:
            key = self._node(key)
            memo = self._memo_for_version()
            if key in memo:
                return memo[key]
            # iterative post order along outgoing edges
            stack = [(key, False)]
            while stack:
                node, expanded = stack.pop()
                if node in memo:
                    continue
                if expanded:
                    memo[node] = algebra.aggregate_node(
                        self._own[node],
                        [memo[p] for p in self._parents[node]],
                        self.order
                    )
                    continue
                stack.append((node, True))
                for parent in self._parents[node]:
                    if parent not in memo:
                        stack.append((parent, False))
            return memo[key]

    def topological_order(self):
        """Return the nodes with every node after all of its parents."""
        remaining = {k: len(parents) for k, parents in self._parents.items()}
        ready = [k for k, n in remaining.items() if n == 0]
        order = []
        while ready:
            node = ready.pop()
            order.append(node)
            for child in self._children[node]:
                remaining[child] -= 1
                if remaining[child] == 0:
                    ready.append(child)
        return order

    def effective_all(self):
        r"""
        Return the effective set of every node.

        One sweep in topological order aggregates each node from its parents'
        final sets and counts the conflicts met on the way.

        Returns
        -------
        effective : dict
            Node key to effective PermissionSet.
        """
        with self._lock:
            memo = self._memo_for_version()
            conflicts = 0
            for node in self.topological_order():
                result, n = algebra.aggregate_node_counted(
                    self._own[node],
                    [memo[p] for p in self._parents[node]],
                    self.order
                )
                memo[node] = result
                conflicts += n
            self._last_conflicts = conflicts
            return {k: memo[k] for k in self.node_keys()}

    def oracle_effective(self, key):
        """Evaluate a node by plain unmemoized recursion, for verification."""
        key = self._node(key)
        return algebra.aggregate_node(
            self._own[key],
            [self.oracle_effective(p) for p in self._parents[key]],
            self.order
        )

    def has_cycle(self):
        """Return True if a full scan finds a directed cycle."""
        return len(self.topological_order()) != len(self._own)

    def stats(self):
        """Return the size parameters of the graph."""
        n = len(self._own)
        entries = sum(len(ps) for ps in self._own.values())
        return GraphStats(
            node_count=n,
            edge_count=sum(len(p) for p in self._parents.values()),
            avg_entries=entries / n if n else 0.0,
            conflict_count=self._last_conflicts
        )

    def content_equals(self, other):
        """Compare nodes, own sets, edges and version of two graphs."""
        return (
            self.version == other.version
            and self.order == other.order
            and self._own == other._own
            and self._parents == other._parents
        )

    def to_frame(self):
        r"""
        Return a DataFrame describing every node.

        Columns are the number of own entries, the number of parents and
        children and the consumer flag, the index holds the canonical keys.
        """
        keys = self.node_keys()
        return pd.DataFrame(
            {
                'entries': [len(self._own[k]) for k in keys],
                'parents': [len(self._parents[k]) for k in keys],
                'children': [len(self._children[k]) for k in keys],
                'consumer': [not self._children[k] for k in keys],
            },
            index=pd.Index([format_name(k) for k in keys], name='node'),
        )
