# -*- coding: utf-8

"""Module for permission graph persistence.

A graph is persisted as a line oriented text snapshot plus an append only
journal of the accepted mutations since. Both formats use canonical resource
name strings only.

Snapshot file::

    pmsnap 1 <graph_version> <node_count> <edge_count>
    N <node-rn> <entry-rn> <entry-rn> ...
    E <child-rn> <parent-rn>

Journal file, one record per line::

    <seq> <unix-millis> <op> <operand-rn> [<operand-rn>]

The sequence number of a journal record is the graph version right after the
mutation it describes, which ties a journal to any snapshot of the same
graph.

SPDX-License-Identifier: MIT
"""
import os
import threading
import time
from dataclasses import dataclass

from pmspy.graphs.graph import PermissionGraph
from pmspy.graphs.graph import as_item
from pmspy.permissions import algebra
from pmspy.permissions.resource_name import format_name
from pmspy.permissions.resource_name import parse_name
from pmspy.tools import logger
from pmspy.tools.global_vars import JOURNAL_OPERATIONS
from pmspy.tools.global_vars import SNAPSHOT_FORMAT_VERSION
from pmspy.tools.global_vars import SNAPSHOT_MAGIC
from pmspy.tools.helpers import CorruptJournal
from pmspy.tools.helpers import CorruptSnapshot
from pmspy.tools.helpers import IoFailure
from pmspy.tools.helpers import PMSpyError
from pmspy.tools.helpers import SequenceGap
from pmspy.tools.helpers import unix_millis
from pmspy.tools.helpers import write_atomic


def dump_snapshot(graph):
    r"""
    Render the snapshot text of a graph.

    Parameters
    ----------
    graph : pmspy.graphs.graph.PermissionGraph
        Graph to render.

    Returns
    -------
    text : str
        Snapshot text, identical for graphs of identical content.

    Example
    -------
    >>> from pmspy.graphs import PermissionGraph
    >>> from pmspy.graphs.graph_store import dump_snapshot
    >>> g = PermissionGraph()
    >>> g.add_node('rn:alice:1:user')
    >>> g.add_node('rn:team:ops:role', ['rn:cam:42:stream:edit'])
    >>> g.add_edge('rn:alice:1:user', 'rn:team:ops:role')
    >>> print(dump_snapshot(g), end='')
    pmsnap 1 4 2 1
    N rn:alice:1:user
    N rn:team:ops:role rn:cam:42:stream:edit
    E rn:alice:1:user rn:team:ops:role
    """
    with graph._lock:
        keys = graph.node_keys()
        edges = graph.edges()
        lines = [
            f"{SNAPSHOT_MAGIC} {SNAPSHOT_FORMAT_VERSION} {graph.version} "
            f"{len(keys)} {len(edges)}"
        ]
        for key in keys:
            lines.append(
                ' '.join(['N', format_name(key)]
                         + graph.own_set(key).to_strings())
            )
        for child, parent in edges:
            lines.append(f"E {format_name(child)} {format_name(parent)}")
    return ''.join(line + '\n' for line in lines)


def save_snapshot(graph, destination):
    r"""
    Write the snapshot of a graph atomically.

    Parameters
    ----------
    graph : pmspy.graphs.graph.PermissionGraph
        Graph to save.

    destination : str
        Path of the snapshot file.
    """
    text = dump_snapshot(graph)
    try:
        write_atomic(destination, text)
    except OSError as err:
        msg = f"Could not write the snapshot {destination}: {err}"
        logger.error(msg)
        raise IoFailure(msg) from err
    logger.debug(
        f"Saved graph version {graph.version} ({len(graph)} nodes) to "
        f"{destination}."
    )


def _corrupt_snapshot(msg, err=None):
    logger.error(msg)
    raise CorruptSnapshot(msg) from err


def _parse_header(line):
    fields = line.split(' ')
    if len(fields) != 5 or fields[0] != SNAPSHOT_MAGIC:
        _corrupt_snapshot(f"Bad snapshot header '{line}'.")
    if fields[1] != str(SNAPSHOT_FORMAT_VERSION):
        _corrupt_snapshot(
            f"Unsupported snapshot format version {fields[1]}, expected "
            f"{SNAPSHOT_FORMAT_VERSION}."
        )
    try:
        numbers = [int(f) for f in fields[2:]]
    except ValueError as err:
        _corrupt_snapshot(f"Bad snapshot header '{line}'.", err)
    if any(n < 0 for n in numbers):
        _corrupt_snapshot(f"Bad snapshot header '{line}'.")
    return numbers


def parse_snapshot(text, order=None):
    r"""
    Rebuild a graph from snapshot text.

    Parameters
    ----------
    text : str
        Snapshot text as written by :func:`dump_snapshot`.

    order : LevelOrder, list
        Level order of the rebuilt graph.

    Returns
    -------
    graph : pmspy.graphs.graph.PermissionGraph
        Graph with the stored content and version, no listeners and no
        memoized sets.
    """
    lines = text.split('\n')
    if lines and lines[-1] == '':
        lines.pop()
    if not lines:
        _corrupt_snapshot("The snapshot is empty.")

    version, node_count, edge_count = _parse_header(lines[0])
    template = PermissionGraph(order)

    own, edges = {}, []
    for number, line in enumerate(lines[1:], start=2):
        fields = line.split(' ')
        try:
            if fields[0] == 'N' and len(fields) >= 2:
                key = as_item(fields[1])
                if key in own:
                    _corrupt_snapshot(
                        f"Line {number}: node {fields[1]} is stored twice."
                    )
                entries = [parse_name(f) for f in fields[2:]]
                ps = algebra.normalize(entries, template.order)
                if len(ps) != len(entries):
                    _corrupt_snapshot(
                        f"Line {number}: the entries of node {fields[1]} "
                        "conflict with each other."
                    )
                own[key] = ps
            elif fields[0] == 'E' and len(fields) == 3:
                edges.append((as_item(fields[1]), as_item(fields[2])))
            else:
                _corrupt_snapshot(f"Line {number}: bad record '{line}'.")
        except CorruptSnapshot:
            raise
        except PMSpyError as err:
            _corrupt_snapshot(
                f"Line {number}: bad record '{line}': {err}", err
            )

    if len(own) != node_count or len(edges) != edge_count:
        _corrupt_snapshot(
            f"The snapshot header announces {node_count} nodes and "
            f"{edge_count} edges, found {len(own)} and {len(edges)}."
        )

    try:
        graph = PermissionGraph.restore(own, edges, version, template.order)
    except PMSpyError as err:
        _corrupt_snapshot(f"Inconsistent snapshot edges: {err}", err)
    if graph.has_cycle():
        _corrupt_snapshot("The snapshot edges contain a directed cycle.")
    return graph


def load_snapshot(source, order=None):
    r"""
    Load a graph from a snapshot file.

    Parameters
    ----------
    source : str
        Path of the snapshot file.

    order : LevelOrder, list
        Level order of the loaded graph, default view < edit < admin.

    Returns
    -------
    graph : pmspy.graphs.graph.PermissionGraph
    """
    try:
        with open(source, 'r', encoding='utf-8', newline='\n') as f:
            text = f.read()
    except OSError as err:
        msg = f"Could not read the snapshot {source}: {err}"
        logger.error(msg)
        raise IoFailure(msg) from err
    except UnicodeDecodeError as err:
        _corrupt_snapshot(
            f"The snapshot {source} is not UTF-8 text: {err}", err
        )
    graph = parse_snapshot(text, order)
    logger.debug(
        f"Loaded graph version {graph.version} ({len(graph)} nodes) from "
        f"{source}."
    )
    return graph


@dataclass(frozen=True)
class JournalRecord:
    """One accepted graph mutation."""

    seq: int
    millis: int
    op: str
    operands: tuple

    def render(self):
        return ' '.join(
            [str(self.seq), str(self.millis), self.op, *self.operands]
        )

    @classmethod
    def parse(cls, line):
        r"""
        Parse one journal line.

        Example
        -------
        >>> from pmspy.graphs.graph_store import JournalRecord
        >>> line = '7 1700000000000 grant rn:a:1:x rn:c:4:s:view'
        >>> r = JournalRecord.parse(line)
        >>> r.op, r.operands
        ('grant', ('rn:a:1:x', 'rn:c:4:s:view'))
        >>> r.render() == line
        True
        """
        fields = line.split(' ')
        if len(fields) < 4 or fields[2] not in JOURNAL_OPERATIONS:
            msg = f"Bad journal record '{line}'."
            logger.error(msg)
            raise CorruptJournal(msg)
        op, operands = fields[2], tuple(fields[3:])
        if len(operands) != JOURNAL_OPERATIONS[op]:
            msg = (
                f"The journal operation {op} takes {JOURNAL_OPERATIONS[op]} "
                f"operands, got {len(operands)} in '{line}'."
            )
            logger.error(msg)
            raise CorruptJournal(msg)
        try:
            seq, millis = int(fields[0]), int(fields[1])
        except ValueError as err:
            msg = f"Bad journal record '{line}'."
            logger.error(msg)
            raise CorruptJournal(msg) from err
        return cls(seq, millis, op, operands)


def read_journal(path):
    """Return the records of a journal file."""
    try:
        with open(path, 'r', encoding='utf-8', newline='\n') as f:
            lines = f.read().split('\n')
    except OSError as err:
        msg = f"Could not read the journal {path}: {err}"
        logger.error(msg)
        raise IoFailure(msg) from err
    except UnicodeDecodeError as err:
        msg = f"The journal {path} is not UTF-8 text: {err}"
        logger.error(msg)
        raise CorruptJournal(msg) from err
    return [JournalRecord.parse(line) for line in lines if line]


class Journal:
    r"""
    Append only journal of accepted graph mutations.

    Parameters
    ----------
    path : str
        Journal file, records are appended to it and the existing records are
        read on construction. :code:`None` keeps the journal in memory.

    clock : callable
        Returns the current time in seconds since the epoch.

    Example
    -------
    Attached to a graph, the journal records every accepted mutation with the
    graph version as sequence number. Rejected mutations leave no record.

    >>> from pmspy.graphs import Journal, PermissionGraph
    >>> g = PermissionGraph()
    >>> journal = Journal(clock=lambda: 1700000000.0)
    >>> journal.attach(g)
    >>> g.add_node('rn:a:1:x', ['rn:cam:42:stream:view'])
    >>> g.add_node('rn:a:1:x')
    Traceback (most recent call last):
    ...
    pmspy.tools.helpers.DuplicateNode: The graph already has a node rn:a:1:x.
    >>> for record in journal:
    ...     print(record.render())
    1 1700000000000 add_node rn:a:1:x
    2 1700000000000 grant rn:a:1:x rn:cam:42:stream:view
    """

    def __init__(self, path=None, clock=time.time):
        self.path = path
        self.clock = clock
        self._records = []
        self._graph = None
        self._lock = threading.Lock()
        if path is not None and os.path.exists(path):
            for record in read_journal(path):
                self._check_sequence(record)
                self._records.append(record)

    def __iter__(self):
        return iter(list(self._records))

    def __len__(self):
        return len(self._records)

    @property
    def last_seq(self):
        return self._records[-1].seq if self._records else None

    def _check_sequence(self, record, last=None):
        if last is None:
            last = self.last_seq
        if last is not None and record.seq != last + 1:
            msg = (
                f"Journal record {record.seq} does not follow record {last}."
            )
            logger.error(msg)
            raise SequenceGap(msg)

    def append(self, record):
        r"""
        Append a record to the journal.

        Parameters
        ----------
        record : JournalRecord
            Record with the sequence number following the last record.
        """
        self.extend([record])

    def extend(self, records):
        r"""
        Append consecutive records with a single write.

        Parameters
        ----------
        records : list
            :code:`JournalRecord` objects continuing the last record. Nothing
            is kept if the sequence is broken or the file write fails.
        """
        with self._lock:
            last = self.last_seq
            for record in records:
                self._check_sequence(record, last)
                last = record.seq
            if self.path is not None:
                try:
                    with open(self.path, 'a', encoding='utf-8',
                              newline='\n') as f:
                        f.write(''.join(r.render() + '\n' for r in records))
                        f.flush()
                        os.fsync(f.fileno())
                except OSError as err:
                    msg = f"Could not append to the journal {self.path}: {err}"
                    logger.error(msg)
                    raise IoFailure(msg) from err
            self._records.extend(records)

    def record(self, seq, op, *operands):
        """Create and append the record of one mutation."""
        record = JournalRecord(seq, unix_millis(self.clock), op, operands)
        self.append(record)
        return record

    def _on_mutation(self, changes):
        millis = unix_millis(self.clock)
        self.extend([
            JournalRecord(seq, millis, op, tuple(operands))
            for seq, op, operands in changes
        ])

    def attach(self, graph):
        """Record every accepted mutation of graph from now on."""
        self.detach()
        self._graph = graph
        graph.subscribe(self._on_mutation)

    def detach(self):
        if self._graph is not None:
            self._graph.unsubscribe(self._on_mutation)
            self._graph = None

    def records_after(self, seq):
        """Return the records with a sequence number above seq."""
        return [r for r in self._records if r.seq > seq]


def _apply(graph, record):
    try:
        getattr(graph, record.op)(*record.operands)
    except PMSpyError as err:
        msg = f"Journal record {record.seq} ({record.op}) was rejected: {err}"
        logger.error(msg)
        raise CorruptJournal(msg) from err
    if graph.version != record.seq:
        msg = (
            f"Journal record {record.seq} leads to graph version "
            f"{graph.version}."
        )
        logger.error(msg)
        raise CorruptJournal(msg)


def replay(base, journal, order=None):
    r"""
    Apply journal records on top of a base graph.

    Parameters
    ----------
    base : str, pmspy.graphs.graph.PermissionGraph
        Snapshot path or graph, a graph is copied and left unchanged.

    journal : str, Journal, list
        Journal path, journal or list of :code:`JournalRecord`.

    order : LevelOrder, list
        Level order used when loading base from a path.

    Returns
    -------
    graph : pmspy.graphs.graph.PermissionGraph
        The base graph with every record newer than its version applied.

    Note
    ----
    Records already contained in the base (sequence number up to the base
    version) are skipped, the remaining records must continue the base
    version without gaps. Records go through the regular mutation methods,
    a record the graph rejects means the journal is corrupt.
    """
    if isinstance(base, PermissionGraph):
        graph = parse_snapshot(dump_snapshot(base), base.order)
    else:
        graph = load_snapshot(base, order)

    if isinstance(journal, str):
        records = read_journal(journal)
    else:
        records = list(journal)

    applied, previous = 0, None
    for record in records:
        if previous is not None and record.seq <= previous:
            msg = (
                f"Journal record {record.seq} is out of order after record "
                f"{previous}."
            )
            logger.error(msg)
            raise SequenceGap(msg)
        previous = record.seq
        if record.seq <= graph.version:
            continue
        if record.seq != graph.version + 1:
            msg = (
                f"Journal record {record.seq} cannot follow graph version "
                f"{graph.version}."
            )
            logger.error(msg)
            raise SequenceGap(msg)
        _apply(graph, record)
        applied += 1
    logger.debug(
        f"Replayed {applied} journal records up to graph version "
        f"{graph.version}."
    )
    return graph
