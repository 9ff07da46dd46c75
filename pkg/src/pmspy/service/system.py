# -*- coding: utf-8

"""Module for the permission management system.

The PermissionService ties the graph, its journal, the decision audit log
and the key issuer together. The HTTP application and the command line tool
are thin layers on top of it.

SPDX-License-Identifier: MIT
"""
import os
import threading
import time

from pmspy.decisions import decision
from pmspy.decisions.audit import AuditLog
from pmspy.graphs.graph import PermissionGraph
from pmspy.graphs.graph import as_item
from pmspy.graphs.graph_store import Journal
from pmspy.graphs.graph_store import load_snapshot
from pmspy.graphs.graph_store import replay
from pmspy.graphs.graph_store import save_snapshot
from pmspy.permissions.resource_name import format_name
from pmspy.service.keys import KeyIssuer
from pmspy.tools import logger
from pmspy.tools.config import Config
from pmspy.tools.global_vars import JOURNAL_OPERATIONS
from pmspy.tools.helpers import IoFailure
from pmspy.tools.helpers import UnknownConsumer


class PermissionService:
    r"""
    Class PermissionService is the permission management system.

    Parameters
    ----------
    config : pmspy.tools.config.Config
        Settings, default :code:`Config()`.

    graph : pmspy.graphs.graph.PermissionGraph
        Graph to serve. If not given, the graph is loaded from the configured
        snapshot and journal files, or starts empty.

    clock : callable
        Returns the current time in seconds since the epoch, used for
        journal and audit timestamps and key lifetimes.

    Note
    ----
    A failing audit append never blocks a decision. The failure is counted
    and reported by :meth:`health`.

    Example
    -------
    >>> from pmspy.service import PermissionService
    >>> from pmspy.tools.config import Config
    >>> pms = PermissionService(Config(use_env=False))
    >>> pms.apply('add_node', 'rn:alice:1:user')
    1
    >>> pms.apply('grant', 'rn:alice:1:user', 'rn:cam:42:stream:edit')
    2
    >>> pms.check_names('rn:alice:1:user', 'rn:cam:42:stream:view').outcome
    'GRANTED'
    >>> len(pms.audit.query_by_consumer('rn:alice:1:user'))
    1
    >>> pms.health()['audit_failures']
    0
    """

    def __init__(self, config=None, graph=None, clock=time.time):
        if config is None:
            config = Config()
        self.config = config
        self.clock = clock

        journal_path = config.get_attr('journal_path')
        if graph is None:
            graph = self._open_graph(config)
        self.graph = graph
        self.journal = Journal(journal_path, clock)
        self.journal.attach(self.graph)

        audit_path = config.get_attr('audit_path')
        if audit_path is None:
            self.audit = AuditLog(clock=clock)
        else:
            self.audit = AuditLog.load(audit_path, clock)
        self.keys = KeyIssuer(self.check, config.get_attr('key_ttl'), clock)

        self.audit_failures = 0
        self.last_audit_error = None
        # guards the two audit failure fields
        self._health_lock = threading.Lock()

    @staticmethod
    def _open_graph(config):
        order = config.levels()
        snapshot_path = config.get_attr('snapshot_path')
        journal_path = config.get_attr('journal_path')
        if snapshot_path is not None and os.path.exists(snapshot_path):
            graph = load_snapshot(snapshot_path, order)
        else:
            graph = PermissionGraph(order)
        if journal_path is not None and os.path.exists(journal_path):
            graph = replay(graph, journal_path)
        logger.info(
            f"Serving graph version {graph.version} with {len(graph)} nodes."
        )
        return graph

    def close(self):
        self.journal.detach()

    def check(self, request):
        r"""
        Decide an access request and audit the decision.

        Parameters
        ----------
        request : pmspy.decisions.decision.AccessRequest

        Returns
        -------
        decision : pmspy.decisions.decision.Decision
        """
        result = decision.check(self.graph, request)
        try:
            self.audit.record(request, result)
        except IoFailure as err:
            with self._health_lock:
                self.audit_failures += 1
                self.last_audit_error = str(err)
            logger.warning(
                f"Decision for {format_name(request.consumer)} was not "
                f"audited: {err}"
            )
        return result

    def check_names(self, consumer, action):
        """Decide the request of consumer for a permission name action."""
        return self.check(decision.AccessRequest.from_names(consumer, action))

    def apply(self, op, *operands):
        r"""
        Apply a graph mutation.

        Parameters
        ----------
        op : str
            One of :code:`add_node, remove_node, add_edge, remove_edge, grant,
            revoke`.

        *operands :
            Operands of the graph method, canonical strings or resource
            names.

        Returns
        -------
        version : int
            Graph version after the mutation.
        """
        if op not in JOURNAL_OPERATIONS:
            msg = f"Unknown graph mutation '{op}'."
            logger.error(msg)
            raise ValueError(msg)
        with self.graph._lock:
            getattr(self.graph, op)(*operands)
            return self.graph.version

    def effective(self, key):
        """Return the effective set of a node."""
        return self.graph.effective_set(key)

    def audit_records(self, consumer, start=None, end=None):
        r"""
        Return the audit records of a consumer.

        Unknown consumers, neither in the graph nor in the log, raise
        :code:`UnknownConsumer`.
        """
        consumer = format_name(as_item(consumer))
        if consumer not in self.graph and (
                consumer not in self.audit.consumers()):
            msg = f"Unknown consumer {consumer}."
            logger.error(msg)
            raise UnknownConsumer(msg)
        return self.audit.query_by_consumer(consumer, start, end)

    def issue_key(self, action_point, request):
        return self.keys.issue_key(action_point, request)

    def verify_key(self, key_id):
        return self.keys.verify_key(key_id)

    def revoke_key(self, key_id):
        self.keys.revoke_key(key_id)

    def save(self, destination=None):
        """Write a snapshot to destination or the configured snapshot path."""
        if destination is None:
            destination = self.config.get_attr('snapshot_path')
        if destination is None:
            msg = "No snapshot path given or configured."
            logger.error(msg)
            raise ValueError(msg)
        save_snapshot(self.graph, destination)
        return destination

    def health(self):
        r"""
        Return the service state.

        Returns
        -------
        health : dict
            Graph version, node count, audit record count, number of failed
            audit appends and the last audit error.
        """
        with self._health_lock:
            failures, error = self.audit_failures, self.last_audit_error
        return {
            'status': 'ok' if failures == 0 else 'degraded',
            'graph_version': self.graph.version,
            'nodes': len(self.graph),
            'audit_records': len(self.audit),
            'audit_failures': failures,
            'last_audit_error': error,
        }
