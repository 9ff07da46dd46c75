# -*- coding: utf-8

"""Module for access decisions.

A Permission Enforcement Point asks whether a consumer may take an action on
a resource, the answer is either GRANTED or UNAUTHORIZED and is computed from
the consumer's effective permission set.

SPDX-License-Identifier: MIT
"""
from dataclasses import dataclass
from typing import Optional

from pmspy.graphs.graph import as_item
from pmspy.permissions.resource_name import CondValue
from pmspy.permissions.resource_name import Level
from pmspy.permissions.resource_name import ResourceName
from pmspy.permissions.resource_name import format_name
from pmspy.permissions.resource_name import parse_name
from pmspy.tools import logger
from pmspy.tools.global_vars import GRANTED
from pmspy.tools.global_vars import REASONS
from pmspy.tools.global_vars import UNAUTHORIZED
from pmspy.tools.helpers import MalformedName
from pmspy.tools.helpers import NotAConsumer
from pmspy.tools.helpers import UnknownConsumer


@dataclass(frozen=True)
class AccessRequest:
    r"""
    Request of a consumer to act on a resource.

    Parameters
    ----------
    consumer : str, ResourceName
        Item name of the requesting consumer node.

    base, identifier, scope : str
        Tokens naming the resource.

    level : str, Level
        Requested privilege.

    value : CondValue
        Requested condition magnitude, optional.

    Example
    -------
    >>> from pmspy.decisions import AccessRequest
    >>> req = AccessRequest.from_names(
    ...     'rn:alice:1:user', 'rn:door:7:open:view:integer:45')
    >>> req.canonical()
    'rn:door:7:open:view:integer:45'
    >>> req.key
    ('door', '7', 'open')
    """

    consumer: ResourceName
    base: str
    identifier: str
    scope: str
    level: Level
    value: Optional[CondValue] = None

    def __post_init__(self):
        object.__setattr__(self, 'consumer', as_item(self.consumer))
        object.__setattr__(self, 'level', Level.parse(self.level))
        # validates tokens and the value
        object.__setattr__(self, '_action', ResourceName(
            self.base, self.identifier, self.scope, self.level, self.value
        ))

    @classmethod
    def from_names(cls, consumer, action):
        """Build a request from a consumer key and a permission name."""
        if isinstance(action, str):
            action = parse_name(action)
        if action.is_item:
            msg = (
                f"The requested action {format_name(action)} needs a "
                "permission level."
            )
            logger.error(msg)
            raise MalformedName(msg)
        return cls(
            consumer, action.base, action.identifier, action.scope,
            action.level, action.value
        )

    @property
    def key(self):
        return (self.base, self.identifier, self.scope)

    @property
    def action(self):
        """The requested action as permission or conditional name."""
        return self._action

    def canonical(self):
        return format_name(self._action)


@dataclass(frozen=True)
class Decision:
    r"""
    Outcome of an access check.

    Parameters
    ----------
    outcome : str
        Exactly :code:`'GRANTED'` or :code:`'UNAUTHORIZED'`.

    reason : str
        :code:`'granted'` or the most specific failing check, one of
        :code:`'no-matching-key'`, :code:`'insufficient-level'`,
        :code:`'value-kind-mismatch'`, :code:`'condition-exceeded'`.

    matched_entry : ResourceName
        The effective entry that granted the request, only for GRANTED.
    """

    outcome: str
    reason: str
    matched_entry: Optional[ResourceName] = None

    def __post_init__(self):
        if self.outcome not in (GRANTED, UNAUTHORIZED) or (
                self.reason not in REASONS):
            msg = f"Invalid decision {self.outcome} ({self.reason})."
            logger.error(msg)
            raise ValueError(msg)
        granted = self.outcome == GRANTED
        if granted != (self.reason == 'granted') or (
                granted != (self.matched_entry is not None)):
            msg = (
                f"A decision is GRANTED exactly when it carries a matched "
                f"entry and the reason granted, got {self.outcome} "
                f"({self.reason})."
            )
            logger.error(msg)
            raise ValueError(msg)

    @property
    def granted(self):
        return self.outcome == GRANTED

    @classmethod
    def deny(cls, reason):
        return cls(UNAUTHORIZED, reason)


def _consumer(graph, key):
    if key not in graph:
        msg = f"Unknown consumer {format_name(key)}."
        logger.error(msg)
        raise UnknownConsumer(msg)
    if not graph.is_consumer(key):
        heirs = ', '.join(format_name(c) for c in graph.children(key))
        msg = (
            f"The node {format_name(key)} is not a consumer, it is inherited "
            f"by {heirs}."
        )
        logger.error(msg)
        raise NotAConsumer(msg)
    return key


def judge(effective, req, order):
    r"""
    Judge a request against an effective permission set.

    Parameters
    ----------
    effective : PermissionSet
        Effective set of the requesting consumer.

    req : AccessRequest
        The request.

    order : LevelOrder
        Level order of the graph.

    Returns
    -------
    decision : Decision
        The key match is checked first, then the level, then the value kind
        and finally the value. An absent value on either side passes the
        value checks.

    Example
    -------
    >>> from pmspy.decisions import AccessRequest, judge
    >>> from pmspy.permissions import PermissionSet
    >>> from pmspy.permissions.resource_name import DEFAULT_ORDER
    >>> s = PermissionSet.from_strings(['rn:door:7:open:view:integer:30'])
    >>> req = AccessRequest.from_names(
    ...     'rn:alice:1:user', 'rn:door:7:open:view:integer:45')
    >>> judge(s, req, DEFAULT_ORDER).reason
    'condition-exceeded'
    """
    entry = effective.get(req.key)
    if entry is None:
        return Decision.deny('no-matching-key')
    if order.compare(entry.level, req.level) < 0:
        return Decision.deny('insufficient-level')
    if req.value is not None and entry.value is not None:
        if entry.value.kind is not req.value.kind:
            return Decision.deny('value-kind-mismatch')
        if entry.value.compare(req.value) < 0:
            return Decision.deny('condition-exceeded')
    return Decision(GRANTED, 'granted', entry)


def check(graph, req):
    r"""
    Decide an access request.

    Parameters
    ----------
    graph : pmspy.graphs.graph.PermissionGraph
        The permission graph.

    req : AccessRequest
        The request, its consumer must be a consumer node of the graph.

    Returns
    -------
    decision : Decision
        GRANTED if the consumer's effective set holds an entry of the
        requested key with at least the requested level and, if both carry
        one, a value of the same kind at least as large as the requested one.

    Example
    -------
    >>> from pmspy.graphs import PermissionGraph
    >>> from pmspy.decisions import AccessRequest, check
    >>> g = PermissionGraph()
    >>> g.add_node('rn:alice:1:user', ['rn:cam:42:stream:edit'])
    >>> d = check(g, AccessRequest.from_names(
    ...     'rn:alice:1:user', 'rn:cam:42:stream:view'))
    >>> d.outcome, d.reason, str(d.matched_entry)
    ('GRANTED', 'granted', 'rn:cam:42:stream:edit')
    >>> check(g, AccessRequest.from_names(
    ...     'rn:alice:1:user', 'rn:cam:42:stream:admin')).reason
    'insufficient-level'
    """
    with graph._lock:
        consumer = _consumer(graph, req.consumer)
        effective = graph.effective_set(consumer)
        decision = judge(effective, req, graph.order)
        version = graph.version
    logger.debug(
        f"{decision.outcome} ({decision.reason}): {format_name(consumer)} "
        f"requests {req.canonical()} at graph version {version}."
    )
    return decision


def check_many(graph, requests):
    """Decide several requests against one graph version."""
    with graph._lock:
        return [check(graph, req) for req in requests]
