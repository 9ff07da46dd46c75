# -*- coding: utf-8

"""Module for short lived key issuance.

An action point holding encrypted data asks the permission management system
for a key on behalf of a consumer. A key is only issued after the underlying
access check returned GRANTED, it is valid for a fixed lifetime and is
replaced by the next key issued to the same action point and consumer.

The key material is random opaque bytes, no encryption scheme is attached.

SPDX-License-Identifier: MIT
"""
import secrets
import threading
import time

from pmspy.permissions.resource_name import format_name
from pmspy.tools import logger
from pmspy.tools.data_containers import KeyGrant
from pmspy.tools.global_vars import KEY_EXPIRED
from pmspy.tools.global_vars import KEY_UNKNOWN
from pmspy.tools.global_vars import KEY_VALID
from pmspy.tools.helpers import Unauthorized
from pmspy.tools.helpers import UnknownKey


class KeyIssuer:
    r"""
    Issue and verify short lived keys.

    Parameters
    ----------
    decide : callable
        :code:`decide(request)` returns the Decision of an AccessRequest,
        e.g. :code:`PermissionService.check`, which also audits it.

    ttl : float
        Key lifetime in seconds.

    clock : callable
        Returns the current time in seconds since the epoch.

    Example
    -------
    >>> from functools import partial
    >>> from pmspy.decisions import AccessRequest, check
    >>> from pmspy.graphs import PermissionGraph
    >>> from pmspy.service.keys import KeyIssuer
    >>> g = PermissionGraph()
    >>> g.add_node('rn:alice:1:user', ['rn:vault:9:read:view'])
    >>> now = [1000.0]
    >>> issuer = KeyIssuer(partial(check, g), ttl=300, clock=lambda: now[0])
    >>> grant = issuer.issue_key('ap-1', AccessRequest.from_names(
    ...     'rn:alice:1:user', 'rn:vault:9:read:view'))
    >>> grant.expires_at - grant.issued_at
    300.0
    >>> issuer.verify_key(grant.key_id)
    'valid'
    >>> now[0] = 1300.0
    >>> issuer.verify_key(grant.key_id)
    'expired'
    >>> issuer.verify_key('no-such-key')
    'unknown'
    """

    def __init__(self, decide, ttl=300, clock=time.time):
        self.decide = decide
        self.ttl = float(ttl)
        self.clock = clock
        self._grants = {}
        self._current = {}
        self._lock = threading.Lock()

    def issue_key(self, action_point, request):
        r"""
        Issue a key for an authorized request.

        Parameters
        ----------
        action_point : str
            Identifier of the action point the key is issued to.

        request : pmspy.decisions.decision.AccessRequest
            The action the key unlocks.

        Returns
        -------
        grant : pmspy.tools.data_containers.KeyGrant
            Fresh grant expiring :code:`ttl` seconds after issue.
        """
        if not isinstance(action_point, str) or not action_point:
            msg = "The action point id must be a non empty string."
            logger.error(msg)
            raise ValueError(msg)
        decision = self.decide(request)
        consumer = format_name(request.consumer)
        if not decision.granted:
            msg = (
                f"No key for {consumer} at {action_point}, the request "
                f"{request.canonical()} was refused ({decision.reason})."
            )
            logger.error(msg)
            raise Unauthorized(msg)

        now = self.clock()
        grant = KeyGrant(
            key_id=secrets.token_urlsafe(16),
            public_key=secrets.token_bytes(32),
            issued_at=now,
            expires_at=now + self.ttl,
            action_point=action_point,
            consumer=consumer,
        )
        with self._lock:
            previous = self._current.get((action_point, consumer))
            if previous is not None:
                previous.set_attr(superseded=True)
            self._current[(action_point, consumer)] = grant
            self._grants[grant.key_id] = grant
        logger.debug(
            f"Issued key {grant.key_id} to {action_point} for {consumer}, "
            f"valid until {grant.expires_at}."
        )
        return grant

    def get_grant(self, key_id):
        """Return the grant of key_id or None."""
        with self._lock:
            return self._grants.get(key_id)

    def verify_key(self, key_id):
        r"""
        Return the state of a key.

        Returns
        -------
        state : str
            :code:`'valid'` before expiry, :code:`'expired'` at or after
            expiry or once superseded, :code:`'unknown'` for ids never issued.
        """
        grant = self.get_grant(key_id)
        if grant is None:
            return KEY_UNKNOWN
        return KEY_VALID if grant.is_valid(self.clock()) else KEY_EXPIRED

    def revoke_key(self, key_id):
        """Supersede a key before its expiry."""
        with self._lock:
            grant = self._grants.get(key_id)
            if grant is None:
                msg = f"No key was issued under the id {key_id}."
                logger.error(msg)
                raise UnknownKey(msg)
            grant.set_attr(superseded=True)
        logger.debug(f"Revoked key {key_id}.")
