# -*- coding: utf-8

"""Module for the binary data permission flow.

A Permission Enforcement Point receives a request to act, asks the
permission management system for a decision and calls the action point only
if the answer is GRANTED. Otherwise UNAUTHORIZED is returned to the caller
and the action point is never contacted.

SPDX-License-Identifier: MIT
"""
from pmspy.tools import logger
from pmspy.tools.global_vars import GRANTED


class ActionPoint:
    r"""
    Protected service performing the requested actions.

    Parameters
    ----------
    label : str
        Name of the action point.

    perform : callable
        :code:`perform(request)` does the actual work, its return value is
        handed back to the caller. Default returns None.
    """

    def __init__(self, label, perform=None):
        self.label = label
        self.perform = perform
        self.invocations = 0
        self.performed = []

    def invoke(self, request):
        self.invocations += 1
        self.performed.append(request)
        logger.debug(
            f"Action point {self.label} performs {request.canonical()}."
        )
        return None if self.perform is None else self.perform(request)


class PermissionEnforcementPoint:
    r"""
    Gatekeeper in front of an action point.

    Parameters
    ----------
    decide : callable
        :code:`decide(request)` returns the outcome string of an
        AccessRequest, e.g. :code:`ServiceClient.decide`.

    action_point : ActionPoint
        The protected service.

    Example
    -------
    >>> from pmspy.decisions import AccessRequest
    >>> from pmspy.service import PermissionService
    >>> from pmspy.service.flow import ActionPoint, PermissionEnforcementPoint
    >>> from pmspy.tools.config import Config
    >>> pms = PermissionService(Config(use_env=False))
    >>> pms.apply('add_node', 'rn:alice:1:user', ['rn:cam:42:stream:view'])
    2
    >>> camera = ActionPoint('camera')
    >>> pep = PermissionEnforcementPoint(
    ...     lambda req: pms.check(req).outcome, camera)
    >>> pep.handle(AccessRequest.from_names(
    ...     'rn:alice:1:user', 'rn:cam:42:stream:edit'))
    ('UNAUTHORIZED', None)
    >>> pep.handle(AccessRequest.from_names(
    ...     'rn:alice:1:user', 'rn:cam:42:stream:view'))
    ('GRANTED', None)
    >>> camera.invocations
    1
    """

    def __init__(self, decide, action_point):
        self.decide = decide
        self.action_point = action_point

    def handle(self, request):
        r"""
        Handle a request to act.

        Returns
        -------
        result : tuple
            The outcome string and the action point's result, None for
            UNAUTHORIZED.
        """
        outcome = self.decide(request)
        if outcome != GRANTED:
            return outcome, None
        return outcome, self.action_point.invoke(request)
