# -*- coding: utf-8

"""Module for testing the enforcement flow in front of an action point.

SPDX-License-Identifier: MIT
"""
import random

from pmspy.decisions import AccessRequest
from pmspy.service import PermissionService
from pmspy.service.flow import ActionPoint
from pmspy.service.flow import PermissionEnforcementPoint
from pmspy.tools.config import Config
from pmspy.tools.global_vars import GRANTED
from pmspy.tools.global_vars import UNAUTHORIZED

CONSUMERS = ['rn:alice:1:user', 'rn:bob:2:user', 'rn:carol:3:user']
ACTIONS = [
    'rn:cam:42:stream:view', 'rn:cam:42:stream:edit',
    'rn:cam:42:stream:admin', 'rn:door:7:open:view:integer:20',
    'rn:door:7:open:view:integer:80', 'rn:vault:9:read:view',
]


class TestFlow:

    def setup_method(self):
        self.pms = PermissionService(Config(use_env=False))
        apply = self.pms.apply
        apply('add_node', 'rn:alice:1:user', ['rn:cam:42:stream:edit'])
        apply('add_node', 'rn:bob:2:user')
        apply('add_node', 'rn:carol:3:user', ['rn:vault:9:read:view'])
        apply('add_node', 'rn:team:ops:role', [
            'rn:cam:42:stream:view', 'rn:door:7:open:view:integer:50'
        ])
        apply('add_edge', 'rn:alice:1:user', 'rn:team:ops:role')
        apply('add_edge', 'rn:bob:2:user', 'rn:team:ops:role')
        self.camera = ActionPoint('camera', perform=lambda req: 'done')
        self.pep = PermissionEnforcementPoint(
            lambda req: self.pms.check(req).outcome, self.camera
        )

    def test_single_requests(self):
        granted = AccessRequest.from_names(
            'rn:bob:2:user', 'rn:door:7:open:view:integer:20'
        )
        refused = AccessRequest.from_names(
            'rn:bob:2:user', 'rn:cam:42:stream:edit'
        )
        assert self.pep.handle(granted) == (GRANTED, 'done')
        assert self.pep.handle(refused) == (UNAUTHORIZED, None)
        assert self.camera.performed == [granted]

    def test_random_requests(self):
        rng = random.Random(31)
        outcomes, per_consumer = [], {c: [] for c in CONSUMERS}
        for _ in range(1000):
            consumer = rng.choice(CONSUMERS)
            request = AccessRequest.from_names(consumer, rng.choice(ACTIONS))
            outcome, _ = self.pep.handle(request)
            outcomes.append(outcome)
            per_consumer[consumer].append(outcome)
        grants = outcomes.count(GRANTED)
        msg = (
            f'The action point ran {self.camera.invocations} times for '
            f'{grants} granted requests.'
        )
        assert self.camera.invocations == grants, msg
        assert 0 < grants < len(outcomes)
        msg = 'Every check must leave exactly one audit record.'
        assert len(self.pms.audit) == len(outcomes), msg
        assert [r.outcome for r in self.pms.audit.records()] == outcomes
        indexed = {
            c: self.pms.audit.query_by_consumer(c) for c in CONSUMERS
        }
        msg = 'Every check must be retrievable through its consumer.'
        assert sum(len(r) for r in indexed.values()) == len(outcomes), msg
        for consumer, records in indexed.items():
            assert [r.outcome for r in records] == per_consumer[consumer], msg
            assert all(r.consumer == consumer for r in records)
