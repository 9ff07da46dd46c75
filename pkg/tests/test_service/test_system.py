# -*- coding: utf-8

"""Module for testing the permission service facade.

SPDX-License-Identifier: MIT
"""
import os
from concurrent.futures import ThreadPoolExecutor

from pytest import raises

from pmspy.decisions import AccessRequest
from pmspy.graphs import PermissionGraph
from pmspy.graphs.graph_store import read_journal
from pmspy.graphs.graph_store import replay
from pmspy.service import PermissionService
from pmspy.tools.config import Config
from pmspy.tools.helpers import IoFailure
from pmspy.tools.helpers import UnknownConsumer
from pmspy.tools.helpers import UnknownNode


def build(pms):
    pms.apply('add_node', 'rn:alice:1:user')
    pms.apply('add_node', 'rn:team:ops:role', ['rn:cam:42:stream:edit'])
    pms.apply('add_edge', 'rn:alice:1:user', 'rn:team:ops:role')


class TestPermissionService:

    def setup_method(self):
        self.pms = PermissionService(Config(use_env=False), clock=lambda: 5.0)
        build(self.pms)

    def test_apply(self):
        assert self.pms.graph.version == 4
        assert self.pms.apply(
            'grant', 'rn:alice:1:user', 'rn:door:7:open:view') == 5
        assert len(self.pms.journal) == 5

    def test_unknown_operation(self):
        with raises(ValueError):
            self.pms.apply('explode', 'rn:alice:1:user')

    def test_check_is_audited(self):
        decision = self.pms.check_names(
            'rn:alice:1:user', 'rn:cam:42:stream:view'
        )
        assert decision.granted
        records = self.pms.audit_records('rn:alice:1:user')
        assert [(r.millis, r.outcome) for r in records] == [(5000, 'GRANTED')]

    def test_audit_unknown_consumer(self):
        with raises(UnknownConsumer):
            self.pms.audit_records('rn:carol:3:user')
        msg = 'A known node without decisions has an empty audit trail.'
        assert self.pms.audit_records('rn:team:ops:role') == [], msg

    def test_effective(self):
        assert self.pms.effective('rn:alice:1:user').to_strings() == [
            'rn:cam:42:stream:edit'
        ]
        with raises(UnknownNode):
            self.pms.effective('rn:carol:3:user')

    def test_health(self):
        health = self.pms.health()
        assert health['status'] == 'ok'
        assert health['graph_version'] == 4
        assert health['nodes'] == 2

    def test_save_without_path(self):
        with raises(ValueError):
            self.pms.save()


class TestAuditFailure:

    def test_degraded(self, tmp_path):
        path = os.path.join(tmp_path, 'audit.log')
        pms = PermissionService(Config(use_env=False, audit_path=path))
        build(pms)
        pms.check_names('rn:alice:1:user', 'rn:cam:42:stream:view')
        os.remove(path)
        os.mkdir(path)
        decision = pms.check_names('rn:alice:1:user', 'rn:cam:42:stream:view')
        msg = 'A failing audit append must not block the decision.'
        assert decision.granted, msg
        health = pms.health()
        assert health['status'] == 'degraded'
        assert health['audit_failures'] == 1
        assert health['audit_records'] == 1
        assert health['last_audit_error']

    def test_concurrent_failures(self, tmp_path):
        path = os.path.join(tmp_path, 'audit.log')
        pms = PermissionService(Config(use_env=False, audit_path=path))
        build(pms)
        os.mkdir(path)

        def check(_):
            return pms.check_names(
                'rn:alice:1:user', 'rn:cam:42:stream:view'
            ).granted

        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(check, range(400)))
        assert all(results)
        msg = 'Every failed audit append must be counted exactly once.'
        assert pms.health()['audit_failures'] == 400, msg


class TestJournalFailure:

    def test_rejected_mutation(self, tmp_path):
        journal = os.path.join(tmp_path, 'missing', 'graph.journal')
        pms = PermissionService(Config(use_env=False, journal_path=journal))
        with raises(IoFailure):
            pms.apply('add_node', 'rn:alice:1:user')
        with raises(IoFailure):
            pms.apply('add_node', 'rn:team:ops:role', ['rn:cam:42:stream:edit'])
        msg = 'A mutation that could not be journaled must not be applied.'
        assert 'rn:alice:1:user' not in pms.graph, msg
        assert 'rn:team:ops:role' not in pms.graph, msg
        assert pms.graph.version == 0
        assert len(pms.journal) == 0

        os.mkdir(os.path.join(tmp_path, 'missing'))
        build(pms)
        assert pms.graph.version == 4
        assert [r.seq for r in read_journal(journal)] == [1, 2, 3, 4]
        replayed = replay(PermissionGraph(), journal)
        msg = 'The journal must replay to the served graph.'
        assert replayed.content_equals(pms.graph), msg


class TestPersistence:

    def test_reopen(self, tmp_path):
        config = Config(
            use_env=False,
            snapshot_path=os.path.join(tmp_path, 'graph.snap'),
            journal_path=os.path.join(tmp_path, 'graph.journal'),
            audit_path=os.path.join(tmp_path, 'audit.log'),
        )
        pms = PermissionService(config)
        build(pms)
        pms.save()
        pms.apply('grant', 'rn:alice:1:user', 'rn:door:7:open:view')
        pms.check(AccessRequest.from_names(
            'rn:alice:1:user', 'rn:door:7:open:view'
        ))
        pms.close()

        reopened = PermissionService(config)
        msg = 'Snapshot and journal must restore the served graph.'
        assert reopened.graph.content_equals(pms.graph), msg
        assert reopened.graph.version == 5
        assert len(reopened.audit) == 1
        assert reopened.apply(
            'remove_edge', 'rn:alice:1:user', 'rn:team:ops:role') == 6
