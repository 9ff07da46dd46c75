# -*- coding: utf-8

"""Module for testing the decision audit log.

SPDX-License-Identifier: MIT
"""
import os

from pytest import raises

from pmspy.decisions import AccessRequest
from pmspy.decisions import AuditLog
from pmspy.decisions import AuditRecord
from pmspy.decisions import Decision
from pmspy.permissions import parse_name
from pmspy.tools.global_vars import GRANTED
from pmspy.tools.helpers import CorruptAuditLog
from pmspy.tools.helpers import IoFailure


class Clock:

    def __init__(self, now=1000.0):
        self.now = now

    def __call__(self):
        return self.now


def granted(action):
    return Decision(GRANTED, 'granted', parse_name(action))


class TestAuditLog:

    def setup_method(self):
        self.clock = Clock()
        self.log = AuditLog(clock=self.clock)
        self.alice = AccessRequest.from_names(
            'rn:alice:1:user', 'rn:cam:42:stream:view'
        )
        self.bob = AccessRequest.from_names(
            'rn:bob:2:user', 'rn:door:7:open:view:integer:45'
        )

    def fill(self):
        self.log.record(self.alice, granted('rn:cam:42:stream:edit'))
        self.clock.now = 1001.0
        self.log.record(self.bob, Decision.deny('condition-exceeded'))
        self.clock.now = 1002.5
        self.log.record(self.alice, Decision.deny('insufficient-level'))

    def test_record(self):
        record = self.log.record(
            self.alice, granted('rn:cam:42:stream:edit')
        )
        assert record.render() == (
            '1 1000000 rn:alice:1:user rn:cam:42:stream:view GRANTED granted'
        )

    def test_query(self):
        self.fill()
        records = self.log.query_by_consumer('rn:alice:1:user')
        assert [r.seq for r in records] == [1, 3]
        assert [r.reason for r in records] == [
            'granted', 'insufficient-level'
        ]
        assert self.log.query_by_consumer(parse_name('rn:bob:2:user'))[0] \
            .request == 'rn:door:7:open:view:integer:45'
        assert self.log.query_by_consumer('rn:carol:3:user') == []

    def test_query_bounds(self):
        self.fill()
        msg = 'Both time bounds are inclusive.'
        assert len(self.log.query_by_consumer(
            'rn:alice:1:user', 1000000, 1002500)) == 2, msg
        assert len(self.log.query_by_consumer(
            'rn:alice:1:user', start=1000001)) == 1
        assert len(self.log.query_by_consumer(
            'rn:alice:1:user', end=1002499)) == 1
        assert self.log.query_by_consumer(
            'rn:alice:1:user', 1000001, 1002499) == []

    def test_global_order(self):
        self.fill()
        assert [r.seq for r in self.log.records()] == [1, 2, 3]
        assert self.log.consumers() == ['rn:alice:1:user', 'rn:bob:2:user']
        assert len(self.log) == 3

    def test_file_round_trip(self, tmp_path):
        path = os.path.join(tmp_path, 'audit.log')
        self.log = AuditLog(path, self.clock)
        self.fill()
        loaded = AuditLog.load(path, self.clock)
        assert loaded.records() == self.log.records()
        loaded.record(self.bob, Decision.deny('no-matching-key'))
        msg = 'A reopened log must continue the sequence.'
        assert loaded.records()[-1].seq == 4, msg
        with open(path) as f:
            assert len(f.read().splitlines()) == 4

    def test_load_missing_file(self, tmp_path):
        log = AuditLog.load(os.path.join(tmp_path, 'audit.log'))
        assert len(log) == 0

    def test_unwritable_file(self, tmp_path):
        log = AuditLog(os.path.join(tmp_path, 'missing', 'audit.log'))
        with raises(IoFailure):
            log.record(self.alice, Decision.deny('no-matching-key'))
        msg = 'A failed append must not leave a record behind.'
        assert len(log) == 0, msg

    def test_corrupt_file(self, tmp_path):
        path = os.path.join(tmp_path, 'audit.log')
        with open(path, 'w') as f:
            f.write('1 1000 rn:alice:1:user rn:cam:42:stream:view MAYBE x\n')
        with raises(CorruptAuditLog):
            AuditLog.load(path)

    def test_not_utf8(self, tmp_path):
        path = os.path.join(tmp_path, 'audit.log')
        with open(path, 'wb') as f:
            f.write(b'1 1000 rn:\xe9:1:user rn:cam:42:stream:view GRANTED '
                    b'granted\n')
        with raises(CorruptAuditLog):
            AuditLog.load(path)

    def test_every_decision_recorded_once(self):
        outcomes = [
            granted('rn:cam:42:stream:view'),
            Decision.deny('no-matching-key'),
            Decision.deny('value-kind-mismatch'),
        ] * 20
        for i, decision in enumerate(outcomes):
            self.log.record(self.alice if i % 2 else self.bob, decision)
        assert len(self.log) == len(outcomes)
        assert [r.outcome for r in self.log.records()] == [
            d.outcome for d in outcomes
        ]
        total = sum(
            len(self.log.query_by_consumer(c)) for c in self.log.consumers()
        )
        assert total == len(outcomes)


class TestAuditRecord:

    def test_parse(self):
        line = '7 1500 rn:alice:1:user rn:cam:42:stream:view UNAUTHORIZED ' \
            'no-matching-key'
        record = AuditRecord.parse(line)
        assert record.seq == 7
        assert record.millis == 1500
        assert record.render() == line

    def test_bad_lines(self):
        for line in [
            '',
            '1 2 rn:a:1:x rn:b:1:x:view GRANTED',
            'x 2 rn:a:1:x rn:b:1:x:view GRANTED granted',
            '1 y rn:a:1:x rn:b:1:x:view GRANTED granted',
            '1 2 rn:a:1:x rn:b:1:x:view DENIED granted',
            '1 2 rn:a:1:x rn:b:1:x:view GRANTED because',
        ]:
            with raises(CorruptAuditLog):
                AuditRecord.parse(line)
