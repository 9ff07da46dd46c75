# -*- coding: utf-8

"""Module for testing key issuance.

SPDX-License-Identifier: MIT
"""
import random
from functools import partial

from pytest import raises

from pmspy.decisions import AccessRequest
from pmspy.decisions import check
from pmspy.graphs import PermissionGraph
from pmspy.service.keys import KeyIssuer
from pmspy.tools.global_vars import GRANTED
from pmspy.tools.helpers import Unauthorized
from pmspy.tools.helpers import UnknownKey


class TestKeyIssuer:

    def setup_method(self):
        self.now = 1000.0
        self.g = PermissionGraph()
        self.g.add_node('rn:alice:1:user', ['rn:vault:9:read:view'])
        self.g.add_node('rn:bob:2:user')
        self.issuer = KeyIssuer(
            partial(check, self.g), ttl=300, clock=lambda: self.now
        )
        self.read = AccessRequest.from_names(
            'rn:alice:1:user', 'rn:vault:9:read:view'
        )

    def test_issue(self):
        grant = self.issuer.issue_key('ap-1', self.read)
        assert grant.action_point == 'ap-1'
        assert grant.consumer == 'rn:alice:1:user'
        assert len(grant.public_key) == 32
        assert grant.expires_at == 1300.0
        assert self.issuer.get_grant(grant.key_id) is grant

    def test_lifetime(self):
        rng = random.Random(23)
        for _ in range(100):
            ttl = rng.randint(1, 3600)
            self.now = 1000.0
            self.issuer.ttl = float(ttl)
            grant = self.issuer.issue_key('ap-1', self.read)
            self.now = 1000.0 + ttl - 0.5
            msg = f'A key must be valid before its lifetime of {ttl} s ends.'
            assert self.issuer.verify_key(grant.key_id) == 'valid', msg
            self.now = 1000.0 + ttl
            msg = f'A key must expire once its lifetime of {ttl} s ends.'
            assert self.issuer.verify_key(grant.key_id) == 'expired', msg
            self.now = 1000.0 + ttl + rng.randint(1, 10 ** 6)
            assert self.issuer.verify_key(grant.key_id) == 'expired'

    def test_unknown(self):
        assert self.issuer.verify_key('never-issued') == 'unknown'

    def test_supersede(self):
        first = self.issuer.issue_key('ap-1', self.read)
        other = self.issuer.issue_key('ap-2', self.read)
        second = self.issuer.issue_key('ap-1', self.read)
        assert first.key_id != second.key_id
        msg = 'A new key for the same action point replaces the old one.'
        assert self.issuer.verify_key(first.key_id) == 'expired', msg
        assert self.issuer.verify_key(second.key_id) == 'valid'
        assert self.issuer.verify_key(other.key_id) == 'valid'

    def test_revoke(self):
        grant = self.issuer.issue_key('ap-1', self.read)
        self.issuer.revoke_key(grant.key_id)
        assert self.issuer.verify_key(grant.key_id) == 'expired'
        with raises(UnknownKey):
            self.issuer.revoke_key('never-issued')

    def test_unauthorized(self):
        request = AccessRequest.from_names(
            'rn:bob:2:user', 'rn:vault:9:read:view'
        )
        with raises(Unauthorized) as err:
            self.issuer.issue_key('ap-1', request)
        msg = 'A refusal must never carry the granted outcome word.'
        assert GRANTED not in str(err.value), msg
        assert 'no-matching-key' in str(err.value)

    def test_bad_action_point(self):
        with raises(ValueError):
            self.issuer.issue_key('', self.read)
