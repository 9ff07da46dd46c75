# -*- coding: utf-8

"""Module for testing the configuration.

SPDX-License-Identifier: MIT
"""
from pytest import mark
from pytest import raises

from pmspy.permissions import Level
from pmspy.tools.config import Config
from pmspy.tools.config import load_default_config


class TestConfig:

    def test_defaults(self):
        cfg = Config(use_env=False)
        assert cfg._serialize() == load_default_config()
        assert cfg.get_attr('bind_host') == '127.0.0.1'
        assert cfg.get_attr('snapshot_path') is None
        assert cfg.get_attr('admin_token') is None, (
            'No admin token may be configured out of the box.'
        )

    def test_keywords(self):
        cfg = Config(
            use_env=False, bind_port=9000, level_order=('admin', 'edit', 'view')
        )
        assert cfg.get_attr('bind_port') == 9000
        assert cfg.levels().max(Level.ADMIN, Level.VIEW) is Level.VIEW

    def test_environment(self, monkeypatch):
        monkeypatch.setenv('PMSPY_BIND_PORT', '9100')
        monkeypatch.setenv('PMSPY_KEY_TTL', '12.5')
        monkeypatch.setenv('PMSPY_LEVEL_ORDER', 'edit, view ,admin')
        monkeypatch.setenv('PMSPY_AUDIT_PATH', '/tmp/audit.log')
        cfg = Config()
        assert cfg.get_attr('bind_port') == 9100
        assert cfg.get_attr('key_ttl') == 12.5
        assert cfg.get_attr('level_order') == ['edit', 'view', 'admin']
        assert cfg.get_attr('audit_path') == '/tmp/audit.log'
        msg = 'Keyword arguments must override the environment.'
        assert Config(bind_port=1).get_attr('bind_port') == 1, msg
        assert Config(use_env=False).get_attr('bind_port') == 8642

    def test_bad_environment(self, monkeypatch):
        monkeypatch.setenv('PMSPY_BIND_PORT', 'eighty')
        with raises(ValueError):
            Config()

    def test_unknown_key(self):
        with raises(KeyError):
            Config(use_env=False, colour='blue')
        with raises(KeyError):
            Config(use_env=False).get_attr('colour')

    @mark.parametrize('kwargs', [
        {'bind_port': '80'},
        {'bind_port': True},
        {'key_ttl': 'long'},
        {'admin_token': 5},
        {'level_order': 'view,edit,admin'},
        {'snapshot_path': 3},
    ])
    def test_wrong_type(self, kwargs):
        with raises(TypeError):
            Config(use_env=False, **kwargs)

    def test_bad_values(self):
        with raises(ValueError):
            Config(use_env=False, key_ttl=0)
        with raises(ValueError):
            Config(use_env=False, level_order=['view', 'edit'])
