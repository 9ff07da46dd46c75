# -*- coding: utf-8

"""Module for testing the command line tool.

SPDX-License-Identifier: MIT
"""
import os

from pmspy.cli import main


class TestCli:

    def setup_method(self):
        self.files = None

    def pms(self, capsys, *argv):
        code = main([*self.files, *argv])
        out, err = capsys.readouterr()
        return code, out, err

    def build(self, tmp_path, capsys):
        self.journal = os.path.join(tmp_path, 'graph.journal')
        self.audit = os.path.join(tmp_path, 'audit.log')
        self.files = ['--journal', self.journal, '--audit', self.audit]
        steps = [
            (['add-node', 'rn:alice:1:user'], 'version 1'),
            (['add-node', 'rn:team:ops:role', 'rn:cam:42:stream:edit'],
             'version 3'),
            (['add-edge', 'rn:alice:1:user', 'rn:team:ops:role'],
             'version 4'),
        ]
        for argv, expected in steps:
            code, out, _ = self.pms(capsys, *argv)
            assert (code, out.strip()) == (0, expected)

    def test_mutations_persist(self, tmp_path, capsys):
        self.build(tmp_path, capsys)
        code, out, _ = self.pms(
            capsys, 'grant', 'rn:alice:1:user', 'rn:door:7:open:view'
        )
        assert out.strip() == 'version 5'
        code, out, _ = self.pms(
            capsys, 'revoke', 'rn:alice:1:user', 'rn:door:7:open'
        )
        assert out.strip() == 'version 6'
        code, out, _ = self.pms(
            capsys, 'rm-edge', 'rn:alice:1:user', 'rn:team:ops:role'
        )
        assert out.strip() == 'version 7'
        code, out, _ = self.pms(capsys, 'rm-node', 'rn:alice:1:user')
        assert (code, out.strip()) == (0, 'version 8')
        with open(self.journal) as f:
            assert len(f.read().splitlines()) == 8

    def test_check(self, tmp_path, capsys):
        self.build(tmp_path, capsys)
        code, out, _ = self.pms(
            capsys, 'check', 'rn:alice:1:user', 'rn:cam:42:stream:view'
        )
        assert (code, out.strip()) == (0, 'GRANTED')
        code, out, _ = self.pms(
            capsys, 'check', 'rn:alice:1:user', 'rn:cam:42:stream:admin'
        )
        msg = 'An UNAUTHORIZED check must exit with 1.'
        assert (code, out.strip()) == (1, 'UNAUTHORIZED'), msg

        code, out, _ = self.pms(capsys, 'audit', 'rn:alice:1:user')
        lines = out.splitlines()
        assert len(lines) == 2
        assert lines[0].endswith('rn:cam:42:stream:view GRANTED granted')
        code, out, _ = self.pms(
            capsys, 'audit', 'rn:alice:1:user', '--to', '0'
        )
        assert (code, out) == (0, '')

    def test_queries(self, tmp_path, capsys):
        self.build(tmp_path, capsys)
        code, out, _ = self.pms(capsys, 'effective', 'rn:alice:1:user')
        assert out.splitlines() == ['rn:cam:42:stream:edit']
        code, out, _ = self.pms(capsys, 'consumers')
        assert out.splitlines() == ['rn:alice:1:user']
        code, out, _ = self.pms(capsys, 'stats')
        assert code == 0
        assert 'version=4' in out
        assert 'node_count=2' in out

    def test_table_output(self, tmp_path, capsys):
        self.build(tmp_path, capsys)
        code, out, _ = self.pms(
            capsys, '--output', 'table', 'effective', 'rn:alice:1:user'
        )
        assert code == 0
        assert out.startswith('+-')
        assert 'entry' in out and 'rn:cam:42:stream:edit' in out

    def test_save_and_load(self, tmp_path, capsys):
        self.build(tmp_path, capsys)
        snapshot = os.path.join(tmp_path, 'graph.snap')
        code, out, _ = self.pms(capsys, 'save', snapshot)
        assert (code, out.strip()) == (0, snapshot)
        code, out, _ = self.pms(capsys, 'load', snapshot)
        assert out.strip() == (
            'version 4: 2 nodes, 1 edges, 0.50 entries per node'
        )
        self.files = []
        code, out, _ = self.pms(capsys, '--snapshot', snapshot, 'consumers')
        assert out.splitlines() == ['rn:alice:1:user']

    def test_domain_errors(self, tmp_path, capsys):
        self.build(tmp_path, capsys)
        code, _, err = self.pms(
            capsys, 'add-edge', 'rn:team:ops:role', 'rn:alice:1:user'
        )
        assert code == 1
        assert 'pms add-edge' in err
        code, _, _ = self.pms(
            capsys, 'check', 'rn:bob:2:user', 'rn:cam:42:stream:view'
        )
        assert code == 1
        code, _, _ = self.pms(capsys, 'load', os.path.join(tmp_path, 'nope'))
        assert code == 1
        garbled = os.path.join(tmp_path, 'garbled.snap')
        with open(garbled, 'wb') as f:
            f.write(b'pmsnap 1 1 1 0\nN rn:a:1:\xff\n')
        code, _, _ = self.pms(capsys, 'load', garbled)
        msg = 'An undecodable snapshot is a domain error, not a usage error.'
        assert code == 1, msg

    def test_usage_errors(self, tmp_path, capsys):
        self.build(tmp_path, capsys)
        code, _, _ = self.pms(capsys, 'rm-node', 'rn:alice:1:user:view')
        msg = 'A malformed resource name is a usage error.'
        assert code == 2, msg
        code, _, _ = self.pms(
            capsys, 'check', 'alice', 'rn:cam:42:stream:view'
        )
        assert code == 2
        code, _, _ = self.pms(
            capsys, '--remote', 'http://127.0.0.1:1', 'consumers'
        )
        assert code == 2
        code, _, _ = self.pms(capsys, 'explode')
        assert code == 2
        code, _, _ = self.pms(capsys, 'bench', '--sizes', '0')
        assert code == 2

    def test_version(self, capsys):
        self.files = []
        code, out, _ = self.pms(capsys, '--version')
        assert code == 0
        assert out.strip()

    def test_bench(self, capsys):
        self.files = []
        code, out, _ = self.pms(
            capsys, 'bench', '--sizes', '100', '200', '--entries', '2',
            '--repeats', '1'
        )
        assert code == 0
        lines = out.splitlines()
        assert 'ratio' in lines[0]
        assert len(lines) == 3
