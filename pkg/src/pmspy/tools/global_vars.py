# -*- coding: utf-8

"""Module for global variables used by other modules of the pmspy package.

SPDX-License-Identifier: MIT
"""

# canonical resource name grammar
RN_PREFIX = 'rn'
RN_SEPARATOR = ':'
TOKEN_PATTERN = r'[A-Za-z0-9_.\-]+'

LEVEL_WORDS = ('view', 'edit', 'admin')
DEFAULT_LEVEL_ORDER = ('view', 'edit', 'admin')

# persistence formats
SNAPSHOT_MAGIC = 'pmsnap'
SNAPSHOT_FORMAT_VERSION = 1

JOURNAL_OPERATIONS = {
    'add_node': 1,
    'remove_node': 1,
    'add_edge': 2,
    'remove_edge': 2,
    'grant': 2,
    'revoke': 2,
}

# decisions
GRANTED = 'GRANTED'
UNAUTHORIZED = 'UNAUTHORIZED'

REASONS = (
    'no-matching-key',
    'insufficient-level',
    'condition-exceeded',
    'value-kind-mismatch',
    'granted',
)

# configuration keys with their type and environment override
config_data = {
    'level_order': {
        'type': (list, tuple), 'env': 'PMSPY_LEVEL_ORDER',
        'text': 'permission level order (lowest first)'
    },
    'bind_host': {
        'type': str, 'env': 'PMSPY_BIND_HOST', 'text': 'service bind address'
    },
    'bind_port': {
        'type': int, 'env': 'PMSPY_BIND_PORT', 'text': 'service bind port'
    },
    'admin_token': {
        'type': (str, type(None)), 'env': 'PMSPY_ADMIN_TOKEN',
        'text': 'static bearer token for admin endpoints'
    },
    'key_ttl': {
        'type': (int, float), 'env': 'PMSPY_KEY_TTL',
        'text': 'lifetime of issued keys in seconds'
    },
    'snapshot_path': {
        'type': (str, type(None)), 'env': 'PMSPY_SNAPSHOT_PATH',
        'text': 'graph snapshot file'
    },
    'journal_path': {
        'type': (str, type(None)), 'env': 'PMSPY_JOURNAL_PATH',
        'text': 'graph mutation journal file'
    },
    'audit_path': {
        'type': (str, type(None)), 'env': 'PMSPY_AUDIT_PATH',
        'text': 'decision audit log file'
    },
}

# key issuance
KEY_VALID = 'valid'
KEY_EXPIRED = 'expired'
KEY_UNKNOWN = 'unknown'
