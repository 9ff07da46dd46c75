# -*- coding: utf-8

"""Module for exceptions and helper functions used by several other modules.

SPDX-License-Identifier: MIT
"""

import os
import time


class PMSpyError(Exception):
    """Base class of all errors raised by PMSpy."""

    pass


class PMSpyNameError(PMSpyError, ValueError):
    """Custom message for resource name related errors."""

    pass


class PMSpyAlgebraError(PMSpyError):
    """Custom message for permission set algebra related errors."""

    pass


class PMSpyGraphError(PMSpyError):
    """Custom message for permission graph related errors."""

    pass


class PMSpyStoreError(PMSpyError):
    """Custom message for persistence related errors."""

    pass


class PMSpyDecisionError(PMSpyError):
    """Custom message for decision contract errors."""

    pass


class PMSpyServiceError(PMSpyError):
    """Custom message for service related errors."""

    pass


# resource names

class MalformedName(PMSpyNameError):
    """A string does not follow the canonical resource name grammar."""


class ItemNotClassifiable(PMSpyNameError):
    """Conflict classification was asked for an item name."""


# algebra

class IncomparableValues(PMSpyAlgebraError, TypeError):
    """Two condition values of different kinds were compared."""


class DisjointOperands(PMSpyAlgebraError, ValueError):
    """Entry resolution was asked for entries of different keys."""


class ItemEntry(PMSpyAlgebraError, ValueError):
    """An item name was used where a permission entry is required."""


# graph

class DuplicateNode(PMSpyGraphError):
    """The node key is already present."""


class ItemEntryInSet(PMSpyGraphError, ValueError):
    """A node was given a set holding item names."""


class CycleRejected(PMSpyGraphError):
    """The edge would close a directed cycle."""


class UnknownNode(PMSpyGraphError, KeyError):
    """The node key is not present."""

    def __str__(self):
        return str(self.args[0]) if self.args else ''


class SelfLoop(PMSpyGraphError, ValueError):
    """An edge from a node to itself was requested."""


class DuplicateEdge(PMSpyGraphError):
    """The edge is already present."""


class UnknownEdge(PMSpyGraphError, KeyError):
    """The edge is not present."""

    def __str__(self):
        return str(self.args[0]) if self.args else ''


class NodeHasEdges(PMSpyGraphError):
    """A node with incident edges cannot be removed."""


class UnknownEntry(PMSpyGraphError, KeyError):
    """The node's own set holds no entry for the key."""

    def __str__(self):
        return str(self.args[0]) if self.args else ''


# store

class IoFailure(PMSpyStoreError):
    """Reading or writing a file failed."""


class CorruptSnapshot(PMSpyStoreError):
    """A snapshot file does not describe a valid graph."""


class CorruptJournal(PMSpyStoreError):
    """A journal record cannot be applied."""


class SequenceGap(PMSpyStoreError):
    """Journal sequence numbers are not contiguous."""


class CorruptAuditLog(PMSpyStoreError):
    """An audit log line is not a valid record."""


# decisions and service

class UnknownConsumer(PMSpyDecisionError, KeyError):
    """The requesting consumer is not a node of the graph."""

    def __str__(self):
        return str(self.args[0]) if self.args else ''


class NotAConsumer(PMSpyDecisionError):
    """The requesting node has incoming edges."""


class Unauthorized(PMSpyServiceError):
    """A key was requested for an action that is not granted."""


class UnknownKey(PMSpyServiceError, KeyError):
    """No key was issued under the given id."""

    def __str__(self):
        return str(self.args[0]) if self.args else ''


class BadToken(PMSpyServiceError):
    """An admin request carries a missing or wrong bearer token."""


class ServiceError(PMSpyServiceError):
    """The service answered a client request with an error status."""

    def __init__(self, status, error, detail):
        super().__init__(f"{status} {error}: {detail}")
        self.status = status
        self.error = error
        self.detail = detail


def get_basic_path():
    """
    Return the basic pmspy path and create it if necessary.

    The basic path is the '.pmspy' folder in the $HOME directory.
    """
    basic_path = os.path.join(os.path.expanduser('~'), '.pmspy')
    os.makedirs(basic_path, exist_ok=True)
    return basic_path


def extend_basic_path(subfolder):
    """
    Return a path based on the basic pmspy path and creates it if necessary.

    The subfolder is the name of the path extension.
    """
    extended_path = os.path.join(get_basic_path(), subfolder)
    os.makedirs(extended_path, exist_ok=True)
    return extended_path


def unix_millis(clock=time.time):
    """Return the clock reading as integer milliseconds since the epoch."""
    return int(round(clock() * 1000))


def write_atomic(path, text):
    r"""
    Write text to path through a temporary file and a rename.

    Parameters
    ----------
    path : str
        Destination file.

    text : str
        Full file content.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)
