# -*- coding: utf-8

"""Module for the decision audit log.

Every access decision is recorded once, indexed by the requesting consumer.
The log file holds one record per line::

    <seq> <unix-millis> <consumer-rn> <request-rn> <GRANTED|UNAUTHORIZED> <reason>

SPDX-License-Identifier: MIT
"""
import os
import threading
import time
from dataclasses import dataclass

from pmspy.permissions.resource_name import format_name
from pmspy.tools import logger
from pmspy.tools.global_vars import GRANTED
from pmspy.tools.global_vars import REASONS
from pmspy.tools.global_vars import UNAUTHORIZED
from pmspy.tools.helpers import CorruptAuditLog
from pmspy.tools.helpers import IoFailure
from pmspy.tools.helpers import unix_millis


@dataclass(frozen=True)
class AuditRecord:
    """One recorded decision."""

    seq: int
    millis: int
    consumer: str
    request: str
    outcome: str
    reason: str

    def render(self):
        return (
            f"{self.seq} {self.millis} {self.consumer} {self.request} "
            f"{self.outcome} {self.reason}"
        )

    @classmethod
    def parse(cls, line):
        fields = line.split(' ')
        try:
            if len(fields) != 6 or fields[4] not in (GRANTED, UNAUTHORIZED) \
                    or fields[5] not in REASONS:
                raise ValueError(line)
            return cls(int(fields[0]), int(fields[1]), *fields[2:])
        except ValueError as err:
            msg = f"Bad audit record '{line}'."
            logger.error(msg)
            raise CorruptAuditLog(msg) from err


class AuditLog:
    r"""
    Append only log of access decisions, indexed by consumer.

    Parameters
    ----------
    path : str
        Audit file the records are appended to, :code:`None` keeps the log
        in memory.

    clock : callable
        Returns the current time in seconds since the epoch.

    Example
    -------
    >>> from pmspy.decisions import AccessRequest, AuditLog, Decision
    >>> log = AuditLog(clock=lambda: 1700000000.0)
    >>> req = AccessRequest.from_names(
    ...     'rn:alice:1:user', 'rn:cam:42:stream:view')
    >>> print(log.record(req, Decision.deny('insufficient-level')).render())
    1 1700000000000 rn:alice:1:user rn:cam:42:stream:view UNAUTHORIZED insufficient-level
    >>> len(log.query_by_consumer('rn:alice:1:user'))
    1
    >>> log.query_by_consumer('rn:bob:2:user')
    []
    """

    def __init__(self, path=None, clock=time.time):
        self.path = path
        self.clock = clock
        self._records = []
        self._index = {}
        self._lock = threading.Lock()

    @classmethod
    def load(cls, path, clock=time.time):
        """Open an audit file and index its existing records."""
        log = cls(path, clock)
        if os.path.exists(path):
            try:
                with open(path, 'r', encoding='utf-8', newline='\n') as f:
                    lines = f.read().split('\n')
            except OSError as err:
                msg = f"Could not read the audit log {path}: {err}"
                logger.error(msg)
                raise IoFailure(msg) from err
            except UnicodeDecodeError as err:
                msg = f"The audit log {path} is not UTF-8 text: {err}"
                logger.error(msg)
                raise CorruptAuditLog(msg) from err
            for line in lines:
                if line:
                    log._add(AuditRecord.parse(line))
        return log

    def __len__(self):
        return len(self._records)

    def _add(self, record):
        self._records.append(record)
        self._index.setdefault(record.consumer, []).append(record)

    def record(self, request, decision):
        r"""
        Append the record of a completed check.

        Parameters
        ----------
        request : pmspy.decisions.decision.AccessRequest
            The checked request.

        decision : pmspy.decisions.decision.Decision
            Its decision.

        Returns
        -------
        record : AuditRecord
            The appended record, nothing is appended if writing the file
            fails.
        """
        with self._lock:
            seq = self._records[-1].seq + 1 if self._records else 1
            record = AuditRecord(
                seq, unix_millis(self.clock), format_name(request.consumer),
                request.canonical(), decision.outcome, decision.reason
            )
            if self.path is not None:
                try:
                    with open(self.path, 'a', encoding='utf-8',
                              newline='\n') as f:
                        f.write(record.render() + '\n')
                except OSError as err:
                    msg = (
                        f"Could not append to the audit log {self.path}: "
                        f"{err}"
                    )
                    logger.error(msg)
                    raise IoFailure(msg) from err
            self._add(record)
        return record

    def query_by_consumer(self, consumer, start=None, end=None):
        r"""
        Return the records of one consumer.

        Parameters
        ----------
        consumer : str, ResourceName
            Consumer key.

        start, end : int
            Inclusive time bounds in milliseconds since the epoch, optional.

        Returns
        -------
        records : list
            Records in sequence order, empty for unknown consumers.
        """
        if not isinstance(consumer, str):
            consumer = format_name(consumer)
        with self._lock:
            records = list(self._index.get(consumer, []))
        return [
            r for r in records
            if (start is None or r.millis >= start)
            and (end is None or r.millis <= end)
        ]

    def records(self):
        """Return the global log in sequence order."""
        with self._lock:
            return list(self._records)

    def consumers(self):
        """Return the indexed consumer keys, sorted."""
        with self._lock:
            return sorted(self._index)
