# -*- coding: utf-8

"""Module for resource names.

A resource name is a tuple :code:`(base, identifier, scope[, level[, value]])`
naming an item, a permission on an item or a conditional permission. All
names have one canonical string form:

- item: :code:`rn:<base>:<identifier>:<scope>`
- permission: :code:`rn:<base>:<identifier>:<scope>:<level>`
- conditional: :code:`rn:<base>:<identifier>:<scope>:<level>:<kind>:<magnitude>`

SPDX-License-Identifier: MIT
"""
import re
from dataclasses import dataclass
from decimal import Decimal
from decimal import InvalidOperation
from enum import Enum
from typing import Optional
from typing import Tuple
from typing import Union

from pmspy.tools import logger
from pmspy.tools.global_vars import DEFAULT_LEVEL_ORDER
from pmspy.tools.global_vars import LEVEL_WORDS
from pmspy.tools.global_vars import RN_PREFIX
from pmspy.tools.global_vars import RN_SEPARATOR
from pmspy.tools.global_vars import TOKEN_PATTERN
from pmspy.tools.helpers import IncomparableValues
from pmspy.tools.helpers import ItemNotClassifiable
from pmspy.tools.helpers import MalformedName

_TOKEN = re.compile(TOKEN_PATTERN)
_INTEGER = re.compile(r'-?[0-9]+')
_DECIMAL = re.compile(r'-?[0-9]+(\.[0-9]+)?')


def _malformed(msg):
    logger.error(msg)
    return MalformedName(msg)


class Level(str, Enum):
    """Permission level word."""

    VIEW = 'view'
    EDIT = 'edit'
    ADMIN = 'admin'

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, word):
        try:
            return cls(word)
        except ValueError:
            raise _malformed(
                f"Unknown permission level '{word}', allowed levels are: "
                f"{', '.join(LEVEL_WORDS)}."
            ) from None


class ValueKind(str, Enum):
    """Kind of a condition value."""

    INTEGER = 'integer'
    DECIMAL = 'decimal'
    TIMESTAMP = 'timestamp'

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, word):
        try:
            return cls(word)
        except ValueError:
            kinds = ', '.join(k.value for k in cls)
            raise _malformed(
                f"Unknown condition value kind '{word}', allowed kinds are: "
                f"{kinds}."
            ) from None


class Relation(Enum):
    """Relation of two permission entries."""

    DISJOINT = 'Disjoint'
    NON_CONFLICT = 'NonConflict'
    LEVEL_CONFLICT = 'LevelConflict'
    VALUE_CONFLICT = 'ValueConflict'

    @property
    def is_conflict(self):
        return self in (Relation.LEVEL_CONFLICT, Relation.VALUE_CONFLICT)


class NameKind(Enum):
    """Kind of a resource name, derived from the fields present."""

    ITEM = 'item'
    PERMISSION = 'permission'
    CONDITIONAL = 'conditional'


@dataclass(frozen=True)
class LevelOrder:
    r"""
    Total order of the permission levels.

    Parameters
    ----------
    levels : tuple
        All three :code:`Level` members, lowest privilege first.

    Example
    -------
    >>> from pmspy.permissions.resource_name import Level, LevelOrder
    >>> order = LevelOrder.from_words(['view', 'edit', 'admin'])
    >>> order.compare(Level.EDIT, Level.VIEW)
    1
    >>> order.max(Level.ADMIN, Level.EDIT)
    <Level.ADMIN: 'admin'>
    """

    levels: Tuple[Level, ...]

    def __post_init__(self):
        if sorted(level.value for level in self.levels) != sorted(LEVEL_WORDS):
            msg = (
                "The level order must name each of "
                f"{', '.join(LEVEL_WORDS)} exactly once."
            )
            logger.error(msg)
            raise ValueError(msg)
        object.__setattr__(
            self, '_rank', {level: i for i, level in enumerate(self.levels)}
        )

    @classmethod
    def from_words(cls, words):
        return cls(tuple(Level.parse(word) for word in words))

    def rank(self, level):
        return self._rank[level]

    def compare(self, a, b):
        """Return -1, 0 or 1 as level a is below, equal or above level b."""
        ra, rb = self._rank[a], self._rank[b]
        return (ra > rb) - (ra < rb)

    def max(self, a, b):
        return a if self._rank[a] >= self._rank[b] else b

    def words(self):
        return [level.value for level in self.levels]


DEFAULT_ORDER = LevelOrder.from_words(DEFAULT_LEVEL_ORDER)


@dataclass(frozen=True)
class CondValue:
    r"""
    Condition value of a conditional permission.

    Parameters
    ----------
    kind : ValueKind
        Integer, decimal or timestamp (integer seconds since the epoch, UTC).

    magnitude : int, decimal.Decimal
        Scalar of that kind.

    Note
    ----
    Values of one kind are totally ordered, comparing values of different
    kinds raises :code:`IncomparableValues`.

    Example
    -------
    >>> from decimal import Decimal
    >>> from pmspy.permissions.resource_name import CondValue
    >>> CondValue.integer(30) < CondValue.integer(60)
    True
    >>> CondValue.decimal(Decimal('2.50')).render()
    '2.5'
    >>> CondValue.integer(3) < CondValue.decimal(Decimal('2.5'))
    Traceback (most recent call last):
    ...
    pmspy.tools.helpers.IncomparableValues: Cannot compare condition value integer 3 with decimal 2.5.
    """

    kind: ValueKind
    magnitude: Union[int, Decimal]

    def __post_init__(self):
        kind = ValueKind(self.kind)
        object.__setattr__(self, 'kind', kind)
        magnitude = self.magnitude
        if kind is ValueKind.DECIMAL:
            if isinstance(magnitude, bool) or not isinstance(
                    magnitude, (int, Decimal)):
                msg = (
                    "A decimal condition value needs a Decimal, got "
                    f"{magnitude!r}."
                )
                logger.error(msg)
                raise TypeError(msg)
            magnitude = Decimal(magnitude)
            if not magnitude.is_finite():
                raise _malformed(
                    f"Decimal condition values must be finite, got {magnitude}."
                )
        elif isinstance(magnitude, bool) or not isinstance(magnitude, int):
            msg = (
                f"A {kind.value} condition value needs an int, got "
                f"{magnitude!r}."
            )
            logger.error(msg)
            raise TypeError(msg)
        object.__setattr__(self, 'magnitude', magnitude)

    @classmethod
    def integer(cls, magnitude):
        return cls(ValueKind.INTEGER, magnitude)

    @classmethod
    def decimal(cls, magnitude):
        return cls(ValueKind.DECIMAL, Decimal(magnitude))

    @classmethod
    def timestamp(cls, seconds):
        return cls(ValueKind.TIMESTAMP, seconds)

    @classmethod
    def parse(cls, kind_word, text):
        kind = ValueKind.parse(kind_word)
        pattern = _DECIMAL if kind is ValueKind.DECIMAL else _INTEGER
        if not pattern.fullmatch(text):
            raise _malformed(
                f"Cannot read '{text}' as a {kind.value} condition value."
            )
        if kind is ValueKind.DECIMAL:
            try:
                return cls(kind, Decimal(text))
            except InvalidOperation:
                raise _malformed(
                    f"Cannot read '{text}' as a decimal condition value."
                ) from None
        return cls(kind, int(text))

    def render(self):
        """Return the canonical magnitude text."""
        if self.kind is ValueKind.DECIMAL:
            text = f"{self.magnitude:f}"
            if '.' in text:
                text = text.rstrip('0').rstrip('.')
            return '0' if text in ('-0', '') else text
        return str(self.magnitude)

    def compare(self, other):
        """Return -1, 0 or 1, raise IncomparableValues across kinds."""
        if self.kind is not other.kind:
            msg = (
                f"Cannot compare condition value {self.kind.value} "
                f"{self.render()} with {other.kind.value} {other.render()}."
            )
            logger.error(msg)
            raise IncomparableValues(msg)
        a, b = self.magnitude, other.magnitude
        return (a > b) - (a < b)

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __str__(self):
        return f"{self.kind.value}{RN_SEPARATOR}{self.render()}"


def compare_values(a, b):
    r"""
    Compare two optional condition values.

    An absent value is unconditional and therefore greater than every
    concrete value of any kind.

    Returns
    -------
    out : int
        -1, 0 or 1.
    """
    if a is None and b is None:
        return 0
    if a is None:
        return 1
    if b is None:
        return -1
    return a.compare(b)


@dataclass(frozen=True)
class ResourceName:
    r"""
    A resource name of item, permission or conditional kind.

    Parameters
    ----------
    base : str
        Base string.

    identifier : str
        Identifier of the resource.

    scope : str
        Attribute or scope.

    level : Level
        Permission level, absent for items.

    value : CondValue
        Condition value, requires a level.

    Example
    -------
    >>> from pmspy.permissions.resource_name import ResourceName
    >>> rn = ResourceName('cam', '42', 'stream', 'edit')
    >>> rn.kind
    <NameKind.PERMISSION: 'permission'>
    >>> str(rn)
    'rn:cam:42:stream:edit'
    >>> rn.key
    ('cam', '42', 'stream')
    """

    base: str
    identifier: str
    scope: str
    level: Optional[Level] = None
    value: Optional[CondValue] = None

    def __post_init__(self):
        for field, token in (
                ('base', self.base), ('identifier', self.identifier),
                ('scope', self.scope)):
            if not isinstance(token, str) or not _TOKEN.fullmatch(token):
                raise _malformed(
                    f"The {field} token {token!r} must be a non-empty string "
                    "of letters, digits, '_', '.' or '-'."
                )
        if self.level is not None and not isinstance(self.level, Level):
            object.__setattr__(self, 'level', Level.parse(self.level))
        if self.value is not None:
            if self.level is None:
                raise _malformed(
                    "A resource name with a condition value needs a level."
                )
            if not isinstance(self.value, CondValue):
                msg = f"Condition values must be CondValue, got {self.value!r}."
                logger.error(msg)
                raise TypeError(msg)

    @property
    def kind(self):
        if self.level is None:
            return NameKind.ITEM
        if self.value is None:
            return NameKind.PERMISSION
        return NameKind.CONDITIONAL

    @property
    def key(self):
        """The :code:`(base, identifier, scope)` triple."""
        return (self.base, self.identifier, self.scope)

    @property
    def is_item(self):
        return self.level is None

    def item(self):
        """Return the item name this entry refers to."""
        return ResourceName(self.base, self.identifier, self.scope)

    def __str__(self):
        return format_name(self)


def parse_name(text):
    r"""
    Parse a canonical resource name string.

    Parameters
    ----------
    text : str
        String following the canonical grammar.

    Returns
    -------
    rn : ResourceName
        Item, permission or conditional resource name.

    Example
    -------
    >>> from pmspy.permissions.resource_name import parse_name
    >>> parse_name('rn:cam:42:stream').kind.value
    'item'
    >>> rn = parse_name('rn:door:7:open:view:integer:30')
    >>> rn.level.value, rn.value.magnitude
    ('view', 30)
    >>> parse_name('rn:cam:42')
    Traceback (most recent call last):
    ...
    pmspy.tools.helpers.MalformedName: Resource name 'rn:cam:42' must have 3, 4 or 5 tuple fields.
    """
    if not isinstance(text, str):
        raise _malformed(f"Resource names are strings, got {text!r}.")
    segments = text.split(RN_SEPARATOR)
    if segments[0] != RN_PREFIX:
        raise _malformed(
            f"Resource name '{text}' must start with '{RN_PREFIX}{RN_SEPARATOR}'."
        )
    fields = segments[1:]
    if len(fields) not in (3, 4, 6):
        raise _malformed(
            f"Resource name '{text}' must have 3, 4 or 5 tuple fields."
        )
    level = Level.parse(fields[3]) if len(fields) > 3 else None
    value = CondValue.parse(fields[4], fields[5]) if len(fields) == 6 else None
    return ResourceName(fields[0], fields[1], fields[2], level, value)


def format_name(rn):
    r"""
    Return the canonical string of a resource name.

    Example
    -------
    >>> from decimal import Decimal
    >>> from pmspy.permissions.resource_name import (
    ...     CondValue, ResourceName, format_name)
    >>> format_name(ResourceName('door', '7', 'open', 'view',
    ...     CondValue.decimal(Decimal('2.5'))))
    'rn:door:7:open:view:decimal:2.5'
    """
    parts = [RN_PREFIX, rn.base, rn.identifier, rn.scope]
    if rn.level is not None:
        parts.append(rn.level.value)
    if rn.value is not None:
        parts += [rn.value.kind.value, rn.value.render()]
    return RN_SEPARATOR.join(parts)


def parse_item(text):
    """Parse a string that must name an item (a graph node key)."""
    rn = parse_name(text)
    if not rn.is_item:
        raise _malformed(f"'{text}' names a permission, an item was expected.")
    return rn


def classify(alpha, beta):
    r"""
    Return the relation of two permission entries.

    Parameters
    ----------
    alpha, beta : ResourceName
        Entries of permission or conditional kind.

    Returns
    -------
    relation : Relation
        Disjoint for different keys, NonConflict for identical entries,
        LevelConflict for different levels and ValueConflict for equal
        levels with different values (an absent value counts as a value).

    Example
    -------
    >>> from pmspy.permissions.resource_name import classify, parse_name
    >>> classify(parse_name('rn:cam:42:stream:edit'),
    ...          parse_name('rn:cam:42:stream:view')).value
    'LevelConflict'
    >>> classify(parse_name('rn:cam:42:stream:edit'),
    ...          parse_name('rn:cam:7:stream:edit')).value
    'Disjoint'
    """
    for rn in (alpha, beta):
        if rn.level is None:
            msg = f"Item name {rn} cannot take part in a conflict."
            logger.error(msg)
            raise ItemNotClassifiable(msg)

    if alpha.key != beta.key:
        return Relation.DISJOINT
    if alpha.level is not beta.level:
        return Relation.LEVEL_CONFLICT
    if alpha.value is not None and beta.value is not None:
        # raises for mixed kinds
        alpha.value.compare(beta.value)
    if alpha.value == beta.value:
        return Relation.NON_CONFLICT
    return Relation.VALUE_CONFLICT
