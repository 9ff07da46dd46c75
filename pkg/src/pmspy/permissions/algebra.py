# -*- coding: utf-8

"""Module for permission sets and their aggregation algebra.

Two binary operations merge permission sets:

- unite (:func:`unite`), keys present in both operands resolve to the
  greater entry (higher level, or at equal level the greater condition value
  where an absent value is the greatest),
- overwrite (:func:`overwrite`), keys present in both operands keep the entry
  of the left, dominating operand.

A node's effective set is its own set overwriting the unite of the sets it
inherits, see :func:`aggregate_node`.

SPDX-License-Identifier: MIT
"""
from functools import reduce

from pmspy.permissions.resource_name import DEFAULT_ORDER
from pmspy.permissions.resource_name import Relation
from pmspy.permissions.resource_name import classify
from pmspy.permissions.resource_name import compare_values
from pmspy.permissions.resource_name import format_name
from pmspy.permissions.resource_name import parse_name
from pmspy.tools import logger
from pmspy.tools.helpers import DisjointOperands
from pmspy.tools.helpers import ItemEntry


class PermissionSet:
    r"""
    Immutable, conflict free set of permission entries.

    A permission set holds at most one entry per :code:`(base, identifier,
    scope)` key and no item names. Instances are created with
    :func:`normalize` (or :meth:`PermissionSet.from_strings`), the algebra
    functions return new instances.

    Example
    -------
    >>> from pmspy.permissions.algebra import PermissionSet
    >>> ps = PermissionSet.from_strings(
    ...     ['rn:door:7:open:admin', 'rn:cam:42:stream:view',
    ...      'rn:cam:42:stream:edit'])
    >>> ps.to_strings()
    ['rn:cam:42:stream:edit', 'rn:door:7:open:admin']
    >>> ('cam', '42', 'stream') in ps
    True
    >>> len(PermissionSet())
    0
    """

    __slots__ = ('_entries', '_hash')

    def __init__(self, entries=None):
        self._entries = {}
        self._hash = None
        if entries:
            self._entries = normalize(entries)._entries

    @classmethod
    def _trusted(cls, entries):
        # entries is a conflict free key -> entry dict owned by the new set
        ps = cls.__new__(cls)
        ps._entries = entries
        ps._hash = None
        return ps

    @classmethod
    def from_strings(cls, texts, order=DEFAULT_ORDER):
        return normalize([parse_name(t) for t in texts], order)

    def __iter__(self):
        return iter(sorted(self._entries.values(), key=format_name))

    def __len__(self):
        return len(self._entries)

    def __bool__(self):
        return bool(self._entries)

    def __contains__(self, key):
        if isinstance(key, tuple):
            return key in self._entries
        return self._entries.get(key.key) == key

    def __eq__(self, other):
        if not isinstance(other, PermissionSet):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._entries.values()))
        return self._hash

    def __repr__(self):
        return f"PermissionSet({self.to_strings()!r})"

    def get(self, key, default=None):
        """Return the entry stored for a :code:`(b, i, s)` key."""
        return self._entries.get(key, default)

    def keys(self):
        return set(self._entries)

    def entries(self):
        """Return a copy of the key to entry mapping."""
        return dict(self._entries)

    def to_strings(self):
        """Return the canonical strings in their lexicographic order."""
        return sorted(format_name(e) for e in self._entries.values())

    def with_entry(self, entry, order=DEFAULT_ORDER):
        """Return a new set with entry inserted, collisions resolve by max."""
        _check_entry(entry)
        entries = dict(self._entries)
        current = entries.get(entry.key)
        entries[entry.key] = (
            entry if current is None else max_entry(current, entry, order)
        )
        return PermissionSet._trusted(entries)

    def without_key(self, key):
        """Return a new set without the entry of key."""
        entries = dict(self._entries)
        entries.pop(key)
        return PermissionSet._trusted(entries)


def _check_entry(entry):
    if entry.level is None:
        msg = (
            f"Item name {format_name(entry)} cannot be a permission entry, "
            "permission sets hold permission or conditional names only."
        )
        logger.error(msg)
        raise ItemEntry(msg)


def max_entry(alpha, beta, order=DEFAULT_ORDER):
    r"""
    Resolve two entries of the same key to the greater one.

    Parameters
    ----------
    alpha, beta : ResourceName
        Permission or conditional entries sharing one key.

    order : LevelOrder
        Level order of the graph.

    Returns
    -------
    entry : ResourceName
        On a level conflict the whole entry with the higher level, on a value
        conflict the entry with the greater value (absent is greatest), for
        identical entries alpha.

    Example
    -------
    >>> from pmspy.permissions.algebra import max_entry
    >>> from pmspy.permissions.resource_name import parse_name as p
    >>> str(max_entry(p('rn:cam:42:stream:edit'), p('rn:cam:42:stream:view')))
    'rn:cam:42:stream:edit'
    >>> str(max_entry(p('rn:door:7:open:view:integer:30'),
    ...               p('rn:door:7:open:view')))
    'rn:door:7:open:view'
    """
    relation = classify(alpha, beta)
    if relation is Relation.DISJOINT:
        msg = (
            f"Cannot resolve {format_name(alpha)} against "
            f"{format_name(beta)}, the entries name different resources."
        )
        logger.error(msg)
        raise DisjointOperands(msg)
    if relation is Relation.LEVEL_CONFLICT:
        return alpha if order.compare(alpha.level, beta.level) > 0 else beta
    if relation is Relation.VALUE_CONFLICT:
        return alpha if compare_values(alpha.value, beta.value) > 0 else beta
    return alpha


def normalize(entries, order=DEFAULT_ORDER):
    r"""
    Build a permission set from a list of entries.

    Entries sharing a key collapse to their :func:`max_entry`.

    Parameters
    ----------
    entries : iterable
        Permission or conditional resource names.

    Returns
    -------
    ps : PermissionSet
    """
    result = {}
    for entry in entries:
        _check_entry(entry)
        current = result.get(entry.key)
        result[entry.key] = (
            entry if current is None else max_entry(current, entry, order)
        )
    return PermissionSet._trusted(result)


def _merge(a, b, resolve):
    # returns the merged entries and the number of colliding keys
    if len(a) < len(b):
        small, large, swapped = a._entries, b._entries, True
    else:
        small, large, swapped = b._entries, a._entries, False
    merged = dict(large)
    collisions = 0
    for key, entry in small.items():
        other = merged.get(key)
        if other is None:
            merged[key] = entry
            continue
        if other != entry:
            collisions += 1
        left, right = (entry, other) if swapped else (other, entry)
        merged[key] = resolve(left, right)
    return merged, collisions


def unite_counted(a, b, order=DEFAULT_ORDER):
    """Return :func:`unite` of a and b with the number of conflicts met."""
    merged, collisions = _merge(
        a, b, lambda x, y: max_entry(x, y, order)
    )
    return PermissionSet._trusted(merged), collisions


def overwrite_counted(a, b):
    """Return :func:`overwrite` of a and b with the number of conflicts met."""
    merged, collisions = _merge(a, b, lambda x, y: x)
    return PermissionSet._trusted(merged), collisions


def unite(a, b, order=DEFAULT_ORDER):
    r"""
    Unite two permission sets.

    Keys present in one operand only pass through, keys present in both
    resolve to their :func:`max_entry`. Unite is commutative, associative and
    idempotent with the empty set as identity.

    Example
    -------
    >>> from pmspy.permissions.algebra import PermissionSet, unite
    >>> a = PermissionSet.from_strings(['rn:a:1:x:view', 'rn:b:2:y:edit'])
    >>> b = PermissionSet.from_strings(['rn:b:2:y:admin', 'rn:c:3:z:view'])
    >>> unite(a, b).to_strings()
    ['rn:a:1:x:view', 'rn:b:2:y:admin', 'rn:c:3:z:view']
    """
    return unite_counted(a, b, order)[0]


def overwrite(a, b):
    r"""
    Overwrite permission set b with permission set a.

    Keys present in one operand only pass through, on every conflict the entry
    of a is kept verbatim. Overwrite is not commutative.

    Example
    -------
    >>> from pmspy.permissions.algebra import PermissionSet, overwrite
    >>> a = PermissionSet.from_strings(['rn:d:1:o:view:integer:10'])
    >>> b = PermissionSet.from_strings(
    ...     ['rn:d:1:o:view:integer:99', 'rn:e:2:p:edit'])
    >>> overwrite(a, b).to_strings()
    ['rn:d:1:o:view:integer:10', 'rn:e:2:p:edit']
    """
    return overwrite_counted(a, b)[0]


def union(a, b, order=DEFAULT_ORDER):
    """Plain set union of two permission sets followed by normalization."""
    return normalize(list(a) + list(b), order)


def unite_all(sets, order=DEFAULT_ORDER):
    """Fold :func:`unite` over a list of permission sets."""
    return reduce(lambda x, y: unite(x, y, order), sets, PermissionSet())


def aggregate_node_counted(own, inherited, order=DEFAULT_ORDER):
    """Return :func:`aggregate_node` with the number of conflicts met."""
    combined = PermissionSet()
    conflicts = 0
    for ps in inherited:
        combined, n = unite_counted(combined, ps, order)
        conflicts += n
    result, n = overwrite_counted(own, combined)
    return result, conflicts + n


def aggregate_node(own, inherited, order=DEFAULT_ORDER):
    r"""
    Return a node's effective set.

    Parameters
    ----------
    own : PermissionSet
        The node's own entries.

    inherited : list
        Effective sets of the nodes the node inherits from.

    Returns
    -------
    effective : PermissionSet
        :code:`overwrite(own, unite_all(inherited))`, which equals
        :code:`unite_all([overwrite(own, s) for s in inherited])` for a non
        empty list.

    Example
    -------
    >>> from pmspy.permissions.algebra import PermissionSet, aggregate_node
    >>> own = PermissionSet.from_strings(['rn:cam:42:stream:view'])
    >>> inherited = [
    ...     PermissionSet.from_strings(['rn:cam:42:stream:admin']),
    ...     PermissionSet.from_strings(['rn:door:7:open:edit'])]
    >>> aggregate_node(own, inherited).to_strings()
    ['rn:cam:42:stream:view', 'rn:door:7:open:edit']
    """
    return aggregate_node_counted(own, inherited, order)[0]
