# -*- coding: utf-8

"""Module for data container classes.

The DataContainer class and its subclasses store records that are filled in
step by step, e.g. graph statistics or issued keys.

SPDX-License-Identifier: MIT
"""
from pmspy.tools import logger


class DataContainer:
    """
    The DataContainer is parent class for all data containers.

    Parameters
    ----------
    **kwargs :
        See the class documentation of desired DataContainer for available
        keywords.

    Example
    -------
    >>> from pmspy.tools.data_containers import GraphStats, KeyGrant
    >>> stats = GraphStats(node_count=3, avg_entries=1.5)
    >>> stats.get_attr('conflict_count')
    0
    >>> stats.set_attr(wow=5)
    Traceback (most recent call last):
    ...
    KeyError: 'Datacontainer of type GraphStats has no attribute "wow".'
    >>> type(KeyGrant(key_id='abc'))
    <class 'pmspy.tools.data_containers.KeyGrant'>
    """

    def __init__(self, **kwargs):

        var = self.attr()

        # default values
        for key in var.keys():
            self.__dict__.update({key: var[key]})

        self.set_attr(**kwargs)

    def set_attr(self, **kwargs):
        """
        Sets, resets or unsets attributes of a DataContainer type object.

        Parameters
        ----------
        **kwargs :
            See the class documentation of desired DataContainer for available
            keywords.
        """
        var = self.attr()
        for key in kwargs:
            if key in var:
                self.__dict__.update({key: kwargs[key]})

            else:
                msg = (
                    f"Datacontainer of type {self.__class__.__name__} has no "
                    f"attribute \"{key}\"."
                )
                logger.error(msg)
                raise KeyError(msg)

    def get_attr(self, key):
        """
        Get the value of a DataContainer's attribute.

        Parameters
        ----------
        key : str
            The attribute you want to retrieve.

        Returns
        -------
        out :
            Specified attribute.
        """
        if key in self.attr():
            return self.__dict__[key]
        msg = (
            f"Datacontainer of type {self.__class__.__name__} has no "
            f"attribute \"{key}\"."
        )
        logger.error(msg)
        raise KeyError(msg)

    @staticmethod
    def attr():
        """
        Return the available attributes for a DataContainer type object.

        Returns
        -------
        out : dict
            Dictionary of available attributes (dictionary keys) with default
            values.
        """
        return {}

    def _serialize(self):
        return {key: self.get_attr(key) for key in self.attr()}

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._serialize() == other._serialize()

    def __repr__(self):
        fields = ', '.join(f"{k}={v!r}" for k, v in self._serialize().items())
        return f"{self.__class__.__name__}({fields})"


class GraphStats(DataContainer):
    """
    Data container for the size parameters of a permission graph.

    Parameters
    ----------
    node_count : int
        Number of nodes N.

    edge_count : int
        Number of edges.

    avg_entries : float
        Mean number of own entries per node.

    conflict_count : int
        Number of same key collisions met during the most recent full
        evaluation of the graph.
    """

    @staticmethod
    def attr():
        return {
            'node_count': 0, 'edge_count': 0, 'avg_entries': 0.0,
            'conflict_count': 0
        }


class KeyGrant(DataContainer):
    """
    Data container for a short lived key issued to an action point.

    Parameters
    ----------
    key_id : str
        Opaque unique token.

    public_key : bytes
        Opaque key material.

    issued_at : float
        Issue time in seconds since the epoch.

    expires_at : float
        Expiry time, issue time plus the configured lifetime.

    action_point : str
        Identifier of the action point the key was issued to.

    consumer : str
        Canonical key of the consumer the key was issued for.

    superseded : boolean
        True once a newer key replaced this one or it was revoked.
    """

    @staticmethod
    def attr():
        return {
            'key_id': None, 'public_key': b'', 'issued_at': 0.0,
            'expires_at': 0.0, 'action_point': None, 'consumer': None,
            'superseded': False
        }

    def is_valid(self, now):
        return not self.superseded and now < self.expires_at
