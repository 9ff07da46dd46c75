# -*- coding: utf-8

"""Module for the engine and service configuration.

Defaults are read from the package data file :code:`default_config.json`,
environment variables override them and keyword arguments override both.

SPDX-License-Identifier: MIT
"""
import json
import os

from pmspy import __datapath__
from pmspy.tools import logger
from pmspy.tools.global_vars import config_data


def load_default_config():
    r"""
    Read the default configuration shipped with the package.

    Returns
    -------
    data : dict
        Default value for every configuration key.
    """
    path = os.path.join(__datapath__, 'default_config.json')
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def _from_env(key, text):
    if key == 'level_order':
        return [word.strip() for word in text.split(',') if word.strip()]
    if key == 'bind_port':
        return int(text)
    if key == 'key_ttl':
        return float(text)
    return text


class Config:
    r"""
    Class Config holds the settings of a permission management system.

    Parameters
    ----------
    level_order : list
        Permission level words from lowest to highest privilege.

    bind_host : str
        Address the service binds to, loopback by default.

    bind_port : int
        Port the service binds to.

    admin_token : str
        Static bearer token for the admin endpoints, :code:`None` refuses
        every admin request.

    key_ttl : float
        Lifetime of issued keys in seconds.

    snapshot_path : str
        Graph snapshot file, :code:`None` keeps the graph in memory only.

    journal_path : str
        Mutation journal file.

    audit_path : str
        Decision audit log file.

    use_env : boolean
        Apply the :code:`PMSPY_*` environment overrides, default True.

    Example
    -------
    >>> from pmspy.tools.config import Config
    >>> cfg = Config(use_env=False, key_ttl=60)
    >>> cfg.get_attr('key_ttl')
    60
    >>> cfg.get_attr('bind_host')
    '127.0.0.1'
    >>> [level.value for level in cfg.levels().levels]
    ['view', 'edit', 'admin']
    """

    def __init__(self, use_env=True, **kwargs):
        self.set_defaults()
        if use_env:
            self.set_attr(**self.environment_overrides())
        self.set_attr(**kwargs)

    def set_defaults(self):
        """Set default configuration values."""
        for key, value in load_default_config().items():
            self.__dict__.update({key: value})
        logger.debug(f"Default configuration: {self._serialize()}")

    @staticmethod
    def environment_overrides():
        """Return the configuration values set by environment variables."""
        overrides = {}
        for key, data in config_data.items():
            text = os.environ.get(data['env'])
            if text is not None:
                try:
                    overrides[key] = _from_env(key, text)
                except ValueError:
                    msg = (
                        f"The environment variable {data['env']} must hold "
                        f"the {data['text']}, got '{text}'."
                    )
                    logger.error(msg)
                    raise ValueError(msg)
        return overrides

    def set_attr(self, **kwargs):
        r"""
        Set, reset or unset configuration values.

        Parameters
        ----------
        **kwargs :
            See the class documentation for available keywords.
        """
        for key, value in kwargs.items():
            if key not in config_data:
                msg = f"Config has no attribute '{key}'."
                logger.error(msg)
                raise KeyError(msg)

            if not isinstance(value, config_data[key]['type']) or (
                    isinstance(value, bool)):
                msg = (
                    f"The {config_data[key]['text']} ({key}) must not be of "
                    f"type {type(value).__name__}."
                )
                logger.error(msg)
                raise TypeError(msg)

            if key == 'key_ttl' and value <= 0:
                msg = f"The key lifetime must be positive, got {value}."
                logger.error(msg)
                raise ValueError(msg)

            if key == 'level_order':
                value = list(value)
                # validated here, fixed for the lifetime of a graph
                self._make_level_order(value)

            self.__dict__.update({key: value})
            logger.debug(f"Setting {config_data[key]['text']}: {value}.")

    def get_attr(self, key):
        r"""
        Get the value of a configuration key.

        Parameters
        ----------
        key : str
            The attribute you want to retrieve.

        Returns
        -------
        out :
            Specified attribute.
        """
        if key in config_data:
            return self.__dict__[key]
        msg = f"Config has no attribute '{key}'."
        logger.error(msg)
        raise KeyError(msg)

    @staticmethod
    def _make_level_order(words):
        from pmspy.permissions.resource_name import LevelOrder
        return LevelOrder.from_words(words)

    def levels(self):
        """Return the :code:`LevelOrder` described by this configuration."""
        return self._make_level_order(self.get_attr('level_order'))

    def _serialize(self):
        return {key: self.__dict__[key] for key in config_data}
