# -*- coding: utf-8

from .config import Config  # noqa: F401
from .data_containers import GraphStats  # noqa: F401
from .data_containers import KeyGrant  # noqa: F401
