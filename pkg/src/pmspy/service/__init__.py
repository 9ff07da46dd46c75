# -*- coding: utf-8

from .flow import ActionPoint  # noqa: F401
from .flow import PermissionEnforcementPoint  # noqa: F401
from .keys import KeyIssuer  # noqa: F401
from .system import PermissionService  # noqa: F401
