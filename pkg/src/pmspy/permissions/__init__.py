# -*- coding: utf-8
from .algebra import PermissionSet  # noqa: F401
from .algebra import aggregate_node  # noqa: F401
from .algebra import normalize  # noqa: F401
from .algebra import overwrite  # noqa: F401
from .algebra import unite  # noqa: F401
from .algebra import unite_all  # noqa: F401
from .resource_name import CondValue  # noqa: F401
from .resource_name import Level  # noqa: F401
from .resource_name import LevelOrder  # noqa: F401
from .resource_name import Relation  # noqa: F401
from .resource_name import ResourceName  # noqa: F401
from .resource_name import classify  # noqa: F401
from .resource_name import format_name  # noqa: F401
from .resource_name import parse_name  # noqa: F401
