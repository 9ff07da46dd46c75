# -*- coding: utf-8

from .audit import AuditLog  # noqa: F401
from .audit import AuditRecord  # noqa: F401
from .decision import AccessRequest  # noqa: F401
from .decision import Decision  # noqa: F401
from .decision import check  # noqa: F401
from .decision import check_many  # noqa: F401
from .decision import judge  # noqa: F401
