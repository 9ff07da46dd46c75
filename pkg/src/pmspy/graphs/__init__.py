# -*- coding: utf-8
from .graph import PermissionGraph  # noqa: F401
from .graph_store import Journal  # noqa: F401
from .graph_store import load_snapshot  # noqa: F401
from .graph_store import replay  # noqa: F401
from .graph_store import save_snapshot  # noqa: F401
