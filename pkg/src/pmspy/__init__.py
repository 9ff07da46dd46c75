# -*- coding: utf-8
import importlib.resources
import os

__datapath__ = os.path.join(importlib.resources.files("pmspy"), "data")
__version__ = '0.1.0 - First Grant'

# pmspy tools imports
from .tools import config  # noqa: F401
from .tools import global_vars  # noqa: F401
from .tools import helpers  # noqa: F401
from .tools import logger  # noqa: F401
# pmspy permission imports
from .permissions import algebra  # noqa: F401
from .permissions import resource_name  # noqa: F401
# pmspy graph imports
from .graphs import graph  # noqa: F401
from .graphs import graph_store  # noqa: F401
# pmspy decision imports
from .decisions import audit  # noqa: F401
from .decisions import decision  # noqa: F401
