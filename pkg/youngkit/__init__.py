from . import settings
from .errors import *
from .monotone import *
from .quadrature import *
from .young import *
from .legendre import *
from .precision import *
from .probability import *
from .cconvex import *

try:
    from ._version import version
except ImportError:
    try:
        from setuptools_scm import get_version

        version = get_version()
    except (ImportError, LookupError):
        version = "???"
__version__ = version
