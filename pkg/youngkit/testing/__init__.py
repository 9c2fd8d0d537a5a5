from . import api
from . import instances
from . import measure
