from _qhall import *  # noqa: F401,F403
from _qhall import __doc__  # noqa: F401
