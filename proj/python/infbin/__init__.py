from ._infbin import *  # noqa: F401,F403
from ._infbin import __doc__  # noqa: F401
