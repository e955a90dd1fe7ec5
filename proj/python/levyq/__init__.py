from ._levyq import *  # noqa: F401,F403
from ._levyq import __version__  # noqa: F401
