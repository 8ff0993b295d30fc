"""Python bindings for the subpress C++ library."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, Error, NoClosure, UnsupportedSft, GridTooShort, ConfigError  # noqa: F401
