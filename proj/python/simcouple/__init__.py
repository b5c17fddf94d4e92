"""Coupled rigid-body / mass-spring simulation."""

from ._simcouple import *  # noqa: F401,F403
from ._simcouple import __doc__  # noqa: F401
