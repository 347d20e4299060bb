"""Shared test configuration.

Property tests drive numerical code whose single-example runtime is not
bounded by hypothesis' default deadline, so the deadline is disabled.
"""

from hypothesis import settings

settings.register_profile("numerics", deadline=None, max_examples=50)
settings.load_profile("numerics")
