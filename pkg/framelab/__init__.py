"""
Phase retrieval and weak phase retrieval of finite real frames
"""

__version__ = "0.1.0"

from .errors import FramelabError  # noqa: E402
from .frames import Frame  # noqa: E402
from .linalg import EXACT_BACKEND, FLOAT_BACKEND, Backend, Vector  # noqa: E402
from .spark import (  # noqa: E402
    Outcome,
    Rule,
    complement_property,
    does_phase_retrieval,
    is_full_spark,
)
from .wpr import classify_pair, decide_wpr, weakly_same_phase  # noqa: E402
