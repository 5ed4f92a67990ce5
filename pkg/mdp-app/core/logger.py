"""
Shared `mdp` logger (stderr, level from MDP_LOG_LEVEL)
"""
import logging
import sys

from core.config import MDP_LOG_LEVEL

logger = logging.getLogger("mdp")

if not logger.handlers:
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s"))
    logger.addHandler(_handler)
    logger.setLevel(MDP_LOG_LEVEL.upper())
    logger.propagate = False
