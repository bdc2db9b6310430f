"""
Logging setup for uqlab
Uses a single stream handler; reports own stdout, so records go to stderr
"""

import logging
import os
import sys
from typing import Optional


def setup_logging(level: Optional[str] = None):
    """Setup uqlab logging (stderr only)"""
    log_level = (level or os.getenv('LOG_LEVEL', 'INFO')).upper()

    logger = logging.getLogger('uqlab')
    logger.setLevel(getattr(logging, log_level, logging.INFO))

    # Only add handler if none exist (prevent duplicates on repeated setup)
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        formatter = logging.Formatter(
            '[%(asctime)s] %(levelname)s %(module)s: %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    for handler in logger.handlers:
        handler.setLevel(getattr(logging, log_level, logging.INFO))

    return logger
