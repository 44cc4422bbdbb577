import logging
import logging.config
import os
import sys
from typing import Optional

import yaml

ROOT_LOGGER = "rh_twin"
DEFAULT_FORMAT = "[%(asctime)s] %(levelname)s - %(name)s - %(message)s"


class ConsoleHandler(logging.StreamHandler):
    """Stream handler that always writes to the current sys.stderr."""

    def __init__(self):
        super().__init__(sys.stderr)

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def setup_logging(config_path: str = "config/logging.yaml", level: Optional[str] = None) -> logging.Logger:
    """
    Configure the package logger from a YAML dictConfig file.

    Falls back to a stderr stream handler when the file is missing or invalid.

    Args:
        config_path: Path to the logging YAML file
        level: Optional level name overriding the configured one

    Returns:
        The package root logger
    """
    logger = logging.getLogger(ROOT_LOGGER)

    configured = False
    if os.path.exists(config_path):
        try:
            with open(config_path, "r", encoding="utf-8") as file:
                config = yaml.safe_load(file)
            logging.config.dictConfig(config)
            configured = True
        except (yaml.YAMLError, ValueError, TypeError) as e:
            print(f"Invalid logging config {config_path}: {e}", file=sys.stderr)

    if not configured and not logger.handlers:
        handler = ConsoleHandler()
        handler.setFormatter(logging.Formatter(DEFAULT_FORMAT))
        logger.addHandler(handler)
        logger.setLevel(logging.WARNING)
        logger.propagate = False

    if level:
        logger.setLevel(level.upper())

    return logger

