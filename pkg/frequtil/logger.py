"""Logging setup: console on stderr plus a rotating run log."""

import logging
import os
from logging.handlers import RotatingFileHandler
from typing import Union

LOGGER_NAME = "frequtil"


def setup_logger(log_dir: str = "logs", level: Union[int, str] = logging.INFO,
                 console: bool = True) -> logging.Logger:
    """Configure the package logger once; later calls only adjust the level.

    stdout is left alone because reports may be streamed there.
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)

    if logger.handlers:
        for handler in logger.handlers:
            handler.setLevel(level)
        return logger

    fmt = logging.Formatter(
        "%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    if console:
        ch = logging.StreamHandler()  # stderr
        ch.setLevel(level)
        ch.setFormatter(fmt)
        logger.addHandler(ch)

    os.makedirs(log_dir, exist_ok=True)
    # 10MB per file, keep 5
    fh = RotatingFileHandler(
        os.path.join(log_dir, "frequtil.log"),
        maxBytes=10 * 1024 * 1024,
        backupCount=5,
    )
    fh.setLevel(level)
    fh.setFormatter(fmt)
    logger.addHandler(fh)

    return logger
