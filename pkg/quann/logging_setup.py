from __future__ import annotations
import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path
import sys

LOG_DIR = Path("logs")

FILE_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
CONSOLE_FORMAT = "%(asctime)s | %(levelname)s | %(message)s"


def _build_file_handler(path: Path, level: int) -> RotatingFileHandler:
    handler = RotatingFileHandler(path, maxBytes=1024*1024, backupCount=5, encoding="utf-8")
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(FILE_FORMAT, "%Y-%m-%d %H:%M:%S"))
    return handler


def _console_handler(root: logging.Logger):
    for h in root.handlers:
        if isinstance(h, logging.StreamHandler) and not isinstance(h, logging.FileHandler):
            return h
    return None


def setup_logging(console_level: int = logging.INFO, log_dir: Path = LOG_DIR) -> None:
    """Console plus rotating files; a second call only adjusts the console level."""
    root = logging.getLogger()
    if root.handlers:
        console = _console_handler(root)
        if console is not None:
            console.setLevel(console_level)
        return
    root.setLevel(min(console_level, logging.INFO))

    console = logging.StreamHandler(sys.stdout)
    console.setLevel(console_level)
    console.setFormatter(logging.Formatter(CONSOLE_FORMAT, "%H:%M:%S"))
    root.addHandler(console)

    log_dir = Path(log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)
    root.addHandler(_build_file_handler(log_dir / "app.log", logging.INFO))
    # one summary line per finished experiment
    logging.getLogger("runs").addHandler(_build_file_handler(log_dir / "runs.log", logging.INFO))
    logging.getLogger("quann.dynamics").addHandler(_build_file_handler(log_dir / "dynamics.log", logging.INFO))
