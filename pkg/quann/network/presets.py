from __future__ import annotations
import logging
from typing import Callable, Dict

from ..errors import ConfigError
from .architecture import Architecture, example_network

log = logging.getLogger(__name__)

# ---- Preset registry ----
PRESETS: Dict[str, Callable[[], Architecture]] = {
    "example3": example_network,
}


def get_preset(name: str) -> Architecture:
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; known presets: {', '.join(sorted(PRESETS))}") from None
    log.debug("Building preset architecture %s", name)
    return factory()
