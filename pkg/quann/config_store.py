from __future__ import annotations
from pathlib import Path
import copy
import json
import logging
from datetime import datetime
from typing import Dict, Any, Optional, Union

from .dynamics.envdyn import REFERENCE_P
from .errors import DataFormatError

log = logging.getLogger(__name__)

CONFIG_DIR = Path("config")
SETTINGS_FILE = CONFIG_DIR / "settings.json"
RUNS_DIR = Path("runs")

# Shared defaults; "commands" holds per-subcommand overrides taken from the
# reference runs of the three-neuron network. A "<command>:<mode>" entry is
# applied on top of its command when that mode is selected.
DEFAULT_SETTINGS: Dict[str, Any] = {
    "preset": "example3",
    "arch": None,
    "p": REFERENCE_P,
    "steps": 6000,
    "drop": 1000,
    "dim": 7,
    "lag": "1",
    "radii": "sigma:0.5:2.0:0.1",
    "env": "uniform",
    "workers": 1,
    "mode": "summary",
    "epochs": 10,
    "epoch_size": 1000,
    "dims": "3:9",
    "p_start": 0.0,
    "p_stop": 1.0,
    "p_step": 0.001,
    "psi0": "uniform",
    "commands": {
        "dynamics": {"steps": 11000, "drop": 1000},
        "rqa": {"steps": 6000, "drop": 1000, "dim": 7, "lag": "1", "radii": "sigma:0.5:2.0:0.1"},
        "rqa:epochs": {"steps": 101000, "drop": 1000, "epochs": 10, "epoch_size": 10000, "radii": "0.4"},
        "corr-dim": {"steps": 5100, "drop": 1000, "epochs": 4, "epoch_size": 1000,
                     "dims": "3:9", "lag": "1", "radii": "sigma:1.0:1.7:0.1"},
        "rec-plot": {"steps": 11000, "drop": 1000, "dim": 7, "lag": "1", "radii": "sigma:2"},
        "prob-scan": {"steps": 3000, "drop": 1000, "dims": "3:8", "lag": "auto", "radii": "sigma:1"},
    },
}


def ensure_runtime_folders() -> None:
    for p in [Path("logs"), RUNS_DIR]:
        p.mkdir(parents=True, exist_ok=True)


def load_settings(path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """Defaults overlaid with a JSON settings file; a missing file means defaults."""
    settings = copy.deepcopy(DEFAULT_SETTINGS)
    p = Path(path) if path is not None else SETTINGS_FILE
    if not p.exists():
        if path is not None:
            raise DataFormatError(f"settings file not found: {p}")
        return settings
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DataFormatError(f"{p}: invalid JSON ({e})") from None
    if not isinstance(doc, dict):
        raise DataFormatError(f"{p}: settings must be a JSON object")

    for key, value in doc.items():
        if key == "commands":
            continue
        if key not in settings:
            log.warning("Ignoring unknown setting %r in %s", key, p)
            continue
        settings[key] = value
        # a shared value from the file beats the built-in per-command default
        for overrides in settings["commands"].values():
            overrides.pop(key, None)
    commands = doc.get("commands", {})
    if not isinstance(commands, dict):
        raise DataFormatError(f"{p}: 'commands' must be a JSON object")
    for cmd, overrides in commands.items():
        settings["commands"].setdefault(cmd, {}).update(overrides or {})
    return settings


def save_settings(settings: Dict[str, Any], path: Optional[Union[str, Path]] = None) -> None:
    p = Path(path) if path is not None else SETTINGS_FILE
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(settings, indent=2), encoding="utf-8")


def settings_for(settings: Dict[str, Any], command: str, mode: Optional[str] = None) -> Dict[str, Any]:
    """Flatten shared settings with the command's overrides, then the mode's."""
    flat = {k: v for k, v in settings.items() if k != "commands"}
    commands = settings.get("commands", {})
    flat.update(commands.get(command, {}))
    mode = mode or flat.get("mode")
    if mode:
        flat.update(commands.get(f"{command}:{mode}", {}))
    return flat


def new_run_folder(command: str, root: Path = RUNS_DIR) -> Path:
    folder = Path(root) / f"{datetime.now().strftime('%Y%m%d-%H%M%S')}_{command}"
    folder.mkdir(parents=True, exist_ok=True)
    return folder
