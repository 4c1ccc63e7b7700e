from __future__ import annotations
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .errors import ConfigError

# -------- Core enums --------
class EnvMode(Enum):
    UNIFORM = "uniform"
    EIGENSTATE = "eigenstate"

class LagMode(Enum):
    FIXED = "fixed"
    AUTO = "auto"

class RqaMode(Enum):
    SUMMARY = "summary"
    EIGENSTATES = "eigenstates"
    EPOCHS = "epochs"

class RadiiKind(Enum):
    ABSOLUTE = "absolute"
    SIGMA = "sigma"


# -------- Parsed flag values --------
@dataclass(frozen=True)
class EnvSelection:
    mode: EnvMode = EnvMode.UNIFORM
    index: Optional[int] = None  # 1-based eigenstate

    @classmethod
    def parse(cls, text: Any) -> "EnvSelection":
        raw = str(text).strip().lower()
        if raw == "uniform":
            return cls()
        try:
            k = int(raw)
        except ValueError:
            raise ConfigError(f"--env must be 'uniform' or an eigenstate index, got {text!r}") from None
        if k < 1:
            raise ConfigError(f"eigenstate index must be >= 1, got {k}")
        return cls(EnvMode.EIGENSTATE, k)


@dataclass(frozen=True)
class LagSpec:
    mode: LagMode = LagMode.FIXED
    value: int = 1

    @classmethod
    def parse(cls, text: Any) -> "LagSpec":
        raw = str(text).strip().lower()
        if raw == "auto":
            return cls(LagMode.AUTO, 0)
        try:
            h = int(raw)
        except ValueError:
            raise ConfigError(f"--lag must be an integer or 'auto', got {text!r}") from None
        if h < 1:
            raise ConfigError(f"lag must be >= 1, got {h}")
        return cls(LagMode.FIXED, h)


@dataclass(frozen=True)
class RadiiSpec:
    """Absolute radii, or multiples of the series' sample standard deviation."""
    kind: RadiiKind
    values: Tuple[float, ...]

    @classmethod
    def parse(cls, text: Any) -> "RadiiSpec":
        raw = str(text).strip()
        if not raw:
            raise ConfigError("radius list is empty")
        if raw.lower().startswith("sigma:"):
            parts = raw.split(":")[1:]
            try:
                nums = [float(x) for x in parts]
            except ValueError:
                raise ConfigError(f"bad sigma range {text!r}; use sigma:START:STOP:STEP or sigma:X") from None
            if len(nums) == 1:
                multiples = nums
            elif len(nums) == 3:
                multiples = sigma_range(*nums)
            else:
                raise ConfigError(f"bad sigma range {text!r}; use sigma:START:STOP:STEP or sigma:X")
            return cls(RadiiKind.SIGMA, tuple(multiples))._validated()
        try:
            values = [float(x) for x in raw.split(",") if x.strip()]
        except ValueError:
            raise ConfigError(f"bad radius list {text!r}") from None
        return cls(RadiiKind.ABSOLUTE, tuple(values))._validated()

    def _validated(self) -> "RadiiSpec":
        if not self.values:
            raise ConfigError("radius list is empty")
        if any(not v > 0 for v in self.values):
            raise ConfigError(f"radii must be positive, got {list(self.values)}")
        return self

    def resolve(self, series: np.ndarray) -> np.ndarray:
        """Absolute radii for this series."""
        vals = np.asarray(self.values, dtype=np.float64)
        if self.kind is RadiiKind.ABSOLUTE:
            return vals
        return vals * float(np.std(np.asarray(series, dtype=np.float64), ddof=1))


def sigma_range(start: float, stop: float, step: float) -> List[float]:
    """start, start+step, ... up to stop inclusive; 0.5..2.0 by 0.1 gives 16 values."""
    if step <= 0 or stop < start:
        raise ConfigError(f"bad sigma range {start}:{stop}:{step}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + step * i, 10) for i in range(count)]


def parse_dims(text: Any) -> Tuple[int, ...]:
    raw = str(text).strip()
    try:
        if ":" in raw:
            a, b = (int(x) for x in raw.split(":"))
        else:
            a = b = int(raw)
    except ValueError:
        raise ConfigError(f"--dims must be A:B or a single dimension, got {text!r}") from None
    if a < 1 or b < a:
        raise ConfigError(f"bad dimension range {a}:{b}")
    return tuple(range(a, b + 1))


# -------- Experiment configuration --------
@dataclass
class ExperimentConfig:
    command: str
    preset: str = "example3"
    arch: Optional[str] = None
    p: float = 0.5
    steps: int = 6000
    drop: int = 1000
    dim: int = 7
    lag: LagSpec = field(default_factory=LagSpec)
    radii: RadiiSpec = field(default_factory=lambda: RadiiSpec(RadiiKind.SIGMA, (1.0,)))
    env: EnvSelection = field(default_factory=EnvSelection)
    workers: int = 1
    mode: RqaMode = RqaMode.SUMMARY
    epochs: int = 1
    epoch_size: int = 1000
    dims: Tuple[int, ...] = (3,)
    p_start: float = 0.0
    p_stop: float = 1.0
    p_step: float = 0.001
    out: Optional[Path] = None

    @property
    def kept(self) -> int:
        return self.steps - self.drop

    @classmethod
    def from_settings(cls, command: str, s: Dict[str, Any]) -> "ExperimentConfig":
        try:
            cfg = cls(
                command=command,
                preset=str(s.get("preset", "example3")),
                arch=s.get("arch"),
                p=float(s["p"]),
                steps=int(s["steps"]),
                drop=int(s["drop"]),
                dim=int(s["dim"]),
                lag=LagSpec.parse(s["lag"]),
                radii=RadiiSpec.parse(s["radii"]),
                env=EnvSelection.parse(s["env"]),
                workers=int(s.get("workers", 1)),
                mode=RqaMode(str(s.get("mode", "summary"))),
                epochs=int(s["epochs"]),
                epoch_size=int(s["epoch_size"]),
                dims=parse_dims(s["dims"]),
                p_start=float(s["p_start"]),
                p_stop=float(s["p_stop"]),
                p_step=float(s["p_step"]),
                out=Path(s["out"]) if s.get("out") else None,
            )
        except KeyError as e:
            raise ConfigError(f"missing setting {e.args[0]!r}") from None
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid setting: {e}") from None
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"p must lie in [0, 1], got {self.p}")
        if self.drop < 0:
            raise ConfigError(f"--drop must be >= 0, got {self.drop}")
        if self.steps <= self.drop:
            raise ConfigError(f"--steps ({self.steps}) must exceed --drop ({self.drop})")
        if self.dim < 1:
            raise ConfigError(f"--dim must be >= 1, got {self.dim}")
        if self.workers < 1:
            raise ConfigError(f"--workers must be >= 1, got {self.workers}")
        if self.epochs < 1 or self.epoch_size < 1:
            raise ConfigError("--epochs and --epoch-size must be >= 1")
        if not (0.0 <= self.p_start <= self.p_stop <= 1.0) or self.p_step <= 0:
            raise ConfigError(f"bad p sweep {self.p_start}:{self.p_stop}:{self.p_step}")
