import math
from dataclasses import asdict, dataclass, fields
from typing import Dict, Optional

from src.config import settings
from src.errors import ConfigError


@dataclass
class OptimConfig:
    """Hyperparameters of initialization, joint optimization and type judgment."""

    total_iters: int = settings.TOTAL_ITERS
    iter_judge: int = settings.ITER_JUDGE
    alpha_min_factor: float = settings.ALPHA_MIN_FACTOR
    phi_min: float = settings.PHI_MIN
    theta_min_deg: float = settings.THETA_MIN_DEG
    lambda_motion: float = settings.LAMBDA_MOTION
    lambda_align: Optional[float] = None      # None: 0 on correspondent data, 1 otherwise
    lr_direction: float = settings.LR_DIRECTION
    lr_position: float = settings.LR_POSITION
    lr_delta: float = settings.LR_DELTA
    lr_final_ratio: float = settings.LR_FINAL_RATIO
    axis_warmup_iters: int = settings.AXIS_WARMUP_ITERS
    judge_window: int = settings.JUDGE_WINDOW
    axis_init: bool = True
    seed: int = settings.DEFAULT_SEED
    log_every: int = settings.LOG_EVERY

    @property
    def theta_min(self) -> float:
        return math.radians(self.theta_min_deg)

    def align_weight(self, correspondent: bool) -> float:
        if self.lambda_align is not None:
            return self.lambda_align
        return 0.0 if correspondent else settings.LAMBDA_ALIGN_UNCORRESPONDED

    def validate(self) -> "OptimConfig":
        if self.total_iters < 1:
            raise ConfigError(f"total_iters must be positive, got {self.total_iters}")
        if not 0 <= self.iter_judge < self.total_iters:
            raise ConfigError(
                f"iter_judge ({self.iter_judge}) must be non-negative and below total_iters ({self.total_iters})"
            )
        weights = {
            "lambda_motion": self.lambda_motion,
            "lambda_align": 0.0 if self.lambda_align is None else self.lambda_align,
            "alpha_min_factor": self.alpha_min_factor,
            "phi_min": self.phi_min,
            "theta_min_deg": self.theta_min_deg,
            "lr_direction": self.lr_direction,
            "lr_position": self.lr_position,
            "lr_delta": self.lr_delta,
        }
        for name, value in weights.items():
            if not math.isfinite(value) or value < 0:
                raise ConfigError(f"{name} must be a finite non-negative number, got {value}")
        if not 0 < self.lr_final_ratio <= 1:
            raise ConfigError(f"lr_final_ratio must lie in (0, 1], got {self.lr_final_ratio}")
        if self.axis_warmup_iters < 0 or self.judge_window < 0 or self.log_every < 1:
            raise ConfigError("axis_warmup_iters and judge_window must be >= 0, log_every >= 1")
        return self

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> "OptimConfig":
        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(unknown)}")

        values = {}
        for name, value in data.items():
            default = known[name].default
            if name == "lambda_align" and value is None:
                values[name] = None
            elif isinstance(default, bool):
                if not isinstance(value, bool):
                    raise ConfigError(f"{name} must be true or false, got {value!r}")
                values[name] = value
            elif isinstance(default, int) and not isinstance(default, bool):
                if not isinstance(value, int) or isinstance(value, bool):
                    raise ConfigError(f"{name} must be an integer, got {value!r}")
                values[name] = value
            else:
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    raise ConfigError(f"{name} must be a number, got {value!r}")
                values[name] = float(value)
        return cls(**values).validate()
