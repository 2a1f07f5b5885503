import csv
from dataclasses import dataclass, field
from pathlib import Path
from threading import Event
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial import cKDTree

from src.analysis.initialization import MotionInit
from src.analysis.losses import PartGradient, PartParams, StatePair, evaluate_losses
from src.config import settings
from src.config.optim_config import OptimConfig
from src.errors import IoError
from src.geometry.point_cloud import centroid, enclosing_radius
from src.ingest.records import MotionType, SceneSequence
from src.logging_utils.logger import get_logger

PARAM_GROUPS = ("direction_raw", "position", "delta_alpha", "delta_phi")


@dataclass
class TypeVerdict:
    types: Dict[int, MotionType] = field(default_factory=dict)
    total_alpha: Dict[int, float] = field(default_factory=dict)
    total_phi: Dict[int, float] = field(default_factory=dict)

    @property
    def pruned(self) -> List[int]:
        return sorted(label for label, kind in self.types.items() if kind is MotionType.PRUNED)

    @property
    def retained(self) -> List[int]:
        return sorted(label for label, kind in self.types.items() if kind is not MotionType.PRUNED)


@dataclass
class LossTrace:
    labels: List[int]
    iterations: List[int] = field(default_factory=list)
    totals: List[float] = field(default_factory=list)
    per_part: List[Dict[int, float]] = field(default_factory=list)

    def record(self, iteration: int, total: float, per_part: Dict[int, float]) -> None:
        self.iterations.append(iteration)
        self.totals.append(total)
        self.per_part.append(dict(per_part))

    def __len__(self) -> int:
        return len(self.totals)

    def write_csv(self, path: Union[str, Path]) -> None:
        path = Path(path)
        try:
            with open(path, "w", encoding="utf-8", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(["iteration", "total"] + [f"part_{label}" for label in self.labels])
                for iteration, total, parts in zip(self.iterations, self.totals, self.per_part):
                    writer.writerow([iteration, repr(total)] +
                                    [repr(parts[label]) if label in parts else "" for label in self.labels])
        except OSError as exc:
            raise IoError(f"cannot write loss trace: {exc.strerror or exc}", path) from exc


@dataclass
class OptimizationResult:
    params: Dict[int, PartParams]
    verdict: TypeVerdict
    trace: LossTrace


class _Adam:
    """Per-array Adam moments with bias correction."""

    def __init__(self, shape):
        self.m = np.zeros(shape)
        self.v = np.zeros(shape)
        self.steps = 0

    def reset(self) -> None:
        self.m[...] = 0.0
        self.v[...] = 0.0
        self.steps = 0

    def step(self, value: np.ndarray, grad: np.ndarray, lr: float) -> None:
        self.steps += 1
        self.m = settings.ADAM_BETA1 * self.m + (1.0 - settings.ADAM_BETA1) * grad
        self.v = settings.ADAM_BETA2 * self.v + (1.0 - settings.ADAM_BETA2) * (grad * grad)
        m_hat = self.m / (1.0 - settings.ADAM_BETA1 ** self.steps)
        v_hat = self.v / (1.0 - settings.ADAM_BETA2 ** self.steps)
        value -= lr * m_hat / (np.sqrt(v_hat) + settings.ADAM_EPS)


def motion_extent(deltas: np.ndarray) -> float:
    """Spread of the cumulative motion over the sequence, frame 0 included.

    Equals the absolute sum for monotone motion and the amplitude for motion
    that returns to its start.
    """
    path = np.concatenate(([0.0], np.cumsum(deltas)))
    return float(path.max() - path.min())


def judge_motion_type(total_alpha: float, total_phi: float, alpha_min: float, phi_min: float) -> MotionType:
    """Motion type from accumulated translation and rotation."""
    translates = total_alpha >= alpha_min
    rotates = total_phi >= phi_min
    if translates and rotates:
        return MotionType.RT
    if translates:
        return MotionType.T
    if rotates:
        return MotionType.R
    return MotionType.PRUNED


class SceneOptimizer:
    """Joint refinement of every part's axis and per-frame motion quantities."""

    def __init__(self, sequence: SceneSequence, inits: Sequence[MotionInit], cfg: Optional[OptimConfig] = None):
        self.cfg = (cfg or OptimConfig()).validate()
        self.sequence = sequence
        self.num_frames = sequence.num_frames
        self.correspondent = sequence.correspondent
        self.lambda_align = self.cfg.align_weight(self.correspondent)
        self.stop_event = Event()
        self.logger = get_logger("optimizer")

        by_label = {init.label: init for init in inits}
        missing = sorted(set(sequence.part_labels) - set(by_label))
        if missing:
            raise ValueError(f"no initialization for part label(s) {missing}")

        self.frames = {label: sequence.part_frames(label) for label in sequence.part_labels}
        self.params: Dict[int, PartParams] = {
            label: PartParams.from_axis(label, by_label[label].axis, self.num_frames)
            for label in sequence.part_labels
        }
        self.types: Dict[int, MotionType] = {label: MotionType.RT for label in self.params}
        self.active: List[int] = sorted(self.params)
        self.frozen: Dict[int, set] = {label: set() for label in self.params}
        self.adam = {
            label: {name: _Adam(getattr(p, name).shape) for name in PARAM_GROUPS}
            for label, p in self.params.items()
        }
        self.trees = None
        if self.lambda_align or not self.correspondent:
            self.trees = {
                (label, i): cKDTree(cloud.points)
                for label, clouds in self.frames.items()
                for i, cloud in enumerate(clouds)
            }
        self.verdict = TypeVerdict()
        self.trace = LossTrace(labels=sorted(self.params))
        self.rng = np.random.default_rng(self.cfg.seed)
        self.window_start = max(0, self.cfg.iter_judge - self.cfg.judge_window)
        self.window_steps = 0
        self.window_alpha = {label: np.zeros(self.num_frames - 1) for label in self.params}
        self.window_phi = {label: np.zeros(self.num_frames - 1) for label in self.params}

    # ----- schedule helpers -----
    def learning_rate(self, group: str, iteration: int) -> float:
        base = {
            "direction_raw": self.cfg.lr_direction,
            "position": self.cfg.lr_position,
            "delta_alpha": self.cfg.lr_delta,
            "delta_phi": self.cfg.lr_delta,
        }[group]
        return base * self.cfg.lr_final_ratio ** (iteration / self.cfg.total_iters)

    def sample_pair(self) -> StatePair:
        """Uniform over ordered pairs a != b, hence uniform over unordered pairs."""
        a = int(self.rng.integers(self.num_frames))
        b = int(self.rng.integers(self.num_frames - 1))
        if b >= a:
            b += 1
        return StatePair(a, b)

    # ----- judgment -----
    def accumulate_window(self) -> None:
        """Add the current per-frame deltas of every active part to the judgment window."""
        for label in self.active:
            self.window_alpha[label] += self.params[label].delta_alpha
            self.window_phi[label] += self.params[label].delta_phi
        self.window_steps += 1

    def judged_deltas(self, label: int) -> Tuple[np.ndarray, np.ndarray]:
        """Window-averaged (delta_alpha, delta_phi), or the current values if nothing was accumulated."""
        if self.window_steps == 0:
            params = self.params[label]
            return params.delta_alpha.copy(), params.delta_phi.copy()
        return self.window_alpha[label] / self.window_steps, self.window_phi[label] / self.window_steps

    def judge(self) -> TypeVerdict:
        for label in list(self.active):
            params = self.params[label]
            delta_alpha, delta_phi = self.judged_deltas(label)
            total_alpha = motion_extent(delta_alpha)
            total_phi = motion_extent(delta_phi)
            alpha_min = self.cfg.alpha_min_factor * enclosing_radius(self.frames[label][0])
            kind = judge_motion_type(total_alpha, total_phi, alpha_min, self.cfg.phi_min)

            self.verdict.types[label] = kind
            self.verdict.total_alpha[label] = total_alpha
            self.verdict.total_phi[label] = total_phi
            self.types[label] = kind
            self.logger.info(
                "Part %d judged %s (alpha %.4g vs %.4g, phi %.4g vs %.4g)",
                label, kind.value, total_alpha, alpha_min, total_phi, self.cfg.phi_min,
            )

            if kind is MotionType.PRUNED:
                self.active.remove(label)
                self.logger.info("Part %d pruned and merged into the static region", label)
            elif kind is MotionType.T:
                params.delta_phi[...] = 0.0
                self._freeze(label, "delta_phi", "position")
            elif kind is MotionType.R:
                params.delta_alpha[...] = 0.0
                self._freeze(label, "delta_alpha")
        return self.verdict

    def _freeze(self, label: int, *groups: str) -> None:
        for group in groups:
            self.frozen[label].add(group)
            self.adam[label][group].reset()

    # ----- main loop -----
    def _apply_gradients(self, gradients: Dict[int, PartGradient], iteration: int) -> None:
        warm = iteration < self.cfg.axis_warmup_iters
        for label in self.active:
            grad = gradients[label]
            params = self.params[label]
            for group in PARAM_GROUPS:
                if group in self.frozen[label]:
                    continue
                if warm and group in ("direction_raw", "position"):
                    continue
                self.adam[label][group].step(
                    getattr(params, group), getattr(grad, group), self.learning_rate(group, iteration)
                )

    def step(self, iteration: int) -> float:
        pair = self.sample_pair()
        terms = evaluate_losses(
            {label: self.params[label] for label in self.active},
            pair,
            self.frames,
            lambda_motion=self.cfg.lambda_motion,
            lambda_align=self.lambda_align,
            correspondent=self.correspondent,
            trees=self.trees,
        )
        self.trace.record(iteration, terms.total, terms.per_part)
        self._apply_gradients(terms.gradients, iteration)
        return terms.total

    def run(self) -> OptimizationResult:
        self.logger.info(
            "Optimizing %d part(s) over %d frames (iterations=%d, judge at %d, lambda_motion=%g, lambda_align=%g)",
            len(self.params), self.num_frames, self.cfg.total_iters, self.cfg.iter_judge,
            self.cfg.lambda_motion, self.lambda_align,
        )
        for iteration in range(self.cfg.total_iters):
            if self.stop_event.is_set():
                self.logger.warning("Stop requested at iteration %d", iteration)
                break
            if iteration == self.cfg.iter_judge:
                self.judge()
            if not self.active:
                self.logger.info("No motion parts left after judgment; stopping at iteration %d", iteration)
                break
            total = self.step(iteration)
            if self.window_start <= iteration < self.cfg.iter_judge:
                self.accumulate_window()
            if iteration % self.cfg.log_every == 0:
                self.logger.debug("iter %5d  loss %.6g", iteration, total)

        for label in self.params:
            self.verdict.types.setdefault(label, self.types[label])
        self._reanchor()
        return OptimizationResult(
            params={label: self.params[label] for label in self.verdict.retained},
            verdict=self.verdict,
            trace=self.trace,
        )

    def stop(self) -> None:
        """Signal the loop to stop after the current iteration."""
        self.stop_event.set()

    def _reanchor(self) -> None:
        """Move each axis position to the point of the axis nearest the part centroid."""
        for label in self.verdict.retained:
            params = self.params[label]
            center = centroid(self.frames[label][0])
            if self.types[label] is MotionType.T:
                params.position = center.copy()
            else:
                params.position = params.axis.closest_point_to(center)


def optimize_scene(
    sequence: SceneSequence,
    inits: Sequence[MotionInit],
    cfg: Optional[OptimConfig] = None,
    trace_path: Optional[Union[str, Path]] = None,
) -> OptimizationResult:
    result = SceneOptimizer(sequence, inits, cfg).run()
    if trace_path is not None:
        result.trace.write_csv(trace_path)
    return result


def moving_average(values: Sequence[float], width: int = 200) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape[0] < width:
        return np.array([values.mean()]) if values.size else values
    kernel = np.ones(width) / width
    return np.convolve(values, kernel, mode="valid")
