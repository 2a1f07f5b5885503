import math

import numpy as np
import pytest

from src.config.optim_config import OptimConfig
from src.geometry.transforms import ScrewAxis
from src.synth.generator import PartSpec, SceneSpec, StaticSpec, generate

FLOOR = StaticSpec(shape="box", size=[2.0, 2.0, 0.02], center=[0.0, 0.0, -0.01], points=150)


def random_unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_axis(rng: np.random.Generator) -> ScrewAxis:
    return ScrewAxis(random_unit(rng), rng.uniform(-1.0, 1.0, size=3))


def door_spec(frames: int = 10, points: int = 150, seed: int = 3, **part) -> SceneSpec:
    values = dict(
        name="door", shape="panel", size=[0.9, 0.04, 2.0], center=[0.45, 0.0, 1.0], motion_type="R",
        axis_direction=[0.0, 0.0, 1.0], axis_position=[0.0, 0.0, 0.0],
        total_angle=math.radians(60.0), schedule="linear", points=points,
    )
    values.update(part)
    return SceneSpec(name="door", category="door", parts=[PartSpec(**values)], background=[FLOOR],
                     frames=frames, seed=seed)


def drawer_spec(frames: int = 10, points: int = 150, seed: int = 4) -> SceneSpec:
    return SceneSpec(
        name="drawer", category="drawer", frames=frames, seed=seed, background=[FLOOR],
        parts=[PartSpec(
            name="drawer", shape="box", size=[0.5, 0.45, 0.15], center=[0.0, 0.03, 0.6],
            motion_type="T", axis_direction=[0.0, 1.0, 0.0], total_distance=0.3, points=points,
        )],
    )


def outlier_spec(frames: int = 10, points: int = 150, seed: int = 5) -> SceneSpec:
    spec = door_spec(frames=frames, points=points, seed=seed)
    spec.name = "door_outlier"
    spec.parts.append(PartSpec(
        name="doormat", shape="box", size=[0.6, 0.4, 0.02], center=[0.6, 0.6, 0.01],
        motion_type="STATIC_OUTLIER", points=points,
    ))
    return spec


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def door_scene():
    return generate(door_spec())


@pytest.fixture
def drawer_scene():
    return generate(drawer_spec())


@pytest.fixture
def outlier_scene():
    return generate(outlier_spec())


@pytest.fixture
def short_config():
    return OptimConfig(total_iters=1200, iter_judge=600, axis_warmup_iters=100, log_every=200, seed=7)
