"""Built-in articulated scenes grouped into the categories of the benchmark table.

Rotation parts: fridge, door, cupboard, faucet, laptop. Translation parts:
drawer, flatdoor. Screw motion: liftchair, with translation-only and
rotation-only twins. Two scenes add a static part mislabeled as moving.
"""
import math
from typing import List

from src.synth.generator import PartSpec, SceneSpec, StaticSpec

FLOOR = StaticSpec(shape="box", size=[3.0, 3.0, 0.02], center=[0.0, 0.0, -0.01], points=400)


def _cabinet(center, size, points=300) -> StaticSpec:
    return StaticSpec(shape="box", size=list(size), center=list(center), points=points)


def fridge() -> SceneSpec:
    body = _cabinet([0.0, 0.0, 0.9], [0.7, 0.6, 1.8])
    doors = []
    for name, z, height, sweep in (("upper", 1.45, 0.7, 75.0), ("middle", 0.85, 0.5, 60.0), ("lower", 0.3, 0.5, 80.0)):
        doors.append(PartSpec(
            name=f"{name}_door", shape="panel", size=[0.68, 0.03, height - 0.02],
            center=[0.0, 0.32, z], motion_type="R",
            axis_direction=[0.0, 0.0, 1.0], axis_position=[0.34, 0.32, 0.0],
            total_angle=math.radians(sweep), schedule="ease",
        ))
    return SceneSpec(name="fridge", category="fridge", parts=doors, background=[FLOOR, body], seed=11)


def door() -> SceneSpec:
    return SceneSpec(
        name="door", category="door", seed=12, background=[FLOOR],
        parts=[PartSpec(
            name="door", shape="panel", size=[0.9, 0.04, 2.0], center=[0.45, 0.0, 1.0], motion_type="R",
            axis_direction=[0.0, 0.0, 1.0], axis_position=[0.0, 0.0, 0.0],
            total_angle=math.radians(60.0), schedule="ease",
        )],
    )


def cupboard() -> SceneSpec:
    body = _cabinet([0.0, 0.0, 0.5], [1.0, 0.4, 1.0])
    parts = [
        PartSpec(name="left_door", shape="panel", size=[0.48, 0.02, 0.6], center=[-0.25, 0.21, 0.65],
                 motion_type="R", axis_direction=[0.0, 0.0, 1.0], axis_position=[-0.49, 0.21, 0.0],
                 total_angle=math.radians(-70.0), schedule="ease"),
        PartSpec(name="right_door", shape="panel", size=[0.48, 0.02, 0.6], center=[0.25, 0.21, 0.65],
                 motion_type="R", axis_direction=[0.0, 0.0, 1.0], axis_position=[0.49, 0.21, 0.0],
                 total_angle=math.radians(65.0), schedule="linear"),
        PartSpec(name="flap", shape="panel", size=[0.96, 0.02, 0.3], center=[0.0, 0.21, 0.18],
                 motion_type="R", axis_direction=[1.0, 0.0, 0.0], axis_position=[0.0, 0.21, 0.03],
                 total_angle=math.radians(80.0), schedule="ease"),
    ]
    return SceneSpec(name="cupboard", category="cupboard", parts=parts, background=[FLOOR, body], seed=13)


def faucet() -> SceneSpec:
    basin = _cabinet([0.0, 0.0, 0.4], [0.6, 0.5, 0.8])
    return SceneSpec(
        name="faucet", category="faucet", seed=14, background=[FLOOR, basin],
        parts=[PartSpec(
            name="handle", shape="composite", size=[0.2, 0.05, 0.04], center=[0.05, 0.1, 1.0],
            motion_type="R", axis_direction=[0.0, 0.0, 1.0], axis_position=[0.0, 0.1, 0.0],
            total_angle=math.radians(45.0), schedule="linear",
        )],
    )


def laptop() -> SceneSpec:
    base = _cabinet([0.0, 0.0, 0.76], [0.34, 0.24, 0.02], points=200)
    desk = _cabinet([0.0, 0.0, 0.37], [1.0, 0.6, 0.74])
    return SceneSpec(
        name="laptop", category="laptop", seed=15, background=[FLOOR, desk, base],
        parts=[PartSpec(
            name="lid", shape="panel", size=[0.34, 0.22, 0.01], center=[0.0, 0.0, 0.78],
            motion_type="R", axis_direction=[1.0, 0.0, 0.0], axis_position=[0.0, 0.12, 0.78],
            total_angle=math.radians(-100.0), schedule="oscillate",
        )],
    )


def drawer() -> SceneSpec:
    body = _cabinet([0.0, 0.0, 0.4], [0.6, 0.5, 0.8])
    return SceneSpec(
        name="drawer", category="drawer", seed=16, background=[FLOOR, body],
        parts=[PartSpec(
            name="drawer", shape="box", size=[0.5, 0.45, 0.15], center=[0.0, 0.03, 0.6],
            motion_type="T", axis_direction=[0.0, 1.0, 0.0], total_distance=0.3, schedule="ease",
        )],
    )


def chest_of_drawers() -> SceneSpec:
    body = _cabinet([0.0, 0.0, 0.5], [0.8, 0.5, 1.0])
    parts = [
        PartSpec(name="top_drawer", shape="box", size=[0.7, 0.45, 0.2], center=[0.0, 0.03, 0.75],
                 motion_type="T", axis_direction=[0.0, 1.0, 0.0], total_distance=0.25, schedule="linear"),
        PartSpec(name="bottom_drawer", shape="box", size=[0.7, 0.45, 0.2], center=[0.0, 0.03, 0.3],
                 motion_type="T", axis_direction=[0.0, 1.0, 0.0], total_distance=0.35, schedule="ease"),
    ]
    return SceneSpec(name="chest_of_drawers", category="drawer", parts=parts, background=[FLOOR, body], seed=17)


def flatdoor() -> SceneSpec:
    frame = _cabinet([0.0, -0.05, 1.0], [2.0, 0.05, 2.0])
    return SceneSpec(
        name="flatdoor", category="flatdoor", seed=18, background=[FLOOR, frame],
        parts=[PartSpec(
            name="sliding_panel", shape="panel", size=[0.9, 0.03, 1.9], center=[-0.45, 0.0, 0.96],
            motion_type="T", axis_direction=[1.0, 0.0, 0.0], total_distance=0.6, schedule="ease",
        )],
    )


def _liftchair(name: str, category: str, motion_type: str, seed: int) -> SceneSpec:
    return SceneSpec(
        name=name, category=category, seed=seed, background=[FLOOR],
        parts=[PartSpec(
            name="seat", shape="composite", size=[0.5, 0.45, 0.1], center=[0.1, 0.0, 0.5],
            motion_type=motion_type, axis_direction=[0.0, 0.0, 1.0], axis_position=[0.0, 0.0, 0.0],
            total_angle=math.radians(90.0), total_distance=0.2, schedule="linear",
        )],
    )


def liftchair() -> SceneSpec:
    return _liftchair("liftchair", "liftchair", "RT", 19)


def liftchair_translation() -> SceneSpec:
    return _liftchair("liftchair_translation", "liftchair-T", "T", 19)


def liftchair_rotation() -> SceneSpec:
    return _liftchair("liftchair_rotation", "liftchair-R", "R", 19)


def door_with_outlier() -> SceneSpec:
    spec = door()
    spec.name, spec.seed = "door_outlier", 20
    spec.parts.append(PartSpec(
        name="doormat", shape="box", size=[0.6, 0.4, 0.02], center=[0.6, 0.6, 0.01],
        motion_type="STATIC_OUTLIER",
    ))
    return spec


def drawer_with_outlier() -> SceneSpec:
    spec = drawer()
    spec.name, spec.seed = "drawer_outlier", 21
    spec.parts.append(PartSpec(
        name="cabinet_top", shape="box", size=[0.6, 0.5, 0.03], center=[0.0, 0.0, 0.815],
        motion_type="STATIC_OUTLIER",
    ))
    return spec


SUITE = (
    fridge, door, cupboard, faucet, laptop, drawer, chest_of_drawers, flatdoor,
    liftchair, liftchair_translation, liftchair_rotation, door_with_outlier, drawer_with_outlier,
)


def builtin_suite() -> List[SceneSpec]:
    return [factory() for factory in SUITE]
