from src.geometry.point_cloud import PointCloud, centroid, enclosing_radius
from src.geometry.registration import icp_align, kabsch_align
from src.geometry.transforms import (
    RigidTransform,
    ScrewAxis,
    ScrewMotion,
    axis_angle_matrix,
    compose,
    invert,
    rotation_axis_angle,
    screw_decompose,
    screw_to_transform,
    transform_cloud,
)

__all__ = [
    "PointCloud",
    "RigidTransform",
    "ScrewAxis",
    "ScrewMotion",
    "axis_angle_matrix",
    "centroid",
    "compose",
    "enclosing_radius",
    "icp_align",
    "invert",
    "kabsch_align",
    "rotation_axis_angle",
    "screw_decompose",
    "screw_to_transform",
    "transform_cloud",
]
