import numpy as np
import pytest

from src.analysis.losses import (
    PartParams,
    StatePair,
    alignment_loss,
    cumulative_motion,
    evaluate_losses,
    gradients,
    motion_loss,
)
from src.geometry.point_cloud import PointCloud
from src.geometry.transforms import ScrewAxis, screw_to_transform
from tests.conftest import random_axis

FD_STEP = 1e-6
GROUPS = ("direction_raw", "position", "delta_alpha", "delta_phi")


def _frames_from(params: PartParams, rng, count=40):
    base = rng.uniform(-0.5, 0.5, size=(count, 3)) + np.array([0.8, 0.1, 0.3])
    return [
        PointCloud(screw_to_transform(cumulative_motion(params, i)).apply(base))
        for i in range(params.num_frames)
    ]


def _random_params(rng, label=1, frames=6) -> PartParams:
    axis = random_axis(rng)
    return PartParams(
        label=label,
        direction_raw=axis.direction * rng.uniform(0.5, 2.0),
        position=np.array(axis.position),
        delta_alpha=rng.uniform(-0.1, 0.1, size=frames - 1),
        delta_phi=rng.uniform(-0.3, 0.3, size=frames - 1),
    )


def _perturbed(params: PartParams, rng, scale=0.05) -> PartParams:
    out = params.copy()
    out.direction_raw = out.direction_raw + rng.normal(scale=scale, size=3)
    out.position = out.position + rng.normal(scale=scale, size=3)
    out.delta_alpha = out.delta_alpha + rng.normal(scale=scale, size=out.delta_alpha.shape)
    out.delta_phi = out.delta_phi + rng.normal(scale=scale, size=out.delta_phi.shape)
    return out


def _numeric_gradient(params: PartParams, loss_of) -> dict:
    numeric = {}
    for group in GROUPS:
        values = getattr(params, group)
        grad = np.zeros_like(values)
        for k in range(values.size):
            plus, minus = params.copy(), params.copy()
            getattr(plus, group)[k] += FD_STEP
            getattr(minus, group)[k] -= FD_STEP
            grad[k] = (loss_of(plus) - loss_of(minus)) / (2.0 * FD_STEP)
        numeric[group] = grad
    return numeric


def test_cumulative_motion_at_first_frame_is_identity(rng):
    params = _random_params(rng)
    matrix = screw_to_transform(cumulative_motion(params, 0)).as_matrix()
    np.testing.assert_allclose(matrix, np.eye(4), atol=1e-15)


def test_cumulative_motion_rejects_out_of_range(rng):
    params = _random_params(rng, frames=4)
    with pytest.raises(ValueError):
        cumulative_motion(params, 4)


def test_state_pair_validation():
    with pytest.raises(ValueError):
        StatePair(2, 2).validate(5)
    with pytest.raises(ValueError):
        StatePair(0, 5).validate(5)
    StatePair(4, 0).validate(5)


def test_true_parameters_give_zero_motion_loss(rng):
    params = _random_params(rng)
    frames = {1: _frames_from(params, rng)}
    for pair in (StatePair(0, 5), StatePair(4, 1), StatePair(2, 3)):
        assert motion_loss({1: params}, pair, frames) < 1e-12
        assert alignment_loss({1: params}, pair, frames) < 1e-12


def test_motion_loss_invariant_to_axis_slide(rng):
    params = _random_params(rng)
    frames = {1: _frames_from(_perturbed(params, rng), rng)}
    slid = params.copy()
    slid.position = slid.position + 10.0 * params.direction
    for pair in (StatePair(0, 5), StatePair(3, 1)):
        a = motion_loss({1: params}, pair, frames)
        b = motion_loss({1: slid}, pair, frames)
        assert abs(a - b) < 1e-10


def _check_gradients(trial, lambda_align):
    rng = np.random.default_rng(100 + trial)
    truth = _random_params(rng)
    frames = {1: _frames_from(truth, rng)}
    params = _perturbed(truth, rng, scale=0.1)
    a = int(rng.integers(6))
    b = int((a + rng.integers(1, 6)) % 6)
    pair = StatePair(a, b)

    def loss_of(p):
        return evaluate_losses({1: p}, pair, frames, lambda_motion=10.0, lambda_align=lambda_align,
                               with_gradients=False).total

    analytic = gradients({1: params}, pair, frames, lambda_motion=10.0, lambda_align=lambda_align)[1]
    numeric = _numeric_gradient(params, loss_of)
    for group in GROUPS:
        np.testing.assert_allclose(getattr(analytic, group), numeric[group], rtol=1e-4, atol=1e-6)


@pytest.mark.parametrize("trial", range(180))
def test_motion_gradients_match_finite_differences(trial):
    _check_gradients(trial, lambda_align=0.0)


@pytest.mark.parametrize("trial", range(20))
def test_alignment_gradients_match_finite_differences(trial):
    _check_gradients(500 + trial, lambda_align=0.5)


def test_gradients_vanish_outside_the_pair_range(rng):
    truth = _random_params(rng, frames=8)
    frames = {1: _frames_from(truth, rng)}
    params = _perturbed(truth, rng)
    grad = gradients({1: params}, StatePair(5, 2), frames)[1]
    outside = [0, 1, 5, 6]
    assert np.all(grad.delta_phi[outside] == 0.0)
    assert np.all(grad.delta_alpha[outside] == 0.0)
    assert np.any(grad.delta_phi[2:5] != 0.0)


def test_direction_gradient_is_orthogonal_to_direction(rng):
    truth = _random_params(rng)
    frames = {1: _frames_from(truth, rng)}
    params = _perturbed(truth, rng)
    grad = gradients({1: params}, StatePair(0, 5), frames)[1]
    assert abs(np.dot(grad.direction_raw, params.direction)) < 1e-12 * (1.0 + np.linalg.norm(grad.direction_raw))


def test_parts_contribute_independently(rng):
    first, second = _random_params(rng, label=1), _random_params(rng, label=2)
    frames = {1: _frames_from(first, rng), 2: _frames_from(_perturbed(second, rng), rng)}
    pair = StatePair(1, 4)
    together = evaluate_losses({1: first, 2: second}, pair, frames)
    alone = evaluate_losses({2: second}, pair, frames)
    assert together.per_part[1] < 1e-10
    assert together.per_part[2] == pytest.approx(alone.total)
    np.testing.assert_allclose(together.gradients[2].delta_phi, alone.gradients[2].delta_phi)


def test_nearest_neighbour_motion_loss_without_correspondence(rng):
    params = _random_params(rng)
    frames = _frames_from(params, rng)
    shuffled = {1: [PointCloud(rng.permutation(f.points)) for f in frames]}
    assert motion_loss({1: params}, StatePair(0, 3), shuffled, correspondent=False) < 1e-12
    assert motion_loss({1: params}, StatePair(0, 3), shuffled, correspondent=True) > 1e-3


def test_direction_collapse_is_reported():
    params = PartParams(1, np.zeros(3), np.zeros(3), np.zeros(2), np.zeros(2))
    with pytest.raises(ValueError, match="collapsed"):
        _ = params.axis


def test_axis_property_normalizes(rng):
    params = _random_params(rng)
    assert isinstance(params.axis, ScrewAxis)
    assert np.linalg.norm(params.axis.direction) == pytest.approx(1.0)
