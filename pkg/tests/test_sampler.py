import numpy as np
import pytest

from posesynth.errors import CapacityError
from posesynth.pointcloud import Aabb
from posesynth.sampler import (
    GridSpec,
    OrientationSpec,
    enumerate_poses,
    grid_positions,
    orientation_sphere,
)


class TestGridPositions:
    def test_single_node(self):
        spec = GridSpec(np.array([1.0, 0.0, 2.0]), height_y=1.6)
        pos = grid_positions(spec)
        assert pos.shape == (1, 3)
        assert np.allclose(pos[0], [1.0, 1.6, 2.0])

    def test_count_product(self):
        spec = GridSpec(np.zeros(3), count_x=3, count_z=4)
        assert len(grid_positions(spec)) == 12

    def test_enumeration(self):
        spec = GridSpec(np.array([0.0, 1.6, 0.0]), step_x=2, step_z=2,
                        count_x=2, count_z=2, height_y=0.0)
        got = {tuple(p) for p in grid_positions(spec)}
        assert got == {(0, 1.6, 0), (2, 1.6, 0), (0, 1.6, 2), (2, 1.6, 2)}

    def test_row_major_order(self):
        spec = GridSpec(np.zeros(3), count_x=2, count_z=3, height_y=0.0)
        pos = grid_positions(spec)
        assert np.allclose(pos[:3, 2], [0, 1, 2])  # z varies fastest
        assert np.allclose(pos[3:, 0], 1)

    def test_centered_on_bounds(self):
        box = Aabb(np.array([-5.0, 0.0, -5.0]), np.array([5.0, 4.0, 5.0]))
        spec = GridSpec.centered_on(box, step_x=1.0, step_z=1.0, height_y=1.6)
        assert spec.count_x == 10 and spec.count_z == 10
        pos = grid_positions(spec)
        assert np.allclose(pos[:, 0].min(), -4.5)
        assert np.allclose(pos[:, 0].max(), 4.5)
        assert np.allclose(pos[:, 1], 1.6)

    def test_rejects_bad_spec(self):
        with pytest.raises(ValueError):
            GridSpec(np.zeros(3), step_x=0.0)
        with pytest.raises(ValueError):
            GridSpec(np.zeros(3), count_x=0)


class TestOrientationSphere:
    def test_four_yaws_normalized(self):
        spec = OrientationSpec(yaw_count=4, pitch_values=(0.0,))
        got = orientation_sphere(spec)
        assert sorted(o[1] for o in got) == [-90.0, 0.0, 90.0, 180.0]
        assert np.allclose(got[:, 0], 0)
        assert np.allclose(got[:, 2], 0)

    def test_single(self):
        got = orientation_sphere(OrientationSpec(yaw_count=1, pitch_values=(0.0,)))
        assert np.allclose(got, [[0, 0, 0]])

    def test_count_product(self):
        spec = OrientationSpec(yaw_count=8, pitch_values=(-10.0, 0.0))
        assert len(orientation_sphere(spec)) == 16

    def test_rejects_out_of_range_pitch(self):
        with pytest.raises(ValueError):
            OrientationSpec(pitch_values=(95.0,))


class TestEnumeratePoses:
    def test_product_count(self):
        grid = GridSpec(np.zeros(3), count_x=3, count_z=4)
        orient = OrientationSpec(yaw_count=5, pitch_values=(0.0,))
        assert len(enumerate_poses(grid, orient)) == 60

    def test_paper_scale_product(self):
        grid = GridSpec(np.zeros(3), count_x=40, count_z=30)
        orient = OrientationSpec(yaw_count=8, pitch_values=(-10.0, 0.0, 10.0))
        assert len(enumerate_poses(grid, orient)) == 28_800

    def test_deterministic(self):
        grid = GridSpec(np.zeros(3), count_x=2, count_z=2)
        orient = OrientationSpec(yaw_count=3, pitch_values=(0.0, 10.0))
        a = enumerate_poses(grid, orient)
        b = enumerate_poses(grid, orient)
        assert all(np.array_equal(x.as_vector(), y.as_vector())
                   for x, y in zip(a, b))

    def test_grid_major_order(self):
        grid = GridSpec(np.zeros(3), count_x=2, count_z=1, step_x=1.0)
        orient = OrientationSpec(yaw_count=2, pitch_values=(0.0,))
        poses = enumerate_poses(grid, orient)
        assert np.allclose([p.position[0] for p in poses], [0, 0, 1, 1])

    def test_capacity_error(self):
        grid = GridSpec(np.zeros(3), count_x=4000, count_z=4000)
        orient = OrientationSpec(yaw_count=8, pitch_values=(0.0,))
        with pytest.raises(CapacityError):
            enumerate_poses(grid, orient)

    def test_all_poses_normalized(self):
        grid = GridSpec(np.zeros(3), count_x=1, count_z=1)
        orient = OrientationSpec(yaw_count=7, pitch_values=(-30.0, 60.0))
        for pose in enumerate_poses(grid, orient):
            p, y, r = pose.orientation
            assert -90 <= p <= 90
            assert -180 < y <= 180
            assert -180 < r <= 180
