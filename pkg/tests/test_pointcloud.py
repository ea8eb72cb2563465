import numpy as np
import pytest

from posesynth.errors import PlyParseError
from posesynth.pointcloud import (
    Aabb,
    PointCloud,
    RoomSpec,
    bounding_box,
    load_ply,
    procedural_cloud,
    write_ply,
)

ASCII_PLY = """ply
format ascii 1.0
comment three points
element vertex 3
property float x
property float y
property float z
property uchar red
property uchar green
property uchar blue
end_header
0 0 0 255 0 0
1.5 -2 3 0 255 0
-4 5.25 -6 0 0 255
"""


@pytest.fixture
def ascii_path(tmp_path):
    path = tmp_path / "tri.ply"
    path.write_text(ASCII_PLY)
    return path


class TestLoadPly:
    def test_ascii_fixture(self, ascii_path):
        cloud = load_ply(ascii_path)
        assert len(cloud) == 3
        assert np.allclose(cloud.xyz[1], [1.5, -2, 3])
        assert tuple(cloud.rgb[2]) == (0, 0, 255)

    def test_binary_round_trip(self, ascii_path, tmp_path):
        cloud = load_ply(ascii_path)
        out = tmp_path / "tri.bin.ply"
        write_ply(cloud, out, binary=True)
        again = load_ply(out)
        assert np.array_equal(cloud.xyz, again.xyz)
        assert np.array_equal(cloud.rgb, again.rgb)

    def test_ascii_write_round_trip(self, tmp_path, rng):
        xyz = rng.uniform(-10, 10, (50, 3)).astype(np.float32).astype(np.float64)
        rgb = rng.integers(0, 256, (50, 3), dtype=np.uint8)
        cloud = PointCloud(xyz, rgb)
        out = tmp_path / "rt.ply"
        write_ply(cloud, out, binary=False)
        again = load_ply(out)
        assert np.array_equal(cloud.xyz, again.xyz)
        assert np.array_equal(cloud.rgb, again.rgb)

    def test_binary_write_round_trip_bit_exact(self, tmp_path, rng):
        xyz = rng.uniform(-10, 10, (200, 3)).astype(np.float32).astype(np.float64)
        rgb = rng.integers(0, 256, (200, 3), dtype=np.uint8)
        cloud = PointCloud(xyz, rgb)
        out = tmp_path / "rt.bin.ply"
        write_ply(cloud, out, binary=True)
        again = load_ply(out)
        assert np.array_equal(cloud.xyz, again.xyz)
        assert np.array_equal(cloud.rgb, again.rgb)

    def test_missing_color_defaults_to_gray(self, tmp_path):
        path = tmp_path / "gray.ply"
        path.write_text(
            "ply\nformat ascii 1.0\nelement vertex 1\n"
            "property float x\nproperty float y\nproperty float z\n"
            "end_header\n1 2 3\n")
        cloud = load_ply(path)
        assert tuple(cloud.rgb[0]) == (128, 128, 128)

    def test_truncated_body(self, tmp_path):
        path = tmp_path / "trunc.ply"
        path.write_text(ASCII_PLY.replace("element vertex 3",
                                          "element vertex 10"))
        with pytest.raises(PlyParseError, match="truncated"):
            load_ply(path)

    def test_truncated_binary_reports_offset(self, tmp_path, rng):
        cloud = PointCloud(rng.uniform(-1, 1, (10, 3)),
                           rng.integers(0, 256, (10, 3), dtype=np.uint8))
        out = tmp_path / "t.ply"
        write_ply(cloud, out, binary=True)
        data = out.read_bytes()
        out.write_bytes(data[:-20])
        with pytest.raises(PlyParseError, match="byte offset"):
            load_ply(out)

    def test_big_endian_rejected(self, tmp_path):
        path = tmp_path / "be.ply"
        path.write_text(ASCII_PLY.replace("format ascii",
                                          "format binary_big_endian"))
        with pytest.raises(PlyParseError, match="unsupported format"):
            load_ply(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_ply(tmp_path / "nope.ply")

    def test_not_a_ply(self, tmp_path):
        path = tmp_path / "junk.ply"
        path.write_text("obj nonsense\n")
        with pytest.raises(PlyParseError):
            load_ply(path)

    def test_extra_properties_counted(self, tmp_path):
        path = tmp_path / "extra.ply"
        path.write_text(
            "ply\nformat ascii 1.0\nelement vertex 1\n"
            "property float x\nproperty float y\nproperty float z\n"
            "property float nx\n"
            "end_header\n1 2 3 0.5\n")
        cloud = load_ply(path)
        assert cloud.skipped == 1
        assert np.allclose(cloud.xyz[0], [1, 2, 3])


class TestBoundingBox:
    def test_single_point(self):
        cloud = PointCloud(np.array([[1.0, 2.0, 3.0]]),
                           np.zeros((1, 3), dtype=np.uint8))
        box = bounding_box(cloud)
        assert np.array_equal(box.min, box.max)

    def test_two_points(self):
        cloud = PointCloud(np.array([[0.0, 0, 0], [1, 2, 3.0]]),
                           np.zeros((2, 3), dtype=np.uint8))
        box = bounding_box(cloud)
        assert np.array_equal(box.min, [0, 0, 0])
        assert np.array_equal(box.max, [1, 2, 3])

    def test_matches_brute_force(self, rng):
        xyz = rng.normal(size=(1000, 3))
        cloud = PointCloud(xyz, np.zeros((1000, 3), dtype=np.uint8))
        box = bounding_box(cloud)
        lo = np.array([min(p[i] for p in xyz) for i in range(3)])
        hi = np.array([max(p[i] for p in xyz) for i in range(3)])
        assert np.array_equal(box.min, lo)
        assert np.array_equal(box.max, hi)

    def test_aabb_validation(self):
        with pytest.raises(ValueError):
            Aabb(np.array([1.0, 0, 0]), np.array([0.0, 1, 1]))


class TestProceduralCloud:
    def test_deterministic(self):
        a = procedural_cloud(7)
        b = procedural_cloud(7)
        assert np.array_equal(a.xyz, b.xyz)
        assert np.array_equal(a.rgb, b.rgb)

    def test_seed_changes_cloud(self):
        a = procedural_cloud(7)
        b = procedural_cloud(8)
        assert not np.array_equal(a.xyz, b.xyz)

    def test_containment(self):
        spec = RoomSpec((10.0, 4.0, 10.0), 50_000)
        cloud = procedural_cloud(3, spec)
        box = bounding_box(cloud)
        assert np.all(box.min >= [-5, -2, -5])
        assert np.all(box.max <= [5, 2, 5])

    def test_single_point_on_a_face(self):
        cloud = procedural_cloud(0, RoomSpec((2.0, 2.0, 2.0), 1))
        assert len(cloud) == 1
        assert np.isclose(np.abs(cloud.xyz[0]), 1.0).any()

    def test_rejects_bad_spec(self):
        with pytest.raises(ValueError):
            RoomSpec((1.0, 1.0, 1.0), 0)
