import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from posesynth.camera import intrinsics_from_fov
from posesynth.pointcloud import PointCloud, RoomSpec, procedural_cloud


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def intr224():
    return intrinsics_from_fov(90.0, 224, 224)


@pytest.fixture
def room_cloud():
    return procedural_cloud(7, RoomSpec((10.0, 4.0, 10.0), 20_000))


def random_cloud(rng, n=500, scale=5.0):
    xyz = rng.uniform(-scale, scale, size=(n, 3))
    rgb = rng.integers(0, 256, size=(n, 3), dtype=np.uint8)
    return PointCloud(xyz, rgb)
