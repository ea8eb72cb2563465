"""posesynth: synthesize pose-labeled images from point clouds and evaluate
6-DOF camera pose predictions."""

from ._kernel import backend_name
from .camera import Intrinsics, intrinsics_from_fov, pose_to_view, project, scale_intrinsics
from .geometry import (
    LossWeights,
    Pose,
    euler_to_rotmat,
    geodesic_angle,
    normalize_orientation,
    pose_loss,
    rotmat_to_euler,
)
from .pointcloud import Aabb, PointCloud, RoomSpec, bounding_box, load_ply, procedural_cloud, write_ply
from .renderer import RenderOptions, apply_shader, center_crop_resize, fill_skybox, splat_render
from .sampler import GridSpec, OrientationSpec, enumerate_poses, grid_positions, orientation_sphere

__version__ = "0.1.0"
