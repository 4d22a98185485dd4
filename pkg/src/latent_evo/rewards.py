"""Reward functions over images, and the maximize/minimize boundary.

Engines only ever maximize; a reward declared as minimizing (JPEG size) is
negated here, at the boundary, so raw values stay human-readable in reports
while fitness is canonical everywhere else.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import BadConfig, EncodeFailed
from .images import Image

JPEG_SIZE = "jpeg_size"
TARGET_MEAN = "target_mean"
SMOOTHNESS = "smoothness"
SPHERE_PROXY = "sphere_proxy"

REWARD_KINDS = (JPEG_SIZE, TARGET_MEAN, SMOOTHNESS, SPHERE_PROXY)

MAXIMIZE = "maximize"
MINIMIZE = "minimize"


def reward_jpeg_size(img: Image, quality: int = 75) -> float:
    """Encoded byte count: baseline sequential JPEG, 4:2:0 subsampling."""
    from PIL import Image as PilImage

    try:
        buf = io.BytesIO()
        PilImage.frombytes("RGB", (img.width, img.height), img.pixels).save(
            buf, format="JPEG", quality=int(quality), subsampling=2,
            optimize=False, progressive=False)
    except Exception as exc:  # Pillow raises a zoo of types
        raise EncodeFailed(f"JPEG encoding failed: {exc}") from exc
    return float(buf.getbuffer().nbytes)


def reward_target_mean(img: Image, target_rgb) -> float:
    """Negative distance of the per-channel pixel mean from a target color."""
    target = np.asarray(target_rgb, dtype=np.float64)
    if target.shape != (3,):
        raise BadConfig(f"target_rgb must have 3 components, got {target.shape}")
    mean = img.array().reshape(-1, 3).mean(axis=0)
    return -float(np.linalg.norm(mean - target))


def reward_smoothness(img: Image) -> float:
    """Negative mean absolute difference over adjacent pixel pairs."""
    a = img.array().astype(np.float64)
    h = np.abs(a[:, 1:, :] - a[:, :-1, :])
    v = np.abs(a[1:, :, :] - a[:-1, :, :])
    total = h.sum() + v.sum()
    count = h.size + v.size
    if count == 0:
        return 0.0
    return -float(total / count)


def reward_sphere_proxy(img: Image, target_gray: float = 128.0) -> float:
    """Negative mean squared pixel deviation from a flat gray level."""
    a = img.array().astype(np.float64)
    return -float(np.mean((a - target_gray) ** 2))


@dataclass(frozen=True)
class RewardSpec:
    """Which reward to compute and which way it points."""

    kind: str
    direction: str = MAXIMIZE
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in REWARD_KINDS:
            raise BadConfig(f"unknown reward kind {self.kind!r}")
        if self.direction not in (MAXIMIZE, MINIMIZE):
            raise BadConfig(f"direction must be maximize or minimize, "
                            f"got {self.direction!r}")
        object.__setattr__(self, "params", dict(self.params))

    @staticmethod
    def jpeg_size(quality: int = 75) -> "RewardSpec":
        return RewardSpec(JPEG_SIZE, MINIMIZE, {"quality": quality})

    @staticmethod
    def target_mean(target_rgb) -> "RewardSpec":
        return RewardSpec(TARGET_MEAN, MAXIMIZE,
                          {"target_rgb": [float(c) for c in target_rgb]})

    @staticmethod
    def smoothness() -> "RewardSpec":
        return RewardSpec(SMOOTHNESS, MAXIMIZE, {})

    @staticmethod
    def sphere_proxy(target_gray: float = 128.0) -> "RewardSpec":
        return RewardSpec(SPHERE_PROXY, MAXIMIZE,
                          {"target_gray": float(target_gray)})


def raw_reward(spec: RewardSpec, img: Image) -> float:
    """The reward in its natural units, before direction normalization."""
    if spec.kind == JPEG_SIZE:
        return reward_jpeg_size(img, int(spec.params.get("quality", 75)))
    if spec.kind == TARGET_MEAN:
        return reward_target_mean(img, spec.params["target_rgb"])
    if spec.kind == SMOOTHNESS:
        return reward_smoothness(img)
    return reward_sphere_proxy(img, float(spec.params.get("target_gray", 128.0)))


def make_scorer(spec: RewardSpec):
    """Callable image -> canonical (always-maximizing) fitness."""
    sign = -1.0 if spec.direction == MINIMIZE else 1.0

    def score(img: Image) -> float:
        return sign * raw_reward(spec, img)

    return score
