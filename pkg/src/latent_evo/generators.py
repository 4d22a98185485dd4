"""Generators: deterministic maps from a latent to an image.

The toy decoder is a fixed random linear map followed by a box blur and a
logistic squash; it stands in for a real sampling pipeline at desk scale.
The subprocess generator realizes the same contract over a child process,
speaking the binary latent container on stdin and PPM (P6) on stdout, which
is where an actual generation pipeline would plug in.
"""

from __future__ import annotations

import subprocess

import numpy as np
from scipy.ndimage import uniform_filter

from .core import LatentShape, LatentTensor, SeededRng, tensor_to_bytes
from .errors import ChildFailed, MalformedOutput, ShapeMismatch, Timeout
from .images import Image, image_from_array, parse_ppm

_DECODER_STREAM = 0x746F79  # fixed stream id for decoder-matrix draws


class ToyDecoder:
    """Deterministic latent-to-image pipeline.

    Steps: (1) multiply by a fixed Gaussian matrix W of shape
    (3 * height * width, d), seeded once from ``decoder_seed``;
    (2) scale by 1/sqrt(d); (3) 3x3 box blur per channel with edge
    replication; (4) logistic squash with slope 2 onto [0, 255].
    """

    def __init__(self, latent_shape: LatentShape, width: int = 64,
                 height: int = 64, decoder_seed: int = 0):
        if width < 1 or height < 1:
            raise ShapeMismatch("output resolution must be positive")
        self.latent_shape = latent_shape
        self.width = int(width)
        self.height = int(height)
        self.decoder_seed = int(decoder_seed)
        self._matrix: np.ndarray | None = None

    def _weights(self) -> np.ndarray:
        if self._matrix is None:
            rows = 3 * self.height * self.width
            rng = SeededRng(self.decoder_seed, _DECODER_STREAM)
            w = rng.gaussian(rows * self.latent_shape.dim)
            self._matrix = w.reshape(rows, self.latent_shape.dim)
        return self._matrix

    def generate(self, z: LatentTensor) -> Image:
        if z.shape != self.latent_shape:
            raise ShapeMismatch(
                f"latent shape {z.shape.as_tuple()} does not match decoder "
                f"shape {self.latent_shape.as_tuple()}")
        d = self.latent_shape.dim
        y = (self._weights() @ z.values) / np.sqrt(d)
        y = y.reshape(3, self.height, self.width)
        y = uniform_filter(y, size=(1, 3, 3), mode="nearest")
        p = 255.0 / (1.0 + np.exp(-2.0 * y))
        arr = np.round(p).astype(np.uint8).transpose(1, 2, 0)
        return image_from_array(np.ascontiguousarray(arr))


class SubprocessGenerator:
    """Black-box child process speaking latent containers and PPM.

    The child receives the binary latent container on stdin and must write a
    complete binary PPM (P6) of exactly the configured resolution to stdout,
    then exit 0.
    """

    def __init__(self, latent_shape: LatentShape, width: int, height: int,
                 command: list[str], timeout_s: float = 30.0):
        if not command:
            raise ShapeMismatch("subprocess generator needs a command line")
        self.latent_shape = latent_shape
        self.width = int(width)
        self.height = int(height)
        self.command = list(command)
        self.timeout_s = float(timeout_s)

    def generate(self, z: LatentTensor) -> Image:
        if z.shape != self.latent_shape:
            raise ShapeMismatch(
                f"latent shape {z.shape.as_tuple()} does not match generator "
                f"shape {self.latent_shape.as_tuple()}")
        try:
            proc = subprocess.run(
                self.command, input=tensor_to_bytes(z),
                stdout=subprocess.PIPE, stderr=subprocess.PIPE,
                timeout=self.timeout_s)
        except subprocess.TimeoutExpired as exc:
            raise Timeout(
                f"generator child exceeded {self.timeout_s}s") from exc
        except OSError as exc:
            raise ChildFailed(-1, f"could not launch {self.command[0]!r}: "
                                  f"{exc}") from exc
        if proc.returncode != 0:
            detail = proc.stderr.decode("utf-8", "replace").strip()[:200]
            raise ChildFailed(proc.returncode, detail)
        img = parse_ppm(proc.stdout)
        if (img.width, img.height) != (self.width, self.height):
            raise MalformedOutput(
                f"child produced {img.width}x{img.height}, expected "
                f"{self.width}x{self.height}")
        return img
