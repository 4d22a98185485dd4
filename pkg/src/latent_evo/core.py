"""Deterministic randomness, latent tensors, and Gaussian-shell utilities.

Randomness is addressed by an explicit (seed, stream) pair over the Philox
counter-based generator, so independent draw sites own disjoint streams and
every draw is reproducible across runs and platforms.  Gaussian variates are
produced by the inverse normal CDF applied to 53-bit uniforms taken from the
raw Philox word stream; the transform is fixed so the bit-exact output never
depends on library-internal sampling algorithms.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from .errors import BadConfig, IoError, ShapeMismatch

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15

CONTAINER_MAGIC = b"LEVO"
CONTAINER_VERSION = 1
_HEADER = struct.Struct("<4sHIII")


def _splitmix64(x: int) -> int:
    """One round of the splitmix64 finalizer (stream-id derivation only)."""
    x = (x + _GAMMA) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (x ^ (x >> 31)) & _MASK64


@dataclass(frozen=True)
class SeededRng:
    """Addressable source of reproducible random draws.

    A SeededRng names one draw site.  Consuming two different kinds of draws
    from the same instance would reuse the underlying word stream, so derive
    a child per independent draw site with :meth:`child`.
    """

    seed: int
    stream: int = 0

    def child(self, *indices: int) -> "SeededRng":
        """Derive a disjoint substream, one mixing round per index."""
        s = self.stream & _MASK64
        for i in indices:
            s = _splitmix64(s ^ ((i * _GAMMA) & _MASK64))
        return SeededRng(self.seed, s)

    def _bitgen(self) -> np.random.Philox:
        key = np.array([self.seed & _MASK64, self.stream & _MASK64],
                       dtype=np.uint64)
        return np.random.Philox(key=key)

    def uniform(self, n: int) -> np.ndarray:
        """n doubles strictly inside (0, 1), from the raw 64-bit stream."""
        raw = self._bitgen().random_raw(n)
        return ((raw >> np.uint64(11)) + 0.5) * (2.0 ** -53)

    def gaussian(self, n: int) -> np.ndarray:
        """n i.i.d. standard-normal draws via the inverse CDF."""
        return ndtri(self.uniform(n))

    def generator(self) -> np.random.Generator:
        """numpy Generator over this stream, for integers and shuffles."""
        return np.random.Generator(self._bitgen())


@dataclass(frozen=True)
class LatentShape:
    """Extent of the search variable: (channels, height, width)."""

    channels: int
    height: int
    width: int

    def __post_init__(self):
        for name in ("channels", "height", "width"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise BadConfig(f"{name} must be a positive integer, got {v!r}")
        if self.dim < 4:
            raise BadConfig(f"total dimensionality must be >= 4, got {self.dim}")

    @property
    def dim(self) -> int:
        return self.channels * self.height * self.width

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.channels, self.height, self.width)


@dataclass(frozen=True)
class LatentTensor:
    """A flat float64 vector with its (channels, height, width) shape.

    Layout is row-major over (channel, row, column); this is the only memory
    layout, so coordinate indices mean the same thing everywhere.
    """

    shape: LatentShape
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if v.size != self.shape.dim:
            raise ShapeMismatch(
                f"expected {self.shape.dim} values for shape "
                f"{self.shape.as_tuple()}, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise BadConfig("latent tensor must contain only finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def grid(self) -> np.ndarray:
        """Read-only (channels, height, width) view."""
        return self.values.reshape(self.shape.as_tuple())

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatentTensor):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(
            self.values, other.values)

    def __hash__(self):
        return hash((self.shape, self.values.tobytes()))


def sample_standard_gaussian(shape: LatentShape, rng: SeededRng) -> LatentTensor:
    """Draw a latent with i.i.d. N(0, 1) coordinates; pure in (shape, rng)."""
    return LatentTensor(shape, rng.gaussian(shape.dim))


def l2_norm(z: LatentTensor) -> float:
    """Euclidean norm of the flat vector."""
    return float(np.linalg.norm(z.values))


def shell_distance(z: LatentTensor) -> float:
    """Distance of ||z|| from the high-density shell radius sqrt(d)."""
    return abs(l2_norm(z) - math.sqrt(z.shape.dim))


def tensor_to_bytes(z: LatentTensor) -> bytes:
    """Serialize to the binary latent container (magic "LEVO")."""
    header = _HEADER.pack(CONTAINER_MAGIC, CONTAINER_VERSION,
                          z.shape.channels, z.shape.height, z.shape.width)
    return header + np.ascontiguousarray(z.values, dtype="<f8").tobytes()


def tensor_from_bytes(data: bytes) -> LatentTensor:
    """Parse the binary latent container; inverse of :func:`tensor_to_bytes`."""
    if len(data) < _HEADER.size:
        raise IoError("latent container truncated before header end")
    magic, version, channels, height, width = _HEADER.unpack_from(data)
    if magic != CONTAINER_MAGIC:
        raise IoError(f"bad latent container magic {magic!r}")
    if version != CONTAINER_VERSION:
        raise IoError(f"unsupported latent container version {version}")
    shape = LatentShape(int(channels), int(height), int(width))
    expected = _HEADER.size + 8 * shape.dim
    if len(data) != expected:
        raise IoError(
            f"latent container holds {len(data)} bytes, expected {expected}")
    values = np.frombuffer(data, dtype="<f8", offset=_HEADER.size).copy()
    return LatentTensor(shape, values)


def write_tensor(path, z: LatentTensor) -> None:
    with open(path, "wb") as fh:
        fh.write(tensor_to_bytes(z))


def read_tensor(path) -> LatentTensor:
    with open(path, "rb") as fh:
        return tensor_from_bytes(fh.read())


def floats_to_b64(values: np.ndarray) -> str:
    """Lossless float64 array -> base64 text (little-endian)."""
    import base64

    return base64.b64encode(
        np.ascontiguousarray(values, dtype="<f8").tobytes()).decode("ascii")


def floats_from_b64(text: str) -> np.ndarray:
    import base64

    return np.frombuffer(base64.b64decode(text), dtype="<f8").copy()
