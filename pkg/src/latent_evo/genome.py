"""Candidate solutions: direct latent noise and orthonormal channel transforms.

A genome is either the latent itself or an unconstrained square matrix acting
on the channel dimension.  Transform genomes store the raw matrix; the
orthonormal factor is extracted by QR only when the genome is realized, so
evolutionary operators work on an unconstrained parameterization and scale
drift is absorbed at realize time.  With a zero bias the orthonormal action
preserves the norm of the base noise exactly, keeping realized latents on the
Gaussian shell.
"""

from __future__ import annotations

import base64
import struct
from dataclasses import dataclass, field

import numpy as np

from .core import CONTAINER_MAGIC, CONTAINER_VERSION, LatentShape, LatentTensor, \
    SeededRng, sample_standard_gaussian, tensor_from_bytes, tensor_to_bytes
from .errors import BadConfig, IoError, ShapeMismatch, SingularInput

_MATRIX_HEADER = struct.Struct("<4sHIII")

DIRECT = "direct"
TRANSFORM = "transform"

_QR_SINGULAR_TOL = 1e-12
_ORTHO_CHECK_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Genome:
    """One candidate: a direct latent or a channel-transform matrix.

    Genomes compare by identity; the id field names them across a run.
    """

    kind: str
    id: int
    direct: LatentTensor | None = None
    transform: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind == DIRECT:
            if self.direct is None or self.transform is not None:
                raise BadConfig("direct genome must carry exactly a latent")
        elif self.kind == TRANSFORM:
            if self.transform is None or self.direct is not None:
                raise BadConfig("transform genome must carry exactly a matrix")
            m = np.asarray(self.transform, dtype=np.float64)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ShapeMismatch(f"transform must be square, got {m.shape}")
            if not np.all(np.isfinite(m)):
                raise BadConfig("transform entries must be finite")
            m = m.copy()
            m.setflags(write=False)
            object.__setattr__(self, "transform", m)
        else:
            raise BadConfig(f"unknown genome kind {self.kind!r}")

    def vector(self) -> np.ndarray:
        """Flat read-only view of the evolvable coordinates."""
        if self.kind == DIRECT:
            return self.direct.values
        return self.transform.reshape(-1)


@dataclass(frozen=True)
class BaseNoise:
    """The fixed reference noise a transform search rotates; drawn once."""

    z_t: LatentTensor


def make_base_noise(shape: LatentShape, rng: SeededRng) -> BaseNoise:
    return BaseNoise(sample_standard_gaussian(shape, rng))


def genome_dim(kind: str, shape: LatentShape) -> int:
    """Length of the flat coordinate vector an engine evolves."""
    if kind == DIRECT:
        return shape.dim
    if kind == TRANSFORM:
        return shape.channels * shape.channels
    raise BadConfig(f"unknown genome kind {kind!r}")


def genome_from_vector(kind: str, vec: np.ndarray, shape: LatentShape,
                       genome_id: int) -> Genome:
    """Wrap a flat coordinate vector back into a genome."""
    if kind == DIRECT:
        return Genome(DIRECT, genome_id, direct=LatentTensor(shape, vec))
    c = shape.channels
    return Genome(TRANSFORM, genome_id, transform=np.asarray(vec).reshape(c, c))


def qr_orthonormal(a: np.ndarray) -> np.ndarray:
    """Orthonormal factor of A, unique via a non-negative R diagonal.

    Raises SingularInput naming the first collapsed column when A is
    rank-deficient beyond 1e-12.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise BadConfig("matrix entries must be finite")
    q, r = np.linalg.qr(a)
    diag = np.diagonal(r)
    collapsed = np.nonzero(np.abs(diag) < _QR_SINGULAR_TOL)[0]
    if collapsed.size:
        raise SingularInput(int(collapsed[0]))
    signs = np.where(diag < 0.0, -1.0, 1.0)
    return q * signs  # flip column signs so R's diagonal is non-negative


def apply_transform(q: np.ndarray, z: LatentTensor) -> LatentTensor:
    """Left-multiply every spatial location's channel vector by Q."""
    q = np.asarray(q, dtype=np.float64)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got {q.shape}")
    if q.shape[0] != z.shape.channels:
        raise ShapeMismatch(
            f"matrix is {q.shape[0]}x{q.shape[0]} but latent has "
            f"{z.shape.channels} channels")
    gram_err = np.max(np.abs(q.T @ q - np.eye(q.shape[0])))
    if gram_err > _ORTHO_CHECK_TOL:
        raise BadConfig(
            f"matrix is not orthonormal (max |Q'Q - I| = {gram_err:.3e})")
    out = np.tensordot(q, z.grid(), axes=([1], [0]))
    return LatentTensor(z.shape, out.reshape(-1))


def realize(genome: Genome, base: BaseNoise | None = None) -> LatentTensor:
    """Map a genome to the latent fed to the generator.

    Direct genomes pass through verbatim; transform genomes rotate the base
    noise by the orthonormal factor of their stored matrix.
    """
    if genome.kind == DIRECT:
        return genome.direct
    if base is None:
        raise BadConfig("transform genomes require a base noise")
    return apply_transform(qr_orthonormal(genome.transform), base.z_t)


def _matrix_to_bytes(m: np.ndarray) -> bytes:
    # a CxC matrix rides in the latent container layout as shape (1, C, C);
    # packed by hand because a 1x1 matrix is below the minimum latent dim
    c = m.shape[0]
    header = _MATRIX_HEADER.pack(CONTAINER_MAGIC, CONTAINER_VERSION, 1, c, c)
    return header + np.ascontiguousarray(m, dtype="<f8").tobytes()


def _matrix_from_bytes(data: bytes) -> np.ndarray:
    if len(data) < _MATRIX_HEADER.size:
        raise IoError("matrix container truncated before header end")
    magic, version, channels, height, width = _MATRIX_HEADER.unpack_from(data)
    if magic != CONTAINER_MAGIC or version != CONTAINER_VERSION:
        raise IoError("bad matrix container header")
    if channels != 1 or height != width:
        raise IoError(f"container shape {(channels, height, width)} is not a matrix")
    expected = _MATRIX_HEADER.size + 8 * height * width
    if len(data) != expected:
        raise IoError(f"matrix container holds {len(data)} bytes, expected {expected}")
    values = np.frombuffer(data, dtype="<f8", offset=_MATRIX_HEADER.size).copy()
    return values.reshape(height, width)


def genome_to_json(genome: Genome) -> dict:
    """JSON form used inside run reports: {kind, id, data}."""
    if genome.kind == DIRECT:
        payload = tensor_to_bytes(genome.direct)
    else:
        payload = _matrix_to_bytes(genome.transform)
    return {
        "kind": genome.kind,
        "id": genome.id,
        "data": base64.b64encode(payload).decode("ascii"),
    }


def genome_from_json(obj: dict) -> Genome:
    try:
        kind = obj["kind"]
        genome_id = int(obj["id"])
        payload = base64.b64decode(obj["data"])
    except (KeyError, TypeError, ValueError) as exc:
        raise IoError(f"malformed genome record: {exc}") from exc
    if kind == DIRECT:
        return Genome(DIRECT, genome_id, direct=tensor_from_bytes(payload))
    if kind == TRANSFORM:
        return Genome(TRANSFORM, genome_id, transform=_matrix_from_bytes(payload))
    raise IoError(f"unknown genome kind {kind!r}")
