"""8-bit RGB images and the binary PPM (P6) wire format."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MalformedOutput, ShapeMismatch


@dataclass(frozen=True)
class Image:
    """Row-major RGB pixels, 8 bits per channel."""

    width: int
    height: int
    pixels: bytes = field(repr=False)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ShapeMismatch("image extents must be positive")
        expected = self.width * self.height * 3
        if len(self.pixels) != expected:
            raise ShapeMismatch(
                f"{self.width}x{self.height} image needs {expected} bytes, "
                f"got {len(self.pixels)}")

    def array(self) -> np.ndarray:
        """(height, width, 3) uint8 view of the pixel data."""
        return np.frombuffer(self.pixels, dtype=np.uint8).reshape(
            self.height, self.width, 3)


def image_from_array(arr: np.ndarray) -> Image:
    """Build an Image from a (height, width, 3) uint8 array."""
    a = np.asarray(arr)
    if a.ndim != 3 or a.shape[2] != 3:
        raise ShapeMismatch(f"expected (h, w, 3) array, got {a.shape}")
    if a.dtype != np.uint8:
        raise ShapeMismatch(f"expected uint8 pixels, got {a.dtype}")
    return Image(a.shape[1], a.shape[0], np.ascontiguousarray(a).tobytes())


def ppm_bytes(img: Image) -> bytes:
    """Encode as binary PPM (P6), maxval 255."""
    return b"P6\n%d %d\n255\n" % (img.width, img.height) + img.pixels


def parse_ppm(data: bytes) -> Image:
    """Parse a binary PPM (P6) with maxval 255; raises MalformedOutput."""
    pos = 0

    def token() -> bytes:
        nonlocal pos
        while pos < len(data):
            c = data[pos:pos + 1]
            if c == b"#":  # comment runs to end of line
                while pos < len(data) and data[pos:pos + 1] not in b"\r\n":
                    pos += 1
            elif c.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise MalformedOutput("PPM header ended prematurely")
        return data[start:pos]

    try:
        magic = token()
        if magic != b"P6":
            raise MalformedOutput(f"expected P6 magic, got {magic!r}")
        width, height, maxval = (int(token()) for _ in range(3))
    except ValueError as exc:
        raise MalformedOutput(f"non-numeric PPM header field: {exc}") from exc
    if maxval != 255:
        raise MalformedOutput(f"only maxval 255 is supported, got {maxval}")
    if width < 1 or height < 1:
        raise MalformedOutput(f"bad PPM dimensions {width}x{height}")
    pos += 1  # single whitespace byte separates header from raster
    need = width * height * 3
    raster = data[pos:pos + need]
    if len(raster) != need:
        raise MalformedOutput(
            f"PPM raster holds {len(raster)} of {need} expected bytes")
    return Image(width, height, raster)


def write_ppm(path, img: Image) -> None:
    with open(path, "wb") as fh:
        fh.write(ppm_bytes(img))


def read_ppm(path) -> Image:
    with open(path, "rb") as fh:
        return parse_ppm(fh.read())


def write_png(path, img: Image) -> None:
    """Optional PNG dump (via Pillow)."""
    from PIL import Image as PilImage

    PilImage.frombytes("RGB", (img.width, img.height), img.pixels).save(
        path, format="PNG")
