"""Grayscale rasters, binarization, resizing, and the two external formats.

Everything downstream (catalog, assembly, blending, the integer datapath)
moves pixels through the two value types defined here: ``GrayImage`` for
8-bit intensities and ``BinaryMask`` for 0/1 foreground maps.  Both are
immutable; operations return fresh instances.

Pixel indexing is 0-based ``(row, col)`` throughout.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    CountMismatchError,
    DegenerateImageError,
    MalformedHeaderError,
    NotAnIntegerError,
    TruncatedRasterError,
    UnsupportedMaxvalError,
    ValueOutOfRangeError,
)

MAX_INTENSITY = 255


def _as_validated_array(values, *, what: str, upper: int) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 2:
        raise ValueError(f"{what} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{what} must be at least 1x1, got shape {arr.shape}")
    if arr.dtype.kind == "f":
        if not np.all(arr == np.floor(arr)):
            raise ValueError(f"{what} values must be integers")
    elif arr.dtype.kind not in "iu":
        raise ValueError(f"{what} values must be integers, got dtype {arr.dtype}")
    if arr.size and (arr.min() < 0 or arr.max() > upper):
        raise ValueError(f"{what} values must lie in [0, {upper}]")
    out = arr.astype(np.uint8)
    out.setflags(write=False)
    return out


class GrayImage:
    """Immutable 8-bit intensity matrix, row-major."""

    __slots__ = ("_pixels",)

    def __init__(self, pixels) -> None:
        self._pixels = _as_validated_array(pixels, what="GrayImage", upper=MAX_INTENSITY)

    @property
    def pixels(self) -> np.ndarray:
        """Read-only uint8 array of shape (height, width)."""
        return self._pixels

    @property
    def height(self) -> int:
        return self._pixels.shape[0]

    @property
    def width(self) -> int:
        return self._pixels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._pixels.shape

    def at(self, row: int, col: int) -> int:
        return int(self._pixels[row, col])

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self._pixels.shape == other._pixels.shape and bool(
            np.array_equal(self._pixels, other._pixels)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"GrayImage({self.width}x{self.height})"


class BinaryMask:
    """Immutable 0/1 matrix.  1 is white (background), 0 is black (foreground)."""

    __slots__ = ("_bits",)

    def __init__(self, bits) -> None:
        self._bits = _as_validated_array(bits, what="BinaryMask", upper=1)

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def height(self) -> int:
        return self._bits.shape[0]

    @property
    def width(self) -> int:
        return self._bits.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._bits.shape

    def at(self, row: int, col: int) -> int:
        return int(self._bits[row, col])

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return self._bits.shape == other._bits.shape and bool(
            np.array_equal(self._bits, other._bits)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"BinaryMask({self.width}x{self.height})"


def _check_threshold(t: int) -> int:
    t = int(t)
    if not 0 <= t <= MAX_INTENSITY:
        raise ValueError(f"threshold must lie in [0, {MAX_INTENSITY}], got {t}")
    return t


# --- PGM codec ------------------------------------------------------------

def _pgm_header_tokens(data: bytes):
    """Yield (token, offset-after-token) for the four header fields.

    Comments (# to end of line) may appear anywhere in the header per the
    PNM convention.
    """
    i = 0
    n = len(data)
    while True:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i] == ord("#"):
            while i < n and data[i] not in (10, 13):
                i += 1
            continue
        if i >= n:
            return
        start = i
        while i < n and not data[i : i + 1].isspace() and data[i] != ord("#"):
            i += 1
        yield data[start:i], i


def load_pgm(data: bytes) -> GrayImage:
    """Parse binary (P5) or ASCII (P2) PGM bytes with maxval <= 255."""
    tokens = _pgm_header_tokens(data)
    try:
        magic, _ = next(tokens)
    except StopIteration:
        raise MalformedHeaderError("empty input") from None
    if magic not in (b"P5", b"P2"):
        raise MalformedHeaderError(f"unsupported magic {magic!r}")

    fields = []
    end = 0
    for _ in range(3):
        try:
            tok, end = next(tokens)
        except StopIteration:
            raise MalformedHeaderError("header ended early") from None
        try:
            fields.append(int(tok))
        except ValueError:
            raise MalformedHeaderError(f"non-numeric header field {tok!r}") from None
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise MalformedHeaderError(f"bad dimensions {width}x{height}")
    if maxval < 1:
        raise MalformedHeaderError(f"bad maxval {maxval}")
    if maxval > MAX_INTENSITY:
        raise UnsupportedMaxvalError(f"maxval {maxval} exceeds {MAX_INTENSITY}")

    count = width * height
    if magic == b"P5":
        # Exactly one whitespace byte separates maxval from the raster.
        raster = data[end + 1 : end + 1 + count]
        if len(raster) < count:
            raise TruncatedRasterError(
                f"raster holds {len(raster)} bytes, expected {count}"
            )
        arr = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
        return GrayImage(arr)

    values = []
    for tok, _ in tokens:
        try:
            values.append(int(tok))
        except ValueError:
            raise TruncatedRasterError(f"non-numeric sample {tok!r}") from None
        if len(values) == count:
            break
    if len(values) < count:
        raise TruncatedRasterError(f"raster holds {len(values)} samples, expected {count}")
    if min(values) < 0 or max(values) > maxval:
        raise TruncatedRasterError("sample value outside [0, maxval]")
    return GrayImage(np.array(values, dtype=np.uint8).reshape(height, width))


def save_pgm(img: GrayImage) -> bytes:
    """Serialize to canonical binary PGM: ``P5\\n<w> <h>\\n255\\n`` + raster."""
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


# --- binarization ---------------------------------------------------------

def binarize(img: GrayImage, t: int) -> BinaryMask:
    """Threshold: pixels >= t become 1 (white), the rest 0 (black)."""
    t = _check_threshold(t)
    return BinaryMask((img.pixels >= t).astype(np.uint8))


def otsu_threshold(img: GrayImage) -> int:
    """Threshold maximizing inter-class variance; ties break toward small t.

    A candidate t splits pixels into {p < t} and {p >= t}, matching the
    :func:`binarize` convention.  Raises :class:`DegenerateImageError` when
    the image holds a single intensity.
    """
    hist = np.bincount(img.pixels.ravel(), minlength=256).astype(np.float64)
    if np.count_nonzero(hist) < 2:
        raise DegenerateImageError("image holds a single intensity")

    total = hist.sum()
    intensities = np.arange(256, dtype=np.float64)
    # For candidate t, class 0 is bins [0, t).  cum0[t] = count below t.
    cum0 = np.concatenate(([0.0], np.cumsum(hist)))[:256]
    sum0 = np.concatenate(([0.0], np.cumsum(hist * intensities)))[:256]
    cum1 = total - cum0
    sum1 = hist @ intensities - sum0

    with np.errstate(divide="ignore", invalid="ignore"):
        mu0 = np.where(cum0 > 0, sum0 / cum0, 0.0)
        mu1 = np.where(cum1 > 0, sum1 / cum1, 0.0)
    variance = np.where(
        (cum0 > 0) & (cum1 > 0), cum0 * cum1 * (mu0 - mu1) ** 2, 0.0
    )
    return int(np.argmax(variance))


# --- resizing -------------------------------------------------------------

def resize_nearest(img: GrayImage, w: int, h: int) -> GrayImage:
    """Nearest-neighbor resample: out(r,c) = in(r*m//h, c*n//w)."""
    if w < 1 or h < 1:
        raise ValueError(f"target size must be at least 1x1, got {w}x{h}")
    rows = (np.arange(h) * img.height) // h
    cols = (np.arange(w) * img.width) // w
    return GrayImage(img.pixels[np.ix_(rows, cols)])


# --- intensity text files -------------------------------------------------

def write_intensity_text(img: GrayImage) -> str:
    """One base-10 intensity per line, row-major, no header."""
    return "".join(f"{v}\n" for v in img.pixels.ravel())


def read_intensity_text(text: str, w: int, h: int) -> GrayImage:
    """Parse exactly ``w*h`` whitespace-separated integers in [0, 255]."""
    if w < 1 or h < 1:
        raise ValueError(f"dimensions must be at least 1x1, got {w}x{h}")
    tokens = text.split()
    if len(tokens) != w * h:
        raise CountMismatchError(f"expected {w * h} values, found {len(tokens)}")
    values = []
    for tok in tokens:
        try:
            v = int(tok, 10)
        except ValueError:
            raise NotAnIntegerError(f"bad value {tok!r}") from None
        if not 0 <= v <= MAX_INTENSITY:
            raise ValueOutOfRangeError(f"value {v} outside [0, {MAX_INTENSITY}]")
        values.append(v)
    return GrayImage(np.array(values, dtype=np.uint8).reshape(h, w))
