"""Seam blending via the 3x3 neighborhood intensity factor.

A copied component meets the face with a visible stitching line.  The blend
replaces each copied intensity C with a weighted mix of C and the underlying
face intensity F.  The weight comes from the ratio of the two 3x3
neighborhood sums (face window FI over component window CI):

    IF  = FI / CI
    out = (F + 2*IF*C) / (1 + 2*IF)

which is a convex combination with component weight 2*IF / (1 + 2*IF).

Two whole-image drivers exist because they genuinely differ:

* :func:`tune_masked` updates the face buffer in place, so earlier blended
  pixels feed later face-window sums.  Raster order matters; it runs
  row-major and must stay single-threaded.
* :func:`tune_overlay` is double-buffered: both window sums read the
  original inputs, so the result is independent of scan order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .assemble import Placement
from .errors import (
    DimensionMismatchError,
    EmptyBoundaryError,
    OutOfBoundsError,
    WindowOutOfBoundsError,
)
from .image import MAX_INTENSITY, BinaryMask, GrayImage

PixelPair = tuple[tuple[int, int], tuple[int, int]]


class ZeroCiPolicy(Enum):
    """What to do when the component window sums to zero (all black)."""

    LEAVE_FACE = "LeaveFace"
    COPY_COMPONENT = "CopyComponent"


@dataclass(frozen=True)
class TuneConfig:
    """Knobs for the whole-image tuning passes.

    ``component_threshold`` is the sheet intensity above which a pixel
    counts as component material in :func:`tune_overlay`.  Pixels whose 3x3
    window would leave an image are never blended (border policy is fixed:
    skip the window, copy or keep the raw value).
    """

    component_threshold: int = 0
    zero_ci_policy: ZeroCiPolicy = ZeroCiPolicy.LEAVE_FACE

    def __post_init__(self):
        if not 0 <= self.component_threshold <= MAX_INTENSITY:
            raise ValueError(
                f"component_threshold must lie in [0, {MAX_INTENSITY}], "
                f"got {self.component_threshold}"
            )


@dataclass(frozen=True)
class BlendTerms:
    """The per-pixel quantities, mainly for inspection and tests."""

    fi: float
    ci: float
    intensity_factor: float
    out: float


def neighborhood_sum(img: GrayImage, r: int, c: int) -> int:
    """Sum of the nine intensities centered at (r, c); window must fit."""
    if not (1 <= r <= img.height - 2 and 1 <= c <= img.width - 2):
        raise WindowOutOfBoundsError(
            f"3x3 window at ({r},{c}) leaves the {img.width}x{img.height} image"
        )
    return int(img.pixels[r - 1 : r + 2, c - 1 : c + 2].sum())


def blend_pixel(F: float, C: float, FI: float, CI: float, cfg: TuneConfig) -> float:
    """Blended intensity, unrounded.  CI == 0 falls back to the policy."""
    if CI == 0:
        return float(C if cfg.zero_ci_policy is ZeroCiPolicy.COPY_COMPONENT else F)
    IF = FI / CI
    return (F + 2 * IF * C) / (1 + 2 * IF)


def blend_terms(F: float, C: float, FI: float, CI: float, cfg: TuneConfig) -> BlendTerms:
    out = blend_pixel(F, C, FI, CI, cfg)
    return BlendTerms(float(FI), float(CI), FI / CI if CI else math.inf, out)


def commit_intensity(value: float) -> int:
    """Round half-up, then clamp to [0, 255]: the storage rule."""
    return min(MAX_INTENSITY, max(0, math.floor(value + 0.5)))


def tune_masked(
    face: GrayImage,
    comp: GrayImage,
    mask: BinaryMask,
    p: Placement,
    cfg: TuneConfig = TuneConfig(),
) -> GrayImage:
    """Blend a component into the face at its placement, in-place style.

    Scans the component row-major.  Foreground (mask == 0) pixels are
    blended against the face buffer as updated so far; pixels whose 3x3
    window exits either image are copied unblended so the component is
    never truncated at its edges.  Background pixels leave the face alone.
    """
    if mask.shape != comp.shape:
        raise DimensionMismatchError(
            f"mask {mask.width}x{mask.height} vs component {comp.width}x{comp.height}"
        )
    if (p.height, p.width) != comp.shape:
        raise DimensionMismatchError(
            f"placement says {p.width}x{p.height}, component is {comp.width}x{comp.height}"
        )
    if not p.fits(face.height, face.width):
        raise OutOfBoundsError(
            f"{p.kind.value} rectangle at ({p.top_row},{p.left_col}) leaves the face"
        )

    buf = face.pixels.astype(np.int64)
    cp = comp.pixels
    bits = mask.bits
    ch, cw = comp.shape
    fh, fw = face.shape
    copy_component = cfg.zero_ci_policy is ZeroCiPolicy.COPY_COMPONENT

    for i in range(ch):
        x = i + p.top_row
        for j in range(cw):
            if bits[i, j] != 0:
                continue
            y = j + p.left_col
            comp_window_ok = 1 <= i <= ch - 2 and 1 <= j <= cw - 2
            face_window_ok = 1 <= x <= fh - 2 and 1 <= y <= fw - 2
            if not (comp_window_ok and face_window_ok):
                buf[x, y] = cp[i, j]
                continue
            fi = int(buf[x - 1 : x + 2, y - 1 : y + 2].sum())
            ci = int(cp[i - 1 : i + 2, j - 1 : j + 2].sum())
            if ci == 0:
                if copy_component:
                    buf[x, y] = cp[i, j]
                continue
            blended = blend_pixel(float(buf[x, y]), float(cp[i, j]), fi, ci, cfg)
            buf[x, y] = commit_intensity(blended)
    return GrayImage(buf)


def _window_sums(arr: np.ndarray) -> np.ndarray:
    """3x3 sums for every interior pixel; shape (h-2, w-2), int64."""
    h, w = arr.shape
    acc = np.zeros((h - 2, w - 2), dtype=np.int64)
    for dr in range(3):
        for dc in range(3):
            acc += arr[dr : dr + h - 2, dc : dc + w - 2]
    return acc


def tune_overlay(
    blank: GrayImage, sheet: GrayImage, cfg: TuneConfig = TuneConfig()
) -> GrayImage:
    """Blend a pre-placed component sheet onto a blank face, double-buffered.

    Starts from a copy of the blank face.  Every interior pixel where the
    sheet exceeds the component threshold is blended using window sums drawn
    from the *original* blank and sheet, so scan order cannot matter.
    Border rows/columns and sub-threshold pixels stay identical to the blank.
    """
    if blank.shape != sheet.shape:
        raise DimensionMismatchError(
            f"blank {blank.width}x{blank.height} vs sheet {sheet.width}x{sheet.height}"
        )
    out = blank.pixels.copy()
    h, w = blank.shape
    if h < 3 or w < 3:
        return GrayImage(out)

    fi = _window_sums(blank.pixels.astype(np.int64)).astype(np.float64)
    ci = _window_sums(sheet.pixels.astype(np.int64)).astype(np.float64)
    F = blank.pixels[1 : h - 1, 1 : w - 1].astype(np.float64)
    C = sheet.pixels[1 : h - 1, 1 : w - 1].astype(np.float64)
    active = sheet.pixels[1 : h - 1, 1 : w - 1] > cfg.component_threshold

    with np.errstate(divide="ignore", invalid="ignore"):
        IF = fi / ci
        blended = (F + 2 * IF * C) / (1 + 2 * IF)
    fallback = C if cfg.zero_ci_policy is ZeroCiPolicy.COPY_COMPONENT else F
    blended = np.where(ci == 0, fallback, blended)
    committed = np.clip(np.floor(blended + 0.5), 0, MAX_INTENSITY).astype(np.uint8)

    interior = out[1 : h - 1, 1 : w - 1]
    interior[active] = committed[active]
    return GrayImage(out)


def seam_contrast(face: GrayImage, boundary: list[PixelPair]) -> float:
    """Mean absolute intensity difference across straddling pixel pairs."""
    if not boundary:
        raise EmptyBoundaryError("no boundary pairs given")
    px = face.pixels
    h, w = face.shape
    total = 0
    for pair in boundary:
        for r, c in pair:
            if not (0 <= r < h and 0 <= c < w):
                raise OutOfBoundsError(f"boundary pixel ({r},{c}) leaves the image")
        (r1, c1), (r2, c2) = pair
        total += abs(int(px[r1, c1]) - int(px[r2, c2]))
    return total / len(boundary)


def placement_seam_pairs(p: Placement, canvas_h: int, canvas_w: int) -> list[PixelPair]:
    """Pairs straddling the placement rectangle's outline, in face coords.

    This is the stitching line a blind rectangle copy creates.  Pairs whose
    outer pixel would leave the canvas are dropped.
    """
    pairs: list[PixelPair] = []

    def add(inside, outside):
        r, c = outside
        if 0 <= r < canvas_h and 0 <= c < canvas_w:
            pairs.append((inside, outside))

    for c in range(p.left_col, p.right_col + 1):
        add((p.top_row, c), (p.top_row - 1, c))
        add((p.bottom_row, c), (p.bottom_row + 1, c))
    for r in range(p.top_row, p.bottom_row + 1):
        add((r, p.left_col), (r, p.left_col - 1))
        add((r, p.right_col), (r, p.right_col + 1))
    return pairs


def mask_seam_pairs(mask: BinaryMask, p: Placement) -> list[PixelPair]:
    """Pairs straddling the mask's foreground edge, mapped to face coords.

    Each pair joins a foreground (mask 0) pixel with a 4-adjacent pixel that
    is background or beyond the rectangle.
    """
    pairs: list[PixelPair] = []
    bits = mask.bits
    h, w = mask.shape
    for i in range(h):
        for j in range(w):
            if bits[i, j] != 0:
                continue
            inside = (i + p.top_row, j + p.left_col)
            for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                ni, nj = i + di, j + dj
                if 0 <= ni < h and 0 <= nj < w and bits[ni, nj] == 0:
                    continue
                pairs.append((inside, (ni + p.top_row, nj + p.left_col)))
    return pairs
