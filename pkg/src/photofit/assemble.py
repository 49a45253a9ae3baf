"""Component placement: ear anchoring, layout equations, and overlays.

Feature positions barely move between faces, so once the upper-left corner
of the right ear is known (the subject's right, i.e. the image's left side)
every other component position follows from fixed offsets.  The offsets are
calibrated for 92x112 face cuttings; other canvas sizes work but inherit
those constants unless the caller rescales them explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .catalog import COMPONENT_KINDS, ComponentKind
from .errors import (
    DimensionMismatchError,
    NegativeCoordinateError,
    NoForegroundError,
    OutOfBoundsError,
)
from .image import BinaryMask, GrayImage

#: Canvas size the layout constants were tuned on (width, height).
CALIBRATED_CANVAS = (92, 112)


@dataclass(frozen=True)
class AnchorPoint:
    """Upper-left corner of the right ear, as (row, col)."""

    row: int
    col: int


@dataclass(frozen=True)
class Placement:
    kind: ComponentKind
    top_row: int
    left_col: int
    height: int
    width: int

    @property
    def bottom_row(self) -> int:
        return self.top_row + self.height - 1

    @property
    def right_col(self) -> int:
        return self.left_col + self.width - 1

    def shifted(self, d_row: int, d_col: int) -> "Placement":
        return replace(self, top_row=self.top_row + d_row, left_col=self.left_col + d_col)

    def fits(self, canvas_h: int, canvas_w: int) -> bool:
        return (
            self.top_row >= 0
            and self.left_col >= 0
            and self.bottom_row < canvas_h
            and self.right_col < canvas_w
        )


@dataclass(frozen=True)
class Layout:
    """Anchor (already shifted 10 columns inward) plus one placement per kind."""

    anchor: AnchorPoint
    placements: dict[ComponentKind, Placement]

    def shifted(self, offsets: dict[ComponentKind, tuple[int, int]]) -> "Layout":
        """Apply per-kind manual offsets, leaving this layout untouched."""
        moved = {
            kind: p.shifted(*offsets.get(kind, (0, 0)))
            for kind, p in self.placements.items()
        }
        return Layout(self.anchor, moved)


@dataclass(frozen=True)
class LayoutConstants:
    """Offsets feeding the placement equations.  Defaults fit 92x112 faces."""

    ear_col_inset: int = 10
    eyebrow_row_lift: int = 5
    nose_row_lift: int = 2
    left_eyebrow_col_pullback: int = 5
    lip_row_gap: int = 5

    def scaled_for(self, canvas_w: int, canvas_h: int) -> "LayoutConstants":
        """Proportionally rescale for another canvas (floor division)."""
        cal_w, cal_h = CALIBRATED_CANVAS
        return LayoutConstants(
            ear_col_inset=self.ear_col_inset * canvas_w // cal_w,
            eyebrow_row_lift=self.eyebrow_row_lift * canvas_h // cal_h,
            nose_row_lift=self.nose_row_lift * canvas_h // cal_h,
            left_eyebrow_col_pullback=self.left_eyebrow_col_pullback * canvas_w // cal_w,
            lip_row_gap=self.lip_row_gap * canvas_h // cal_h,
        )


DEFAULT_CONSTANTS = LayoutConstants()


def find_ear_position(mask: BinaryMask) -> AnchorPoint:
    """First white pixel scanning columns left-to-right, rows top-to-bottom.

    Column-major order means the leftmost white column wins, then the
    topmost white row within it: the upper-left corner of the right ear on
    an ears-visible silhouette.
    """
    column_has_white = mask.bits.any(axis=0)
    if not column_has_white.any():
        raise NoForegroundError("mask contains no white pixel")
    col = int(np.argmax(column_has_white))
    row = int(np.argmax(mask.bits[:, col]))
    return AnchorPoint(row, col)


def compute_layout(
    anchor: AnchorPoint,
    dims: dict[ComponentKind, tuple[int, int]],
    constants: LayoutConstants = DEFAULT_CONSTANTS,
) -> Layout:
    """Evaluate the placement equations for all six components.

    ``dims`` maps each non-face-cutting kind to its (height, width).  All
    divisions floor.  Raises :class:`NegativeCoordinateError` naming the
    first component pushed past the top or left edge.
    """
    missing = [k for k in COMPONENT_KINDS if k not in dims]
    if missing:
        raise ValueError(f"dims missing kinds: {[k.value for k in missing]}")

    tx = anchor.row
    ty = anchor.col + constants.ear_col_inset

    h_reb, w_reb = dims[ComponentKind.RIGHT_EYEBROW]
    h_reye, w_reye = dims[ComponentKind.RIGHT_EYE]
    h_leb, w_leb = dims[ComponentKind.LEFT_EYEBROW]
    h_leye, w_leye = dims[ComponentKind.LEFT_EYE]
    h_nose, w_nose = dims[ComponentKind.NOSE]
    h_lip, w_lip = dims[ComponentKind.LIP]

    reb = (tx - constants.eyebrow_row_lift, ty)
    reye = (tx, ty + w_reb - w_reye)
    nose = (tx - constants.nose_row_lift, ty + w_reb)
    leb = (
        tx - constants.eyebrow_row_lift,
        nose[1] + w_nose - constants.left_eyebrow_col_pullback,
    )
    leye = (tx, leb[1])
    lip = (
        nose[0] + h_nose + constants.lip_row_gap,
        nose[1] + w_nose // 2 - w_lip // 2,
    )

    coords = {
        ComponentKind.RIGHT_EYEBROW: (reb, h_reb, w_reb),
        ComponentKind.RIGHT_EYE: (reye, h_reye, w_reye),
        ComponentKind.NOSE: (nose, h_nose, w_nose),
        ComponentKind.LEFT_EYEBROW: (leb, h_leb, w_leb),
        ComponentKind.LEFT_EYE: (leye, h_leye, w_leye),
        ComponentKind.LIP: (lip, h_lip, w_lip),
    }
    placements = {}
    for kind in COMPONENT_KINDS:
        (top, left), h, w = coords[kind]
        if top < 0 or left < 0:
            raise NegativeCoordinateError(kind.value, (top, left))
        placements[kind] = Placement(kind, top, left, h, w)
    return Layout(AnchorPoint(tx, ty), placements)


def _check_rect(face: GrayImage, comp: GrayImage, p: Placement) -> None:
    if (p.height, p.width) != comp.shape:
        raise DimensionMismatchError(
            f"placement says {p.width}x{p.height}, component is {comp.width}x{comp.height}"
        )
    if not p.fits(face.height, face.width):
        raise OutOfBoundsError(
            f"{p.kind.value} rectangle at ({p.top_row},{p.left_col}) "
            f"size {p.width}x{p.height} leaves the {face.width}x{face.height} canvas"
        )


def overlay_blind(face: GrayImage, comp: GrayImage, p: Placement) -> GrayImage:
    """Copy the full component rectangle over the face."""
    _check_rect(face, comp, p)
    out = face.pixels.copy()
    out[p.top_row : p.top_row + p.height, p.left_col : p.left_col + p.width] = comp.pixels
    return GrayImage(out)


def overlay_masked(
    face: GrayImage, comp: GrayImage, mask: BinaryMask, p: Placement
) -> GrayImage:
    """Copy only the component's foreground (mask == 0) pixels."""
    if mask.shape != comp.shape:
        raise DimensionMismatchError(
            f"mask {mask.width}x{mask.height} vs component {comp.width}x{comp.height}"
        )
    _check_rect(face, comp, p)
    out = face.pixels.copy()
    region = out[p.top_row : p.top_row + p.height, p.left_col : p.left_col + p.width]
    fg = mask.bits == 0
    region[fg] = comp.pixels[fg]
    return GrayImage(out)


def build_component_sheet(
    canvas_h: int,
    canvas_w: int,
    placed: list[tuple[GrayImage, BinaryMask, Placement]],
) -> GrayImage:
    """Black canvas holding only the placed component foregrounds.

    Later entries overwrite earlier ones where rectangles overlap.
    """
    sheet = GrayImage(np.zeros((canvas_h, canvas_w), dtype=np.uint8))
    for comp, mask, placement in placed:
        sheet = overlay_masked(sheet, comp, mask, placement)
    return sheet
