"""Bit-accurate integer model of the streaming tuning kernel.

The floating-point blend in :mod:`photofit.blend` is the golden model; this
module re-expresses it in integer-only arithmetic the way a small streaming
hardware pipeline would: one multiplier pair, one divider, half-up rounding
folded into the division.  The rewrite

    (F + 2*IF*C) / (1 + 2*IF)   with IF = FI/CI
        == (F*CI + 2*FI*C) / (CI + 2*FI)

is algebraically exact, so the committed output can differ from the rounded
golden value by at most one intensity level (one rounding step on each
side).  :func:`equivalence_report` measures that bound.

All intermediates fit comfortably in 32 bits: window sums cap at 9*255 =
2295, so 2*(F*CI + 2*FI*C) + (CI + 2*FI) <= 3_518_235.  The pipeline
asserts this on every processed pixel rather than assuming it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .blend import TuneConfig
from .errors import DegenerateDenominatorError, DimensionMismatchError
from .image import MAX_INTENSITY, GrayImage, read_intensity_text, write_intensity_text

_WORD_LIMIT = 1 << 32


@dataclass(frozen=True)
class PixelTrace:
    """Everything the datapath computed for one processed pixel."""

    x: int
    y: int
    fi: int
    ci: int
    num: int
    den: int
    quotient: int
    committed: int


@dataclass
class DatapathTrace:
    """Per-pixel observability record of a streaming run."""

    records: list[PixelTrace] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def to_tsv(self) -> str:
        lines = ["x\ty\tFI\tCI\tnum\tden\tout"]
        lines += [
            f"{r.x}\t{r.y}\t{r.fi}\t{r.ci}\t{r.num}\t{r.den}\t{r.committed}"
            for r in self.records
        ]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class EquivalenceReport:
    max_abs_diff: int
    mismatch_count: int
    diff_map: np.ndarray

    def __str__(self) -> str:
        return (
            f"max |diff| = {self.max_abs_diff}, "
            f"{self.mismatch_count} of {self.diff_map.size} pixels differ"
        )


def blend_pixel_int(F: int, C: int, FI: int, CI: int) -> int:
    """Integer blend with one division, rounded half-up, clamped to 8 bits."""
    den = CI + 2 * FI
    if den == 0:
        raise DegenerateDenominatorError("CI + 2*FI == 0: both windows all black")
    num = F * CI + 2 * FI * C
    quotient = (2 * num + den) // (2 * den)
    return min(MAX_INTENSITY, max(0, quotient))


def stream_tune(
    blank: GrayImage, sheet: GrayImage, cfg: TuneConfig = TuneConfig()
) -> tuple[GrayImage, DatapathTrace]:
    """Single raster pass over both inputs with 3-row sliding windows.

    Emits one output pixel per input pixel.  Interior pixels whose sheet
    value exceeds the threshold are blended with :func:`blend_pixel_int`;
    everything else copies the blank.  The output is identical regardless
    of traversal order because both windows read the immutable inputs.
    """
    if blank.shape != sheet.shape:
        raise DimensionMismatchError(
            f"blank {blank.width}x{blank.height} vs sheet {sheet.width}x{sheet.height}"
        )
    h, w = blank.shape
    blank_rows = blank.pixels.tolist()
    sheet_rows = sheet.pixels.tolist()
    out_rows = [row[:] for row in blank_rows]
    trace = DatapathTrace()
    threshold = cfg.component_threshold

    # Line buffers: the three most recent rows of each input.
    blank_win: list[list[int]] = []
    sheet_win: list[list[int]] = []
    for fed in range(h):
        blank_win.append(blank_rows[fed])
        sheet_win.append(sheet_rows[fed])
        if len(blank_win) > 3:
            blank_win.pop(0)
            sheet_win.pop(0)
        if len(blank_win) < 3:
            continue
        x = fed - 1  # center row of the buffered window
        b0, b1, b2 = blank_win
        s0, s1, s2 = sheet_win
        row_out = out_rows[x]
        for y in range(1, w - 1):
            if s1[y] <= threshold:
                continue
            fi = (
                b0[y - 1] + b0[y] + b0[y + 1]
                + b1[y - 1] + b1[y] + b1[y + 1]
                + b2[y - 1] + b2[y] + b2[y + 1]
            )
            ci = (
                s0[y - 1] + s0[y] + s0[y + 1]
                + s1[y - 1] + s1[y] + s1[y + 1]
                + s2[y - 1] + s2[y] + s2[y + 1]
            )
            den = ci + 2 * fi
            num = b1[y] * ci + 2 * fi * s1[y]
            assert 0 <= 2 * num + den < _WORD_LIMIT
            quotient = (2 * num + den) // (2 * den)
            committed = min(MAX_INTENSITY, max(0, quotient))
            row_out[y] = committed
            trace.records.append(
                PixelTrace(x, y, fi, ci, num, den, quotient, committed)
            )
    return GrayImage(np.array(out_rows, dtype=np.uint8)), trace


def equivalence_report(golden: GrayImage, fixed: GrayImage) -> EquivalenceReport:
    """Exhaustive per-pixel diff between the golden and integer outputs."""
    if golden.shape != fixed.shape:
        raise DimensionMismatchError(
            f"golden {golden.width}x{golden.height} vs fixed {fixed.width}x{fixed.height}"
        )
    diff = np.abs(golden.pixels.astype(np.int16) - fixed.pixels.astype(np.int16))
    return EquivalenceReport(
        max_abs_diff=int(diff.max()),
        mismatch_count=int(np.count_nonzero(diff)),
        diff_map=diff,
    )


def run_textfile_flow(
    face_text: str,
    components_text: str,
    w: int,
    h: int,
    cfg: TuneConfig = TuneConfig(),
) -> tuple[str, DatapathTrace]:
    """Text-file twin of :func:`stream_tune`.

    Parses two headerless intensity files (dimensions travel out of band),
    streams the tuning pass, and renders the result in the same format.
    """
    blank = read_intensity_text(face_text, w, h)
    sheet = read_intensity_text(components_text, w, h)
    tuned, trace = stream_tune(blank, sheet, cfg)
    return write_intensity_text(tuned), trace
