"""Release gate: every headline guarantee, one test per criterion.

Each test re-derives its expected values with an oracle written inline,
independent of the library internals it checks, and finishes by printing
a single PASS line (visible with ``pytest -s``).  Stated runtime budgets
are asserted, not just hoped for.
"""

import json
import time

import numpy as np
import pytest
from click.testing import CliRunner

from photofit.assemble import (
    AnchorPoint,
    compute_layout,
    find_ear_position,
    overlay_blind,
)
from photofit.blend import (
    TuneConfig,
    blend_pixel,
    commit_intensity,
    placement_seam_pairs,
    seam_contrast,
    tune_masked,
    tune_overlay,
)
from photofit.catalog import COMPONENT_KINDS, ComponentKind
from photofit.cli import main
from photofit.datapath import blend_pixel_int, run_textfile_flow, stream_tune
from photofit.errors import NoForegroundError
from photofit.fixtures import (
    COMPONENT_DIMS,
    DEMO_DESCRIPTION,
    build_demo_catalog,
    elliptical_mask,
    flat_image,
    synthetic_face_cutting,
)
from photofit.image import (
    BinaryMask,
    GrayImage,
    binarize,
    load_pgm,
    otsu_threshold,
    read_intensity_text,
    save_pgm,
    write_intensity_text,
)
from photofit.session import ConstructionService

SEED = 1395


def fresh_rng():
    return np.random.default_rng(SEED)


def random_pair(rng, w=23, h=28):
    blank = GrayImage(rng.integers(0, 256, size=(h, w), dtype=np.uint8))
    sheet = GrayImage(rng.integers(0, 256, size=(h, w), dtype=np.uint8))
    return blank, sheet


# --------------------------------------------------------------------------
# Criterion: blended overlay equals a scalar brute-force evaluator exactly.
# --------------------------------------------------------------------------


def scalar_overlay_oracle(blank: GrayImage, sheet: GrayImage, threshold: int):
    """Per-pixel re-evaluation with plain Python floats, no vectorization."""
    h, w = blank.height, blank.width
    F = [[int(v) for v in row] for row in blank.pixels]
    C = [[int(v) for v in row] for row in sheet.pixels]
    out = [row[:] for row in F]
    for r in range(1, h - 1):
        for c in range(1, w - 1):
            if C[r][c] <= threshold:
                continue
            fi = ci = 0
            for dr in (-1, 0, 1):
                frow, crow = F[r + dr], C[r + dr]
                for dc in (-1, 0, 1):
                    fi += frow[c + dc]
                    ci += crow[c + dc]
            if ci == 0:
                continue
            factor = fi / ci
            v = (F[r][c] + 2.0 * factor * C[r][c]) / (1.0 + 2.0 * factor)
            iv = int(v + 0.5)
            out[r][c] = 0 if iv < 0 else (255 if iv > 255 else iv)
    return np.array(out, dtype=np.uint8)


def test_blend_oracle_equivalence():
    rng = fresh_rng()
    start = time.monotonic()
    for _ in range(100):
        blank, sheet = random_pair(rng)
        for threshold in (0, 10):
            got = tune_overlay(blank, sheet, TuneConfig(component_threshold=threshold))
            want = scalar_overlay_oracle(blank, sheet, threshold)
            assert np.array_equal(got.pixels, want), "overlay diverged from oracle"
    elapsed = time.monotonic() - start
    assert elapsed < 5.0, f"blend oracle sweep took {elapsed:.2f}s (budget 5s)"
    print(f"PASS blend oracle equivalence (100 pairs, T=0 and T=10, {elapsed:.2f}s)")


# --------------------------------------------------------------------------
# Criterion: integer datapath stays within one level of the float model.
# --------------------------------------------------------------------------


def test_golden_vs_fixed_point_within_one_level():
    rng = fresh_rng()
    start = time.monotonic()
    cfg = TuneConfig()

    worst = 0
    for _ in range(100):
        blank, sheet = random_pair(rng)
        golden = tune_overlay(blank, sheet, cfg)
        fixed, _ = stream_tune(blank, sheet, cfg)
        diff = np.abs(golden.pixels.astype(np.int16) - fixed.pixels.astype(np.int16))
        worst = max(worst, int(diff.max()))
    assert worst <= 1, f"image-level max diff {worst} exceeds 1"

    kernel_worst = 0
    for kf in range(1, 256, 16):
        fi = 9 * kf
        for kc in range(1, 256, 16):
            ci = 9 * kc
            for F in range(256):
                fF = float(F)
                for C in range(256):
                    got = blend_pixel_int(F, C, fi, ci)
                    want = commit_intensity(
                        blend_pixel(fF, float(C), float(fi), float(ci), cfg)
                    )
                    d = got - want if got >= want else want - got
                    if d > kernel_worst:
                        kernel_worst = d
    assert kernel_worst <= 1, f"kernel-level max diff {kernel_worst} exceeds 1"

    elapsed = time.monotonic() - start
    assert elapsed < 60.0, f"golden comparison took {elapsed:.2f}s (budget 60s)"
    print(
        "PASS golden vs fixed point (100 pairs max diff "
        f"{worst}, exhaustive kernel max diff {kernel_worst}, {elapsed:.1f}s)"
    )


# --------------------------------------------------------------------------
# Criterion: equal inputs are a fixed point of both tuning paths.
# --------------------------------------------------------------------------


def test_fixed_point_identity_on_equal_inputs():
    rng = fresh_rng()
    for _ in range(25):
        w = int(rng.integers(3, 40))
        h = int(rng.integers(3, 40))
        img = GrayImage(rng.integers(0, 256, size=(h, w), dtype=np.uint8))
        for threshold in (0, 10, 255):
            cfg = TuneConfig(component_threshold=threshold)
            assert tune_overlay(img, img, cfg) == img
            streamed, _ = stream_tune(img, img, cfg)
            assert streamed == img
    print("PASS fixed-point identity (sheet == blank leaves both paths unchanged)")


# --------------------------------------------------------------------------
# Criterion: ear anchor equals the exhaustive lexicographic scan.
# --------------------------------------------------------------------------


def test_ear_anchor_matches_exhaustive_oracle():
    rng = fresh_rng()

    def oracle(bits):
        hits = [
            (c, r)
            for c in range(bits.shape[1])
            for r in range(bits.shape[0])
            if bits[r, c]
        ]
        return min(hits) if hits else None

    checked = 0
    for _ in range(1000):
        h = int(rng.integers(1, 31))
        w = int(rng.integers(1, 31))
        density = float(rng.uniform(0.005, 0.6))
        bits = (rng.random((h, w)) < density).astype(np.uint8)
        mask = BinaryMask(bits)
        expected = oracle(bits)
        if expected is None:
            with pytest.raises(NoForegroundError):
                find_ear_position(mask)
        else:
            col, row = expected
            assert find_ear_position(mask) == AnchorPoint(row, col)
        checked += 1
    assert checked == 1000

    with pytest.raises(NoForegroundError):
        find_ear_position(BinaryMask(np.zeros((3, 3), dtype=np.uint8)))
    single = np.zeros((3, 3), dtype=np.uint8)
    single[2, 0] = 1
    assert find_ear_position(BinaryMask(single)) == AnchorPoint(2, 0)
    two = np.zeros((3, 3), dtype=np.uint8)
    two[0, 1] = 1
    two[2, 0] = 1
    assert find_ear_position(BinaryMask(two)) == AnchorPoint(2, 0)
    print("PASS ear anchor oracle (1000 random masks plus 3 hand examples)")


# --------------------------------------------------------------------------
# Criterion: placement equations hit the published fixture exactly and
# translate with the anchor.
# --------------------------------------------------------------------------

FIXTURE_DIMS = {
    ComponentKind.RIGHT_EYEBROW: (5, 20),
    ComponentKind.RIGHT_EYE: (8, 12),
    ComponentKind.LEFT_EYEBROW: (5, 20),
    ComponentKind.LEFT_EYE: (8, 12),
    ComponentKind.NOSE: (30, 15),
    ComponentKind.LIP: (10, 18),
}

FIXTURE_PLACEMENTS = {
    ComponentKind.RIGHT_EYEBROW: (5, 30),
    ComponentKind.RIGHT_EYE: (10, 38),
    ComponentKind.NOSE: (8, 50),
    ComponentKind.LEFT_EYEBROW: (5, 60),
    ComponentKind.LEFT_EYE: (10, 60),
    ComponentKind.LIP: (43, 48),
}


def test_layout_fixture_and_translation_covariance():
    base = compute_layout(AnchorPoint(10, 20), FIXTURE_DIMS)
    for kind, (top, left) in FIXTURE_PLACEMENTS.items():
        p = base.placements[kind]
        assert (p.top_row, p.left_col) == (top, left), kind.value
        assert (p.height, p.width) == FIXTURE_DIMS[kind]

    rng = fresh_rng()
    for _ in range(100):
        dr = int(rng.integers(0, 60))
        dc = int(rng.integers(0, 60))
        moved = compute_layout(AnchorPoint(10 + dr, 20 + dc), FIXTURE_DIMS)
        for kind, p in base.placements.items():
            q = moved.placements[kind]
            assert (q.top_row - p.top_row, q.left_col - p.left_col) == (dr, dc)
    print("PASS layout fixture (exact placements, covariant over 100 anchors)")


# --------------------------------------------------------------------------
# Criterion: both serializations round-trip bit-exactly, and the text-file
# tuning flow equals the in-memory one.
# --------------------------------------------------------------------------


def test_format_round_trips_bit_exact():
    rng = fresh_rng()
    for _ in range(1000):
        w = int(rng.integers(1, 33))
        h = int(rng.integers(1, 33))
        img = GrayImage(rng.integers(0, 256, size=(h, w), dtype=np.uint8))
        assert load_pgm(save_pgm(img)) == img
        assert read_intensity_text(write_intensity_text(img), w, h) == img

    blank, sheet = random_pair(rng)
    cfg = TuneConfig()
    in_memory, _ = stream_tune(blank, sheet, cfg)
    via_text, _ = run_textfile_flow(
        write_intensity_text(blank), write_intensity_text(sheet), 23, 28, cfg
    )
    assert via_text == write_intensity_text(in_memory)
    print("PASS format round trips (1000 images, text-file flow bit-identical)")


# --------------------------------------------------------------------------
# Criterion: tuning more than halves the seam contrast of blind pasting.
# --------------------------------------------------------------------------


def test_seam_reduction_on_synthetic_fixture():
    face = synthetic_face_cutting()
    silhouette = binarize(face, otsu_threshold(face))
    anchor = find_ear_position(silhouette)
    layout = compute_layout(anchor, dict(COMPONENT_DIMS))

    cfg = TuneConfig()
    blind = face
    tuned = face
    pairs = []
    for kind in COMPONENT_KINDS:
        h, w = COMPONENT_DIMS[kind]
        comp = flat_image(h, w, 200)
        mask = elliptical_mask(h, w)
        p = layout.placements[kind]
        blind = overlay_blind(blind, comp, p)
        tuned = tune_masked(tuned, comp, mask, p, cfg)
        pairs.extend(placement_seam_pairs(p, face.height, face.width))

    blind_seam = seam_contrast(blind, pairs)
    tuned_seam = seam_contrast(tuned, pairs)
    assert tuned_seam < 0.5 * blind_seam, (
        f"seam contrast only fell from {blind_seam:.2f} to {tuned_seam:.2f}"
    )
    print(
        f"PASS seam reduction (blind {blind_seam:.2f} -> tuned {tuned_seam:.2f}, "
        f"ratio {tuned_seam / blind_seam:.3f} < 0.5)"
    )


# --------------------------------------------------------------------------
# Criterion: transcripts replay to identical pixels and illegal actions
# never corrupt a session.
# --------------------------------------------------------------------------


def _deep_state(sess):
    return {
        "status": sess.status,
        "selections": dict(sess.selections),
        "offsets": dict(sess.offsets),
        "stages": {k: v.pixels.tobytes() for k, v in sess.stages.items()},
    }


def test_session_determinism_and_fuzz():
    service = ConstructionService(build_demo_catalog())
    sess = service.create_session()
    service.submit_description(sess.id, DEMO_DESCRIPTION)
    for kind, ids in sess.candidates.items():
        service.select_candidate(sess.id, kind, ids[0])
    service.assemble_session(sess.id)
    service.tune_session(sess.id, threshold=2)
    service.nudge_component(sess.id, ComponentKind.NOSE, 1, -2)
    service.nudge_component(sess.id, ComponentKind.LEFT_EYE, -1, 1)

    twin = service.replay_transcript(list(sess.transcript))
    assert set(twin.stages) == {"blind", "masked", "tuned"}
    for name, img in sess.stages.items():
        assert twin.stages[name] == img, f"replayed {name} stage differs"

    rng = fresh_rng()
    fuzz = service.create_session()
    kinds = list(ComponentKind)

    def random_action():
        roll = int(rng.integers(0, 7))
        if roll == 0:
            service.submit_description(fuzz.id, DEMO_DESCRIPTION)
        elif roll == 1:
            service.submit_description(fuzz.id, {"Nose": {}})
        elif roll == 2:
            kind = kinds[rng.integers(0, 7)]
            pool = fuzz.candidates.get(kind, [])
            choice = pool[0] if pool and rng.integers(0, 2) else "missing-0000"
            service.select_candidate(fuzz.id, kind, choice)
        elif roll == 3:
            service.assemble_session(fuzz.id)
        elif roll == 4:
            service.tune_session(fuzz.id, int(rng.integers(0, 20)))
        elif roll == 5:
            kind = kinds[rng.integers(0, 7)]
            service.nudge_component(fuzz.id, kind, int(rng.integers(-400, 401)), 0)
        else:
            service.export_face(fuzz.id, ("blind", "masked", "tuned")[rng.integers(0, 3)])

    rejected = 0
    for _ in range(150):
        before = _deep_state(fuzz)
        try:
            random_action()
        except Exception:
            rejected += 1
            assert _deep_state(fuzz) == before, "an illegal action mutated state"
    assert rejected > 15, "fuzz run failed to exercise illegal actions"
    print(
        f"PASS session determinism (replay pixel-identical, {rejected} illegal "
        "actions left state untouched)"
    )


# --------------------------------------------------------------------------
# Criterion: the demo catalog answers the demo description end to end.
# --------------------------------------------------------------------------


def test_demo_description_end_to_end(tmp_path):
    service = ConstructionService(build_demo_catalog())
    sess = service.create_session()
    service.submit_description(sess.id, DEMO_DESCRIPTION)
    for kind in ComponentKind:
        assert len(sess.candidates[kind]) >= 1, f"no candidate for {kind.value}"

    runner = CliRunner()
    root = tmp_path / "catalog"
    assert runner.invoke(main, ["demo", "--root", str(root)]).exit_code == 0
    out = tmp_path / "face.pgm"
    result = runner.invoke(
        main, ["generate", "--root", str(root), "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    img = load_pgm(out.read_bytes())
    assert (img.width, img.height) == (92, 112)
    print("PASS demo end-to-end (candidates for all kinds, 92x112 PGM written)")
