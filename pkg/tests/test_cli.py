"""Command-line workflows through click's test runner."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from photofit.blend import TuneConfig
from photofit.catalog import ComponentKind, load_catalog
from photofit.cli import main
from photofit.datapath import run_textfile_flow
from photofit.fixtures import build_demo_catalog
from photofit.image import GrayImage, load_pgm, save_pgm, write_intensity_text

from conftest import random_image


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def demo_root(runner, tmp_path):
    root = tmp_path / "catalog"
    result = runner.invoke(main, ["demo", "--root", str(root)])
    assert result.exit_code == 0, result.output
    return root


class TestDemo:
    def test_seeds_a_loadable_catalog(self, demo_root):
        catalog = load_catalog(demo_root)
        for kind in ComponentKind:
            assert len(catalog.records(kind)) >= 2
        assert (demo_root / "demo-description.json").exists()

    def test_reports_per_kind_counts(self, runner, tmp_path):
        result = runner.invoke(main, ["demo", "--root", str(tmp_path / "c")])
        for kind in ComponentKind:
            assert f"{kind.value}: " in result.output


class TestIngestAndQuery:
    def test_ingest_then_query_round_trip(self, runner, demo_root, tmp_path):
        arr = np.zeros((12, 8), dtype=np.uint8)
        arr[2:10, 2:6] = 210
        comp = GrayImage(arr)
        img_path = tmp_path / "nose.pgm"
        img_path.write_bytes(save_pgm(comp))
        result = runner.invoke(
            main,
            [
                "ingest", "--root", str(demo_root), "--kind", "Nose",
                "--image", str(img_path), "--param", "Sharpness=Hooked",
                "--source", "cli test",
            ],
        )
        assert result.exit_code == 0, result.output
        new_id = result.output.strip().splitlines()[-1]
        assert "warning" in result.stderr  # Hooked is outside the vocabulary

        listed = runner.invoke(
            main,
            ["query", "--root", str(demo_root), "--kind", "Nose",
             "--param", "Sharpness=Hooked"],
        )
        assert listed.exit_code == 0
        lines = listed.output.strip().splitlines()
        assert len(lines) == 1
        assert lines[0].startswith(f"{new_id}\t")
        assert "Sharpness=Hooked" in lines[0]

        record = load_catalog(demo_root).get(new_id)
        assert record.image == comp
        assert record.source == "cli test"

    def test_ingest_rejects_bad_param_syntax(self, runner, demo_root, tmp_path):
        img_path = tmp_path / "n.pgm"
        img_path.write_bytes(save_pgm(GrayImage(np.full((6, 6), 99, dtype=np.uint8))))
        result = runner.invoke(
            main,
            ["ingest", "--root", str(demo_root), "--kind", "Nose",
             "--image", str(img_path), "--param", "Sharpness"],
        )
        assert result.exit_code != 0

    def test_query_unknown_param_name_fails(self, runner, demo_root):
        result = runner.invoke(
            main,
            ["query", "--root", str(demo_root), "--kind", "Nose",
             "--param", "Sparkle=Yes"],
        )
        assert result.exit_code != 0


class TestGenerate:
    def test_demo_description_end_to_end(self, runner, demo_root, tmp_path):
        out = tmp_path / "face.pgm"
        transcript = tmp_path / "log.json"
        result = runner.invoke(
            main,
            ["generate", "--root", str(demo_root), "--out", str(out),
             "--transcript", str(transcript)],
        )
        assert result.exit_code == 0, result.output
        img = load_pgm(out.read_bytes())
        assert (img.width, img.height) == (92, 112)
        assert "(tuned)" in result.output

        events = json.loads(transcript.read_text())
        assert [e["op"] for e in events[:2]] == ["create", "describe"]
        assert sum(e["op"] == "select" for e in events) == 7
        assert events[-1]["op"] == "tune"

    def test_selection_and_placement_log(self, runner, demo_root, tmp_path):
        result = runner.invoke(
            main,
            ["generate", "--root", str(demo_root), "--out", str(tmp_path / "f.pgm")],
        )
        assert "FaceCutting: facecutting-0001 (1 candidates)" in result.stderr
        assert "Nose: 49,38" in result.stderr

    def test_blind_stage_skips_tuning(self, runner, demo_root, tmp_path):
        out = tmp_path / "blind.pgm"
        result = runner.invoke(
            main,
            ["generate", "--root", str(demo_root), "--out", str(out),
             "--stage", "blind"],
        )
        assert result.exit_code == 0
        assert "(blind)" in result.output

    def test_unanswerable_description_names_kinds(self, runner, demo_root, tmp_path):
        desc = {k.value: {} for k in ComponentKind}
        desc["Nose"] = {"Sharpness": "Gone"}
        desc_path = tmp_path / "desc.json"
        desc_path.write_text(json.dumps(desc))
        result = runner.invoke(
            main,
            ["generate", "--root", str(demo_root), "--desc", str(desc_path),
             "--out", str(tmp_path / "f.pgm")],
        )
        assert result.exit_code != 0
        assert "Nose" in result.stderr

    def test_matches_library_pipeline(self, runner, demo_root, tmp_path):
        from photofit.fixtures import DEMO_DESCRIPTION
        from photofit.session import ConstructionService

        out = tmp_path / "cli.pgm"
        runner.invoke(
            main,
            ["generate", "--root", str(demo_root), "--out", str(out),
             "--threshold", "4"],
        )
        service = ConstructionService(build_demo_catalog())
        sess = service.create_session()
        service.submit_description(sess.id, DEMO_DESCRIPTION)
        for kind, ids in sess.candidates.items():
            service.select_candidate(sess.id, kind, ids[0])
        service.assemble_session(sess.id)
        service.tune_session(sess.id, 4)
        assert load_pgm(out.read_bytes()) == sess.stages["tuned"]


class TestTuneFpga:
    def test_streams_text_files_with_trace(self, runner, tmp_path, rng):
        blank = random_image(rng, 23, 28)
        sheet = random_image(rng, 23, 28)
        face_path = tmp_path / "face.txt"
        comp_path = tmp_path / "comp.txt"
        face_path.write_text(write_intensity_text(blank))
        comp_path.write_text(write_intensity_text(sheet))
        out_path = tmp_path / "tuned.txt"
        trace_path = tmp_path / "trace.tsv"

        result = runner.invoke(
            main,
            ["tune-fpga", "--face", str(face_path), "--components", str(comp_path),
             "--width", "23", "--height", "28", "--out", str(out_path),
             "--trace", str(trace_path)],
        )
        assert result.exit_code == 0, result.output

        want_text, want_trace = run_textfile_flow(
            write_intensity_text(blank), write_intensity_text(sheet), 23, 28, TuneConfig()
        )
        assert out_path.read_text() == want_text
        assert trace_path.read_text() == want_trace.to_tsv()
        assert f"({len(want_trace.records)} pixels blended)" in result.output

    def test_dimension_mismatch_is_a_clean_failure(self, runner, tmp_path):
        face_path = tmp_path / "face.txt"
        face_path.write_text("1\n2\n3\n")
        result = runner.invoke(
            main,
            ["tune-fpga", "--face", str(face_path), "--components", str(face_path),
             "--width", "2", "--height", "2", "--out", str(tmp_path / "o.txt")],
        )
        assert result.exit_code != 0
        assert "Error" in result.stderr


class TestServe:
    def test_help_mentions_demo_flag(self, runner):
        result = runner.invoke(main, ["serve", "--help"])
        assert result.exit_code == 0
        assert "--demo" in result.output

    def test_requires_root_or_demo(self, runner):
        result = runner.invoke(main, ["serve"], env={"PHOTOFIT_CATALOG_ROOT": ""})
        assert result.exit_code != 0
