import json
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from spatialbench.core import BitMask
from spatialbench.dataset import (
    SCHEMA_VERSION,
    CaseRecord,
    DatasetManifest,
    GeneratedCase,
    IoError,
    ValidationError,
    channel_file_name,
    import_predictions,
    read_dataset,
    write_dataset,
)
from spatialbench.pngio import encode_png, read_foreground, read_gray, write_png


def rand_mask(seed: int, size: int = 16) -> BitMask:
    rng = np.random.default_rng(seed)
    return BitMask(rng.random((size, size)) < 0.4)


def make_cases(n: int = 2, size: int = 16):
    return [
        GeneratedCase(
            case_id=f"dots_{i:03d}",
            seed=1000 + i,
            channels=(rand_mask(10 * i, size), rand_mask(10 * i + 1, size)),
            label=rand_mask(10 * i + 2, size),
            meta={"num_dots": 5, "num_selected": 2},
        )
        for i in range(n)
    ]


def write_small(out_dir, cases=None):
    return write_dataset(
        cases if cases is not None else make_cases(),
        task="dots",
        resolution=16,
        master_seed=42,
        params={"adjacency": 4},
        channel_names=("dots", "reference"),
        out_dir=out_dir,
    )


def tree_bytes(root: Path) -> dict[str, bytes]:
    return {
        str(p.relative_to(root)): p.read_bytes()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }


class TestPngCodec:
    def test_gray_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        arr = rng.integers(0, 256, size=(13, 7), dtype=np.uint8)
        path = tmp_path / "g.png"
        write_png(path, arr)
        with Image.open(path) as img:
            assert img.mode == "L"
            assert np.array_equal(np.asarray(img), arr)

    def test_rgb_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        arr = rng.integers(0, 256, size=(5, 9, 3), dtype=np.uint8)
        path = tmp_path / "c.png"
        write_png(path, arr)
        with Image.open(path) as img:
            assert img.mode == "RGB"
            assert np.array_equal(np.asarray(img), arr)

    def test_encoding_is_deterministic(self):
        arr = np.arange(64, dtype=np.uint8).reshape(8, 8)
        assert encode_png(arr) == encode_png(arr.copy())

    def test_rejects_other_shapes(self):
        with pytest.raises(ValueError, match="expected"):
            encode_png(np.zeros((4, 4, 4), dtype=np.uint8))
        with pytest.raises(ValueError, match="expected"):
            encode_png(np.zeros(16, dtype=np.uint8))

    def test_read_gray_rejects_color(self, tmp_path):
        path = tmp_path / "c.png"
        write_png(path, np.zeros((4, 4, 3), dtype=np.uint8))
        with pytest.raises(ValueError, match="grayscale"):
            read_gray(path)

    @pytest.mark.parametrize("on_value", [1, 255])
    def test_read_foreground_value_conventions(self, tmp_path, on_value):
        bits = rand_mask(3, 8).bits
        path = tmp_path / "p.png"
        write_png(path, bits.astype(np.uint8) * on_value)
        assert np.array_equal(read_foreground(path), bits)

    def test_read_foreground_rgb_and_alpha(self, tmp_path):
        bits = rand_mask(4, 8).bits
        rgb = np.zeros((8, 8, 3), dtype=np.uint8)
        rgb[bits] = (0, 0, 200)
        path = tmp_path / "rgb.png"
        write_png(path, rgb)
        assert np.array_equal(read_foreground(path), bits)
        # opaque alpha everywhere must not turn background into foreground
        rgba = np.dstack([rgb, np.full((8, 8), 255, dtype=np.uint8)])
        path2 = tmp_path / "rgba.png"
        Image.fromarray(rgba, mode="RGBA").save(path2)
        assert np.array_equal(read_foreground(path2), bits)

    def test_read_foreground_palette(self, tmp_path):
        bits = rand_mask(5, 8).bits
        img = Image.fromarray(bits.astype(np.uint8), mode="L").convert("P")
        path = tmp_path / "pal.png"
        img.save(path)
        assert np.array_equal(read_foreground(path), bits)


class TestWriteRead:
    def test_layout_and_round_trip(self, tmp_path):
        cases = make_cases()
        out = tmp_path / "ds"
        manifest = write_small(out, cases)
        assert (out / "dataset.json").is_file()
        assert sorted(p.name for p in (out / "imagesTr").iterdir()) == [
            "dots_000_0000.png",
            "dots_000_0001.png",
            "dots_001_0000.png",
            "dots_001_0001.png",
        ]
        assert sorted(p.name for p in (out / "labelsTr").iterdir()) == [
            "dots_000.png",
            "dots_001.png",
        ]
        back, decoded = read_dataset(out)
        assert back == manifest
        for case in cases:
            channels, label = decoded[case.case_id]
            assert channels == case.channels
            assert label == case.label

    def test_canonical_value_conventions(self, tmp_path):
        out = tmp_path / "ds"
        write_small(out)
        img = read_gray(out / "imagesTr" / channel_file_name("dots_000", 0))
        lab = read_gray(out / "labelsTr" / "dots_000.png")
        assert set(np.unique(img)) <= {0, 255}
        assert set(np.unique(lab)) <= {0, 1}

    def test_rewrite_is_byte_identical(self, tmp_path):
        write_small(tmp_path / "a")
        write_small(tmp_path / "b")
        a, b = tree_bytes(tmp_path / "a"), tree_bytes(tmp_path / "b")
        assert a == b

    def test_no_temp_litter_after_success(self, tmp_path):
        write_small(tmp_path / "ds")
        assert [p.name for p in tmp_path.iterdir()] == ["ds"]

    def test_manifest_fields(self, tmp_path):
        manifest = write_small(tmp_path / "ds")
        assert manifest.schema_version == SCHEMA_VERSION
        assert manifest.num_cases == 2
        assert manifest.channels == ((0, "dots"), (1, "reference"))
        assert manifest.cases[0].meta == {"num_dots": 5, "num_selected": 2}
        assert manifest.cases[0].channel_files == (
            "imagesTr/dots_000_0000.png",
            "imagesTr/dots_000_0001.png",
        )
        assert manifest.cases[0].label_file == "labelsTr/dots_000.png"

    def test_manifest_json_round_trip(self, tmp_path):
        manifest = write_small(tmp_path / "ds")
        assert DatasetManifest.from_json_text(manifest.to_json_text()) == manifest

    def test_manifest_text_is_stable(self, tmp_path):
        manifest = write_small(tmp_path / "ds")
        on_disk = (tmp_path / "ds" / "dataset.json").read_text(encoding="utf-8")
        assert on_disk == manifest.to_json_text()
        assert on_disk.endswith("\n")
        assert json.loads(on_disk)["schema_version"] == SCHEMA_VERSION


class TestWriteValidation:
    def test_duplicate_case_id(self, tmp_path):
        cases = make_cases() + make_cases(1)
        with pytest.raises(ValidationError, match="duplicate case_id 'dots_000'"):
            write_small(tmp_path / "ds", cases)
        assert not (tmp_path / "ds").exists()

    def test_malformed_case_id(self, tmp_path):
        bad = GeneratedCase("Dots-1", 0, (rand_mask(0), rand_mask(1)), rand_mask(2))
        with pytest.raises(ValidationError, match="malformed case_id"):
            write_small(tmp_path / "ds", [bad])

    def test_maze_style_ids_are_accepted(self, tmp_path):
        case = GeneratedCase(
            "maze_4x4_000", 0, (rand_mask(0), rand_mask(1)), rand_mask(2)
        )
        write_small(tmp_path / "ds", [case])

    def test_channel_count_mismatch(self, tmp_path):
        bad = GeneratedCase("dots_000", 0, (rand_mask(0),), rand_mask(2))
        with pytest.raises(ValidationError, match="1 channels, expected 2"):
            write_small(tmp_path / "ds", [bad])

    def test_wrong_mask_size(self, tmp_path):
        bad = GeneratedCase(
            "dots_000", 0, (rand_mask(0, 32), rand_mask(1, 32)), rand_mask(2, 32)
        )
        with pytest.raises(ValidationError, match="32x32, expected 16x16"):
            write_small(tmp_path / "ds", [bad])

    def test_all_problems_reported_at_once(self, tmp_path):
        cases = [
            GeneratedCase("dots_000", 0, (rand_mask(0),), rand_mask(2)),
            GeneratedCase("nope", 0, (rand_mask(3), rand_mask(4)), rand_mask(5)),
        ]
        with pytest.raises(ValidationError) as exc_info:
            write_small(tmp_path / "ds", cases)
        assert len(exc_info.value.problems) == 2

    def test_refuses_non_empty_directory(self, tmp_path):
        out = tmp_path / "ds"
        out.mkdir()
        (out / "junk").write_text("x")
        with pytest.raises(IoError, match="non-empty"):
            write_small(out)
        assert (out / "junk").is_file()

    def test_refuses_file_target(self, tmp_path):
        out = tmp_path / "ds"
        out.write_text("x")
        with pytest.raises(IoError, match="not a directory"):
            write_small(out)

    def test_overwrites_empty_directory(self, tmp_path):
        out = tmp_path / "ds"
        out.mkdir()
        write_small(out)
        assert (out / "dataset.json").is_file()


class TestReadValidation:
    def test_missing_manifest(self, tmp_path):
        with pytest.raises(ValidationError, match="no dataset.json"):
            read_dataset(tmp_path)

    def test_corrupt_manifest_json(self, tmp_path):
        (tmp_path / "dataset.json").write_text("{nope")
        with pytest.raises(ValidationError, match="not valid JSON"):
            read_dataset(tmp_path)

    def test_unsupported_schema_version(self, tmp_path):
        out = tmp_path / "ds"
        write_small(out)
        doc = json.loads((out / "dataset.json").read_text())
        doc["schema_version"] = 99
        (out / "dataset.json").write_text(json.dumps(doc))
        with pytest.raises(ValidationError, match="unsupported schema_version 99"):
            read_dataset(out)

    def test_label_value_outside_domain(self, tmp_path):
        out = tmp_path / "ds"
        write_small(out)
        label_path = out / "labelsTr" / "dots_000.png"
        arr = read_gray(label_path).copy()
        arr[0, 0] = 7
        write_png(label_path, arr)
        with pytest.raises(ValidationError, match=r"values \[7\] outside \{0,1\}"):
            read_dataset(out)

    def test_missing_channel_file(self, tmp_path):
        out = tmp_path / "ds"
        write_small(out)
        (out / "imagesTr" / "dots_001_0001.png").unlink()
        with pytest.raises(ValidationError, match="missing file dots_001_0001.png"):
            read_dataset(out)

    def test_wrong_image_size(self, tmp_path):
        out = tmp_path / "ds"
        write_small(out)
        write_png(out / "labelsTr" / "dots_000.png", np.zeros((8, 8), dtype=np.uint8))
        with pytest.raises(ValidationError, match="8x8, expected 16x16"):
            read_dataset(out)

    def test_num_cases_mismatch(self, tmp_path):
        out = tmp_path / "ds"
        write_small(out)
        doc = json.loads((out / "dataset.json").read_text())
        doc["num_cases"] = 5
        (out / "dataset.json").write_text(json.dumps(doc))
        with pytest.raises(ValidationError, match="num_cases=5 but 2 cases listed"):
            read_dataset(out)


class TestImportPredictions:
    def write_preds(self, manifest, pred_dir: Path, on_value: int = 255):
        pred_dir.mkdir(parents=True, exist_ok=True)
        masks = {}
        for i, record in enumerate(manifest.cases):
            bits = rand_mask(500 + i).bits
            write_png(pred_dir / f"{record.case_id}.png", bits.astype(np.uint8) * on_value)
            masks[record.case_id] = bits
        return masks

    def test_import_and_value_leniency(self, tmp_path):
        manifest = write_small(tmp_path / "ds")
        want = self.write_preds(manifest, tmp_path / "p255", on_value=255)
        self.write_preds(manifest, tmp_path / "p1", on_value=1)
        a = import_predictions(tmp_path / "p255", manifest)
        b = import_predictions(tmp_path / "p1", manifest)
        assert set(a.masks) == {"dots_000", "dots_001"}
        for case_id, bits in want.items():
            assert np.array_equal(a.masks[case_id].bits, bits)
            assert a.masks[case_id] == b.masks[case_id]

    def test_missing_predictions_all_reported(self, tmp_path):
        manifest = write_small(tmp_path / "ds")
        self.write_preds(manifest, tmp_path / "p")
        (tmp_path / "p" / "dots_000.png").unlink()
        (tmp_path / "p" / "dots_001.png").unlink()
        with pytest.raises(ValidationError) as exc_info:
            import_predictions(tmp_path / "p", manifest)
        assert len(exc_info.value.problems) == 2

    def test_wrong_size_rejected(self, tmp_path):
        manifest = write_small(tmp_path / "ds")
        self.write_preds(manifest, tmp_path / "p")
        write_png(tmp_path / "p" / "dots_000.png", np.zeros((4, 4), dtype=np.uint8))
        with pytest.raises(ValidationError, match="4x4, expected 16x16"):
            import_predictions(tmp_path / "p", manifest)

    def test_extra_files_are_ignored(self, tmp_path):
        manifest = write_small(tmp_path / "ds")
        self.write_preds(manifest, tmp_path / "p")
        (tmp_path / "p" / "notes.txt").write_text("scratch")
        preds = import_predictions(tmp_path / "p", manifest)
        assert set(preds.masks) == {"dots_000", "dots_001"}
