"""End-to-end runs of the command-line surface."""

import os

import numpy as np
import pytest

from dtwave.cli import main
from dtwave.pgm import read_csv_matrix, read_pgm, write_csv_matrix, write_pgm
from dtwave.synth import SynthConfig, gen_batch


def run(*argv):
    return main(list(argv))


@pytest.fixture
def image_csv(tmp_path):
    img = gen_batch(1, SynthConfig(size=32, seed=5))[0]
    path = tmp_path / "img.csv"
    write_csv_matrix(path, img)
    return str(path), img


@pytest.mark.parametrize("variant", ["dwt", "dual-real", "dual-complex"])
def test_transform_inverse_round_trip(tmp_path, image_csv, variant):
    path, img = image_csv
    pyr = str(tmp_path / "coeffs.pyr")
    out = str(tmp_path / "back.csv")
    assert run("transform", "--filter", "kingsbury_qshift_14",
               "--variant", variant, "--levels", "2",
               "--in", path, "--out", pyr) == 0
    assert run("inverse", "--filter", "kingsbury_qshift_14",
               "--in", pyr, "--out", out) == 0
    back = read_csv_matrix(out)
    assert np.linalg.norm(back - img) / np.linalg.norm(img) < 1e-9


def test_transform_signal_round_trip(tmp_path):
    sig = np.sin(np.arange(64) * 0.3)
    src = tmp_path / "sig.csv"
    write_csv_matrix(src, sig[None, :])
    pyr = str(tmp_path / "sig.pyr")
    out = str(tmp_path / "back.csv")
    assert run("transform", "--filter", "kingsbury_qshift_16",
               "--variant", "dwt", "--levels", "3",
               "--in", str(src), "--out", pyr) == 0
    assert run("inverse", "--filter", "kingsbury_qshift_16",
               "--in", pyr, "--out", out) == 0
    np.testing.assert_allclose(read_csv_matrix(out).ravel(), sig, atol=1e-10)


def test_transform_accepts_pgm_and_filter_files(tmp_path):
    img = np.arange(1024.0).reshape(32, 32) % 251
    src = tmp_path / "img.pgm"
    write_pgm(src, img)
    pyr = str(tmp_path / "img.pyr")
    back = str(tmp_path / "back.pgm")
    from dtwave.filters import fixtures_dir
    flt = str(fixtures_dir() / "kingsbury_qshift_16.flt")
    assert run("transform", "--filter", flt, "--variant", "dual-real",
               "--in", str(src), "--out", pyr) == 0
    assert run("inverse", "--filter", flt, "--in", pyr, "--out", back) == 0
    rec, maxval = read_pgm(back)
    assert maxval == 255
    assert np.mean(np.abs(rec - img)) < 1.0  # PGM rounds to integers


def test_gen_data_writes_images(tmp_path):
    out = str(tmp_path / "data")
    assert run("gen-data", "--count", "3", "--out-dir", out) == 0
    names = sorted(os.listdir(out))
    assert names == ["img_0000.csv", "img_0001.csv", "img_0002.csv"]
    first = read_csv_matrix(os.path.join(out, names[0]))
    assert first.shape == (128, 128)


def test_gen_data_pgm_with_config(tmp_path):
    cfg = tmp_path / "c.txt"
    cfg.write_text("synth.size=32\nsynth.seed=77\n")
    out = str(tmp_path / "data")
    assert run("gen-data", "--config", str(cfg), "--count", "2",
               "--format", "pgm", "--out-dir", out) == 0
    img, maxval = read_pgm(os.path.join(out, "img_0001.pgm"))
    assert img.shape == (32, 32) and maxval == 255


def test_impulse_emits_all_bands(tmp_path):
    out = str(tmp_path / "imp.csv")
    assert run("impulse", "--filter", "learned_complex_h1",
               "--filter-first", "learned_complex_h1_first",
               "--scale", "3", "--out", out) == 0
    for band in range(1, 7):
        m = read_csv_matrix(str(tmp_path / ("imp_band%d.csv" % band)))
        assert m.shape == (80, 80)
        assert np.all(m >= 0.0)


def test_impulse_single_band(tmp_path):
    out = str(tmp_path / "b3.csv")
    assert run("impulse", "--filter", "kingsbury_qshift_14", "--band", "3",
               "--scale", "3", "--variant", "real", "--out", out) == 0
    assert os.path.exists(out)


def test_diagnose_shift(tmp_path, capsys):
    assert run("diagnose", "shift", "--filter", "kingsbury_qshift_14",
               "--level", "3", "--out-dir", str(tmp_path / "d")) == 0
    lines = capsys.readouterr().out.splitlines()
    metrics = dict(ln.split("=", 1) for ln in lines if "=" in ln)
    assert metrics["name"] == "shift-variance"
    assert float(metrics["ratio"]) < 0.5
    assert os.path.exists(tmp_path / "d" / "dtcwt_magnitude.csv")


def test_diagnose_alias(capsys):
    assert run("diagnose", "alias", "--filter", "learned_complex_h1",
               "--filter-first", "learned_complex_h1_first",
               "--levels", "1") == 0
    metrics = dict(ln.split("=", 1)
                   for ln in capsys.readouterr().out.splitlines() if "=" in ln)
    assert float(metrics["artifact_dtcwt"]) < float(metrics["artifact_dwt"])


def test_diagnose_band_recon(capsys):
    assert run("diagnose", "band-recon", "--filter",
               "kingsbury_qshift_14") == 0
    metrics = dict(ln.split("=", 1)
                   for ln in capsys.readouterr().out.splitlines() if "=" in ln)
    for probe in ("vertical", "horizontal", "diagonal", "curved"):
        assert float(metrics["dtcwt_" + probe]) < float(metrics["dwt_" + probe])


def test_train_command(tmp_path, capsys):
    cfg = tmp_path / "c.txt"
    cfg.write_text("train.steps=4\ntrain.batch_size=2\ntrain.filter_len=6\n"
                   "train.filter_len_first=6\ntrain.levels=2\n"
                   "train.impulse_scale=2\nsynth.size=32\nsynth.seed=2\n")
    out = str(tmp_path / "run")
    assert run("train", "--config", str(cfg), "--count", "4",
               "--out-dir", out) == 0
    printed = dict(ln.split("=", 1)
                   for ln in capsys.readouterr().out.splitlines() if "=" in ln)
    assert np.isfinite(float(printed["total"]))
    for name in ("config.txt", "history.csv", "h1.flt", "h1_first.flt",
                 "checkpoint.txt"):
        assert os.path.exists(os.path.join(out, name)), name


def test_train_flag_overrides(tmp_path):
    cfg = tmp_path / "c.txt"
    cfg.write_text("train.steps=999\ntrain.batch_size=2\ntrain.filter_len=6\n"
                   "train.filter_len_first=6\ntrain.levels=2\n"
                   "train.impulse_scale=2\nsynth.size=32\n")
    out = str(tmp_path / "run")
    assert run("train", "--config", str(cfg), "--count", "4",
               "--steps", "2", "--out-dir", out) == 0
    with open(os.path.join(out, "history.csv")) as fh:
        assert len(fh.read().splitlines()) == 3  # header + 2 steps


def test_compare_filters_output(capsys):
    assert run("compare-filters", "--filter", "learned_complex_h1",
               "--ref", "kingsbury_qshift_06") == 0
    assert float(capsys.readouterr().out.strip()) < 0.2


def test_usage_errors_exit_1(capsys):
    assert run() == 1
    assert run("transform", "--filter", "haar") == 1  # missing --in/--out
    assert run("no-such-command") == 1
    capsys.readouterr()


def test_validation_errors_exit_2(tmp_path, capsys):
    missing = str(tmp_path / "nope.csv")
    assert run("transform", "--filter", "kingsbury_qshift_14",
               "--in", missing, "--out", str(tmp_path / "o.pyr")) == 2
    # indivisible length: 10-sample signal at 3 levels
    src = tmp_path / "short.csv"
    write_csv_matrix(src, np.arange(10.0)[None, :])
    assert run("transform", "--filter", "kingsbury_qshift_14", "--levels",
               "3", "--in", str(src), "--out", str(tmp_path / "o.pyr")) == 2
    assert run("compare-filters", "--filter", "not_a_fixture",
               "--ref", "haar") == 2
    err = capsys.readouterr().err
    assert "dtwave:" in err
