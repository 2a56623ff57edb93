import math

import numpy as np
import pytest

from conftest import ALPHA
from zakgkp.cli import main
from zakgkp.gridio import load_grid_binary, load_grid_csv

A = 2 * ALPHA


def run(*args):
    return main([str(a) for a in args])


def test_zakplot_vacuum(tmp_path):
    out = tmp_path / "vac.csv"
    assert run("zakplot", "--state", "vacuum", "--grid", "64x64", "--out", out) == 0
    grid_file = load_grid_csv(out)
    mags = load_grid_csv(tmp_path / "vac_abs.csv")
    args = load_grid_csv(tmp_path / "vac_arg.csv")
    assert np.allclose(mags.samples.real, np.abs(grid_file.samples), atol=1e-15)
    assert np.allclose(args.samples.real, np.angle(grid_file.samples), atol=1e-15)
    peak = np.unravel_index(np.argmax(mags.samples.real), mags.samples.shape)
    assert peak == (16, 32)  # the (0, 0) node
    manifest = (tmp_path / "vac.csv.manifest").read_text()
    assert "command=zakplot" in manifest and "state=vacuum" in manifest


def test_zakplot_is_deterministic(tmp_path):
    out = tmp_path / "vac.csv"
    run("zakplot", "--state", "vacuum", "--grid", "64x64", "--out", out)
    first = out.read_bytes()
    run("zakplot", "--state", "vacuum", "--grid", "64x64", "--out", out)
    assert out.read_bytes() == first


def test_zakplot_binary_format(tmp_path):
    out = tmp_path / "vac.bin"
    assert run("zakplot", "--state", "vacuum", "--grid", "64x64", "--format", "bin",
               "--out", out) == 0
    psi = load_grid_binary(out)
    assert psi.grid.nu == 64
    assert abs(psi.norm() - 1) < 1e-9


def test_zakplot_ideal_point_list(tmp_path):
    out = tmp_path / "gkp0.csv"
    assert run("zakplot", "--state", "gkp0", "--out", out) == 0
    assert out.read_text() == "u,v,re,im\n0.0,0.0,1.0,0.0\n"


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("state = gkp-approx:0.3:1\ngrid = 64x64  # small\nmmax = 16\n")
    out = tmp_path / "state.csv"
    assert run("zakplot", "--config", cfg, "--grid", "32x32", "--out", out) == 0
    manifest = (tmp_path / "state.csv.manifest").read_text()
    assert "grid=32x32" in manifest  # flag wins
    assert "state=gkp-approx:0.3:1" in manifest
    assert load_grid_csv(out).grid.nu == 32


def read_report(path):
    header, row = path.read_text().splitlines()
    return dict(zip(header.split(","), (float(x) for x in row.split(","))))


def test_logical_report_gkp0_all_methods(tmp_path):
    for method in ("trace", "ec-trace", "overlap"):
        out = tmp_path / f"{method}.csv"
        assert run("logical", "--state", "gkp0", "--method", method, "--out", out) == 0
        report = read_report(out)
        assert report["bloch_z"] == 1.0
        assert report["purity"] == 1.0


def test_logical_trace_and_overlap_agree(tmp_path):
    rows = {}
    for method in ("trace", "overlap"):
        out = tmp_path / f"{method}.csv"
        assert run("logical", "--state", "gkp-approx:0.2:0", "--grid", "128x128",
                   "--method", method, "--out", out) == 0
        rows[method] = read_report(out)
    for key, value in rows["trace"].items():
        assert value == pytest.approx(rows["overlap"][key], abs=1e-10)


def test_sweep_monotone_and_deterministic(tmp_path):
    out = tmp_path / "sweep.csv"
    args = ("sweep", "--state", "gkp-approx:0.5:0", "--grid", "64x64",
            "--deltas", "0.5,0.3,0.1", "--mmax", "24", "--out", out)
    assert run(*args) == 0
    first = out.read_bytes()
    lines = out.read_text().splitlines()
    assert lines[0] == "delta,fidelity,purity,raw_trace,residual_pv,residual_pu"
    fidelity = [float(line.split(",")[1]) for line in lines[1:]]
    assert fidelity == sorted(fidelity)
    assert fidelity[-1] > 0.999
    residual = [float(line.split(",")[4]) for line in lines[1:]]
    assert residual == sorted(residual, reverse=True)
    assert run(*args) == 0
    assert out.read_bytes() == first


def test_shift_array_panels(tmp_path):
    out = tmp_path / "panels"
    assert run("shift-array", "--state", "gkp-approx:0.3:0", "--grid", "96x96",
               "--out", out) == 0
    files = sorted(p.name for p in out.iterdir())
    assert "manifest" in files
    assert len([f for f in files if f.startswith("panel_")]) == 16

    base = load_grid_csv(out / "panel_j0_k0.csv")
    right = load_grid_csv(out / "panel_j1_k0.csv")
    # X panels are pure u-translations: dx = alpha/3 is 16 of 96 columns;
    # compare magnitudes within the unwrapped block
    assert np.allclose(
        np.abs(right.samples[16:, :]), np.abs(base.samples[:-16, :]), atol=1e-12
    )

    # the displaced origin carries the same value on all four corner panels
    j0, k0 = base.grid.origin_index
    reference = base.samples[j0, k0]
    corner_values = {
        (0, 0): reference,
        (3, 0): load_grid_csv(out / "panel_j3_k0.csv").samples[j0 + 48, k0],
        (0, 3): load_grid_csv(out / "panel_j0_k3.csv").samples[j0, k0 - 48],
        (3, 3): load_grid_csv(out / "panel_j3_k3.csv").samples[j0 + 48, k0 - 48],
    }
    for value in corner_values.values():
        assert value == pytest.approx(reference, abs=1e-6 * abs(reference))
        assert math.isclose(
            math.atan2(value.imag, value.real),
            math.atan2(reference.imag, reference.real),
            abs_tol=1e-6,
        )


def test_exit_codes(tmp_path):
    out = tmp_path / "x.csv"
    assert run("zakplot", "--state", "nonsense", "--out", out) == 2
    assert run("zakplot", "--state", "vacuum") == 2  # missing --out
    assert run("zakplot", "--state", "vacuum", "--grid", "33x64", "--out", out) == 2
    assert run("zakplot", "--state", "vacuum", "--grid", "64x64", "--mmax", 1,
               "--out", out) == 3
    assert run("shift-array", "--state", "vacuum", "--grid", "64x64",
               "--out", tmp_path / "d") == 2  # 64 not divisible by 12


def test_tabulated_state(tmp_path, code):
    grid = code.grid(64, 64)
    table = tmp_path / "table.csv"
    lines = ["x,re,im"]
    for m in (-1, 0, 1):
        for u in grid.u_values():
            x = float(u + m * A)
            lines.append(f"{x!r},{math.exp(-x * x)!r},0.0")
    table.write_text("\n".join(lines) + "\n")
    out = tmp_path / "tab.csv"
    assert run("zakplot", "--state", f"tabulated:{table}", "--grid", "64x64",
               "--mmax", "4", "--out", out) == 0
    psi = load_grid_csv(out)
    assert np.isfinite(psi.samples).all() and psi.norm() > 0


# brute-force 512x512 quadrature oracle values (see test_gkp.py)
def test_logical_vacuum_golden_row(tmp_path):
    out = tmp_path / "vac_logical.csv"
    assert run("logical", "--state", "vacuum", "--grid", "512x512",
               "--method", "trace", "--out", out) == 0
    report = read_report(out)
    assert report["rho00_re"] == pytest.approx(0.7900749243509657, abs=1e-9)
    assert report["rho11_re"] == pytest.approx(0.20992507564903426, abs=1e-9)
    assert report["rho01_re"] == pytest.approx(0.22878260990217197, abs=1e-9)
    assert report["purity"] == pytest.approx(0.7729698886617357, abs=1e-9)
    assert report["raw_trace"] == pytest.approx(1.0, abs=1e-9)


def test_sweep_rejects_bad_specs(tmp_path):
    out = tmp_path / "s.csv"
    assert run("sweep", "--state", "gkp-approx:0.3:x", "--grid", "64x64",
               "--deltas", "0.3", "--out", out) == 2
    assert run("sweep", "--state", "gkp0", "--grid", "64x64",
               "--deltas", "0.3,-0.1", "--out", out) == 2
    assert run("sweep", "--state", "gkp0", "--grid", "64x64",
               "--deltas", "abc", "--out", out) == 2


def test_unwritable_output_path(tmp_path):
    missing = tmp_path / "no-such-dir" / "x.csv"
    assert run("zakplot", "--state", "vacuum", "--grid", "64x64", "--out", missing) == 2


def test_manifest_records_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("grid = 64x64\n")
    out = tmp_path / "v.csv"
    assert run("zakplot", "--state", "vacuum", "--config", cfg, "--out", out) == 0
    assert f"config_file={cfg}" in (tmp_path / "v.csv.manifest").read_text()
