"""Grid file formats and report tables.

CSV grid layout (numbers in shortest round-trip decimal form):

    u_min,du,Nu,v_min,dv,Nv
    <u_min>,<du>,<Nu>,<v_min>,<dv>,<Nv>
    j,k,re,im
    0,0,<re>,<im>
    ...

The loader reconstructs the patch from ``a = du*Nu`` and
``b = 2*pi/(dv*Nv)``, exact for power-of-two sample counts.

Binary grid layout: a 48-byte little-endian header

    magic "ZAKG" | version u32 | Nu u32 | Nv u32 | a f64 | b f64 | u_min f64 | v_min f64

followed by two f64 per sample (re, im), row-major in j then k.  The
binary format round-trips the patch parameters bit-exactly.

All writers are atomic (temp file in the target directory, then rename).
"""

from __future__ import annotations

import math
import os
import struct
import tempfile

import numpy as np

from .core import IdealZakState, ModularWavefunction, ZakGrid, ZakPatch

__all__ = [
    "format_float",
    "atomic_write_text",
    "atomic_write_bytes",
    "save_grid_csv",
    "load_grid_csv",
    "save_grid_binary",
    "load_grid_binary",
    "save_point_list_csv",
    "logical_report_csv",
    "save_logical_report",
]

MAGIC = b"ZAKG"
VERSION = 1
_HEADER = struct.Struct("<4sIIIdddd")

LOGICAL_REPORT_COLUMNS = (
    "rho00_re,rho00_im,rho01_re,rho01_im,rho10_re,rho10_im,rho11_re,rho11_im,"
    "bloch_x,bloch_y,bloch_z,purity,raw_trace"
)


def format_float(x: float) -> str:
    """Shortest decimal string that round-trips the 64-bit float."""
    return repr(float(x))


def _atomic_write(path, data, mode):
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".zakgkp-tmp-")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text: str):
    _atomic_write(path, text, "w")


def atomic_write_bytes(path, data: bytes):
    _atomic_write(path, data, "wb")


def save_grid_csv(psi: ModularWavefunction, path):
    grid = psi.grid
    lines = [
        "u_min,du,Nu,v_min,dv,Nv",
        ",".join(
            [
                format_float(grid.patch.u_min),
                format_float(grid.du),
                str(grid.nu),
                format_float(grid.patch.v_min),
                format_float(grid.dv),
                str(grid.nv),
            ]
        ),
        "j,k,re,im",
    ]
    samples = psi.samples
    for j in range(grid.nu):
        row = samples[j]
        for k in range(grid.nv):
            z = row[k]
            lines.append(f"{j},{k},{format_float(z.real)},{format_float(z.imag)}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def load_grid_csv(path) -> ModularWavefunction:
    with open(path, encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != "u_min,du,Nu,v_min,dv,Nv":
            raise ValueError(f"unrecognized grid CSV header: {header!r}")
        u_min, du, nu, v_min, dv, nv = fh.readline().strip().split(",")
        nu, nv = int(nu), int(nv)
        du, dv, u_min, v_min = float(du), float(dv), float(u_min), float(v_min)
        if fh.readline().strip() != "j,k,re,im":
            raise ValueError("missing j,k,re,im data header")
        samples = np.zeros((nu, nv), dtype=np.complex128)
        for line in fh:
            if not line.strip():
                continue
            j, k, re, im = line.split(",")
            samples[int(j), int(k)] = complex(float(re), float(im))
    patch = ZakPatch(du * nu, 2 * math.pi / (dv * nv), u_min=u_min, v_min=v_min)
    return ModularWavefunction(ZakGrid(patch, nu, nv), samples)


def save_grid_binary(psi: ModularWavefunction, path):
    grid = psi.grid
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        grid.nu,
        grid.nv,
        grid.patch.a,
        grid.patch.b,
        grid.patch.u_min,
        grid.patch.v_min,
    )
    # complex128 memory layout is exactly (re, im) f64 pairs, row-major
    body = np.ascontiguousarray(psi.samples, dtype="<c16").tobytes()
    atomic_write_bytes(path, header + body)


def load_grid_binary(path) -> ModularWavefunction:
    with open(path, "rb") as fh:
        raw = fh.read()
    magic, version, nu, nv, a, b, u_min, v_min = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r} in {path}")
    if version != VERSION:
        raise ValueError(f"unsupported grid format version {version}")
    samples = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size).reshape(nu, nv)
    grid = ZakGrid(ZakPatch(a, b, u_min=u_min, v_min=v_min), nu, nv)
    return ModularWavefunction(grid, samples)


def save_point_list_csv(state: IdealZakState, path):
    """Point-mass list for ideal states: rows of u,v,re,im."""
    lines = ["u,v,re,im"]
    for (u, v), w in sorted(state.items()):
        lines.append(
            f"{format_float(u)},{format_float(v)},{format_float(w.real)},{format_float(w.imag)}"
        )
    atomic_write_text(path, "\n".join(lines) + "\n")


def logical_report_csv(qubit) -> str:
    """Two-line CSV report for a logical qubit."""
    r = qubit.matrix
    x, y, z = qubit.bloch
    values = [
        r[0, 0].real,
        r[0, 0].imag,
        r[0, 1].real,
        r[0, 1].imag,
        r[1, 0].real,
        r[1, 0].imag,
        r[1, 1].real,
        r[1, 1].imag,
        x,
        y,
        z,
        qubit.purity,
        qubit.raw_trace,
    ]
    return LOGICAL_REPORT_COLUMNS + "\n" + ",".join(format_float(v) for v in values) + "\n"


def save_logical_report(qubit, path):
    atomic_write_text(path, logical_report_csv(qubit))
