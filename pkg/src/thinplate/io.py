"""CSV and JSON formats for fields, spectral states and spectra.

Floats are written with 17 significant digits so 64-bit values round-trip.
"""

import csv
import json

import numpy as np

from .eigenbasis import EigenPair, ModeIndex
from .fields import PHYSICAL, REFERENCE, GridField
from .limit1d import GridField1D
from .projection import SpectralState


def fmt(x: float) -> str:
    return f"{x:.17g}"


def write_field_csv(f: GridField, fh):
    """Header ``nx1,nx2,domain_tag[,eps]`` then one row of ``nx2`` samples per x1 node."""
    writer = csv.writer(fh, lineterminator="\n")
    header = [str(f.nx1), str(f.nx2), f.domain_tag]
    if f.domain_tag == PHYSICAL:
        header.append(fmt(f.eps))
    writer.writerow(header)
    for row in f.values:
        writer.writerow([fmt(v) for v in row])


def read_field_csv(fh) -> GridField:
    rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise ValueError("empty field file")
    header = rows[0]
    try:
        nx1, nx2 = int(header[0]), int(header[1])
        tag = header[2].strip() if len(header) > 2 else REFERENCE
        eps = float(header[3]) if tag == PHYSICAL else None
        values = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)
    except (IndexError, ValueError) as exc:
        raise ValueError(f"malformed field CSV: {exc}") from None
    if values.shape != (nx1, nx2):
        raise ValueError(f"field CSV declares {nx1}x{nx2} but holds {values.shape}")
    return GridField(values, tag, eps)


def write_field1d_csv(u: GridField1D, fh):
    fh.write(f"{u.nx}\n")
    for v in u.values:
        fh.write(fmt(v) + "\n")


def read_field1d_csv(fh) -> GridField1D:
    lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError("empty 1-D field file")
    try:
        nx = int(lines[0])
        values = np.array([float(v) for v in lines[1:]])
    except ValueError as exc:
        raise ValueError(f"malformed 1-D field CSV: {exc}") from None
    if values.shape != (nx,):
        raise ValueError(f"1-D field CSV declares {nx} nodes but holds {values.shape[0]}")
    return GridField1D(values)


def state_to_dict(state: SpectralState) -> dict:
    return {
        "eps": state.eps,
        "t": state.t,
        "truncation_count": state.truncation_count,
        "source_norm_sq": state.source_norm_sq,
        "modes": [
            {
                "m": p.mode.m,
                "n": p.mode.n,
                "lambda": p.lam,
                "coefficient": float(c),
                "initial_coefficient": float(c0),
            }
            for p, c, c0 in zip(state.eigenpairs, state.coefficients, state.initial_coefficients)
        ],
    }


def state_from_dict(d: dict) -> SpectralState:
    modes = d["modes"]
    pairs = [EigenPair(ModeIndex(e["m"], e["n"]), float(e["lambda"]), k + 1) for k, e in enumerate(modes)]
    coef = [e["coefficient"] for e in modes]
    init = [e.get("initial_coefficient", e["coefficient"]) for e in modes]
    return SpectralState(
        d["eps"], pairs, coef, d["source_norm_sq"], t=d.get("t", 0.0), initial_coefficients=init
    )


def write_state_json(state: SpectralState, fh):
    json.dump(state_to_dict(state), fh, indent=2)
    fh.write("\n")


def read_state_json(fh) -> SpectralState:
    return state_from_dict(json.load(fh))


def write_spectrum_csv(pairs, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["rank", "m", "n", "lambda", "lambda_over_pi2"])
    for p in pairs:
        writer.writerow([p.rank, p.mode.m, p.mode.n, fmt(p.lam), fmt(p.lam / np.pi ** 2)])
