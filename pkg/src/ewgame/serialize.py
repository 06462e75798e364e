"""Text formats shared by the command line and scripts: state and witness
specs, weight files with exact symbolic constants, and structured summaries.

States are named constructors ("werner(0.5)", "bell_psi_plus", "ghz") or a
path to a JSON file {"dim": d, "entries": [[re, im], ...]} listing the dense
matrix row-major.  Witnesses are named constructors ("werner", "chsh",
"chsh-strengthened") or a path to a JSON file {"n": 2, "weights":
[[s, t, w], ...]} where w is a number or a token like "1/sqrt(3)" or
"-1/sqrt(2)", resolved to full double precision.
"""

from __future__ import annotations

import json
import math
import os
import re

import numpy as np

from . import multiparty, qcore, witness

_WERNER_RE = re.compile(r"^werner\(\s*([-+0-9.eE]+)\s*\)$")
_TOKEN_RE = re.compile(r"^([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*/\s*sqrt\(\s*([0-9]+)\s*\)$")

STATE_NAMES = "werner(z), bell_psi_plus, ghz, maximally_mixed(n), or a JSON matrix file"
WITNESS_NAMES = "werner, chsh, chsh-strengthened, or a JSON weights file"


def float17(x: float) -> str:
    """Render a float at 17 significant digits (lossless round trip)."""
    return f"{float(x):.17g}"


def parse_weight_value(value) -> float:
    """Resolve a numeric weight or a "p/sqrt(q)" token to a float."""
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip()
    m = _TOKEN_RE.match(text)
    if m:
        return float(m.group(1)) / math.sqrt(int(m.group(2)))
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"cannot parse weight value {value!r}") from None


def parse_state_spec(spec: str) -> qcore.DensityMatrix:
    """Resolve a state spec string to a validated density matrix."""
    text = spec.strip()
    m = _WERNER_RE.match(text)
    if m:
        return qcore.make_werner(float(m.group(1)))
    if text == "bell_psi_plus":
        return qcore.bell_psi_plus()
    if text == "ghz":
        return multiparty.ghz_state()
    m = re.match(r"^maximally_mixed\(\s*([123])\s*\)$", text)
    if m:
        return qcore.maximally_mixed(int(m.group(1)))
    if os.path.exists(text):
        return load_state_file(text)
    raise ValueError(f"unknown state spec {spec!r}; expected {STATE_NAMES}")


def load_state_file(path: str) -> qcore.DensityMatrix:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "entries" not in data:
        raise ValueError(f"{path}: expected a JSON object with 'dim' and 'entries'")
    dim = int(data.get("dim", 0))
    entries = data["entries"]
    if dim * dim != len(entries):
        raise ValueError(f"{path}: {len(entries)} entries do not fill a {dim}x{dim} matrix")
    flat = np.array([complex(float(re_), float(im)) for re_, im in entries])
    return qcore.DensityMatrix(flat.reshape(dim, dim))


def state_to_dict(rho: qcore.DensityMatrix) -> dict:
    return {
        "dim": rho.dim,
        "entries": [[z.real, z.imag] for z in rho.matrix.ravel()],
    }


def parse_witness_spec(spec: str) -> witness.Witness:
    """Resolve a witness spec string to a witness."""
    text = spec.strip()
    if text == "werner":
        return witness.werner_witness()
    if text == "chsh":
        return witness.fixed_chsh_witness()
    if text == "chsh-strengthened":
        return witness.strengthened_chsh_witness()
    if text == "ghz":
        return multiparty.ghz_witness()
    if os.path.exists(text):
        return load_witness_file(text)
    raise ValueError(f"unknown witness spec {spec!r}; expected {WITNESS_NAMES}")


def load_witness_file(path: str) -> witness.Witness:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "n" not in data or "weights" not in data:
        raise ValueError(f"{path}: expected a JSON object with 'n' and 'weights'")
    n = int(data["n"])
    if n not in (2, 3):
        raise ValueError(f"{path}: n must be 2 or 3, got {n}")
    table = np.zeros((4,) * n)
    for row in data["weights"]:
        *labels, value = row
        labels = tuple(int(l) for l in labels)
        if len(labels) != n or any(l not in (0, 1, 2, 3) for l in labels):
            raise ValueError(f"{path}: bad label tuple {labels}")
        table[labels] = parse_weight_value(value)
    return witness.Witness.from_weights(witness.PauliWeights(n, table))


def witness_to_dict(w: witness.Witness) -> dict:
    rows = []
    for ix in np.argwhere(w.weights.table != 0.0):
        labels = tuple(int(l) for l in ix)
        rows.append(list(labels) + [float(w.weights.table[labels])])
    return {"n": w.n_qubits, "weights": rows}


def parse_pi_spec(spec: str, weights: witness.PauliWeights, rounds: int, seed: int):
    """Build a game config from "uniform", "support-only", or a JSON file
    holding the label probabilities (flat or nested)."""
    from .game import GameConfig

    text = spec.strip()
    n = weights.n_qubits
    if text == "uniform":
        return GameConfig.uniform(rounds, seed, n_parties=n)
    if text == "support-only":
        return GameConfig.support_only(weights, rounds, seed)
    if os.path.exists(text):
        with open(text) as fh:
            data = json.load(fh)
        if isinstance(data, dict):
            data = data["pi"]
        pi = np.asarray(data, dtype=np.float64).reshape((4,) * n)
        return GameConfig(pi, rounds, seed)
    raise ValueError(f"unknown pi spec {spec!r}; expected uniform, support-only, or a file")
