"""
Text cache for kernel-integral tables.

The file starts with YAML front matter describing the run (alpha, k, s and the
mesh); the body holds one record per line:

    family i j node mu value

with family I (fractional integrals at the abscissae), U (uniform history),
G (graded history) or X (graded history seen from the uniform phase).
Indices that a family does not use are written as 0.
"""
import io
import logging
from typing import Dict, Optional

import frontmatter
import numpy as np

from .atomic_writer import AtomicWriter
from .timegrid import grading_ratio
from .weighted_jacobi import FhbvmTables, build_basis, core_matrices, rho_param

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
FAMILIES = ("I", "U", "G", "X")


def _records(values: np.ndarray, leading: int) -> np.ndarray:
    """Rows (i, j, node, mu, value) for a table with `leading` index axes before (node, mu)."""
    if values.size == 0:
        return np.zeros((0, 5))
    idx = np.indices(values.shape).reshape(values.ndim, -1).T
    i = idx[:, 0] if leading >= 1 else np.zeros(idx.shape[0], dtype=int)
    j = idx[:, 1] if leading >= 2 else np.zeros(idx.shape[0], dtype=int)
    return np.column_stack([i, j, idx[:, leading], idx[:, leading + 1], values.ravel()])


def header(tables: FhbvmTables) -> Dict:
    return {
        "format": FORMAT_VERSION,
        "alpha": float(tables.alpha),
        "k": int(tables.k),
        "s": int(tables.s),
        "T": float(tables.T),
        "M": int(tables.M),
        "m": int(tables.m),
        "v": int(tables.v),
        "j_switch": float(tables.j_switch),
    }


def dump_tables(tables: FhbvmTables, path: str) -> bool:
    """
    Write the tables to a text file.

    Args:
        tables (FhbvmTables): Tables to store
        path (str): Destination

    Returns:
        bool: True if the file was written
    """
    buffer = io.StringIO()
    for family, values, leading in (
        ("I", tables.Is_alpha, 0),
        ("U", tables.uniform_J, 1),
        ("G", tables.graded_J, 1),
        ("X", tables.cross_J, 2),
    ):
        rows = _records(values, leading)
        for row in rows:
            buffer.write(f"{family} {int(row[0])} {int(row[1])} {int(row[2])} {int(row[3])} {row[4]:.17g}\n")
    post = frontmatter.Post(buffer.getvalue(), **header(tables))
    return AtomicWriter(path).write_text(frontmatter.dumps(post) + "\n")


def load_tables(path: str, expected: Optional[Dict] = None) -> FhbvmTables:
    """
    Read tables written by dump_tables.

    Args:
        path (str): Cache file
        expected (dict, optional): Header values the file must match (alpha, k, s, T, M, m, v, j_switch)

    Returns:
        FhbvmTables: The tables

    Raises:
        ValueError: If the header is incomplete or does not match
    """
    post = frontmatter.load(path)
    meta = dict(post.metadata)
    missing = [key for key in ("alpha", "k", "s", "T", "M", "m", "v") if key not in meta]
    if missing:
        raise ValueError(f"Table cache {path} lacks header keys: {', '.join(missing)}")
    if meta.get("format") != FORMAT_VERSION:
        raise ValueError(f"Unsupported table cache format: {meta.get('format')}")
    for key, value in (expected or {}).items():
        if meta.get(key) != value:
            raise ValueError(f"Table cache {path} has {key}={meta.get(key)}, expected {value}")

    alpha, k, s = float(meta["alpha"]), int(meta["k"]), int(meta["s"])
    M, m, v = int(meta["M"]), int(meta["m"]), int(meta["v"])
    basis = build_basis(alpha, k)
    rule, Ps, Is, _, _ = core_matrices(basis, k, s)

    shapes = {
        "I": (k, s),
        "U": (max(M - m - 1, 0), k, s),
        "G": (max(v - 1, 0), k, s),
        "X": (v, M - m, k, s),
    }
    store = {family: np.zeros(shape) for family, shape in shapes.items()}
    body = post.content.strip()
    if body:
        families = np.loadtxt(io.StringIO(body), dtype=str, usecols=0, ndmin=1)
        data = np.loadtxt(io.StringIO(body), usecols=(1, 2, 3, 4, 5), ndmin=2)
        unknown = set(np.unique(families)) - set(FAMILIES)
        if unknown:
            raise ValueError(f"Unknown table families in {path}: {', '.join(sorted(unknown))}")
        idx = data[:, :4].astype(int)
        for family in FAMILIES:
            sel = families == family
            if not np.any(sel):
                continue
            i, j, node, mu = idx[sel].T
            if family == "I":
                store[family][node, mu] = data[sel, 4]
            elif family == "X":
                store[family][i, j, node, mu] = data[sel, 4]
            else:
                store[family][i, node, mu] = data[sel, 4]

    Is = store["I"] if np.any(store["I"]) else Is
    Xs = (Ps * rule.weights[:, None]).T @ Is
    logger.info(f"Loaded kernel tables from {path} (alpha={alpha}, k={k}, s={s}, M={M}, m={m}, v={v})")
    return FhbvmTables(
        basis=basis, k=k, s=s, rule=rule, Ps=Ps, Is_alpha=Is, Xs_alpha=Xs, rho_s=rho_param(Xs),
        T=float(meta["T"]), M=M, m=m, v=v, r=grading_ratio(m),
        uniform_J=store["U"], graded_J=store["G"], cross_J=store["X"],
        j_switch=float(meta.get("j_switch", 2.0)),
    )
