"""
Codebook Export
===============
File formats for training codebooks.

CSV layout:
    # kind=dft G=16 M_bar=2 T=64
    t,re_0,im_0,re_1,im_1,...
    0,<re>,<im>,...
One row per slot t (0-based), carrying the G*M_bar^2 entries of column t of
Phi_hat with real and imaginary parts interleaved, printed with 17
significant digits so that values round-trip exactly.

Binary layout (little endian):
    header  struct '<4sHIIIB': magic b'BDRS', version (1), G, M_bar, T, kind code
    payload Phi_hat entries in column-major order as complex64 (re, im float32 pairs)
The complex64 payload limits round-trip accuracy to single precision.
"""

import io
import re
import struct
from pathlib import Path
from typing import Dict, Union

import numpy as np
import pandas as pd

from .builder import TrainingCodebook
from .topology import BaseKind, GroupTopology

MAGIC = b'BDRS'
VERSION = 1
HEADER = struct.Struct('<4sHIIIB')

KIND_CODES: Dict[BaseKind, int] = {
    BaseKind.DFT: 0,
    BaseKind.HADAMARD: 1,
    BaseKind.RANDOM_UNITARY: 2,
}

# Residual tolerance appropriate for single-precision payloads
BINARY_TOL = 1e-4

PathLike = Union[str, Path]


class CodebookFormatError(ValueError):
    """Raised when a codebook file is malformed."""


def _topology(n_bs: int, g: int, m_bar: int) -> GroupTopology:
    try:
        return GroupTopology(n_bs=n_bs, g=g, m_bar=m_bar)
    except ValueError as exc:
        raise CodebookFormatError(f"Invalid grouping G={g} M_bar={m_bar}: {exc}") from exc


def _assemble(top: GroupTopology, t_slots: int, phi_hat: np.ndarray, kind: BaseKind) -> TrainingCodebook:
    """Wrap the decoded matrix; shape and training-length errors become format errors."""
    try:
        return TrainingCodebook(topology=top, t_slots=t_slots, phi_hat=phi_hat, kind=kind)
    except ValueError as exc:
        raise CodebookFormatError(str(exc)) from exc


def write_csv(cb: TrainingCodebook, path: PathLike) -> Path:
    """
    Write a codebook in the CSV layout.

    Args:
        cb: Codebook to export
        path: Destination file

    Returns:
        Path written
    """
    path = Path(path)
    top = cb.topology
    columns = cb.phi_hat.T  # one row per slot
    data = np.empty((cb.t_slots, 2 * top.t_min))
    data[:, 0::2] = columns.real
    data[:, 1::2] = columns.imag
    names = [f"{part}_{k}" for k in range(top.t_min) for part in ('re', 'im')]
    frame = pd.DataFrame(data, columns=names)
    frame.insert(0, 't', np.arange(cb.t_slots))

    with open(path, 'w', newline='') as f:
        f.write(f"# kind={cb.kind.value} G={top.g} M_bar={top.m_bar} T={cb.t_slots}\n")
        frame.to_csv(f, index=False, float_format='%.17g', lineterminator='\n')
    return path


def read_csv(path: PathLike, n_bs: int = 1) -> TrainingCodebook:
    """
    Load a codebook written by write_csv.

    Args:
        path: CSV file
        n_bs: BS antenna count to attach to the topology (not stored in the file)

    Raises:
        CodebookFormatError: missing metadata line or inconsistent dimensions
    """
    try:
        text = Path(path).read_text(encoding='utf-8')
    except UnicodeDecodeError as exc:
        raise CodebookFormatError(f"Codebook file is not UTF-8 text: {exc}") from exc
    first, _, body = text.partition('\n')
    meta = dict(re.findall(r'(\w+)=([\w.]+)', first)) if first.startswith('#') else {}
    try:
        kind = BaseKind(meta['kind'])
        g, m_bar, t_slots = int(meta['G']), int(meta['M_bar']), int(meta['T'])
    except (KeyError, ValueError) as exc:
        raise CodebookFormatError(f"Invalid codebook metadata line: {first!r}") from exc
    top = _topology(n_bs, g, m_bar)

    try:
        frame = pd.read_csv(io.StringIO(body), float_precision='round_trip')
    except ValueError as exc:
        raise CodebookFormatError(f"Unparseable codebook body: {exc}") from exc
    rows = g * m_bar ** 2
    if frame.shape != (t_slots, 1 + 2 * rows) or 't' not in frame.columns:
        raise CodebookFormatError(
            f"Expected {t_slots} rows of {1 + 2 * rows} fields, got {frame.shape}"
        )
    try:
        ordered = np.array_equal(np.sort(frame['t'].to_numpy()), np.arange(t_slots))
    except TypeError:
        ordered = False
    if not ordered:
        raise CodebookFormatError(f"Slot column t must hold each of 0..{t_slots - 1} exactly once")
    frame = frame.sort_values('t')
    try:
        values = frame.drop(columns='t').to_numpy(dtype=np.float64)
    except ValueError as exc:
        raise CodebookFormatError(f"Non-numeric codebook entry: {exc}") from exc
    if not np.all(np.isfinite(values)):
        raise CodebookFormatError("Codebook entries must be finite")
    phi_hat = (values[:, 0::2] + 1j * values[:, 1::2]).T.copy()
    return _assemble(top, t_slots, phi_hat, kind)


def write_binary(cb: TrainingCodebook, path: PathLike) -> Path:
    """Write a codebook in the binary layout."""
    path = Path(path)
    top = cb.topology
    header = HEADER.pack(MAGIC, VERSION, top.g, top.m_bar, cb.t_slots, KIND_CODES[cb.kind])
    payload = np.asarray(cb.phi_hat, dtype='<c8').tobytes(order='F')
    path.write_bytes(header + payload)
    return path


def read_binary(path: PathLike, n_bs: int = 1) -> TrainingCodebook:
    """
    Load a codebook written by write_binary.

    Raises:
        CodebookFormatError: bad magic, unknown version or kind, truncated payload
    """
    raw = Path(path).read_bytes()
    if len(raw) < HEADER.size:
        raise CodebookFormatError("File too short for a codebook header")
    magic, version, g, m_bar, t_slots, code = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CodebookFormatError(f"Bad magic {magic!r}")
    if version != VERSION:
        raise CodebookFormatError(f"Unsupported codebook file version {version}")
    kinds = {v: k for k, v in KIND_CODES.items()}
    if code not in kinds:
        raise CodebookFormatError(f"Unknown kind code {code}")
    top = _topology(n_bs, g, m_bar)

    rows = g * m_bar ** 2
    if (len(raw) - HEADER.size) % 8:
        raise CodebookFormatError("Truncated complex64 payload")
    payload = np.frombuffer(raw[HEADER.size:], dtype='<c8')
    if payload.size != rows * t_slots:
        raise CodebookFormatError(
            f"Payload holds {payload.size} entries, expected {rows * t_slots}"
        )
    phi_hat = payload.reshape(rows, t_slots, order='F').astype(np.complex128)
    if not np.all(np.isfinite(phi_hat)):
        raise CodebookFormatError("Codebook entries must be finite")
    return _assemble(top, t_slots, phi_hat, kinds[code])


def write_codebook(cb: TrainingCodebook, path: PathLike) -> Path:
    """Write using the layout implied by the file suffix (``.bin`` or CSV)."""
    path = Path(path)
    if path.suffix.lower() == '.bin':
        return write_binary(cb, path)
    return write_csv(cb, path)


def read_codebook(path: PathLike, n_bs: int = 1) -> TrainingCodebook:
    """Read using the layout implied by the file suffix (``.bin`` or CSV)."""
    path = Path(path)
    if path.suffix.lower() == '.bin':
        return read_binary(path, n_bs)
    return read_csv(path, n_bs)
