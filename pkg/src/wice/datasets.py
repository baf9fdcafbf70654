"""Binary container for (estimate, true-channel) training pairs and for
predictions flowing back from the post-processing stage.

Layout (little endian):

    magic   4 bytes  b"WICE" (datasets) / b"WIWT" (weight-table cache)
    version u16
    K_on    u16      rows of each complex grid (matrices are 2*K_on tall)
    I_d     u16      columns
    count   u32      record count
    flags   u16      bit0: records carry a target matrix
                     bit1: payload is float64 (weight cache only)
    data    count * (input [+ target]) matrices, row-major

Complex grids are stored real-valued by stacking the real part on top of
the imaginary part (rows 0..K_on-1 and K_on..2K_on-1).
"""

import struct
from dataclasses import dataclass

import numpy as np

MAGIC_DATASET = b"WICE"
MAGIC_WEIGHTS = b"WIWT"
VERSION = 1
FLAG_HAS_TARGET = 0x1
FLAG_FLOAT64 = 0x2

_HEADER = struct.Struct("<4sHHHIH")


class DatasetFormatError(ValueError):
    pass


def complex_stack(h: np.ndarray) -> np.ndarray:
    """Stack a complex matrix into reals: [Re; Im] along the row axis."""
    h = np.asarray(h)
    return np.vstack([h.real, h.imag])


def complex_unstack(r: np.ndarray) -> np.ndarray:
    r = np.asarray(r)
    if r.shape[0] % 2:
        raise ValueError("stacked matrix must have an even number of rows")
    half = r.shape[0] // 2
    return r[:half] + 1j * r[half:]


@dataclass
class DatasetRecord:
    """One training pair.  ``meta`` (scenario, SNR, seed) is carried in
    memory only; the container stores just the matrices.
    """

    input: np.ndarray                 # (2*K_on, I_d) real
    target: np.ndarray | None = None  # (2*K_on, I_d) real
    meta: dict | None = None

    def __post_init__(self):
        self.input = np.asarray(self.input, dtype=np.float64)
        if self.target is not None:
            self.target = np.asarray(self.target, dtype=np.float64)
            if self.target.shape != self.input.shape:
                raise ValueError("input/target dimensions differ")
        if not np.all(np.isfinite(self.input)):
            raise ValueError("record contains non-finite values")


def write_dataset(records: list[DatasetRecord], path, magic: bytes = MAGIC_DATASET,
                  float64: bool = False) -> None:
    if records:
        shape = records[0].input.shape
        has_target = records[0].target is not None
        for r in records:
            if r.input.shape != shape or (r.target is not None) != has_target:
                raise ValueError("records must share dimensions and target presence")
    else:
        shape, has_target = (0, 0), False
    if shape[0] % 2:
        raise ValueError("stacked row count must be even")

    flags = (FLAG_HAS_TARGET if has_target else 0) | (FLAG_FLOAT64 if float64 else 0)
    dtype = "<f8" if float64 else "<f4"
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(magic, VERSION, shape[0] // 2, shape[1],
                              len(records), flags))
        for r in records:
            fh.write(np.ascontiguousarray(r.input, dtype=dtype).tobytes())
            if has_target:
                fh.write(np.ascontiguousarray(r.target, dtype=dtype).tobytes())


def read_dataset(path, magic: bytes = MAGIC_DATASET) -> list[DatasetRecord]:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise DatasetFormatError("file truncated inside the header")
    got_magic, version, k_on, i_d, count, flags = _HEADER.unpack_from(blob)
    if got_magic != magic:
        raise DatasetFormatError(
            f"magic mismatch: expected {magic!r}, found {got_magic!r}")
    if version != VERSION:
        raise DatasetFormatError(f"unsupported container version {version}")
    has_target = bool(flags & FLAG_HAS_TARGET)
    dtype = np.dtype("<f8" if flags & FLAG_FLOAT64 else "<f4")

    per_matrix = 2 * k_on * i_d
    n_matrices = count * (2 if has_target else 1)
    expected = _HEADER.size + n_matrices * per_matrix * dtype.itemsize
    if len(blob) != expected:
        raise DatasetFormatError(
            f"file size {len(blob)} does not match header ({expected} expected)")

    data = np.frombuffer(blob, dtype=dtype, offset=_HEADER.size)
    data = data.reshape(n_matrices, 2 * k_on, i_d).astype(np.float64)
    records = []
    for i in range(count):
        if has_target:
            records.append(DatasetRecord(input=data[2 * i], target=data[2 * i + 1]))
        else:
            records.append(DatasetRecord(input=data[i]))
    return records


# --- weight-table cache -----------------------------------------------------
# Entries are serialized as 2 x (5 + max_I_f) float64 records: the first
# five columns of row 0 hold the key (f_d, T_s, I_f, E_lead, E_trail) and
# the remaining columns hold the weight matrix, zero padded past I_f.

_KEY_COLS = 5


def write_weight_table(table, path) -> None:
    entries = list(table.items())
    max_if = max((k[2] for k, _ in entries), default=1)
    records = []
    for key, weights in entries:
        mat = np.zeros((2, _KEY_COLS + max_if))
        mat[0, :_KEY_COLS] = key
        mat[:, _KEY_COLS:_KEY_COLS + key[2]] = weights
        records.append(DatasetRecord(input=mat))
    write_dataset(records, path, magic=MAGIC_WEIGHTS, float64=True)


def read_weight_table(path):
    from .estimators.wi import WiWeightTable

    table = WiWeightTable()
    for rec in read_dataset(path, magic=MAGIC_WEIGHTS):
        fd, ts, n_data, e_lead, e_trail = rec.input[0, :_KEY_COLS]
        n_data = int(n_data)
        weights = rec.input[:, _KEY_COLS:_KEY_COLS + n_data]
        key = table._key(fd, ts, n_data, e_lead, e_trail)
        table._entries[key] = weights.copy()
    return table
