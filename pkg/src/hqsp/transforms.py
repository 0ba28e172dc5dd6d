"""Classical compression phase: unitary transforms, thresholding, metrics.

Two orthonormal analysis transforms are provided: the unitary DFT
(``1/sqrt(N)`` convention, ``exp(-2*pi*1j*k*j/N)`` kernel) and the packet
Haar wavelet transform, where every level re-analyses both the average and
the difference half of each block.  Level ``l`` of the packet transform is
``I (x) W`` with ``W`` the single-level Haar matrix acting on the low
``n - l + 1`` index bits: averages of adjacent pairs land in the first half
of each block, differences in the second half.

Thresholding zeroes coefficients with magnitude strictly below the cutoff
(ties survive) and rescales the survivors to unit norm.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .signals import Signal

__all__ = [
    "TransformDescriptor",
    "ThresholdPolicy",
    "CompressedVector",
    "EmptySupportError",
    "WrongTransformError",
    "dft",
    "idft",
    "packet_dhwt",
    "packet_idhwt",
    "threshold_normalize",
    "compression_ratio",
    "classical_reconstruct",
    "save_compressed_csv",
    "load_compressed_csv",
]

DFT = "dft"
PACKET_HAAR = "haar"

FRACTION_OF_MAX = "fraction_of_max"
ABSOLUTE = "absolute"


class EmptySupportError(ValueError):
    """Thresholding removed every coefficient (tau too aggressive)."""


class WrongTransformError(ValueError):
    """Inverse requested for a different transform than the one applied."""


@dataclass(frozen=True)
class TransformDescriptor:
    kind: str
    levels: int | None = None

    def __post_init__(self):
        if self.kind not in (DFT, PACKET_HAAR):
            raise ValueError(f"unknown transform kind {self.kind!r}")
        if self.kind == PACKET_HAAR and (self.levels is None or self.levels < 1):
            raise ValueError("packet Haar descriptor needs levels >= 1")
        if self.kind == DFT and self.levels is not None:
            raise ValueError("DFT descriptor takes no levels")


@dataclass(frozen=True)
class ThresholdPolicy:
    mode: str
    value: float

    def __post_init__(self):
        if self.mode not in (FRACTION_OF_MAX, ABSOLUTE):
            raise ValueError(f"unknown threshold mode {self.mode!r}")
        if self.value < 0:
            raise ValueError("threshold must be nonnegative")
        if self.mode == FRACTION_OF_MAX and self.value > 1:
            raise ValueError("fraction-of-max threshold must be <= 1")

    def cutoff(self, coefficients: np.ndarray) -> float:
        if self.mode == ABSOLUTE:
            return self.value
        return self.value * float(np.max(np.abs(coefficients)))


@dataclass(frozen=True)
class CompressedVector:
    """Transform-domain coefficients plus enough context to invert them."""

    coefficients: np.ndarray
    descriptor: TransformDescriptor
    threshold_applied: ThresholdPolicy | None = None

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=complex)
        object.__setattr__(self, "coefficients", coeffs)
        n = int(math.log2(len(coeffs)))
        if 2**n != len(coeffs):
            raise ValueError("coefficient length must be a power of two")

    @property
    def n(self) -> int:
        return int(math.log2(len(self.coefficients)))

    @property
    def d(self) -> int:
        return int(np.count_nonzero(self.coefficients))

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        """(indices, values) of the nonzero coefficients, index-sorted."""
        idx = np.flatnonzero(self.coefficients)
        return idx, self.coefficients[idx]


def _as_samples(x) -> np.ndarray:
    if isinstance(x, Signal):
        return np.asarray(x.samples, dtype=complex)
    return np.asarray(x, dtype=complex)


def dft(x: Signal) -> CompressedVector:
    """Unitary forward DFT: X_k = (1/sqrt(N)) sum_j x_j exp(-2 pi i k j / N)."""
    samples = _as_samples(x)
    coeffs = np.fft.fft(samples) / math.sqrt(len(samples))
    return CompressedVector(coeffs, TransformDescriptor(DFT))


def idft(X: CompressedVector) -> Signal:
    if X.descriptor.kind != DFT:
        raise WrongTransformError(f"cannot idft a {X.descriptor.kind!r} vector")
    n = len(X.coefficients)
    samples = np.fft.ifft(X.coefficients) * math.sqrt(n)
    return Signal(samples, label="idft")


def _haar_level(values: np.ndarray, block: int) -> np.ndarray:
    """One analysis level on every contiguous block of the given length."""
    pairs = values.reshape(-1, block // 2, 2)
    avg = (pairs[:, :, 0] + pairs[:, :, 1]) / math.sqrt(2.0)
    diff = (pairs[:, :, 0] - pairs[:, :, 1]) / math.sqrt(2.0)
    return np.concatenate([avg, diff], axis=1).reshape(-1)


def _haar_level_inverse(values: np.ndarray, block: int) -> np.ndarray:
    half = values.reshape(-1, 2, block // 2)
    avg, diff = half[:, 0, :], half[:, 1, :]
    out = np.empty_like(half.reshape(-1, block))
    out[:, 0::2] = (avg + diff) / math.sqrt(2.0)
    out[:, 1::2] = (avg - diff) / math.sqrt(2.0)
    return out.reshape(-1)


def packet_dhwt(x: Signal, levels: int) -> CompressedVector:
    """Packet Haar analysis: both halves of every block are re-analysed at
    each of the ``levels`` stages.  Orthogonal, norm-preserving."""
    samples = _as_samples(x)
    n = int(math.log2(len(samples)))
    if not 1 <= levels <= n:
        raise ValueError(f"levels must satisfy 1 <= L <= {n}, got {levels}")
    out = samples.copy()
    for level in range(1, levels + 1):
        out = _haar_level(out, 2 ** (n - level + 1))
    return CompressedVector(out, TransformDescriptor(PACKET_HAAR, levels))


def packet_idhwt(X: CompressedVector) -> Signal:
    if X.descriptor.kind != PACKET_HAAR:
        raise WrongTransformError(f"cannot invert {X.descriptor.kind!r} as packet Haar")
    levels = X.descriptor.levels
    out = X.coefficients.copy()
    n = X.n
    for level in range(levels, 0, -1):
        out = _haar_level_inverse(out, 2 ** (n - level + 1))
    return Signal(out, label="packet_idhwt")


def threshold_normalize(X: CompressedVector, policy: ThresholdPolicy) -> CompressedVector:
    """Zero coefficients with |X_k| strictly below the cutoff, renormalize."""
    coeffs = X.coefficients
    if not np.any(coeffs):
        raise EmptySupportError("input vector has no nonzero coefficients")
    cutoff = policy.cutoff(coeffs)
    kept = np.where(np.abs(coeffs) < cutoff, 0.0, coeffs)
    norm = np.linalg.norm(kept)
    if norm == 0:
        raise EmptySupportError(
            f"threshold {policy.mode}={policy.value} prunes every coefficient"
        )
    return CompressedVector(kept / norm, X.descriptor, threshold_applied=policy)


def compression_ratio(N: int, d: int) -> float:
    if d < 1:
        raise EmptySupportError("compression ratio undefined for empty support")
    return N / d


def classical_reconstruct(X: CompressedVector) -> Signal:
    """Inverse-transform the (possibly thresholded) coefficients; this is the
    classical oracle the simulated quantum state is checked against."""
    if X.descriptor.kind == DFT:
        return idft(X)
    return packet_idhwt(X)


# ---------------------------------------------------------------------------
# Serialization: sparse CSV with a small metadata header
# ---------------------------------------------------------------------------


def save_compressed_csv(X: CompressedVector, path) -> None:
    """Nonzero entries as index,real,imaginary rows; metadata in '#' lines."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# kind={X.descriptor.kind}\n")
        fh.write(f"# levels={X.descriptor.levels if X.descriptor.levels else ''}\n")
        fh.write(f"# n={X.n}\n")
        pol = X.threshold_applied
        fh.write(f"# mode={pol.mode if pol else ''}\n")
        fh.write(f"# value={repr(pol.value) if pol else ''}\n")
        writer = csv.writer(fh)
        writer.writerow(["index", "real", "imaginary"])
        indices, values = X.support()
        for i, v in zip(indices, values):
            writer.writerow([int(i), repr(float(v.real)), repr(float(v.imag))])


def load_compressed_csv(path) -> CompressedVector:
    meta: dict[str, str] = {}
    rows: list[tuple[int, complex]] = []
    with open(path, newline="") as fh:
        header_seen = False
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line.lstrip("# ").partition("=")
                meta[key.strip()] = value.strip()
                continue
            cells = next(csv.reader([line]))
            if not header_seen:
                if [c.strip() for c in cells] != ["index", "real", "imaginary"]:
                    raise ValueError("expected header 'index,real,imaginary'")
                header_seen = True
                continue
            rows.append((int(cells[0]), float(cells[1]) + 1j * float(cells[2])))
    if "kind" not in meta or "n" not in meta:
        raise ValueError("compressed CSV missing kind/n metadata")
    n = int(meta["n"])
    coeffs = np.zeros(2**n, dtype=complex)
    for idx, val in rows:
        coeffs[idx] = val
    levels = int(meta["levels"]) if meta.get("levels") else None
    descriptor = TransformDescriptor(meta["kind"], levels)
    policy = None
    if meta.get("mode"):
        policy = ThresholdPolicy(meta["mode"], float(meta["value"]))
    return CompressedVector(coeffs, descriptor, threshold_applied=policy)
