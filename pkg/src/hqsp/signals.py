"""Benchmark signal generators and waveform ingestion.

Every public constructor returns a unit-norm :class:`Signal` whose length is
an exact power of two.  Generators are pure functions of their arguments;
the mixture generator draws its noise from a seeded NumPy ``default_rng``
(PCG64), so identical seeds give bitwise-identical signals on any platform.
"""

from __future__ import annotations

import csv
import math
import struct
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Signal",
    "MixtureSpec",
    "InvalidLengthError",
    "DegenerateSignalError",
    "MissingColumnError",
    "NonNumericCellError",
    "EmptyColumnError",
    "gen_periodic",
    "gen_piecewise",
    "gen_sinc",
    "gen_gaussian",
    "gen_gaussian_mixture",
    "ingest_waveform_csv",
    "save_signal_csv",
    "load_signal_csv",
    "save_signal_bin",
    "load_signal_bin",
]

# sinusoid amplitudes of the four-coefficient benchmark spectrum
PERIODIC_A = 0.41099
PERIODIC_B = 0.57539

DEFAULT_BLOCK_VALUES = (1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0)


class InvalidLengthError(ValueError):
    """Signal length is not an admissible power of two."""


class DegenerateSignalError(ValueError):
    """Signal definition has no energy (cannot be normalized)."""


class MissingColumnError(ValueError):
    """Requested CSV column does not exist."""


class NonNumericCellError(ValueError):
    """CSV cell could not be parsed as a number."""


class EmptyColumnError(ValueError):
    """CSV column contains no data rows."""


@dataclass(frozen=True)
class Signal:
    """Unit-norm amplitude vector of power-of-two length (n = log2 length)."""

    samples: np.ndarray
    label: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if samples.ndim != 1 or len(samples) < 2:
            raise InvalidLengthError("signal must be a vector of length >= 2")
        n = int(math.log2(len(samples)))
        if 2**n != len(samples):
            raise InvalidLengthError(
                f"signal length {len(samples)} is not a power of two"
            )
        object.__setattr__(self, "samples", samples)

    @property
    def n(self) -> int:
        return int(math.log2(len(self.samples)))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.samples))


def _normalized(values: np.ndarray, label: str, **metadata) -> Signal:
    norm = np.linalg.norm(values)
    if norm == 0:
        raise DegenerateSignalError(f"{label}: zero-energy signal")
    return Signal(values / norm, label=label, metadata=metadata)


def _check_pow2(N: int, minimum: int = 2) -> int:
    if N < minimum or (N & (N - 1)) != 0:
        raise InvalidLengthError(f"N must be a power of two >= {minimum}, got {N}")
    return N


def gen_periodic(N: int = 256) -> Signal:
    """Two-tone sinusoid whose DFT support is exactly {3, 20, N-20, N-3}.

    x_j = (1/sqrt(N)) * (-2A sin(2 pi 3 j / N) + 2B cos(2 pi 20 j / N)),
    renormalized because the published A, B are rounded (norm 0.99996).
    """
    _check_pow2(N, minimum=64)
    j = np.arange(N)
    x = (
        -2.0 * PERIODIC_A * np.sin(2.0 * np.pi * 3.0 * j / N)
        + 2.0 * PERIODIC_B * np.cos(2.0 * np.pi * 20.0 * j / N)
    ) / math.sqrt(N)
    return _normalized(x, "periodic")


def gen_piecewise(N: int = 1024, block_values=DEFAULT_BLOCK_VALUES) -> Signal:
    """Constant on 8 equal blocks; exactly 8-sparse under packet Haar at
    L = n - 3."""
    _check_pow2(N, minimum=8)
    values = np.asarray(block_values, dtype=float)
    if values.shape != (8,):
        raise ValueError("block_values must hold exactly 8 reals")
    if not np.any(values):
        raise DegenerateSignalError("all block values are zero")
    x = np.repeat(values, N // 8)
    return _normalized(x, "piecewise")


def gen_sinc(N: int = 32768, t_min: float = -10.0, t_max: float = 10.0) -> Signal:
    """Normalized sinc sin(pi t)/(pi t) on a uniform inclusive grid.

    The default range is calibrated (scripts/calibrate_sinc_range.py) so the
    10-level packet Haar transform at tau = 0.9% of max retains ~110
    coefficients at N = 2**15.
    """
    if N < 2:
        raise InvalidLengthError("sinc needs at least 2 samples")
    _check_pow2(N)
    if not t_min < 0.0 < t_max:
        raise ValueError("sinc grid must straddle t = 0")
    t = np.linspace(t_min, t_max, N)
    return _normalized(np.sinc(t), "sinc", t_min=t_min, t_max=t_max)


def gen_gaussian(
    N: int = 32768,
    mu: float = 0.0,
    sigma: float = 0.8,
    x_min: float = -5.0,
    x_max: float = 5.0,
) -> Signal:
    """Discretized Gaussian exp(-(x-mu)^2 / (2 sigma^2)) on an inclusive grid."""
    _check_pow2(N)
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    x = np.linspace(x_min, x_max, N)
    return _normalized(
        np.exp(-((x - mu) ** 2) / (2.0 * sigma**2)), "gaussian", mu=mu, sigma=sigma
    )


@dataclass(frozen=True)
class MixtureSpec:
    """Parameters of a K-component Gaussian mixture with additive noise."""

    K: int
    centers: tuple
    widths: tuple
    amplitudes: tuple
    noise_std: float = 0.001
    seed: int = 0

    def __post_init__(self):
        if self.K < 1:
            raise DegenerateSignalError("mixture needs at least one component")
        for name in ("centers", "widths", "amplitudes"):
            values = tuple(float(v) for v in getattr(self, name))
            if len(values) != self.K:
                raise ValueError(f"{name} must hold K={self.K} values")
            object.__setattr__(self, name, values)
        if any(w <= 0 for w in self.widths):
            raise ValueError("widths must be positive")
        if self.noise_std < 0:
            raise ValueError("noise_std must be nonnegative")

    @classmethod
    def sample(cls, seed: int, K: int = 12, noise_std: float = 0.001) -> "MixtureSpec":
        """Draw component parameters from the benchmark ranges: centers in
        [-4.5, 4.5], widths in [0.12, 0.60], amplitudes in [0.30, 1.00]."""
        rng = np.random.default_rng(seed)
        return cls(
            K=K,
            centers=tuple(rng.uniform(-4.5, 4.5, K)),
            widths=tuple(rng.uniform(0.12, 0.60, K)),
            amplitudes=tuple(rng.uniform(0.30, 1.00, K)),
            noise_std=noise_std,
            seed=seed,
        )


def gen_gaussian_mixture(
    N: int,
    spec: MixtureSpec,
    x_min: float = -5.0,
    x_max: float = 5.0,
) -> Signal:
    """Sum of Gaussians plus seeded white noise, normalized."""
    _check_pow2(N)
    x = np.linspace(x_min, x_max, N)
    f = np.zeros(N)
    for a, mu, sigma in zip(spec.amplitudes, spec.centers, spec.widths):
        f += a * np.exp(-((x - mu) ** 2) / (2.0 * sigma**2))
    if spec.noise_std > 0:
        f = f + np.random.default_rng(spec.seed).normal(0.0, spec.noise_std, N)
    return _normalized(f, "mixture", seed=spec.seed, K=spec.K)


def _next_pow2(m: int) -> int:
    return 1 << max(1, (m - 1).bit_length())


def ingest_waveform_csv(path, column_selector=0, pad: str = "tail") -> Signal:
    """Read one numeric CSV column, zero-pad to the next power of two,
    and normalize.  ``column_selector`` is a header name or 0-based index;
    the original sample count is kept in ``metadata['original_length']``."""
    if pad not in ("tail", "head"):
        raise ValueError("pad must be 'tail' or 'head'")
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    if not rows:
        raise EmptyColumnError(f"{path}: no data rows")
    col: int
    if isinstance(column_selector, str):
        header = [c.strip() for c in rows[0]]
        if column_selector not in header:
            raise MissingColumnError(
                f"{path}: no column named {column_selector!r} in header {header}"
            )
        col = header.index(column_selector)
        rows = rows[1:]
    else:
        col = int(column_selector)
        # tolerate a single header line when selecting by index
        if rows and not _is_number(rows[0][col] if col < len(rows[0]) else ""):
            rows = rows[1:]
    values = []
    for lineno, row in enumerate(rows, start=1):
        if col >= len(row):
            raise MissingColumnError(f"{path}: row {lineno} has no column {col}")
        cell = row[col].strip()
        if not _is_number(cell):
            raise NonNumericCellError(f"{path}: row {lineno}: non-numeric cell {cell!r}")
        values.append(float(cell))
    if not values:
        raise EmptyColumnError(f"{path}: column {column_selector!r} is empty")
    original = len(values)
    padded = np.zeros(_next_pow2(original))
    if pad == "tail":
        padded[:original] = values
    else:
        padded[-original:] = values
    sig = _normalized(padded, f"waveform:{path}")
    sig.metadata["original_length"] = original
    return sig


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


# ---------------------------------------------------------------------------
# On-disk formats: plain CSV (one sample per line) and length-prefixed f64
# ---------------------------------------------------------------------------


def save_signal_csv(signal: Signal, path, header: bool = False) -> None:
    samples = np.asarray(signal.samples)
    if np.iscomplexobj(samples) and np.any(np.abs(samples.imag) > 1e-15):
        raise ValueError("signal CSV format stores real samples only")
    with open(path, "w") as fh:
        if header:
            fh.write("sample\n")
        for v in samples.real:
            fh.write(f"{float(v)!r}\n")


def load_signal_csv(path) -> Signal:
    return ingest_waveform_csv(path, column_selector=0)


def save_signal_bin(signal: Signal, path) -> None:
    samples = np.asarray(signal.samples)
    if np.iscomplexobj(samples) and np.any(np.abs(samples.imag) > 1e-15):
        raise ValueError("binary signal format stores real samples only")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", len(samples)))
        fh.write(samples.real.astype("<f8").tobytes())


def load_signal_bin(path) -> Signal:
    with open(path, "rb") as fh:
        (count,) = struct.unpack("<Q", fh.read(8))
        data = np.frombuffer(fh.read(8 * count), dtype="<f8")
    if len(data) != count:
        raise ValueError(f"{path}: truncated binary signal")
    return Signal(data.copy(), label=f"binary:{path}")
