"""Signal generators, CSV ingestion, and on-disk formats.

The periodic generator's spectral support is checked against a plain
``np.fft.fft`` of the samples, independent of the transforms module.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hqsp.signals import (
    DegenerateSignalError,
    EmptyColumnError,
    InvalidLengthError,
    MissingColumnError,
    MixtureSpec,
    NonNumericCellError,
    Signal,
    gen_gaussian,
    gen_gaussian_mixture,
    gen_periodic,
    gen_piecewise,
    gen_sinc,
    ingest_waveform_csv,
    load_signal_bin,
    load_signal_csv,
    save_signal_bin,
    save_signal_csv,
)


# ---------------------------------------------------------------------------
# Signal container
# ---------------------------------------------------------------------------


def test_signal_requires_power_of_two_vector():
    with pytest.raises(InvalidLengthError):
        Signal(np.ones(6))
    with pytest.raises(InvalidLengthError):
        Signal(np.ones((4, 2)))
    with pytest.raises(InvalidLengthError):
        Signal(np.ones(1))
    s = Signal(np.ones(8) / math.sqrt(8), label="flat")
    assert s.n == 3
    assert math.isclose(s.norm, 1.0, rel_tol=1e-12)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "make",
    [
        lambda: gen_periodic(256),
        lambda: gen_piecewise(2**10),
        lambda: gen_sinc(2**12),
        lambda: gen_gaussian(2**12),
        lambda: gen_gaussian_mixture(2**12, MixtureSpec.sample(seed=0)),
    ],
    ids=["periodic", "piecewise", "sinc", "gaussian", "mixture"],
)
def test_generators_return_unit_norm(make):
    s = make()
    assert math.isclose(s.norm, 1.0, rel_tol=1e-12)
    assert 2 ** s.n == len(s.samples)


def test_periodic_spectrum_support():
    s = gen_periodic(256)
    X = np.fft.fft(s.samples) / math.sqrt(256)
    big = np.flatnonzero(np.abs(X) > 1e-10)
    assert list(big) == [3, 20, 236, 253]
    # published rounded amplitudes, recovered to the digit after renormalization
    assert abs(abs(X[3]) - 0.41100) < 1e-4
    assert abs(abs(X[20]) - 0.57540) < 1e-4


def test_periodic_rejects_small_or_odd_lengths():
    with pytest.raises(InvalidLengthError):
        gen_periodic(32)  # frequency 20 would alias
    with pytest.raises(InvalidLengthError):
        gen_periodic(100)


def test_piecewise_structure():
    s = gen_piecewise(64)
    blocks = s.samples.reshape(8, 8)
    assert np.all(blocks == blocks[:, :1])  # constant within each block
    with pytest.raises(ValueError):
        gen_piecewise(64, block_values=(1.0, 2.0))
    with pytest.raises(DegenerateSignalError):
        gen_piecewise(64, block_values=(0.0,) * 8)


def test_sinc_grid_and_peak():
    s = gen_sinc(2**10, t_min=-10.0, t_max=10.0)
    t = np.linspace(-10.0, 10.0, 2**10)
    expected = np.sinc(t)
    np.testing.assert_allclose(s.samples, expected / np.linalg.norm(expected), atol=1e-12)
    with pytest.raises(ValueError):
        gen_sinc(2**10, t_min=1.0, t_max=10.0)


def test_gaussian_parameters():
    s = gen_gaussian(2**10, mu=0.5, sigma=0.3, x_min=-2.0, x_max=2.0)
    x = np.linspace(-2.0, 2.0, 2**10)
    expected = np.exp(-((x - 0.5) ** 2) / (2 * 0.3**2))
    np.testing.assert_allclose(s.samples, expected / np.linalg.norm(expected), atol=1e-12)
    with pytest.raises(ValueError):
        gen_gaussian(2**10, sigma=0.0)


def test_mixture_is_seed_deterministic():
    spec = MixtureSpec.sample(seed=5)
    a = gen_gaussian_mixture(2**10, spec)
    b = gen_gaussian_mixture(2**10, MixtureSpec.sample(seed=5))
    assert np.array_equal(a.samples, b.samples)
    c = gen_gaussian_mixture(2**10, MixtureSpec.sample(seed=6))
    assert not np.array_equal(a.samples, c.samples)


def test_mixture_spec_validation():
    with pytest.raises(ValueError):
        MixtureSpec(K=2, centers=(0.0,), widths=(0.2, 0.2), amplitudes=(1.0, 1.0))
    with pytest.raises(ValueError):
        MixtureSpec(K=1, centers=(0.0,), widths=(0.0,), amplitudes=(1.0,))
    with pytest.raises(DegenerateSignalError):
        MixtureSpec(K=0, centers=(), widths=(), amplitudes=())


# ---------------------------------------------------------------------------
# CSV ingestion
# ---------------------------------------------------------------------------


def _write(path, text):
    path.write_text(text)
    return path


def test_ingest_pads_to_next_power_of_two(tmp_path):
    path = _write(tmp_path / "w.csv", "".join(f"{v}\n" for v in [3.0, 4.0, 0.0, 0.0, 5.0]))
    s = ingest_waveform_csv(path)
    assert len(s.samples) == 8
    assert s.metadata["original_length"] == 5
    expected = np.array([3, 4, 0, 0, 5, 0, 0, 0], dtype=float)
    np.testing.assert_allclose(s.samples, expected / np.linalg.norm(expected))


def test_ingest_head_padding(tmp_path):
    path = _write(tmp_path / "w.csv", "1.0\n2.0\n3.0\n")
    s = ingest_waveform_csv(path, pad="head")
    assert s.samples[0] == 0.0 and s.samples[-1] != 0.0
    with pytest.raises(ValueError):
        ingest_waveform_csv(path, pad="middle")


def test_ingest_by_header_name(tmp_path):
    path = _write(tmp_path / "w.csv", "time,ppg\n0.0,1.5\n0.1,2.5\n")
    s = ingest_waveform_csv(path, column_selector="ppg")
    expected = np.array([1.5, 2.5])
    np.testing.assert_allclose(s.samples, expected / np.linalg.norm(expected))
    with pytest.raises(MissingColumnError):
        ingest_waveform_csv(path, column_selector="ecg")


def test_ingest_index_selector_skips_header(tmp_path):
    path = _write(tmp_path / "w.csv", "ppg\n1.0\n-1.0\n")
    s = ingest_waveform_csv(path, column_selector=0)
    np.testing.assert_allclose(np.abs(s.samples), math.sqrt(0.5))


def test_ingest_error_taxonomy(tmp_path):
    with pytest.raises(EmptyColumnError):
        ingest_waveform_csv(_write(tmp_path / "empty.csv", "\n\n"))
    with pytest.raises(NonNumericCellError):
        ingest_waveform_csv(_write(tmp_path / "bad.csv", "1.0\ntwo\n"))
    with pytest.raises(MissingColumnError):
        ingest_waveform_csv(_write(tmp_path / "short.csv", "1.0,2.0\n3.0\n"), column_selector=1)
    with pytest.raises(EmptyColumnError):
        ingest_waveform_csv(_write(tmp_path / "only_header.csv", "ppg\n"), column_selector="ppg")


@given(st.integers(min_value=1, max_value=70))
@settings(max_examples=30, deadline=None)
def test_ingest_length_is_next_power_of_two(count):
    # property checked arithmetically; file IO exercised in the tests above
    padded = 1 << max(1, (count - 1).bit_length())
    assert padded >= max(2, count) and padded < 2 * max(2, count) + 2
    assert padded & (padded - 1) == 0


# ---------------------------------------------------------------------------
# On-disk formats
# ---------------------------------------------------------------------------


def test_signal_csv_roundtrip(tmp_path):
    s = gen_gaussian(2**8)
    path = tmp_path / "sig.csv"
    save_signal_csv(s, path)
    back = load_signal_csv(path)
    np.testing.assert_array_equal(back.samples, s.samples)


def test_signal_csv_rejects_complex(tmp_path):
    s = Signal(np.array([1j, 0, 0, 0]))
    with pytest.raises(ValueError):
        save_signal_csv(s, tmp_path / "sig.csv")


def test_signal_bin_roundtrip(tmp_path):
    s = gen_sinc(2**9)
    path = tmp_path / "sig.bin"
    save_signal_bin(s, path)
    back = load_signal_bin(path)
    np.testing.assert_array_equal(back.samples, s.samples)


def test_signal_bin_truncation_detected(tmp_path):
    s = gen_sinc(2**6)
    path = tmp_path / "sig.bin"
    save_signal_bin(s, path)
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(ValueError):
        load_signal_bin(path)
