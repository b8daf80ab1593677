"""Equispaced spatial grid, DFT interpolation coefficients, field synthesis."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

# Above this imaginary residue the coefficient map has lost conjugate
# symmetry upstream and synthesis refuses to discard the imaginary part.
RESIDUE_ERROR_THRESHOLD = 1e-8


@dataclass(frozen=True)
class FourierGrid:
    """N equispaced nodes x_j = L j / N covering [0, L)."""

    L: float
    N: int

    def __post_init__(self):
        if not self.L > 0.0:
            raise ValueError(f"L must be positive; got {self.L}")
        if self.N < 2 or self.N % 2:
            raise ValueError(f"N must be even and >= 2; got {self.N}")

    @property
    def nodes(self) -> np.ndarray:
        return self.L * np.arange(self.N) / self.N

    def wavenumber(self, k: int) -> float:
        return 2.0 * np.pi * k / self.L

    def wavenumbers(self, ks) -> np.ndarray:
        return 2.0 * np.pi * np.asarray(ks, dtype=float) / self.L


@dataclass(frozen=True)
class InitialSpectrum:
    """DFT interpolation coefficients of u0 sampled at N0 equispaced points.

    Coefficients are stored for k in {-N0/2, ..., N0/2 - 1}; for real samples
    they satisfy conjugate symmetry on every stored +/- pair.
    """

    N0: int
    coeffs: dict

    def mode(self, k: int) -> complex:
        return self.coeffs[k]


def dft_coefficients(u0_samples, N0: int) -> InitialSpectrum:
    """Direct-summation DFT interpolation coefficients of the samples.

    u_hat_k = (1/N0) sum_j u_j exp(-2 pi i k j / N0) for k in
    {-N0/2, ..., N0/2 - 1}. Direct O(N0^2) summation is the reference path;
    a fast transform must agree with it to 1e-13.
    """
    if N0 < 4 or N0 % 2:
        raise ValueError(f"N0 must be even and >= 4; got {N0}")
    samples = np.asarray(u0_samples, dtype=float)
    if samples.shape != (N0,):
        raise ValueError(
            f"expected {N0} samples, got shape {samples.shape}"
        )
    ks = np.arange(-N0 // 2, N0 // 2)
    j = np.arange(N0)
    phases = np.exp(-2j * np.pi * np.outer(ks, j) / N0)
    values = phases @ samples / N0
    coeffs = {int(k): complex(v) for k, v in zip(ks, values)}
    return InitialSpectrum(N0=N0, coeffs=coeffs)


def initial_coefficient_map(spectrum: InitialSpectrum, N: int) -> dict:
    """Restrict the spectrum to the interior modes |k| <= N/2 (requires N <= N0 - 2)."""
    if N > spectrum.N0 - 2:
        raise ValueError(
            f"N must be <= N0 - 2 = {spectrum.N0 - 2}; got {N}"
        )
    return {k: spectrum.coeffs[k] for k in range(-N // 2, N // 2 + 1)}


def _gather(coeffs: Mapping[int, complex], grid: FourierGrid) -> tuple[np.ndarray, np.ndarray]:
    ks = np.arange(-grid.N // 2, grid.N // 2 + 1)
    missing = [int(k) for k in ks if k not in coeffs]
    if missing:
        raise ValueError(f"coefficient map is missing modes {missing}")
    c = np.array([coeffs[int(k)] for k in ks], dtype=complex)
    return ks, c


def _to_real(total: np.ndarray) -> np.ndarray:
    residue = float(np.max(np.abs(total.imag))) if total.size else 0.0
    if residue > RESIDUE_ERROR_THRESHOLD:
        raise ValueError(
            f"imaginary synthesis residue {residue:.3e} exceeds "
            f"{RESIDUE_ERROR_THRESHOLD:.0e}; conjugate symmetry broken upstream"
        )
    return total.real.copy()


def synthesize_field(coeffs: Mapping[int, complex], grid: FourierGrid,
                     g_value: float) -> np.ndarray:
    """Evaluate sum_k c_k exp(i w_k x_j) + g_value at the grid nodes.

    The imaginary residue of the sum is checked and discarded.
    """
    ks, c = _gather(coeffs, grid)
    phases = np.exp(1j * np.outer(grid.nodes, grid.wavenumbers(ks)))
    return _to_real(phases @ c) + g_value


def synthesize_derivative(coeffs: Mapping[int, complex], grid: FourierGrid) -> np.ndarray:
    """Evaluate Re(i sum_k w_k c_k exp(i w_k x_j)) at the grid nodes."""
    ks, c = _gather(coeffs, grid)
    om = grid.wavenumbers(ks)
    phases = np.exp(1j * np.outer(grid.nodes, om))
    return _to_real(phases @ (1j * om * c))
