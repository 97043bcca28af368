"""Finite sections of block Toeplitz operators over the quaternions.

Lower-triangular sections decide multiplier contractivity; Hermitian sections
(with the half convention on the off-diagonal symbols) decide Herglotz
positivity.  Norms and eigenvalues route through the complex embedding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch
from .quatlin import QuatMatrix, is_psd, min_eigenvalue, operator_norm

N_MAX_DEFAULT = 64
CONTRACTION_TOL = 1e-9


def _as_symbol_list(symbols):
    out = []
    shape = None
    for s in symbols:
        if not isinstance(s, QuatMatrix):
            from .quatlin import as_quaternion
            s = QuatMatrix.from_entries([[as_quaternion(s)]])
        if shape is None:
            shape = s.shape
        elif s.shape != shape:
            raise ShapeMismatch("all symbols must share one shape")
        out.append(s)
    if not out:
        out = [QuatMatrix.zeros(1, 1)]
    return out


@dataclass(frozen=True)
class ToeplitzSection:
    """An n_blocks x n_blocks block Toeplitz section."""

    symbols: tuple
    n_blocks: int
    kind: str  # "lower" or "hermitian"

    @staticmethod
    def lower(symbols, n_blocks):
        return ToeplitzSection(tuple(_as_symbol_list(symbols)), int(n_blocks), "lower")

    @staticmethod
    def hermitian(symbols, n_blocks):
        return ToeplitzSection(tuple(_as_symbol_list(symbols)), int(n_blocks), "hermitian")

    @property
    def block_shape(self):
        return self.symbols[0].shape

    def build(self):
        """Materialize the dense section as a QuatMatrix."""
        r, s = self.block_shape
        n = self.n_blocks
        if self.kind == "lower":
            chi = np.zeros((2 * r * n, 2 * s * n), dtype=complex)
            for d, sym in enumerate(self.symbols):
                blk = sym.chi()
                for j in range(d, n):
                    k = j - d
                    chi[2 * r * j:2 * r * (j + 1), 2 * s * k:2 * s * (k + 1)] = blk
            return QuatMatrix(chi, r * n, s * n)
        if self.kind == "hermitian":
            if r != s:
                raise ShapeMismatch("hermitian sections need square symbols")
            chi = np.zeros((2 * r * n, 2 * r * n), dtype=complex)
            diag = ((self.symbols[0] + self.symbols[0].H) * 0.5).chi()
            for j in range(n):
                chi[2 * r * j:2 * r * (j + 1), 2 * r * j:2 * r * (j + 1)] = diag
            for d in range(1, len(self.symbols)):
                blk = (self.symbols[d] * 0.5).chi()
                blk_up = (self.symbols[d].H * 0.5).chi()
                for j in range(d, n):
                    k = j - d
                    chi[2 * r * j:2 * r * (j + 1), 2 * r * k:2 * r * (k + 1)] = blk
                    chi[2 * r * k:2 * r * (k + 1), 2 * r * j:2 * r * (j + 1)] = blk_up
            return QuatMatrix(chi, r * n, r * n)
        raise ValueError("unknown section kind %r" % self.kind)


def section_norm(T):
    """Operator norm of the section (largest singular value via the embedding)."""
    if T.kind != "lower":
        raise ValueError("section_norm is defined for lower-triangular sections")
    return operator_norm(T.build())


@dataclass(frozen=True)
class ContractionVerdict:
    is_contraction: bool
    norm: float
    n_checked: int
    violated_at: int | None = None

    def __bool__(self):
        return self.is_contraction


def is_contraction(symbols, n_max=N_MAX_DEFAULT, tol=CONTRACTION_TOL):
    """Contraction test on the n_max section.

    Section norms are nondecreasing in the section size (sections nest), so
    the largest section decides; on failure the first violating size is
    located by bisection.
    """
    symbols = _as_symbol_list(symbols)
    norm = section_norm(ToeplitzSection.lower(symbols, n_max))
    if norm <= 1.0 + tol:
        return ContractionVerdict(True, norm, n_max)
    lo, hi = 1, n_max
    while lo < hi:
        mid = (lo + hi) // 2
        if section_norm(ToeplitzSection.lower(symbols, mid)) > 1.0 + tol:
            hi = mid
        else:
            lo = mid + 1
    return ContractionVerdict(False, norm, n_max, violated_at=lo)


@dataclass(frozen=True)
class PsdVerdict:
    is_psd: bool
    min_eigenvalue: float
    n_blocks: int

    def __bool__(self):
        return self.is_psd


def hermitian_psd(T, tol=CONTRACTION_TOL):
    """PSD verdict for a Hermitian section."""
    if T.kind != "hermitian":
        raise ValueError("hermitian_psd needs a hermitian section")
    M = T.build()
    return PsdVerdict(is_psd(M, tol=tol), min_eigenvalue(M), T.n_blocks)


def symbol_supnorm(symbols, n_angles=4096):
    """Classical sup over |z| = 1 of || sum_n chi(S_n) z^n ||.

    Independent oracle for section norms of finitely supported symbols
    (dense angular sampling, numpy SVD).
    """
    symbols = _as_symbol_list(symbols)
    best = 0.0
    for k in range(n_angles):
        z = np.exp(2j * np.pi * k / n_angles)
        acc = np.zeros_like(symbols[0].chi())
        zp = 1.0 + 0.0j
        for s in symbols:
            acc = acc + s.chi() * zp
            zp *= z
        best = max(best, float(np.linalg.svd(acc, compute_uv=False)[0]))
    return best
