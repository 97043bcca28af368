"""Quaternion and quaternion-matrix arithmetic with a complex-embedding numeric kernel.

A quaternion x0 + x1*e1 + x2*e2 + x3*e3 is stored as four doubles.  Matrices
over the quaternions are stored through their complex embedding: the entry
q = z + w*e2 (z, w complex along e1) maps to the 2x2 block

    [[ z,       w      ],
     [-conj(w), conj(z)]]

and an r x s quaternion matrix is held as the 2r x 2s complex matrix whose
(j, k) 2x2 block is the embedding of the (j, k) entry.  The embedding is a
*-homomorphism (block-wise), so matrix products, adjoints, norms and
positivity all transfer verbatim to complex linear algebra.

The Hermitian eigensolver is a cyclic Jacobi iteration on the complex
embedding; singular values are obtained from the eigenvalues of M*M.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import (
    ConvergenceError,
    NotHermitian,
    NotPositive,
    ShapeMismatch,
    SingularResolvent,
    SymmetryViolation,
)

TOL_SYM = 1e-10
TOL_HERM = 1e-10
EIG_TOL = 1e-12


class Quaternion:
    """A quaternion stored as four real components."""

    __slots__ = ("x0", "x1", "x2", "x3")

    def __init__(self, x0=0.0, x1=0.0, x2=0.0, x3=0.0):
        self.x0 = float(x0)
        self.x1 = float(x1)
        self.x2 = float(x2)
        self.x3 = float(x3)

    # -- basic algebra ------------------------------------------------

    def __add__(self, other):
        other = as_quaternion(other)
        return Quaternion(self.x0 + other.x0, self.x1 + other.x1,
                          self.x2 + other.x2, self.x3 + other.x3)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_quaternion(other)
        return Quaternion(self.x0 - other.x0, self.x1 - other.x1,
                          self.x2 - other.x2, self.x3 - other.x3)

    def __rsub__(self, other):
        return as_quaternion(other).__sub__(self)

    def __neg__(self):
        return Quaternion(-self.x0, -self.x1, -self.x2, -self.x3)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.x0 * other, self.x1 * other,
                              self.x2 * other, self.x3 * other)
        other = as_quaternion(other)
        a0, a1, a2, a3 = self.x0, self.x1, self.x2, self.x3
        b0, b1, b2, b3 = other.x0, other.x1, other.x2, other.x3
        return Quaternion(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self.__mul__(other)
        return as_quaternion(other).__mul__(self)

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.x0 / other, self.x1 / other,
                              self.x2 / other, self.x3 / other)
        return self * as_quaternion(other).inverse()

    def conjugate(self):
        return Quaternion(self.x0, -self.x1, -self.x2, -self.x3)

    def inverse(self):
        n2 = self.norm_sq()
        if n2 == 0.0:
            raise ZeroDivisionError("inverse of zero quaternion")
        return Quaternion(self.x0 / n2, -self.x1 / n2, -self.x2 / n2, -self.x3 / n2)

    def norm_sq(self):
        return self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3

    def norm(self):
        return math.sqrt(self.norm_sq())

    @property
    def real(self):
        return self.x0

    def imag(self):
        """The vector part x1*e1 + x2*e2 + x3*e3 as a quaternion."""
        return Quaternion(0.0, self.x1, self.x2, self.x3)

    def imag_norm(self):
        return math.sqrt(self.x1 ** 2 + self.x2 ** 2 + self.x3 ** 2)

    def is_unit_imaginary(self, tol=1e-12):
        """Member of the sphere of imaginary units: x0 = 0 and |x| = 1."""
        return abs(self.x0) <= tol and abs(self.norm() - 1.0) <= tol

    def components(self):
        return (self.x0, self.x1, self.x2, self.x3)

    def to_complex_pair(self):
        """(z, w) with q = z + w*e2, both complex along e1."""
        return complex(self.x0, self.x1), complex(self.x2, self.x3)

    def to_chi(self):
        z, w = self.to_complex_pair()
        return np.array([[z, w], [-w.conjugate(), z.conjugate()]], dtype=complex)

    @staticmethod
    def from_complex_pair(z, w):
        return Quaternion(z.real, z.imag, w.real, w.imag)

    def __eq__(self, other):
        if isinstance(other, (int, float)):
            other = Quaternion(other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return self.components() == other.components()

    def __hash__(self):
        return hash(self.components())

    def __repr__(self):
        return "Quaternion(%r, %r, %r, %r)" % self.components()


ONE = Quaternion(1.0)
E1 = Quaternion(0.0, 1.0)
E2 = Quaternion(0.0, 0.0, 1.0)
E3 = Quaternion(0.0, 0.0, 0.0, 1.0)
UNITS = (E1, E2, E3)


def as_quaternion(value):
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float)):
        return Quaternion(value)
    raise TypeError("cannot interpret %r as a quaternion" % (value,))


# ---------------------------------------------------------------------------
# Quaternion matrices
# ---------------------------------------------------------------------------

_E2BLOCK = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)


class QuatMatrix:
    """An r x s matrix over the quaternions, stored via its complex embedding."""

    __slots__ = ("_chi", "rows", "cols")

    def __init__(self, chi_data, rows, cols):
        self._chi = chi_data
        self.rows = rows
        self.cols = cols

    # -- constructors --------------------------------------------------

    @staticmethod
    def zeros(rows, cols):
        return QuatMatrix(np.zeros((2 * rows, 2 * cols), dtype=complex), rows, cols)

    @staticmethod
    def identity(n):
        return QuatMatrix(np.eye(2 * n, dtype=complex), n, n)

    @staticmethod
    def from_entries(entries):
        """Build from a nested list of Quaternion (or scalar) entries."""
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        chi_data = np.zeros((2 * rows, 2 * cols), dtype=complex)
        for i, row in enumerate(entries):
            if len(row) != cols:
                raise ShapeMismatch("ragged entry grid")
            for j, q in enumerate(row):
                chi_data[2 * i:2 * i + 2, 2 * j:2 * j + 2] = as_quaternion(q).to_chi()
        return QuatMatrix(chi_data, rows, cols)

    @staticmethod
    def scalar(q, n=1):
        """q times the n x n identity."""
        block = as_quaternion(q).to_chi()
        return QuatMatrix(np.kron(np.eye(n), block), n, n)

    @staticmethod
    def from_real(array):
        array = np.asarray(array, dtype=float)
        if array.ndim != 2:
            raise ShapeMismatch("expected a 2-d real array")
        r, s = array.shape
        chi_data = np.zeros((2 * r, 2 * s), dtype=complex)
        chi_data[0::2, 0::2] = array
        chi_data[1::2, 1::2] = array
        return QuatMatrix(chi_data, r, s)

    # -- structure ------------------------------------------------------

    @property
    def shape(self):
        return (self.rows, self.cols)

    def entry(self, i, j):
        block = self._chi[2 * i:2 * i + 2, 2 * j:2 * j + 2]
        return Quaternion.from_complex_pair(complex(block[0, 0]), complex(block[0, 1]))

    def to_rows(self):
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def chi(self):
        """The complex embedding, blocks interleaved per entry (a copy)."""
        return self._chi.copy()

    # -- algebra ----------------------------------------------------------

    def __add__(self, other):
        self._check_same_shape(other)
        return QuatMatrix(self._chi + other._chi, self.rows, self.cols)

    def __sub__(self, other):
        self._check_same_shape(other)
        return QuatMatrix(self._chi - other._chi, self.rows, self.cols)

    def __neg__(self):
        return QuatMatrix(-self._chi, self.rows, self.cols)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ShapeMismatch("cannot multiply %s by %s" % (self.shape, other.shape))
        return QuatMatrix(self._chi @ other._chi, self.rows, other.cols)

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, float)):
            return NotImplemented
        return QuatMatrix(self._chi * float(scalar), self.rows, self.cols)

    __rmul__ = __mul__

    def scale_left(self, q):
        """Multiply every entry by the quaternion q on the left."""
        big = np.kron(np.eye(self.rows), as_quaternion(q).to_chi())
        return QuatMatrix(big @ self._chi, self.rows, self.cols)

    def scale_right(self, q):
        big = np.kron(np.eye(self.cols), as_quaternion(q).to_chi())
        return QuatMatrix(self._chi @ big, self.rows, self.cols)

    def conj_transpose(self):
        return QuatMatrix(self._chi.conj().T.copy(), self.cols, self.rows)

    @property
    def H(self):
        return self.conj_transpose()

    def frobenius(self):
        # chi doubles every entry, hence the 1/sqrt(2)
        return float(np.linalg.norm(self._chi)) / math.sqrt(2.0)

    def max_abs(self):
        return float(np.abs(self._chi).max()) if self._chi.size else 0.0

    def is_hermitian(self, tol=TOL_HERM):
        if self.rows != self.cols:
            return False
        resid = np.abs(self._chi - self._chi.conj().T).max() if self._chi.size else 0.0
        return resid <= tol * max(1.0, self.max_abs())

    def allclose(self, other, tol=1e-12):
        self._check_same_shape(other)
        return np.abs(self._chi - other._chi).max() <= tol

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch("shape %s vs %s" % (self.shape, other.shape))

    def __repr__(self):
        return "QuatMatrix(%d x %d)" % (self.rows, self.cols)


# ---------------------------------------------------------------------------
# chi and its inverse
# ---------------------------------------------------------------------------

def chi(M):
    """Complex embedding of a quaternion matrix: 2x2 blocks per entry."""
    if isinstance(M, Quaternion):
        return M.to_chi()
    if isinstance(M, (int, float)):
        return Quaternion(M).to_chi()
    return M.chi()


def chi_symmetry_residual(C):
    """Max deviation of C from the block symmetry E^-1 conj(C) E = C."""
    C = np.asarray(C, dtype=complex)
    if C.ndim != 2 or C.shape[0] % 2 or C.shape[1] % 2:
        raise ShapeMismatch("expected an even-dimensioned complex matrix")
    z = C[0::2, 0::2]
    zbar = C[1::2, 1::2]
    w = C[0::2, 1::2]
    wbar = C[1::2, 0::2]
    r1 = np.abs(z - zbar.conj()).max() if z.size else 0.0
    r2 = np.abs(w + wbar.conj()).max() if w.size else 0.0
    return max(float(r1), float(r2))


def chi_inverse(C, tol_sym=TOL_SYM):
    """Pull a complex matrix back through the embedding.

    Raises SymmetryViolation when C is not (within tol_sym, relative) of the
    form chi(M); the returned matrix is the exact-symmetry projection of C.
    """
    C = np.asarray(C, dtype=complex)
    scale = max(1.0, float(np.abs(C).max())) if C.size else 1.0
    resid = chi_symmetry_residual(C)
    if resid > tol_sym * scale:
        raise SymmetryViolation(
            "symmetry residual %.3e exceeds %.3e" % (resid, tol_sym * scale))
    rows, cols = C.shape[0] // 2, C.shape[1] // 2
    out = np.zeros_like(C)
    z = (C[0::2, 0::2] + C[1::2, 1::2].conj()) / 2.0
    w = (C[0::2, 1::2] - C[1::2, 0::2].conj()) / 2.0
    out[0::2, 0::2] = z
    out[1::2, 1::2] = z.conj()
    out[0::2, 1::2] = w
    out[1::2, 0::2] = -w.conj()
    return QuatMatrix(out, rows, cols)


# ---------------------------------------------------------------------------
# Cyclic Jacobi eigensolver for complex Hermitian matrices
# ---------------------------------------------------------------------------

def _jacobi_eigh(H, need_vectors=True, max_sweeps=60):
    """Eigen-decomposition of a complex Hermitian matrix by cyclic Jacobi.

    Returns (w, V) with w ascending; V has orthonormal eigenvector columns
    (or None when need_vectors is False).
    """
    A = np.asarray(H, dtype=complex).copy()
    n = A.shape[0]
    if n == 0:
        return np.zeros(0), (np.zeros((0, 0), dtype=complex) if need_vectors else None)
    A = (A + A.conj().T) / 2.0
    V = np.eye(n, dtype=complex) if need_vectors else None
    scale = float(np.abs(A).max())
    if scale == 0.0 or n == 1:
        w = A.diagonal().real.copy()
        order = np.argsort(w, kind="stable")
        return w[order], (V[:, order] if need_vectors else None)
    stop = 1e-15 * scale
    for sweep in range(max_sweeps):
        off = float(np.abs(np.triu(A, 1)).max())
        if off <= stop:
            break
        # threshold strategy: early sweeps skip entries far below the level
        thresh = off / n if sweep < 3 else 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                aab = abs(apq)
                if aab <= max(thresh, stop / n):
                    continue
                app = A[p, p].real
                aqq = A[q, q].real
                half_diff = (app - aqq) / 2.0
                rad = math.hypot(aab, half_diff)
                # eigenvector of [[app, apq], [conj(apq), aqq]] for the larger
                # eigenvalue; lam1 - app = rad - half_diff computed without
                # cancellation when half_diff >= 0
                v0 = apq
                if half_diff >= 0.0:
                    v1 = aab * aab / (rad + half_diff)
                else:
                    v1 = rad - half_diff
                vn = math.hypot(abs(v0), v1)
                if vn <= stop:
                    continue
                c1 = v0 / vn
                s1 = v1 / vn
                G = np.array([[c1, -s1], [s1, c1.conjugate()]], dtype=complex)
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = G.conj().T @ A[idx, :]
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                if need_vectors:
                    V[:, idx] = V[:, idx] @ G
    else:
        raise ConvergenceError("Jacobi sweep limit reached")
    w = A.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    return w, (V[:, order] if need_vectors else None)


def hermitian_eigenvalues(C, tol_herm=TOL_HERM):
    """Ascending eigenvalues of a complex Hermitian matrix (cyclic Jacobi)."""
    C = np.asarray(C, dtype=complex)
    scale = max(1.0, float(np.abs(C).max())) if C.size else 1.0
    if C.shape[0] != C.shape[1]:
        raise NotHermitian("matrix is not square")
    resid = float(np.abs(C - C.conj().T).max()) if C.size else 0.0
    if resid > tol_herm * scale:
        raise NotHermitian("Hermitian residual %.3e exceeds %.3e" % (resid, tol_herm * scale))
    w, _ = _jacobi_eigh(C, need_vectors=False)
    return [float(x) for x in w]


def hermitian_eigensystem(C, tol_herm=TOL_HERM):
    """(eigenvalues ascending, eigenvector columns) of a Hermitian matrix."""
    C = np.asarray(C, dtype=complex)
    scale = max(1.0, float(np.abs(C).max())) if C.size else 1.0
    resid = float(np.abs(C - C.conj().T).max()) if C.size else 0.0
    if resid > tol_herm * scale:
        raise NotHermitian("Hermitian residual %.3e exceeds %.3e" % (resid, tol_herm * scale))
    return _jacobi_eigh(C, need_vectors=True)


def operator_norm(M):
    """Largest singular value of M, computed through the complex embedding."""
    if isinstance(M, Quaternion):
        return M.norm()
    C = M._chi
    if C.size == 0:
        return 0.0
    if np.abs(C).max() == 0.0:
        return 0.0
    H = C.conj().T @ C
    w, _ = _jacobi_eigh(H, need_vectors=False)
    return math.sqrt(max(float(w[-1]), 0.0))


def is_psd(M, tol=1e-9, tol_herm=TOL_HERM):
    """PSD test for a Hermitian quaternion matrix via its embedding."""
    if not M.is_hermitian(tol=tol_herm):
        raise NotHermitian("matrix is not Hermitian within %.1e" % tol_herm)
    w, _ = _jacobi_eigh(M._chi, need_vectors=False)
    if len(w) == 0:
        return True
    norm = max(abs(float(w[0])), abs(float(w[-1])))
    return float(w[0]) >= -tol * max(1.0, norm)


def min_eigenvalue(M, tol_herm=TOL_HERM):
    """Smallest eigenvalue of a Hermitian quaternion matrix."""
    if not M.is_hermitian(tol=tol_herm):
        raise NotHermitian("matrix is not Hermitian within %.1e" % tol_herm)
    w, _ = _jacobi_eigh(M._chi, need_vectors=False)
    return float(w[0]) if len(w) else 0.0


def hermitian_sqrt(M, inverse=False, eps=1e-12):
    """Hermitian square root (or inverse square root) of a PSD quaternion matrix.

    Functions of Hermitian matrices preserve the embedding symmetry, so the
    result pulls back exactly; the pull-back asserts it.
    """
    if not M.is_hermitian():
        raise NotHermitian("square root requested for a non-Hermitian matrix")
    w, V = _jacobi_eigh(M._chi, need_vectors=True)
    wmax = max(float(w[-1]), 0.0) if len(w) else 0.0
    vals = np.clip(w, 0.0, None)
    if inverse:
        floor = eps * max(wmax, 1.0)
        if np.any(vals <= floor):
            raise NotPositive("matrix not strictly positive; cannot invert square root")
        d = 1.0 / np.sqrt(vals)
    else:
        d = np.sqrt(vals)
    R = (V * d) @ V.conj().T
    return chi_inverse(R, tol_sym=1e-8)


# ---------------------------------------------------------------------------
# Linear solves through the embedding
# ---------------------------------------------------------------------------

def solve(M, B, tol_sym=1e-8):
    """Solve M X = B over the quaternions (complex LU on the embedding)."""
    if M.rows != M.cols or M.rows != B.rows:
        raise ShapeMismatch("solve needs square M with matching right side")
    try:
        X = np.linalg.solve(M._chi, B._chi)
    except np.linalg.LinAlgError as exc:
        raise SingularResolvent(str(exc)) from exc
    if not np.all(np.isfinite(X)):
        raise SingularResolvent("non-finite solution")
    resid = np.abs(M._chi @ X - B._chi).max()
    scale = max(1.0, float(np.abs(B._chi).max()))
    if resid > 1e-6 * scale:
        raise SingularResolvent("solve residual %.3e; system near-singular" % resid)
    return chi_inverse(X, tol_sym=tol_sym)


def inverse(M, tol_sym=1e-8):
    return solve(M, QuatMatrix.identity(M.rows), tol_sym=tol_sym)


# ---------------------------------------------------------------------------
# Random unitary generation
# ---------------------------------------------------------------------------

def random_quaternion(rng, scale=1.0):
    vals = rng.standard_normal(4) * scale
    return Quaternion(*vals)


def random_matrix(rows, cols, seed=0, scale=1.0):
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal((rows, cols, 4)) * scale
    return QuatMatrix.from_entries(
        [[Quaternion(*vals[i, j]) for j in range(cols)] for i in range(rows)])

def random_unitary(n, seed=0):
    """Seeded random quaternionic unitary via Gram-Schmidt over H.

    Deterministic for a fixed seed; two orthogonalization passes keep
    ||U*U - I|| below 1e-12 at the sizes used here.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    cols = []
    for _ in range(n):
        while True:
            vals = rng.standard_normal((n, 4))
            v = QuatMatrix.from_entries([[Quaternion(*vals[i])] for i in range(n)])
            for _pass in range(2):
                for u in cols:
                    v = v - u @ (u.H @ v)
            nrm = math.sqrt((v.H @ v).entry(0, 0).real)
            if nrm > 1e-8:
                break
        cols.append(v.scale_right(Quaternion(1.0 / nrm)))
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    for j, c in enumerate(cols):
        out[:, 2 * j:2 * j + 2] = c._chi
    return QuatMatrix(out, n, n)


def hstack(mats):
    rows = mats[0].rows
    for m in mats:
        if m.rows != rows:
            raise ShapeMismatch("row mismatch in hstack")
    chi_data = np.concatenate([m._chi for m in mats], axis=1)
    return QuatMatrix(chi_data, rows, sum(m.cols for m in mats))


def vstack(mats):
    cols = mats[0].cols
    for m in mats:
        if m.cols != cols:
            raise ShapeMismatch("column mismatch in vstack")
    chi_data = np.concatenate([m._chi for m in mats], axis=0)
    return QuatMatrix(chi_data, sum(m.rows for m in mats), cols)


def block(grid):
    """Assemble a block matrix from a nested list of QuatMatrix."""
    return vstack([hstack(row) for row in grid])


def submatrix(M, row_start, row_stop, col_start, col_stop):
    chi_data = M._chi[2 * row_start:2 * row_stop, 2 * col_start:2 * col_stop].copy()
    return QuatMatrix(chi_data, row_stop - row_start, col_stop - col_start)
