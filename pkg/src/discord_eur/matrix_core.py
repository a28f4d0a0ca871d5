"""Complex-matrix primitives and entropy functionals.

Matrices are plain ``numpy.ndarray`` objects with complex dtype. Every
entropy in this package is measured in bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
from scipy.special import entr

HERMITIAN_TOL = 1e-8
NEGATIVE_EIG_TOL = 1e-12
TRACE_TOL = 1e-9
PROB_TOL = 1e-9
_LN2 = np.log(2.0)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order with eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def tensor(*factors) -> np.ndarray:
    """Kronecker product of one or more matrices (or vectors), left to right."""
    if not factors:
        raise ValueError("tensor needs at least one factor")
    return reduce(np.kron, (np.asarray(f, dtype=complex) for f in factors))


def ket_projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def _check_dims(m: np.ndarray, dims: Sequence[int]) -> None:
    n = int(np.prod(dims))
    if m.shape != (n, n):
        raise ValueError(f"dims {list(dims)} imply a {n}x{n} matrix, got {m.shape}")


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every factor not listed in ``keep``.

    Kept factors appear in the output in ascending index order.
    """
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    _check_dims(m, dims)
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} factors")

    t = m.reshape(dims + dims)
    # einsum labels: row indices 0..n-1, column indices n..2n-1; traced
    # factors share their row label.
    row = list(range(n))
    col = [i if i not in keep else n + i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(t, row + col, out)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return reduced.reshape(d_keep, d_keep)


def permute_factors(m, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors so that output factor ``i`` is input factor ``order[i]``."""
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    _check_dims(m, dims)
    n = len(dims)
    if sorted(order) != list(range(n)):
        raise ValueError(f"{list(order)} is not a permutation of {n} factors")
    t = m.reshape(dims + dims)
    t = t.transpose(list(order) + [n + i for i in order])
    size = int(np.prod(dims))
    return t.reshape(size, size)


def hermitian_part(m) -> np.ndarray:
    """Return (M + M^dagger)/2 after checking M is Hermitian to ``HERMITIAN_TOL``."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got {m.shape}")
    asym = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if asym > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian (max asymmetry {asym:.3e})")
    return (m + m.conj().T) / 2


def hermitian_eig(m) -> Spectrum:
    h = hermitian_part(m)
    w, v = np.linalg.eigh(h)
    idx = np.argsort(w)[::-1]
    return Spectrum(eigenvalues=w[idx], eigenvectors=v[:, idx])


def clamp_eigenvalues(w: np.ndarray) -> np.ndarray:
    """Zero out harmless negative round-off; reject genuinely negative values."""
    w = np.asarray(w, dtype=float)
    if w.size and w.min() < -NEGATIVE_EIG_TOL:
        raise ValueError(f"negative eigenvalue {w.min():.3e} below -{NEGATIVE_EIG_TOL:g}")
    return np.where(w < 0, 0.0, w)


def entropy_of_eigenvalues(w) -> float:
    """-sum w log2 w over an unnormalized nonnegative spectrum, with 0 log 0 = 0."""
    w = np.asarray(w, dtype=float)
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)))


def von_neumann_entropy(rho) -> float:
    """S(rho) = -Tr rho log2 rho."""
    h = hermitian_part(rho)
    tr = float(np.real(np.trace(h)))
    if abs(tr - 1) > TRACE_TOL:
        raise ValueError(f"density matrix trace {tr!r} differs from 1")
    w = clamp_eigenvalues(np.linalg.eigvalsh(h))
    return entropy_of_eigenvalues(w)


def shannon_entropy(p) -> float:
    """Shannon entropy in bits of a probability vector.

    Entries down to -1e-12 are clamped to zero and the vector renormalized.
    """
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size and p.min() < -NEGATIVE_EIG_TOL:
        raise ValueError(f"negative probability {p.min():.3e}")
    p = np.where(p < 0, 0.0, p)
    s = p.sum()
    if abs(s - 1) > PROB_TOL:
        raise ValueError(f"probabilities sum to {s!r}, not 1")
    return entropy_of_eigenvalues(p / s)


def binary_entropy(x: float) -> float:
    if not -PROB_TOL <= x <= 1 + PROB_TOL:
        raise ValueError(f"binary entropy argument {x!r} outside [0, 1]")
    x = min(max(float(x), 0.0), 1.0)
    return entropy_of_eigenvalues([x, 1 - x])


def operator_norm(m) -> float:
    """Largest singular value."""
    m = as_matrix(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def psd_sqrt(m) -> np.ndarray:
    """Square root of a PSD matrix through its spectral decomposition."""
    spec = hermitian_eig(m)
    w = np.sqrt(clamp_eigenvalues(spec.eigenvalues))
    v = spec.eigenvectors
    return (v * w) @ v.conj().T


def batched_entropy(mats: np.ndarray) -> np.ndarray:
    """Unnormalized entropies -sum mu log2 mu over a stack of Hermitian PSD matrices.

    Unchecked fast path for optimizer inner loops; negative round-off is
    clipped silently.
    """
    mats = np.asarray(mats)
    n = mats.shape[-1]
    if n == 1:
        w = np.real(mats[..., 0, 0])[..., None]
    elif n == 2:
        a = np.real(mats[..., 0, 0])
        d = np.real(mats[..., 1, 1])
        b = mats[..., 0, 1]
        half = (a + d) / 2
        rad = np.sqrt(((a - d) / 2) ** 2 + b.real ** 2 + b.imag ** 2)
        return (entr(np.maximum(half + rad, 0.0)) + entr(np.maximum(half - rad, 0.0))) / _LN2
    else:
        w = np.linalg.eigvalsh(mats)
    return entr(np.clip(w, 0.0, None)).sum(axis=-1) / _LN2
