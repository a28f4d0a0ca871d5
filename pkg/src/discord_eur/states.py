"""Density operators and the state families used throughout the toolkit."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .matrix_core import (
    as_matrix,
    hermitian_eig,
    ket_projector,
    partial_trace,
    permute_factors,
    tensor,
    von_neumann_entropy,
)

STATE_HERMITIAN_TOL = 1e-10
STATE_TRACE_TOL = 1e-9
STATE_MIN_EIG_TOL = 1e-10


class InvalidStateError(ValueError):
    """A matrix failed the density-operator checks."""


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian PSD trace-one matrix with a tensor-factor dimension list.

    Construction validates the invariants and stores a read-only copy of
    the matrix.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        m = as_matrix(self.matrix)
        dims = tuple(int(d) for d in self.dims)
        if any(d < 1 for d in dims):
            raise InvalidStateError(f"factor dimensions must be positive, got {dims}")
        n = int(np.prod(dims))
        if m.shape != (n, n):
            raise InvalidStateError(f"dims {dims} need a {n}x{n} matrix, got {m.shape}")
        asym = float(np.max(np.abs(m - m.conj().T)))
        if asym > STATE_HERMITIAN_TOL:
            raise InvalidStateError(f"not Hermitian (max asymmetry {asym:.3e})")
        m = (m + m.conj().T) / 2
        tr = float(np.real(np.trace(m)))
        if abs(tr - 1) > STATE_TRACE_TOL:
            raise InvalidStateError(f"trace is {tr!r}, expected 1")
        lo = float(np.linalg.eigvalsh(m).min())
        if lo < -STATE_MIN_EIG_TOL:
            raise InvalidStateError(f"not positive semidefinite (min eigenvalue {lo:.3e})")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_factors(self) -> int:
        return len(self.dims)

    def marginal(self, keep) -> "DensityOperator":
        if isinstance(keep, (int, np.integer)):
            keep = [int(keep)]
        keep = sorted(set(keep))
        m = partial_trace(self.matrix, self.dims, keep)
        return DensityOperator(m, tuple(self.dims[k] for k in keep))

    def permute(self, order: Sequence[int]) -> "DensityOperator":
        m = permute_factors(self.matrix, self.dims, order)
        return DensityOperator(m, tuple(self.dims[i] for i in order))

    def regroup(self, groups: Sequence[Sequence[int]]) -> "DensityOperator":
        """Merge factors: each group becomes one factor, in the given order.

        Factors not mentioned in any group are traced out first.
        """
        flat = [i for g in groups for i in g]
        if len(set(flat)) != len(flat):
            raise ValueError(f"factor groups {groups} overlap")
        reduced = self.marginal(sorted(flat))
        position = {f: i for i, f in enumerate(sorted(flat))}
        ordered = reduced.permute([position[f] for f in flat])
        new_dims = tuple(int(np.prod([self.dims[i] for i in g])) for g in groups)
        return DensityOperator(ordered.matrix, new_dims)

    def entropy(self) -> float:
        return von_neumann_entropy(self.matrix)

    def is_pure(self, tol: float = 1e-9) -> bool:
        return self.entropy() < tol

    def conjugate(self, u) -> "DensityOperator":
        u = as_matrix(u)
        return DensityOperator(u @ self.matrix @ u.conj().T, self.dims)


def _check_unit_interval(name: str, x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x!r}")
    return x


def _check_dimension(d: int) -> int:
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")
    return int(d)


def basis_ket(d: int, i: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1
    return v


def from_ket(psi, dims: Sequence[int]) -> DensityOperator:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    psi = psi / np.linalg.norm(psi)
    return DensityOperator(ket_projector(psi), tuple(dims))


def maximally_mixed(dims: Sequence[int]) -> DensityOperator:
    n = int(np.prod(dims))
    return DensityOperator(np.eye(n) / n, tuple(dims))


def product(*states: DensityOperator) -> DensityOperator:
    m = tensor(*(s.matrix for s in states))
    dims = tuple(d for s in states for d in s.dims)
    return DensityOperator(m, dims)


def swap_operator(d: int) -> np.ndarray:
    """F |i,j> = |j,i> on C^d (x) C^d."""
    f = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            f[j * d + i, i * d + j] = 1
    return f


def symmetric_projector(d: int) -> np.ndarray:
    return (np.eye(d * d) + swap_operator(d)) / 2


def antisymmetric_projector(d: int) -> np.ndarray:
    return (np.eye(d * d) - swap_operator(d)) / 2


def maximally_entangled_ket(d: int) -> np.ndarray:
    return sum(np.kron(basis_ket(d, i), basis_ket(d, i)) for i in range(d)) / np.sqrt(d)


def singlet_ket() -> np.ndarray:
    """(|01> - |10>)/sqrt(2)."""
    return (np.kron(basis_ket(2, 0), basis_ket(2, 1)) - np.kron(basis_ket(2, 1), basis_ket(2, 0))) / np.sqrt(2)


def maximally_entangled(d: int) -> DensityOperator:
    """Projector onto (1/sqrt d) sum_i |ii>."""
    d = _check_dimension(d)
    return DensityOperator(ket_projector(maximally_entangled_ket(d)), (d, d))


def werner_main(p: float) -> DensityOperator:
    """Two-qubit Werner state (1-p)/4 I + p |psi><psi| with psi the singlet."""
    p = _check_unit_interval("p", p)
    m = (1 - p) / 4 * np.eye(4) + p * ket_projector(singlet_ket())
    return DensityOperator(m, (2, 2))


def werner_lambda_from_p(p: float) -> float:
    """Antisymmetric weight matching ``werner_main(p)`` in the Pi+/Pi- form."""
    return (1 + 3 * p) / 4


def werner_general(d: int, lam: float) -> DensityOperator:
    """d x d Werner state with weight ``lam`` on the antisymmetric subspace."""
    d = _check_dimension(d)
    lam = _check_unit_interval("lam", lam)
    m = (2 * (1 - lam) / (d * (d + 1)) * symmetric_projector(d)
         + 2 * lam / (d * (d - 1)) * antisymmetric_projector(d))
    return DensityOperator(m, (d, d))


def isotropic(d: int, lam: float) -> DensityOperator:
    """lam Phi_d + (1 - lam)/(d^2 - 1) (I - Phi_d)."""
    d = _check_dimension(d)
    lam = _check_unit_interval("lam", lam)
    phi = ket_projector(maximally_entangled_ket(d))
    m = lam * phi + (1 - lam) / (d * d - 1) * (np.eye(d * d) - phi)
    return DensityOperator(m, (d, d))


def classical_quantum(probs, memory_states: Sequence[DensityOperator]) -> DensityOperator:
    """sum_x p_x |x><x| (x) rho_x with A the classical side."""
    probs = np.asarray(probs, dtype=float)
    if len(probs) != len(memory_states):
        raise ValueError("need one memory state per probability")
    dA = len(probs)
    mem_dims = memory_states[0].dims
    m = sum(p * np.kron(ket_projector(basis_ket(dA, x)), s.matrix)
            for x, (p, s) in enumerate(zip(probs, memory_states)))
    return DensityOperator(m, (dA,) + tuple(mem_dims))


def purify(rho: DensityOperator, rank_tol: float = 1e-12) -> DensityOperator:
    """Pure state on rho's factors plus one ancilla of dimension rank(rho).

    The ancilla is appended as the last factor; tracing it out recovers rho.
    """
    spec = hermitian_eig(rho.matrix)
    w = spec.eigenvalues
    support = w > rank_tol
    w = w[support]
    v = spec.eigenvectors[:, support]
    r = len(w)
    psi = np.zeros(rho.dim * r, dtype=complex)
    for k in range(r):
        psi += np.sqrt(w[k]) * np.kron(v[:, k], basis_ket(r, k))
    return from_ket(psi, rho.dims + (r,))


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def random_density(dims: Sequence[int], seed: int) -> DensityOperator:
    """Hilbert-Schmidt random state G G^dagger / Tr, G a square Ginibre matrix."""
    n = int(np.prod(dims))
    rng = _rng(seed)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = g @ g.conj().T
    return DensityOperator(m / np.real(np.trace(m)), tuple(dims))


def random_pure(dims: Sequence[int], seed: int) -> DensityOperator:
    n = int(np.prod(dims))
    rng = _rng(seed)
    psi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return from_ket(psi, dims)


def random_unitary(d: int, seed: int) -> np.ndarray:
    """Haar unitary via QR of a Ginibre matrix with phase correction."""
    rng = _rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


# --- JSON state files: {"dims": [...], "re": [[...]], "im": [[...]]} ---

def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"re": np.real(m).tolist(), "im": np.imag(m).tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    if "re" not in obj:
        raise ValueError("matrix object needs an 're' field")
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != im.shape or re.ndim != 2:
        raise ValueError(f"'re' {re.shape} and 'im' {im.shape} must be matching 2-d arrays")
    return re + 1j * im


def state_to_json(rho: DensityOperator) -> dict:
    return {"dims": list(rho.dims), **matrix_to_json(rho.matrix)}


def state_from_json(obj: dict) -> DensityOperator:
    if "dims" not in obj:
        raise ValueError("state object needs a 'dims' field")
    return DensityOperator(matrix_from_json(obj), tuple(obj["dims"]))


def save_state(rho: DensityOperator, path) -> None:
    Path(path).write_text(json.dumps(state_to_json(rho)))


def load_state(path) -> DensityOperator:
    return state_from_json(json.loads(Path(path).read_text()))
