"""POVMs, incompatibility, and post-measurement classical-quantum states."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product as iproduct
from pathlib import Path
from typing import Sequence

import numpy as np

from .matrix_core import (
    as_matrix,
    clamp_eigenvalues,
    entropy_of_eigenvalues,
    ket_projector,
    operator_norm,
    psd_sqrt,
    shannon_entropy,
)
from .states import DensityOperator, matrix_from_json

POVM_PSD_TOL = 1e-10
POVM_SUM_TOL = 1e-9
ORTHONORMAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Measurement:
    """Ordered POVM elements acting on one factor of dimension ``dim``."""

    elements: tuple[np.ndarray, ...]
    dim: int
    label: str = ""
    vectors: np.ndarray | None = None  # columns, set for rank-one projective measurements

    def __post_init__(self):
        els = tuple(as_matrix(e) for e in self.elements)
        if not els:
            raise ValueError("a measurement needs at least one element")
        d = els[0].shape[0]
        if any(e.shape != (d, d) for e in els):
            raise ValueError("POVM elements must be square matrices of one size")
        for k, e in enumerate(els):
            if np.max(np.abs(e - e.conj().T)) > POVM_PSD_TOL:
                raise ValueError(f"POVM element {k} is not Hermitian")
            lo = np.linalg.eigvalsh((e + e.conj().T) / 2).min()
            if lo < -POVM_PSD_TOL:
                raise ValueError(f"POVM element {k} is not PSD (min eigenvalue {lo:.3e})")
        total = sum(els)
        if np.max(np.abs(total - np.eye(d))) > POVM_SUM_TOL:
            raise ValueError("POVM elements do not sum to the identity")
        ro = []
        for e in els:
            e = (e + e.conj().T) / 2
            e.setflags(write=False)
            ro.append(e)
        object.__setattr__(self, "elements", tuple(ro))
        object.__setattr__(self, "dim", d)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def is_projective_rank_one(self) -> bool:
        return self.vectors is not None


def projective(basis: Sequence, label: str = "") -> Measurement:
    """Rank-one projective measurement from an orthonormal list of vectors."""
    vecs = np.column_stack([np.asarray(v, dtype=complex).reshape(-1) for v in basis])
    d, n = vecs.shape
    if n != d:
        raise ValueError(f"need {d} basis vectors of dimension {d}, got {n}")
    gram = vecs.conj().T @ vecs
    if np.max(np.abs(gram - np.eye(d))) > ORTHONORMAL_TOL:
        raise ValueError("basis vectors are not orthonormal")
    return Measurement(tuple(ket_projector(vecs[:, k]) for k in range(d)), d, label, vecs)


def from_unitary(u, label: str = "") -> Measurement:
    u = as_matrix(u)
    return projective([u[:, k] for k in range(u.shape[1])], label)


def computational(d: int) -> Measurement:
    return from_unitary(np.eye(d), "comp")


def fourier_matrix(d: int) -> np.ndarray:
    """Columns |x~> = d^{-1/2} sum_z omega^{xz} |z>, omega = exp(2 pi i/d)."""
    z = np.arange(d)
    return np.exp(2j * np.pi * np.outer(z, z) / d) / np.sqrt(d)


def fourier(d: int) -> Measurement:
    return from_unitary(fourier_matrix(d), "fourier")


def pauli_x() -> Measurement:
    s = 1 / np.sqrt(2)
    return projective([[s, s], [s, -s]], "pauli-x")


def pauli_y() -> Measurement:
    s = 1 / np.sqrt(2)
    return projective([[s, 1j * s], [s, -1j * s]], "pauli-y")


def pauli_z() -> Measurement:
    return projective([[1, 0], [0, 1]], "pauli-z")


def incompatibility(p: Measurement, q: Measurement) -> float:
    """c(P, Q) = max over element pairs of ||sqrt(L_p) sqrt(G_q)||_inf.

    Normalized so that -2 log2 c is the memoryless bound (c = 1/sqrt(d) for
    mutually unbiased bases).
    """
    if p.dim != q.dim:
        raise ValueError(f"measurement dimensions differ: {p.dim} vs {q.dim}")
    sp = [psd_sqrt(e) for e in p.elements]
    sq = [psd_sqrt(e) for e in q.elements]
    return max(operator_norm(a @ b) for a, b in iproduct(sp, sq))


def overlap_incompatibility(p: Measurement, q: Measurement) -> float:
    """max |<p_i|q_j>|, valid only for rank-one projective measurements."""
    if not (p.is_projective_rank_one and q.is_projective_rank_one):
        raise ValueError("overlap formula needs rank-one projective measurements")
    if p.dim != q.dim:
        raise ValueError(f"measurement dimensions differ: {p.dim} vs {q.dim}")
    return float(np.max(np.abs(p.vectors.conj().T @ q.vectors)))


def _measured_first(rho: DensityOperator, measured: int) -> tuple[np.ndarray, int, tuple[int, ...]]:
    """Reshape rho as R[a, b] blocks with the measured factor in front."""
    if not 0 <= measured < rho.n_factors:
        raise ValueError(f"factor {measured} out of range for {rho.n_factors} factors")
    order = [measured] + [i for i in range(rho.n_factors) if i != measured]
    r = rho.permute(order) if measured != 0 else rho
    d_meas = rho.dims[measured]
    mem_dims = tuple(rho.dims[i] for i in order[1:])
    d_mem = int(np.prod(mem_dims)) if mem_dims else 1
    blocks = r.matrix.reshape(d_meas, d_mem, d_meas, d_mem).transpose(0, 2, 1, 3)
    return blocks, d_meas, mem_dims


def unnormalized_conditionals(m: Measurement, rho: DensityOperator, measured: int) -> np.ndarray:
    """Tr_A{(L_k (x) I) rho} for every element, stacked into (k, d_mem, d_mem)."""
    blocks, d_meas, _ = _measured_first(rho, measured)
    if m.dim != d_meas:
        raise ValueError(f"measurement acts on dimension {m.dim}, factor {measured} has {d_meas}")
    els = np.stack(m.elements)
    # Tr_A[(L (x) I) rho] = sum_ab L[b, a] R[a, b]
    return np.einsum("kba,abij->kij", els, blocks)


def outcome_distribution(m: Measurement, rho: DensityOperator, factor: int = 0) -> np.ndarray:
    """p_k = Tr{(L_k (x) I) rho}."""
    cond = unnormalized_conditionals(m, rho, factor)
    p = np.real(np.trace(cond, axis1=1, axis2=2))
    p = np.where(np.abs(p) < 1e-15, 0.0, p)
    if p.min() < -1e-12:
        raise ValueError(f"negative outcome probability {p.min():.3e}")
    return np.clip(p, 0.0, None)


@dataclass(frozen=True, eq=False)
class ClassicalQuantumState:
    """Outcome probabilities with normalized conditional memory states.

    Outcomes of probability zero carry the maximally mixed memory state as a
    placeholder; it never contributes to any weighted quantity.
    """

    probabilities: np.ndarray
    conditional_states: tuple[DensityOperator, ...]

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if abs(p.sum() - 1) > 1e-9:
            raise ValueError(f"outcome probabilities sum to {p.sum()!r}")
        if len(p) != len(self.conditional_states):
            raise ValueError("need one conditional state per outcome")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)

    @property
    def memory_dims(self) -> tuple[int, ...]:
        return self.conditional_states[0].dims

    def memory_state(self) -> np.ndarray:
        return sum(p * s.matrix for p, s in zip(self.probabilities, self.conditional_states))

    def joint_matrix(self) -> np.ndarray:
        """Block-diagonal rho_XB = sum_x p_x |x><x| (x) rho_x."""
        k = len(self.probabilities)
        n = self.conditional_states[0].dim
        out = np.zeros((k * n, k * n), dtype=complex)
        for x, (p, s) in enumerate(zip(self.probabilities, self.conditional_states)):
            out[x * n:(x + 1) * n, x * n:(x + 1) * n] = p * s.matrix
        return out


def post_measurement_state(m: Measurement, rho: DensityOperator, measured: int = 0) -> ClassicalQuantumState:
    """Measure one factor; the remaining factors (in order) form the memory."""
    cond = unnormalized_conditionals(m, rho, measured)
    _, _, mem_dims = _measured_first(rho, measured)
    mem_dims = mem_dims or (1,)
    p = np.real(np.trace(cond, axis1=1, axis2=2))
    if p.min() < -1e-12:
        raise ValueError(f"negative outcome probability {p.min():.3e}")
    p = np.clip(p, 0.0, None)
    d_mem = cond.shape[1]
    states = []
    for pk, ck in zip(p, cond):
        if pk > 1e-14:
            states.append(DensityOperator(ck / pk, mem_dims))
        else:
            states.append(DensityOperator(np.eye(d_mem) / d_mem, mem_dims))
    return ClassicalQuantumState(p / p.sum(), tuple(states))


def _entropy_unchecked(m: np.ndarray) -> float:
    w = clamp_eigenvalues(np.linalg.eigvalsh((m + m.conj().T) / 2))
    return entropy_of_eigenvalues(w)


def conditional_entropy_of_outcome(cq: ClassicalQuantumState) -> float:
    """S(X|B) = H(p) + sum_x p_x S(rho_x) - S(sum_x p_x rho_x)."""
    p = cq.probabilities
    h = shannon_entropy(p)
    avg = sum(pk * s.entropy() for pk, s in zip(p, cq.conditional_states) if pk > 0)
    return h + avg - _entropy_unchecked(cq.memory_state())


def joint_entropy(cq: ClassicalQuantumState) -> float:
    """S(rho_XB) from the explicit block-diagonal joint matrix."""
    return _entropy_unchecked(cq.joint_matrix())


def holevo_information(cq: ClassicalQuantumState) -> float:
    """I(X;B) = S(B) - sum_x p_x S(rho_x)."""
    avg = sum(pk * s.entropy() for pk, s in zip(cq.probabilities, cq.conditional_states) if pk > 0)
    return _entropy_unchecked(cq.memory_state()) - avg


def conditional_entropy_of_measurement(m: Measurement, rho: DensityOperator, measured: int = 0) -> float:
    return conditional_entropy_of_outcome(post_measurement_state(m, rho, measured))


def _check_pairing(pairing, k: int) -> list[int]:
    if pairing is None:
        return list(range(k))
    pairing = [int(x) for x in pairing]
    if sorted(pairing) != list(range(k)):
        raise ValueError(f"pairing {pairing} is not a permutation of {k} outcomes")
    return pairing


def joint_error_probability(m: Measurement, rho: DensityOperator, pairing=None) -> float:
    """p_e = 1 - sum_k Tr{(L_k (x) L_pi(k)) rho}, m applied on both factors.

    The identity pairing counts equal outcome labels as agreement; the
    singlet, for example, needs the swap pairing to register zero error.
    """
    if rho.n_factors != 2 or rho.dims[0] != rho.dims[1]:
        raise ValueError(f"need a bipartite state with equal factor dimensions, got {rho.dims}")
    if m.dim != rho.dims[0]:
        raise ValueError(f"measurement dimension {m.dim} does not match factors {rho.dims}")
    pi = _check_pairing(pairing, len(m))
    agree = sum(np.real(np.trace(np.kron(m.elements[k], m.elements[pi[k]]) @ rho.matrix))
                for k in range(len(m)))
    return float(min(max(1 - agree, 0.0), 1.0))


def negation_pairing(d: int) -> list[int]:
    """a -> -a mod d, the correlation of Fourier outcomes on the maximally entangled state."""
    return [(-a) % d for a in range(d)]


# --- measurement specs for the CLI ---

def measurement_from_json(obj: dict, label: str = "file") -> Measurement:
    if "elements" not in obj:
        raise ValueError("measurement file needs an 'elements' list")
    els = tuple(matrix_from_json(e) for e in obj["elements"])
    return Measurement(els, els[0].shape[0], label)


def parse_measurement(spec: str, d: int) -> Measurement:
    """Resolve 'pauli-x', 'pauli-y', 'pauli-z', 'comp', 'fourier', or a JSON file path."""
    named = {"pauli-x": pauli_x, "pauli-y": pauli_y, "pauli-z": pauli_z}
    if spec in named:
        if d != 2:
            raise ValueError(f"{spec} needs a qubit factor, measured factor has dimension {d}")
        return named[spec]()
    if spec == "comp":
        return computational(d)
    if spec == "fourier":
        return fourier(d)
    path = Path(spec)
    if not path.is_file():
        raise ValueError(f"unknown measurement spec {spec!r}")
    m = measurement_from_json(json.loads(path.read_text()), label=path.name)
    if m.dim != d:
        raise ValueError(f"measurement file acts on dimension {m.dim}, factor has {d}")
    return m
