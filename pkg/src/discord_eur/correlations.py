"""Conditional entropy, mutual information, classical correlation and discord.

The classical correlation J_A is a maximization over measurements on the
measured factor. It is searched over rank-one projective measurements,
written as the columns of a unitary ``U``; the value returned is therefore
a certified lower bound on the true J_A.

Search strategy: seeded Haar-random starting unitaries (plus, for a qubit,
the best point of a dense Bloch-sphere grid) are refined by coordinate
sweeps. Each sweep visits every column pair (i, j) and both one-parameter
rotation generators of that pair, doing a coarse angle scan followed by a
golden-section search on the bracket around the best scan point. All
restarts are advanced together as one batch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import entr

from .matrix_core import batched_entropy
from .measurements import (
    Measurement,
    from_unitary,
    holevo_information,
    post_measurement_state,
)
from .states import DensityOperator

GOLDEN = (np.sqrt(5) - 1) / 2
LN2 = np.log(2.0)


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    seed: int = 0
    tol: float = 1e-9
    max_sweeps: int = 500
    max_dim: int = 4
    allow_large: bool = False
    grid_step: float = np.pi / 200
    scan_points: int = 12
    golden_iters: int = 36


DEFAULT_CONFIG = OptimizerConfig()


@dataclass(frozen=True, eq=False)
class ClassicalCorrelationResult:
    value: float
    measurement: Measurement
    sweeps: int
    evaluations: int
    restarts: int
    from_candidate: bool = False
    restart_values: np.ndarray = field(default=None, repr=False)


@dataclass(frozen=True, eq=False)
class CorrelationReport:
    conditional_entropy_AB: float
    mutual_information: float
    classical_correlation: float
    discord: float
    optimizer_iterations: int
    optimizer_best_measurement: Measurement
    classical_correlation_is_lower_bound: bool = True

    def as_dict(self) -> dict:
        return {
            "conditional_entropy_AB": self.conditional_entropy_AB,
            "mutual_information": self.mutual_information,
            "classical_correlation": self.classical_correlation,
            "discord": self.discord,
            "optimizer_iterations": self.optimizer_iterations,
            "classical_correlation_is_lower_bound": self.classical_correlation_is_lower_bound,
        }


def _as_factor_list(x) -> list[int]:
    if isinstance(x, (int, np.integer)):
        return [int(x)]
    return sorted(set(int(i) for i in x))


def conditional_entropy(rho: DensityOperator, conditioned_on=1) -> float:
    """S(rho) - S(rho restricted to the conditioning factors); may be negative."""
    if rho.n_factors < 2:
        raise ValueError("conditional entropy needs at least two factors")
    return rho.entropy() - rho.marginal(_as_factor_list(conditioned_on)).entropy()


def mutual_information(rho: DensityOperator, measured: int = 0) -> float:
    """I(A;B) between the ``measured`` factor and all remaining factors."""
    if rho.n_factors < 2:
        raise ValueError("mutual information needs at least two factors")
    rest = [i for i in range(rho.n_factors) if i != measured]
    return rho.marginal(measured).entropy() + rho.marginal(rest).entropy() - rho.entropy()


class _HolevoObjective:
    """I(X;B) for projective measurements given by unitary columns.

    With unnormalized conditionals s_x = <u_x| rho |u_x>_A,
    I = S(B) + sum_x t(s_x) where t(s) = -(H(s) + p log2 p) and H is the
    unnormalized spectral entropy, so a rotation of columns i, j only
    changes two terms.
    """

    def __init__(self, rho: DensityOperator, measured: int):
        order = [measured] + [i for i in range(rho.n_factors) if i != measured]
        r = rho.permute(order) if measured != 0 else rho
        self.d = rho.dims[measured]
        self.d_mem = rho.dim // self.d
        blocks = r.matrix.reshape(self.d, self.d_mem, self.d, self.d_mem).transpose(0, 2, 1, 3)
        # s = sum_ab conj(u_a) u_b R[a, b] as one matmul over the flattened (a, b) index
        self.flat_blocks = np.ascontiguousarray(blocks).reshape(self.d * self.d, self.d_mem * self.d_mem)
        self.flat_traces = np.einsum("abii->ab", blocks).reshape(-1)
        memory = np.einsum("aaij->ij", blocks)
        self.s_memory = float(batched_entropy(memory))
        self.evaluations = 0

    def column_terms(self, u: np.ndarray) -> np.ndarray:
        """t(s) for column vectors u of shape (..., d)."""
        self.evaluations += int(np.prod(u.shape[:-1]))
        lead = u.shape[:-1]
        w = (u.conj()[..., :, None] * u[..., None, :]).reshape(-1, self.d * self.d)
        s = (w @ self.flat_blocks).reshape(lead + (self.d_mem, self.d_mem))
        p = np.real(w @ self.flat_traces).reshape(lead)
        return entr(np.clip(p, 0.0, None)) / LN2 - batched_entropy(s)

    def value(self, unitaries: np.ndarray) -> np.ndarray:
        cols = np.swapaxes(unitaries, -1, -2)  # (..., d columns, d entries)
        return self.s_memory + self.column_terms(cols).sum(axis=-1)


def _rotate(ui: np.ndarray, uj: np.ndarray, theta: np.ndarray, kind: int):
    c = np.cos(theta)[..., None]
    s = np.sin(theta)[..., None]
    if kind == 0:
        return c * ui + s * uj, -s * ui + c * uj
    return c * ui + 1j * s * uj, 1j * s * ui + c * uj


@lru_cache(maxsize=4)
def _bloch_grid(step: float) -> tuple[np.ndarray, np.ndarray]:
    """Bloch vectors n on a (theta, phi) grid over the upper hemisphere, with
    the matching basis unitaries [|n>, |-n>].

    |-n> is the antipode of |n>, so the hemisphere covers every qubit basis.
    """
    thetas = np.arange(0.0, np.pi / 2 + step / 2, step)
    phis = np.arange(0.0, 2 * np.pi, step)
    t, f = np.meshgrid(thetas, phis, indexing="ij")
    t, f = t.ravel(), f.ravel()
    n = np.stack([np.sin(t) * np.cos(f), np.sin(t) * np.sin(f), np.cos(t)], axis=1)
    c, s = np.cos(t / 2), np.sin(t / 2)
    ph = np.exp(1j * f)
    u = np.empty((t.size, 2, 2), dtype=complex)
    u[:, 0, 0] = c
    u[:, 1, 0] = ph * s
    u[:, 0, 1] = -np.conj(ph) * s
    u[:, 1, 1] = c
    n.setflags(write=False)
    u.setflags(write=False)
    return n, u


_PAULIS = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)


def _qubit_grid_start(obj: "_HolevoObjective", step: float) -> np.ndarray:
    """Best grid basis for a qubit measured factor.

    The conditionals of {|n>, |-n>} are (rho_B +- n.T)/2 with
    T_k = Tr_A[(sigma_k (x) I) rho], so the grid costs one real matmul.
    """
    n, u = _bloch_grid(step)
    # Tr_A[(L (x) I) rho] = vec(L^T) . flat_blocks
    pauli_t = np.stack([p.T.reshape(-1) for p in _PAULIS])
    tk = pauli_t @ obj.flat_blocks
    tr = np.real(pauli_t @ obj.flat_traces)
    half = np.eye(2).reshape(-1) @ obj.flat_blocks / 2
    dm = obj.d_mem
    shift = (n @ tk) / 2
    total = np.zeros(len(n))
    for sign in (1.0, -1.0):
        sig = (half + sign * shift).reshape(-1, dm, dm)
        p = (1 + sign * (n @ tr)) / 2
        total += entr(np.clip(p, 0.0, None)) / LN2 - batched_entropy(sig)
    return u[int(np.argmax(total))]


@lru_cache(maxsize=64)
def _haar_batch(d: int, seed: int, restarts: int) -> np.ndarray:
    """Haar starting unitaries, one per restart, restart k drawn from the k-th spawned seed."""
    out = np.empty((restarts, d, d), dtype=complex)
    for k, ss in enumerate(np.random.SeedSequence(seed).spawn(restarts)):
        rng = np.random.default_rng(ss)
        z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
        q, r = np.linalg.qr(z)
        out[k] = q * (np.diag(r) / np.abs(np.diag(r)))
    out.setflags(write=False)
    return out


def _line_search(obj: _HolevoObjective, U: np.ndarray, T: np.ndarray,
                 i: int, j: int, kind: int, cfg: OptimizerConfig):
    """Maximize columns i, j over rotation angle for every batch member."""
    ui, uj = U[:, :, i], U[:, :, j]
    current = T[:, i] + T[:, j]

    def f(theta):
        a, b = _rotate(ui[:, None, :] if theta.ndim == 2 else ui,
                       uj[:, None, :] if theta.ndim == 2 else uj, theta, kind)
        return obj.column_terms(a) + obj.column_terms(b)

    # period pi/2: rotating by pi/2 only permutes the basis up to phases
    k = cfg.scan_points
    grid = -np.pi / 4 + (np.pi / 2) * np.arange(k) / k
    scan = f(np.broadcast_to(grid, (U.shape[0], k)).copy())
    best = np.argmax(scan, axis=1)
    h = (np.pi / 2) / k
    center = grid[best]
    a, b = center - h, center + h
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(cfg.golden_iters):
        left = f1 >= f2
        nb = np.where(left, x2, b)
        na = np.where(left, a, x1)
        xnew = np.where(left, nb - GOLDEN * (nb - na), na + GOLDEN * (nb - na))
        fnew = f(xnew)
        x1, x2 = np.where(left, xnew, x2), np.where(left, x1, xnew)
        f1, f2 = np.where(left, fnew, f2), np.where(left, f1, fnew)
        a, b = na, nb

    cand_theta = np.stack([np.zeros_like(center), center, x1, x2], axis=1)
    cand_val = np.stack([current, scan[np.arange(len(best)), best], f1, f2], axis=1)
    pick = np.argmax(cand_val, axis=1)
    theta = cand_theta[np.arange(len(pick)), pick]
    moved = pick != 0
    if np.any(moved):
        ni, nj = _rotate(ui[moved], uj[moved], theta[moved], kind)
        U = U.copy()
        U[moved, :, i] = ni
        U[moved, :, j] = nj
        T = T.copy()
        T[moved, i] = obj.column_terms(ni)
        T[moved, j] = obj.column_terms(nj)
    return U, T


def optimize_classical_correlation(rho: DensityOperator, measured: int = 0,
                                   config: OptimizerConfig | None = None,
                                   candidates: Sequence[Measurement] = ()) -> ClassicalCorrelationResult:
    """Maximize I(X;B) over measurements X on factor ``measured``.

    ``candidates`` are extra measurements (any POVM) whose I(X;B) is also
    evaluated; the result is the best value seen anywhere, which keeps it a
    valid lower bound on J_A.
    """
    cfg = config or DEFAULT_CONFIG
    if rho.n_factors < 2:
        raise ValueError("classical correlation needs a state with a memory factor")
    if not 0 <= measured < rho.n_factors:
        raise ValueError(f"factor {measured} out of range")
    d = rho.dims[measured]
    if d > cfg.max_dim and not cfg.allow_large:
        raise ValueError(f"measured factor has dimension {d} > optimizer limit {cfg.max_dim}; "
                         "set allow_large to override")

    obj = _HolevoObjective(rho, measured)
    if d == 1:
        return ClassicalCorrelationResult(0.0, from_unitary(np.eye(1), "trivial"), 0, 0, 0)

    starts = []
    if d == 2:
        starts.append(_qubit_grid_start(obj, cfg.grid_step))
    U = _haar_batch(d, int(cfg.seed), int(cfg.restarts)).copy()
    if starts:
        U = np.concatenate([np.stack(starts), U]) if len(U) else np.stack(starts)
    if not len(U):
        # no grid and no restarts: refine from the computational basis
        U = np.eye(d, dtype=complex)[None]

    T = obj.column_terms(np.swapaxes(U, -1, -2))
    val = obj.s_memory + T.sum(axis=1)
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    # each restart stops on its own once a sweep gains less than tol, so a
    # restart's trajectory does not depend on how many others run alongside
    active = np.ones(len(U), dtype=bool)
    sweeps = 0
    while sweeps < cfg.max_sweeps and active.any():
        prev = val.copy()
        Ua, Ta = U[active], T[active]
        for i, j in pairs:
            for kind in (0, 1):
                Ua, Ta = _line_search(obj, Ua, Ta, i, j, kind, cfg)
        U[active], T[active] = Ua, Ta
        val = obj.s_memory + T.sum(axis=1)
        sweeps += 1
        active &= (val - prev) >= cfg.tol

    k = int(np.argmax(val))
    best_val = float(val[k])
    best_m = from_unitary(U[k], "optimizer")
    from_cand = False
    for m in candidates:
        if m.dim != d:
            raise ValueError(f"candidate measurement dimension {m.dim} != {d}")
        v = holevo_information(post_measurement_state(m, rho, measured))
        if v > best_val:
            best_val, best_m, from_cand = float(v), m, True
    return ClassicalCorrelationResult(best_val, best_m, sweeps, obj.evaluations,
                                      cfg.restarts, from_cand, val)


def classical_correlation(rho: DensityOperator, measured: int = 0,
                          config: OptimizerConfig | None = None,
                          candidates: Sequence[Measurement] = ()) -> tuple[float, Measurement]:
    """J_A (lower bound from the projective search) and the measurement attaining it."""
    res = optimize_classical_correlation(rho, measured, config, candidates)
    return res.value, res.measurement


def discord(rho: DensityOperator, measured: int = 0, config: OptimizerConfig | None = None,
            candidates: Sequence[Measurement] = ()) -> float:
    """D_A = I(A;B) - J_A."""
    j, _ = classical_correlation(rho, measured, config, candidates)
    return mutual_information(rho, measured) - j


def correlation_report(rho: DensityOperator, measured: int = 0,
                       config: OptimizerConfig | None = None,
                       candidates: Sequence[Measurement] = ()) -> CorrelationReport:
    res = optimize_classical_correlation(rho, measured, config, candidates)
    rest = [i for i in range(rho.n_factors) if i != measured]
    mi = mutual_information(rho, measured)
    return CorrelationReport(
        conditional_entropy_AB=conditional_entropy(rho, rest),
        mutual_information=mi,
        classical_correlation=res.value,
        discord=mi - res.value,
        optimizer_iterations=res.sweeps,
        optimizer_best_measurement=res.measurement,
    )
