"""Uncertainty relations with and without quantum memory, and their applications.

Every function returns the bound value even when it is vacuous; deciding
what a negative entanglement-of-formation bound means is left to callers.
All measurements act on factor 0 (system A) unless a function says otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .correlations import (
    OptimizerConfig,
    conditional_entropy,
    mutual_information,
    optimize_classical_correlation,
)
from .matrix_core import as_matrix, binary_entropy, hermitian_part, shannon_entropy
from .measurements import (
    Measurement,
    conditional_entropy_of_measurement,
    conditional_entropy_of_outcome,
    holevo_information,
    incompatibility,
    joint_entropy,
    joint_error_probability,
    outcome_distribution,
    post_measurement_state,
)
from .states import DensityOperator, purify

IDENTITY_TOL = 1e-9


@dataclass(frozen=True)
class BoundReport:
    uncertainty_sum: float
    mu_bound: float
    refined_bound: float
    berta_bound: float
    new_bound: float
    slack_new: float
    classical_correlation: float
    discord: float
    conditional_entropy_AB: float
    state_id: str = ""
    p_id: str = ""
    q_id: str = ""

    def violations(self, tol: float = 1e-6) -> list[str]:
        """Broken orderings among the memory-assisted quantities.

        The memoryless bounds are not compared: an entangled memory can push
        the conditional sum below them.
        """
        out = []
        if self.uncertainty_sum < self.new_bound - tol:
            out.append("uncertainty_sum < new_bound")
        if self.uncertainty_sum < self.berta_bound - tol:
            out.append("uncertainty_sum < berta_bound")
        if self.new_bound < self.berta_bound - tol:
            out.append("new_bound < berta_bound")
        return out

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class ProofStep:
    name: str
    kind: str  # "identity" or "inequality"
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs


@dataclass(frozen=True)
class TripartiteReport:
    lhs: float
    rhs: float
    incompatibility_term: float
    discord_purified: float
    classical_correlation_ab: float

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs


def _expectation(op: np.ndarray, rho: DensityOperator) -> complex:
    return complex(np.trace(op @ rho.matrix))


def robertson_bound(p_obs, q_obs, rho: DensityOperator) -> tuple[float, float]:
    """Return (Delta P * Delta Q, |<[P, Q]>| / 2) for observables on a single system."""
    P = hermitian_part(as_matrix(p_obs))
    Q = hermitian_part(as_matrix(q_obs))
    if P.shape != (rho.dim, rho.dim) or Q.shape != (rho.dim, rho.dim):
        raise ValueError("observables must match the state dimension")
    dp = np.sqrt(max(np.real(_expectation(P @ P, rho) - _expectation(P, rho) ** 2), 0.0))
    dq = np.sqrt(max(np.real(_expectation(Q @ Q, rho) - _expectation(Q, rho) ** 2), 0.0))
    rhs = abs(_expectation(P @ Q - Q @ P, rho)) / 2
    return float(dp * dq), float(rhs)


def mu_bound(p: Measurement, q: Measurement) -> float:
    """-2 log2 c(P, Q)."""
    return float(-2 * np.log2(incompatibility(p, q)))


def refined_bound(p: Measurement, q: Measurement, rho: DensityOperator) -> float:
    """-2 log2 c + S(rho) for a state of the measured system alone."""
    if rho.n_factors != 1 and rho.dim != p.dim:
        raise ValueError("refined bound takes the state of the measured system only")
    return mu_bound(p, q) + rho.entropy()


def berta_bound(p: Measurement, q: Measurement, rho: DensityOperator) -> float:
    """-2 log2 c + S(A|B)."""
    _check_bipartite(rho, p, q)
    return mu_bound(p, q) + conditional_entropy(rho, 1)


def uncertainty_sum(p: Measurement, q: Measurement, rho: DensityOperator) -> float:
    """S(P|B) + S(Q|B)."""
    _check_bipartite(rho, p, q)
    return conditional_entropy_of_measurement(p, rho, 0) + conditional_entropy_of_measurement(q, rho, 0)


def outcome_entropy_sum(p: Measurement, q: Measurement, rho_a: DensityOperator) -> float:
    """H(P) + H(Q) on a single-system state."""
    return shannon_entropy(outcome_distribution(p, rho_a, 0)) + shannon_entropy(outcome_distribution(q, rho_a, 0))


def _check_bipartite(rho: DensityOperator, p: Measurement, q: Measurement) -> None:
    if rho.n_factors != 2:
        raise ValueError(f"expected a bipartite state, got factors {rho.dims}")
    if p.dim != rho.dims[0] or q.dim != rho.dims[0]:
        raise ValueError(f"measurements act on dimension {p.dim}/{q.dim}, system A has {rho.dims[0]}")


def _classical_correlation(rho, p, q, config, classical_corr):
    if classical_corr is not None:
        return float(classical_corr)
    # P and Q are evaluated as candidates so that J >= max(I(P;B), I(Q;B))
    # holds exactly, whatever the search finds.
    res = optimize_classical_correlation(rho, 0, config, candidates=(p, q))
    return res.value


def discord_excess(rho: DensityOperator, j: float) -> float:
    """D_A - J_A = I(A;B) - 2 J_A for a given classical correlation value."""
    return mutual_information(rho, 0) - 2 * j


def _entropy_terms(rho: DensityOperator) -> tuple[float, float, float]:
    """(S(A), S(B), S(AB))."""
    return rho.marginal(0).entropy(), rho.marginal(1).entropy(), rho.entropy()


def _assemble_new_bound(c_term: float, s_a: float, s_b: float, s_ab: float, j: float) -> float:
    berta = c_term + s_ab - s_b
    excess = s_a + s_b - s_ab - 2 * j
    value = berta + max(0.0, excess)
    if excess > 0:
        alt = c_term + s_a - 2 * j
        if abs(alt - value) > IDENTITY_TOL:
            raise ArithmeticError(f"bound forms disagree: {value!r} vs {alt!r}")
    return value


def new_bound(p: Measurement, q: Measurement, rho: DensityOperator,
              config: OptimizerConfig | None = None, classical_corr: float | None = None) -> float:
    """-2 log2 c + S(A|B) + max{0, D_A - J_A}.

    ``classical_corr`` overrides the optimizer (e.g. with a closed-form J_A).
    When D_A > J_A the value is cross-checked against the equivalent
    -2 log2 c + S(A) - 2 J_A.
    """
    _check_bipartite(rho, p, q)
    j = _classical_correlation(rho, p, q, config, classical_corr)
    return _assemble_new_bound(mu_bound(p, q), *_entropy_terms(rho), j)


def bound_report(p: Measurement, q: Measurement, rho: DensityOperator,
                 config: OptimizerConfig | None = None, classical_corr: float | None = None,
                 state_id: str = "") -> BoundReport:
    _check_bipartite(rho, p, q)
    j = _classical_correlation(rho, p, q, config, classical_corr)
    total = uncertainty_sum(p, q, rho)
    c_term = mu_bound(p, q)
    s_a, s_b, s_ab = _entropy_terms(rho)
    nb = _assemble_new_bound(c_term, s_a, s_b, s_ab, j)
    return BoundReport(
        uncertainty_sum=total,
        mu_bound=c_term,
        refined_bound=c_term + s_a,
        berta_bound=c_term + s_ab - s_b,
        new_bound=nb,
        slack_new=total - nb,
        classical_correlation=j,
        discord=s_a + s_b - s_ab - j,
        conditional_entropy_AB=s_ab - s_b,
        state_id=state_id,
        p_id=p.label,
        q_id=q.label,
    )


def proof_chain_check(p: Measurement, q: Measurement, rho: DensityOperator,
                      config: OptimizerConfig | None = None,
                      classical_corr: float | None = None) -> list[ProofStep]:
    """Evaluate each link of the chain that proves the discord-tightened bound.

    (i)   S(P|B) + S(Q|B) = H(P) - I(P;B) + H(Q) - I(Q;B)
    (ii)  ... >= H(P) + H(Q) - 2 J_A
    (iii) ... >= -2 log2 c + S(A) - 2 J_A
    (iv)  ... =  -2 log2 c + S(A|B) + D_A - J_A

    Step (i) compares S(X|B) computed from the conditional spectra against
    I(X;B) = H(X) + S(B) - S(XB) taken from the explicit joint matrix.
    """
    _check_bipartite(rho, p, q)
    j = _classical_correlation(rho, p, q, config, classical_corr)
    cq_p = post_measurement_state(p, rho, 0)
    cq_q = post_measurement_state(q, rho, 0)
    h_p = shannon_entropy(cq_p.probabilities)
    h_q = shannon_entropy(cq_q.probabilities)
    s_b = rho.marginal(1).entropy()
    i_p = h_p + s_b - joint_entropy(cq_p)
    i_q = h_q + s_b - joint_entropy(cq_q)

    line0 = conditional_entropy_of_outcome(cq_p) + conditional_entropy_of_outcome(cq_q)
    line1 = h_p - i_p + h_q - i_q
    line2 = h_p + h_q - 2 * j
    line3 = mu_bound(p, q) + rho.marginal(0).entropy() - 2 * j
    d_a = mutual_information(rho, 0) - j
    line4 = mu_bound(p, q) + conditional_entropy(rho, 1) + d_a - j
    return [
        ProofStep("(i) mutual-information identity", "identity", float(line0), float(line1)),
        ProofStep("(ii) I(X;B) <= J_A", "inequality", float(line1), float(line2)),
        ProofStep("(iii) state-dependent entropic bound", "inequality", float(line2), float(line3)),
        ProofStep("(iv) S(A) = S(A|B) + I(A;B)", "identity", float(line3), float(line4)),
    ]


def tripartite_report(p: Measurement, q: Measurement, rho_abe: DensityOperator,
                      config: OptimizerConfig | None = None) -> TripartiteReport:
    """S(P|B) + S(Q|E) against -2 log2 c + max{0, D_A(A|BE') - J_A(AB)}.

    E' is the ancilla of ``purify(rho_abe)``; for pure input it is trivial.
    Q is evaluated as a search candidate on the A|BE' cut and P on the A|B
    cut, which keeps the computed right-hand side a valid lower bound even
    if the search falls short of the optimum.
    """
    if rho_abe.n_factors != 3:
        raise ValueError(f"expected a tripartite state ABE, got factors {rho_abe.dims}")
    if p.dim != rho_abe.dims[0] or q.dim != rho_abe.dims[0]:
        raise ValueError("measurements must act on factor A")
    rho_ab = rho_abe.marginal([0, 1])
    rho_ae = rho_abe.marginal([0, 2])
    lhs = conditional_entropy_of_measurement(p, rho_ab, 0) + conditional_entropy_of_measurement(q, rho_ae, 0)

    psi = purify(rho_abe)  # factors A, B, E, E'
    rho_a_be = psi.regroup([[0], [1, 3]])
    j_cut = optimize_classical_correlation(rho_a_be, 0, config, candidates=(q,)).value
    d_cut = mutual_information(rho_a_be, 0) - j_cut
    j_ab = optimize_classical_correlation(rho_ab, 0, config, candidates=(p,)).value
    c_term = mu_bound(p, q)
    rhs = c_term + max(0.0, d_cut - j_ab)
    return TripartiteReport(float(lhs), float(rhs), c_term, float(d_cut), float(j_ab))


def tripartite_bound(p: Measurement, q: Measurement, rho_abe: DensityOperator,
                     config: OptimizerConfig | None = None) -> float:
    return tripartite_report(p, q, rho_abe, config).rhs


def fano_term(pe_p: float, pe_q: float, d: int) -> float:
    """b_F = h(pe_P) + pe_P log2(d-1) + h(pe_Q) + pe_Q log2(d-1)."""
    for name, x in (("pe_p", pe_p), ("pe_q", pe_q)):
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {x!r}")
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    log_d1 = np.log2(d - 1)
    return float(binary_entropy(pe_p) + pe_p * log_d1 + binary_entropy(pe_q) + pe_q * log_d1)


def _fano_for(p, q, rho, pairings) -> float:
    pair_p, pair_q = pairings if pairings is not None else (None, None)
    pe_p = joint_error_probability(p, rho, pair_p)
    pe_q = joint_error_probability(q, rho, pair_q)
    return fano_term(pe_p, pe_q, rho.dims[0])


def eof_lower_bound(p: Measurement, q: Measurement, rho: DensityOperator,
                    pairings: Sequence | None = None, config: OptimizerConfig | None = None,
                    classical_corr: float | None = None) -> float:
    """-2 log2 c + max{0, D_A - J_A} - b_F, a lower bound on the regularized E_f.

    ``pairings`` is a pair of outcome permutations (for P, then Q) telling
    which of Bob's outcomes counts as agreeing with each of Alice's.
    """
    _check_bipartite(rho, p, q)
    if rho.dims[0] != rho.dims[1]:
        raise ValueError("both parties must hold systems of equal dimension")
    j = _classical_correlation(rho, p, q, config, classical_corr)
    return mu_bound(p, q) + max(0.0, discord_excess(rho, j)) - _fano_for(p, q, rho, pairings)


def common_randomness_upper_bound(rho_abc: DensityOperator, p: Measurement, q: Measurement,
                                  pairings: Sequence | None = None,
                                  config: OptimizerConfig | None = None,
                                  purity_tol: float = 1e-9) -> float:
    """S(B) + 2 log2 c - max{0, D_A - J_A} + b_F, bounding C_D of the C|B split."""
    if rho_abc.n_factors != 3:
        raise ValueError(f"expected a tripartite state ABC, got factors {rho_abc.dims}")
    if rho_abc.entropy() > purity_tol:
        raise ValueError("common-randomness bound needs a pure tripartite state")
    rho_ab = rho_abc.marginal([0, 1])
    _check_bipartite(rho_ab, p, q)
    j = _classical_correlation(rho_ab, p, q, config, None)
    return (rho_ab.marginal(1).entropy() - mu_bound(p, q)
            - max(0.0, discord_excess(rho_ab, j)) + _fano_for(p, q, rho_ab, pairings))
