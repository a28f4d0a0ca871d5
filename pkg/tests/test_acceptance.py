"""The eight acceptance criteria, each at its stated tolerance.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import time

import numpy as np
import pytest

from discord_eur import closed_forms as cf
from discord_eur.bounds import (
    bound_report,
    eof_lower_bound,
    new_bound,
    proof_chain_check,
    refined_bound,
    tripartite_report,
    uncertainty_sum,
)
from discord_eur.cli import figure1_rows
from discord_eur.correlations import DEFAULT_CONFIG, discord, mutual_information, optimize_classical_correlation
from discord_eur.matrix_core import binary_entropy
from discord_eur.measurements import computational, fourier, pauli_x, pauli_z
from discord_eur.states import (
    classical_quantum,
    isotropic,
    maximally_entangled,
    maximally_mixed,
    product,
    random_density,
    random_pure,
    werner_general,
)

pytestmark = pytest.mark.acceptance

LAMBDAS = np.round(np.linspace(0, 1, 21), 12)
PX, PZ = pauli_x(), pauli_z()


def test_werner_two_qubit_curve(record_criterion):
    t0 = time.perf_counter()
    rows = figure1_rows(101, DEFAULT_CONFIG)
    elapsed = time.perf_counter() - t0
    p = np.array([r["p"] for r in rows])
    new = np.array([r["new_bound"] for r in rows])
    total = np.array([r["uncertainty_sum"] for r in rows])
    berta = np.array([r["berta_bound"] for r in rows])
    target = np.array([2 * binary_entropy((1 - x) / 2) for x in p])

    err_closed = np.max(np.abs(new - target))
    err_sum = np.max(np.abs(new - total))
    below = np.all(berta <= new + 1e-12)
    inner = (p > 0.1) & (p < 0.9)
    gap = np.max((new - berta)[inner])
    ok = len(rows) == 101 and err_closed <= 1e-9 and err_sum <= 1e-9 and below and gap > 0.01 and elapsed < 5
    record_criterion(1, "two-qubit Werner curve", ok,
                     f"|new-2h|={err_closed:.1e}, |new-sum|={err_sum:.1e}, max gap={gap:.3f}, {elapsed:.2f}s")
    assert ok


def _family_tightness(family, make, number, record_criterion):
    t0 = time.perf_counter()
    worst_new = worst_sum = 0.0
    for d in (2, 3, 4, 5):
        P, Q = computational(d), fourier(d)
        for lam in LAMBDAS:
            pt = cf.FamilyPoint(family, d, lam)
            numeric = uncertainty_sum(P, Q, make(d, lam))
            worst_new = max(worst_new, abs(numeric - cf.new_bound(pt)))
            worst_sum = max(worst_sum, abs(numeric - cf.uncertainty_sum(pt)))
    elapsed = time.perf_counter() - t0
    ok = worst_new <= 1e-9 and worst_sum <= 1e-9 and elapsed < 30
    record_criterion(number, f"{family} tightness", ok,
                     f"max |sum-new|={worst_new:.1e}, max |sum-closed sum|={worst_sum:.1e}, {elapsed:.2f}s")
    assert ok


def test_werner_tightness(record_criterion):
    _family_tightness("werner", werner_general, 2, record_criterion)


def test_isotropic_tightness(record_criterion):
    _family_tightness("isotropic", isotropic, 3, record_criterion)


def test_classical_correlation_search_against_closed_forms(record_criterion):
    t0 = time.perf_counter()
    worst_under = worst_over = 0.0
    for family, make in (("werner", werner_general), ("isotropic", isotropic)):
        for d in (2, 3):
            for lam in np.round(np.linspace(0, 1, 11), 12):
                j = optimize_classical_correlation(make(d, lam), 0, DEFAULT_CONFIG).value
                diff = j - cf.classical_correlation(cf.FamilyPoint(family, d, lam))
                worst_under = max(worst_under, -diff)
                worst_over = max(worst_over, diff)
    elapsed = time.perf_counter() - t0
    ok = worst_under <= 1e-3 and worst_over <= 1e-9 and elapsed < 300
    record_criterion(4, "optimizer J_A vs closed forms", ok,
                     f"max undershoot={worst_under:.1e}, max overshoot={worst_over:.1e}, {elapsed:.1f}s")
    assert ok


def test_memory_bounds_on_random_two_qubit_states(record_criterion):
    pairs = [(PX, PZ), (computational(2), fourier(2))]
    cands = [m for pair in pairs for m in pair]
    worst_order = np.inf
    worst_identity = 0.0
    worst_step = np.inf
    for seed in range(500):
        rho = random_density([2, 2], seed)
        j = optimize_classical_correlation(rho, 0, DEFAULT_CONFIG, candidates=cands).value
        for P, Q in pairs:
            rep = bound_report(P, Q, rho, classical_corr=j)
            worst_order = min(worst_order, rep.uncertainty_sum - rep.new_bound, rep.new_bound - rep.berta_bound)
            for step in proof_chain_check(P, Q, rho, classical_corr=j):
                if step.kind == "identity":
                    worst_identity = max(worst_identity, abs(step.slack))
                else:
                    worst_step = min(worst_step, step.slack)
    ok = worst_order >= -1e-6 and worst_identity <= 1e-9 and worst_step >= -1e-6
    record_criterion(5, "memory bounds never violated", ok,
                     f"min ordering slack={worst_order:.1e}, max identity error={worst_identity:.1e}, "
                     f"min inequality slack={worst_step:.1e}")
    assert ok


def test_endpoint_exactness(record_criterion):
    errs = []
    for d in (2, 3):
        P, Q = computational(d), fourier(d)
        rho = maximally_entangled(d)
        errs += [abs(uncertainty_sum(P, Q, rho)), abs(new_bound(P, Q, rho))]
    prod_err = 0.0
    for seed in range(5):
        for da, db in ((2, 2), (2, 3), (3, 2)):
            a = random_density([da], seed)
            rho = product(a, random_density([db], seed + 100))
            P, Q = computational(da), fourier(da)
            prod_err = max(prod_err, abs(new_bound(P, Q, rho) - refined_bound(P, Q, a)))
        a = random_pure([2], seed)
        prod_err = max(prod_err, abs(new_bound(PX, PZ, product(a, maximally_mixed([2]))) - refined_bound(PX, PZ, a)))
    cq_term = 0.0
    for seed in range(5):
        for k in (2, 3):
            probs = np.random.default_rng(seed).dirichlet(np.ones(k))
            rho = classical_quantum(probs, [random_density([2], 10 * seed + i) for i in range(k)])
            j = optimize_classical_correlation(rho, 0, DEFAULT_CONFIG).value
            cq_term = max(cq_term, max(0.0, mutual_information(rho) - 2 * j), abs(discord(rho)))
    ok = max(errs) <= 1e-9 and prod_err <= 1e-9 and cq_term <= 1e-6
    record_criterion(6, "endpoint exactness", ok,
                     f"entangled max={max(errs):.1e}, product max={prod_err:.1e}, classical-quantum term={cq_term:.1e}")
    assert ok


def test_entanglement_of_formation_example(record_criterion):
    value = eof_lower_bound(PX, PZ, maximally_entangled(2))
    ok = abs(value - 1.0) <= 1e-9
    record_criterion(7, "entanglement-of-formation bound on a Bell state", ok, f"value={value!r}")
    assert ok


def test_tripartite_bound_on_random_pure_states(record_criterion):
    worst = np.inf
    for seed in range(500):
        rep = tripartite_report(PX, PZ, random_pure([2, 2, 2], seed), DEFAULT_CONFIG)
        worst = min(worst, rep.slack)
    ok = worst >= -1e-6
    record_criterion(8, "tripartite bound on random pure states", ok, f"min slack={worst:.2e}")
    assert ok
