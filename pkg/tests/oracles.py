"""Independent reference implementations used only by the tests.

Nothing here imports the package: partial traces are index loops, entropies
go through scipy's matrix logarithm or general eigenvalues, and measured
states are built as explicit block matrices.
"""

import itertools

import numpy as np
import scipy.linalg
import scipy.optimize


def ptrace_loops(m, dims, keep):
    dims = list(dims)
    n = len(dims)
    keep = sorted(keep)
    gone = [i for i in range(n) if i not in keep]
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    out = np.zeros((dk, dk), dtype=complex)
    strides = [int(np.prod(dims[i + 1:])) for i in range(n)]
    kept_strides = [int(np.prod([dims[k] for k in keep[j + 1:]])) for j in range(len(keep))]
    for row in itertools.product(*[range(dims[k]) for k in keep]):
        for col in itertools.product(*[range(dims[k]) for k in keep]):
            r_out = sum(i * s for i, s in zip(row, kept_strides))
            c_out = sum(i * s for i, s in zip(col, kept_strides))
            acc = 0j
            for tr in itertools.product(*[range(dims[g]) for g in gone]):
                ri = dict(zip(keep, row)) | dict(zip(gone, tr))
                ci = dict(zip(keep, col)) | dict(zip(gone, tr))
                acc += m[sum(ri[i] * strides[i] for i in range(n)), sum(ci[i] * strides[i] for i in range(n))]
            out[r_out, c_out] = acc
    return out


def entropy_eigvals(m):
    """-sum w log2 w from general (non-Hermitian) eigenvalues."""
    w = np.real(np.linalg.eigvals(np.asarray(m)))
    w = w[w > 1e-15]
    return float(-np.sum(w * np.log2(w)))


def entropy_logm(m):
    """-Tr m log2 m via the matrix logarithm; needs a full-rank input."""
    m = np.asarray(m, dtype=complex)
    return float(-np.real(np.trace(m @ scipy.linalg.logm(m))) / np.log(2))


def shannon(p):
    p = np.asarray(p, dtype=float)
    p = p[p > 1e-15]
    return float(-np.sum(p * np.log2(p)))


def h2(x):
    return shannon([x, 1 - x])


def measured_cq(basis, rho, dims):
    """Explicit sum_x |x><x| (x) Tr_A[(|b_x><b_x| (x) I) rho] for A = factor 0, B the rest."""
    dA = dims[0]
    dB = int(np.prod(dims[1:]))
    out = np.zeros((dA * dB, dA * dB), dtype=complex)
    for x in range(dA):
        b = np.outer(basis[:, x], basis[:, x].conj())
        block = ptrace_loops(np.kron(b, np.eye(dB)) @ rho, [dA, dB], [1])
        out[x * dB:(x + 1) * dB, x * dB:(x + 1) * dB] = block
    return out


def conditional_outcome_entropy(basis, rho, dims):
    """S(X|B) = S(XB) - S(B) with both sides from explicit matrices."""
    dA = dims[0]
    dB = int(np.prod(dims[1:]))
    cq = measured_cq(basis, rho, dims)
    return entropy_eigvals(cq) - entropy_eigvals(ptrace_loops(rho, [dA, dB], [1]))


def holevo(basis, rho, dims):
    dA = dims[0]
    dB = int(np.prod(dims[1:]))
    cq = measured_cq(basis, rho, dims)
    p = [np.real(np.trace(cq[x * dB:(x + 1) * dB, x * dB:(x + 1) * dB])) for x in range(dA)]
    return shannon(p) + entropy_eigvals(ptrace_loops(rho, [dA, dB], [1])) - entropy_eigvals(cq)


def qubit_basis(theta, phi):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    ph = np.exp(1j * phi)
    return np.array([[c, -np.conj(ph) * s], [ph * s, c]])


def qubit_classical_correlation(rho, dims, starts=12, seed=0):
    """max over qubit bases of I(X;B) by Nelder-Mead from a few random starts."""
    rng = np.random.default_rng(seed)
    best = -np.inf
    f = lambda v: -holevo(qubit_basis(v[0], v[1]), rho, dims)
    for _ in range(starts):
        x0 = [rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)]
        res = scipy.optimize.minimize(f, x0, method="Nelder-Mead",
                                      options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 4000})
        best = max(best, -res.fun)
    return best


def fourier_basis(d):
    w = np.exp(2j * np.pi / d)
    return np.array([[w ** (x * z) for x in range(d)] for z in range(d)]) / np.sqrt(d)


def ginibre_state(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = g @ g.conj().T
    return m / np.trace(m).real
