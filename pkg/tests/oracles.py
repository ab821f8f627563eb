"""Independent reference implementations used only by the tests.

Everything here is written from the defining formulas with explicit loops,
full-space matrices or generic scipy routines, and shares no code paths
with the package beyond Kraus sets that are validated separately.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy.linalg import expm


def omega(d):
    return np.exp(2j * np.pi / d)


def x_loop(d):
    """X|k> = |k-1 mod d>."""
    m = np.zeros((d, d), dtype=complex)
    for k in range(d):
        m[(k - 1) % d, k] = 1
    return m


def z_loop(d):
    m = np.zeros((d, d), dtype=complex)
    for k in range(d):
        m[k, k] = omega(d) ** k
    return m


def fourier_loop(d):
    m = np.zeros((d, d), dtype=complex)
    for j in range(d):
        for k in range(d):
            m[j, k] = omega(d) ** (j * k) / np.sqrt(d)
    return m


def cluster_by_sum(n, d, edges=None):
    """``d**(-n/2) sum_k w**(sum_edges k_a k_b) |k_1 .. k_n>`` with site 1 most significant."""
    if edges is None:
        edges = [(a, a + 1) for a in range(1, n)]
    psi = np.zeros(d**n, dtype=complex)
    for idx, ks in enumerate(itertools.product(range(d), repeat=n)):
        phase = sum(ks[a - 1] * ks[b - 1] for a, b in edges)
        psi[idx] = omega(d) ** (phase % d)
    return psi / np.sqrt(d**n)


def op_on_site(op, d, n, site):
    out = np.eye(1)
    for s in range(1, n + 1):
        out = np.kron(out, op if s == site else np.eye(d))
    return out


def lindblad_expm(rho0, jump_ops, t):
    """Exact solution of ``drho/dt = sum_L (L rho L^+ - {L^+L, rho}/2)`` via the Liouvillian.

    Column-stacking convention: ``vec(A X B) = (B^T (x) A) vec(X)``.
    """
    d = rho0.shape[0]
    eye = np.eye(d)
    liou = np.zeros((d * d, d * d), dtype=complex)
    for op in jump_ops:
        ldl = op.conj().T @ op
        liou += np.kron(op.conj(), op) - 0.5 * np.kron(eye, ldl) - 0.5 * np.kron(ldl.T, eye)
    vec = rho0.reshape(-1, order="F")
    return (expm(liou * t) @ vec).reshape(d, d, order="F")


def random_density(d, rng, rank=None):
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_state(d, rng):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def full_space_protocol(d, n, edges, input_sites, input_state, measured, output_sites, kraus_ops):
    """Brute-force pattern simulation with full ``d**n`` matrices.

    Builds the product state from scratch, applies every controlled phase
    and every single-site Kraus operator as a full-space matrix, projects
    measured sites with full projectors and traces them out at the end.
    Returns the normalized output density matrix on ``output_sites`` (in
    that order) and the branch probability.
    """
    dim = d**n
    plus = np.full(d, 1 / np.sqrt(d), dtype=complex)
    # product state with the (possibly joint) input placed on input_sites
    rest = [s for s in range(1, n + 1) if s not in input_sites]
    psi = np.asarray(input_state, dtype=complex)
    for _ in rest:
        psi = np.kron(psi, plus)
    order = list(input_sites) + rest
    psi = np.moveaxis(psi.reshape((d,) * n), list(range(n)), [s - 1 for s in order]).reshape(-1)
    for a, b in edges:
        diag = np.zeros(dim, dtype=complex)
        for idx, ks in enumerate(itertools.product(range(d), repeat=n)):
            diag[idx] = omega(d) ** ((ks[a - 1] * ks[b - 1]) % d)
        psi = diag * psi
    rho = np.outer(psi, psi.conj())
    if kraus_ops is not None:
        for site in range(1, n + 1):
            new = np.zeros_like(rho)
            for k in kraus_ops:
                full = op_on_site(k, d, n, site)
                new += full @ rho @ full.conj().T
            rho = new
    for site, vec in measured:
        p = op_on_site(np.outer(vec, vec.conj()), d, n, site)
        rho = p @ rho @ p
    prob = np.trace(rho).real
    # trace out measured sites by contracting with their measurement vectors
    keep = list(output_sites)
    r = rho.reshape((d,) * (2 * n))
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = list(letters[n : 2 * n])
    for site, _ in measured:
        cols[site - 1] = rows[site - 1]
    out_rows = "".join(rows[s - 1] for s in keep)
    out_cols = "".join(cols[s - 1] for s in keep)
    red = np.einsum("".join(rows) + "".join(cols) + "->" + out_rows + out_cols, r)
    k = d ** len(keep)
    red = red.reshape(k, k)
    return red / prob, prob


def pure_concurrence_svd(psi, da, db):
    """``sqrt(2 (1 - sum s**4))`` from the Schmidt coefficients."""
    s = np.linalg.svd(psi.reshape(da, db), compute_uv=False)
    return float(np.sqrt(max(0.0, 2 * (1 - np.sum(s**4)))))


def convex_roof_upper_bound(rho, da, db, rng, trials=4000, max_terms=4):
    """Smallest average pure-state concurrence over random decompositions of ``rho``.

    Every decomposition is ``psi_i = sum_j V_ij sqrt(mu_j) Phi_j`` with ``V``
    a ``k x r`` isometry; the minimum over the sampled set is an upper bound
    on the convex-roof concurrence.
    """
    vals, vecs = np.linalg.eigh(rho)
    keep = vals > 1e-14
    mus, phis = vals[keep], vecs[:, keep]
    r = len(mus)
    base = phis * np.sqrt(mus)
    best = np.inf
    for _ in range(trials):
        k = rng.integers(r, max_terms + 1)
        g = rng.standard_normal((k, r)) + 1j * rng.standard_normal((k, r))
        q, _ = np.linalg.qr(g)
        v = q[:, :r]
        total = 0.0
        for i in range(k):
            unnorm = base @ v[i]
            p = np.vdot(unnorm, unnorm).real
            if p < 1e-15:
                continue
            total += p * pure_concurrence_svd(unnorm / np.sqrt(p), da, db)
        best = min(best, total)
    return best


def werner_concurrence(p):
    """Concurrence of ``p |Phi+><Phi+| + (1-p) I/4``."""
    return max(0.0, (3 * p - 1) / 2)
