"""Reference computations that share no code path with the package."""

import numpy as np


def expm_taylor(a, terms=30):
    """exp(a) by scaling and squaring a truncated Taylor series."""
    norm = np.linalg.norm(a, 1)
    squarings = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0 else 0
    scaled = a / 2.0**squarings
    result = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ scaled / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


def dense_projectors(n_sites):
    """Magnetization projectors as explicit d x d matrices, ordered by outcome."""
    d = 2**n_sites
    downs = np.array([bin(i).count("1") for i in range(d)])
    return [np.diag((downs == n_sites - l).astype(float)) for l in range(n_sites + 1)]
