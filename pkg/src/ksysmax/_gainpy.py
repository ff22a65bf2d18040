"""Pure-numpy gain kernels (fallback backend).

Same signatures as the compiled module ksysmax._gainc. All candidate index
arrays are int64; state arrays are float64 and owned by the objective.
"""

import numpy as np


def cd_gains(colsum, diag, simsum, cands):
    # coverage-diversity / graph-cut shape: colsum[c] - 2*simsum[c] - diag[c]
    return colsum[cands] - 2.0 * simsum[cands] - diag[cands]


def fl_gains(sim, curmax, covsum, simsum, diag, inv_n, cands, nonempty):
    # facility-location coverage improvement minus scaled redundancy
    cols = sim[:, cands]
    if nonempty:
        cov = np.maximum(cols, curmax[:, None]).sum(axis=0) - covsum
    else:
        cov = cols.sum(axis=0)
    return cov - (2.0 * simsum[cands] + diag[cands]) * inv_n


def sr_gains(indptr, indices, weights, alpha, wsum, seeded, n_products, cands):
    m = len(cands)
    out = np.empty(m, dtype=np.float64)
    for t in range(m):
        c = int(cands[t])
        v, i = divmod(c, n_products)
        g = -alpha[v, i] * np.sqrt(wsum[v, i])
        lo, hi = indptr[v], indptr[v + 1]
        for e in range(lo, hi):
            u = indices[e]
            if u == v or seeded[u, i]:
                continue
            w0 = wsum[u, i]
            g += alpha[u, i] * (np.sqrt(w0 + weights[e]) - np.sqrt(w0))
        out[t] = g
    return out
