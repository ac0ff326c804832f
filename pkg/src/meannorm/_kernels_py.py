"""Pure-Python twin of the compiled ``_kernels`` module.

Same algorithms, same operation order per element; used whenever the
extension is missing or ``MEANNORM_PURE_PYTHON`` is set.
"""
import math

import numpy as np


def _round_pairs(m, rnd):
    """Circle-method pairing for round ``rnd`` of ``m`` (even) players."""
    pos = [0] + [(rnd + j - 1) % (m - 1) + 1 for j in range(1, m)]
    return [(min(pos[i], pos[m - 1 - i]), max(pos[i], pos[m - 1 - i])) for i in range(m // 2)]


def _seq_sum(x):
    # left-to-right like the compiled loop (np.sum is pairwise)
    return float(np.add.accumulate(x)[-1]) if x.size else 0.0


def jacobi_eigenvalues(a, max_sweeps=64, rel_tol=1e-15):
    """Diagonalise the symmetric matrix ``a`` in place.

    Returns ``(sweeps, off_norm)``; ``sweeps`` is -1 when the off-diagonal
    Frobenius norm did not fall below ``rel_tol * ||a||_F`` in time.
    """
    n = a.shape[0]
    if n < 2:
        return 0, 0.0
    m = n + n % 2
    schedule = [[(p, q) for p, q in _round_pairs(m, rnd) if q < n] for rnd in range(m - 1)]
    normf = math.sqrt(_seq_sum((a * a).ravel()))
    iu = np.triu_indices(n, 1)
    il = (iu[1], iu[0])
    off = 0.0
    for sweep in range(max_sweeps + 1):
        upper = a[iu]
        off = math.sqrt(2.0 * _seq_sum(upper * upper))
        if off <= rel_tol * normf:
            return sweep, off
        if sweep == max_sweeps:
            break
        thresh = 0.2 * _seq_sum(np.abs(upper)) / (n * n) if sweep < 3 else 0.0

        for pairs in schedule:
            ps, qs, ss, taus, dps, dqs = [], [], [], [], [], []
            for p, q in pairs:
                apq = float(a[p, q])
                g = 100.0 * abs(apq)
                app = float(a[p, p])
                aqq = float(a[q, q])
                if sweep > 3 and abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    a[p, q] = a[q, p] = 0.0
                    continue
                if abs(apq) <= thresh or apq == 0.0:
                    continue
                h = aqq - app
                if abs(h) + g == abs(h):
                    t = apq / h
                else:
                    theta = 0.5 * h / apq
                    t = 1.0 / (abs(theta) + math.sqrt(1.0 + theta * theta))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                h = t * apq
                ps.append(p)
                qs.append(q)
                ss.append(s)
                taus.append(s / (1.0 + c))
                dps.append(app - h)
                dqs.append(aqq + h)
            if not ps:
                continue
            ps = np.array(ps)
            qs = np.array(qs)
            s = np.array(ss)
            tau = np.array(taus)
            # rows: A <- J^T A
            x = a[ps]
            y = a[qs]
            a[ps] = x - s[:, None] * (y + x * tau[:, None])
            a[qs] = y + s[:, None] * (x - y * tau[:, None])
            # columns: A <- A J
            x = a[:, ps]
            y = a[:, qs]
            a[:, ps] = x - s * (y + x * tau)
            a[:, qs] = y + s * (x - y * tau)
            a[ps, ps] = dps
            a[qs, qs] = dqs
            a[ps, qs] = 0.0
            a[qs, ps] = 0.0
        a[il] = a[iu]
    return -1, off


def neumaier_sum(x):
    s = 0.0
    comp = 0.0
    for v in np.asarray(x, dtype=np.float64).tolist():
        t = s + v
        if abs(s) >= abs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
    return s + comp


def neumaier_cumsum(x):
    values = np.asarray(x, dtype=np.float64).tolist()
    out = np.empty(len(values), dtype=np.float64)
    s = 0.0
    comp = 0.0
    for i, v in enumerate(values):
        t = s + v
        if abs(s) >= abs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
        out[i] = s + comp
    return out


def neumaier_rowsums(m):
    m = np.asarray(m, dtype=np.float64)
    return np.array([neumaier_sum(row) for row in m], dtype=np.float64)
