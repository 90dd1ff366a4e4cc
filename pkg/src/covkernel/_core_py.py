"""Pure numpy implementations of the compiled inner loops in ``_core.pyx``."""
import math

import numpy as np

_RESCALE = 1e140
_LOG_RESCALE = math.log(_RESCALE)


def log_bessel_series(alpha, wsq):
    """log of sum_k (wsq/4)^k / (k! (k+alpha)!) and the cancellation ratio."""
    q = np.atleast_1d(np.asarray(wsq, dtype=np.complex128)).ravel() * 0.25
    n = q.size
    qa = np.abs(q)
    t = np.ones(n, dtype=np.complex128)
    s = np.ones(n, dtype=np.complex128)
    sabs = np.ones(n)
    shift = np.zeros(n)
    active = np.ones(n, dtype=bool)
    k = 0
    while active.any():
        k += 1
        idx = np.nonzero(active)[0]
        tk = t[idx] * q[idx] / (float(k) * float(k + alpha))
        ta = np.abs(tk)
        sk = s[idx] + tk
        sa = sabs[idx] + ta
        big = sa > _RESCALE
        if big.any():
            tk[big] /= _RESCALE
            sk[big] /= _RESCALE
            sa[big] /= _RESCALE
            shift[idx[big]] += _LOG_RESCALE
            ta = np.abs(tk)
        t[idx], s[idx], sabs[idx] = tk, sk, sa
        done = (float(k) * float(k + alpha) > qa[idx]) & (ta <= 1e-17 * sa)
        active[idx[done]] = False
        if k > 10_000_000:
            break
    prefix = -math.lgamma(alpha + 1.0)
    mag = np.abs(s)
    with np.errstate(divide="ignore"):
        out = np.log(s.astype(np.complex128)) + shift + prefix
        loss = sabs / mag
    zero = mag == 0
    out[zero] = -np.inf
    loss[zero] = np.inf
    return out, loss


def charpoly_products(z, mu, nu):
    """det(Z_b - mu) det(Z_b - nu) for a stack of square matrices ``z[b]``."""
    z = np.asarray(z)
    if z.ndim != 3 or z.shape[1] != z.shape[2]:
        raise ValueError("expected a (batch, m, m) array")
    m = z.shape[1]
    if m == 0:
        return np.ones(z.shape[0])
    eye = np.eye(m)
    d1 = np.linalg.det(z - mu * eye)
    d2 = np.linalg.det(z - nu * eye)
    return np.real(d1 * d2).astype(np.float64)
