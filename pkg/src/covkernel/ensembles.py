"""Sample covariance ensembles and direct evaluation of
E[det(Z - mu) det(Z - nu)] by Monte Carlo or exhaustive enumeration.

Complex ensembles have entries X = Q1 + i Q2 with Q1, Q2 i.i.d. copies of
Q (variance 1/2); real ensembles have entries X = Q (variance 1).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .errors import ResourceError, ValidationError

DEFAULT_ENUM_BUDGET = 2 ** 20
MC_BLOCK = 4096
_ENUM_CHUNK = 1 << 14


class Beta(enum.IntEnum):
    REAL = 1
    COMPLEX = 2


@dataclass(frozen=True)
class EntryDistribution:
    """Law of the real variable Q.

    Finite-support laws carry ``values``/``probs``; the continuous laws
    (``kind`` "gaussian" or "uniform") are sampled directly.
    """

    name: str
    variance: float
    b: float
    values: tuple | None = None
    probs: tuple | None = None
    kind: str = "finite"

    @property
    def finite(self) -> bool:
        return self.values is not None

    @classmethod
    def from_support(cls, name, values, probs=None, b=None):
        values = tuple(float(v) for v in values)
        if probs is None:
            probs = (1.0 / len(values),) * len(values)
        probs = tuple(float(p) for p in probs)
        if len(values) != len(probs) or not values:
            raise ValidationError("support and probabilities must have equal nonzero length")
        if min(probs) < 0 or abs(math.fsum(probs) - 1) > 1e-12:
            raise ValidationError("probabilities must be nonnegative and sum to 1")
        mean = math.fsum(v * p for v, p in zip(values, probs))
        if abs(mean) > 1e-12:
            raise ValidationError(f"entry law must be centred (mean {mean:g})")
        var = math.fsum(v * v * p for v, p in zip(values, probs))
        b4 = math.fsum(v ** 4 * p for v, p in zip(values, probs))
        if b is not None:
            # exact moments for the built-in laws, whose atoms are irrational
            if abs(b - b4) > 1e-12 or abs(var - round(2 * var) / 2) > 1e-12:
                raise ValidationError("stated fourth moment does not match the support")
            b4, var = float(b), round(2 * var) / 2
        return cls(name, var, b4, values, probs)

    @classmethod
    def gaussian(cls, name, variance):
        return cls(name, float(variance), 3.0 * variance * variance, kind="gaussian")

    @classmethod
    def uniform(cls, name, half_width):
        c = float(half_width)
        return cls(name, c * c / 3.0, c ** 4 / 5.0, kind="uniform")

    @classmethod
    def uniform_unit(cls, name):
        """Uniform on [-sqrt 3, sqrt 3]: variance 1, fourth moment 9/5."""
        return cls(name, 1.0, 1.8, kind="uniform")

    def sample(self, rng, size):
        if self.kind == "gaussian":
            return rng.normal(0.0, math.sqrt(self.variance), size)
        if self.kind == "uniform":
            c = math.sqrt(3.0 * self.variance)
            return rng.uniform(-c, c, size)
        return rng.choice(np.asarray(self.values), size=size, p=np.asarray(self.probs))


@dataclass(frozen=True)
class EnsembleSpec:
    beta: Beta
    dist: EntryDistribution
    b: float = field(init=False)

    def __post_init__(self):
        beta = Beta(int(self.beta))
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "b", self.dist.b)
        target = 0.5 if beta is Beta.COMPLEX else 1.0
        if abs(self.dist.variance - target) > 1e-12:
            raise ValidationError(
                f"beta={int(beta)} needs Var Q = {target}, got {self.dist.variance:g}")
        if self.b < self.dist.variance ** 2 - 1e-15:
            raise ValidationError("fourth moment below squared variance")

    @property
    def b_star(self) -> float:
        return b_star(self.beta, self.b)

    @property
    def is_complex(self) -> bool:
        return self.beta is Beta.COMPLEX


def b_star(beta, b: float) -> float:
    """Fourth-cumulant factor: 2(b - 3/4) for complex, b - 3 for real entries."""
    return 2.0 * (b - 0.75) if int(beta) == 2 else b - 3.0


_S2 = 1 / math.sqrt(2.0)

DISTRIBUTIONS = {
    "real-rademacher": (Beta.REAL, EntryDistribution.from_support("real-rademacher", (-1, 1))),
    "real-gaussian": (Beta.REAL, EntryDistribution.gaussian("real-gaussian", 1.0)),
    "real-uniform3": (Beta.REAL, EntryDistribution.uniform_unit("real-uniform3")),
    "complex-sign": (Beta.COMPLEX, EntryDistribution.from_support("complex-sign", (-_S2, _S2), b=0.25)),
    "complex-gaussian": (Beta.COMPLEX, EntryDistribution.gaussian("complex-gaussian", 0.5)),
}


def ensemble(name: str) -> EnsembleSpec:
    """One of the built-in ensembles, by name."""
    try:
        beta, dist = DISTRIBUTIONS[name]
    except KeyError:
        raise ValidationError(f"unknown ensemble {name!r}; choose from {sorted(DISTRIBUTIONS)}")
    return EnsembleSpec(beta, dist)


def ensemble_for(beta: int, b: float) -> EnsembleSpec:
    """Built-in ensemble with the given beta and fourth moment b."""
    for beta_i, dist in DISTRIBUTIONS.values():
        if int(beta_i) == int(beta) and abs(dist.b - b) < 1e-12:
            return EnsembleSpec(beta_i, dist)
    raise ValidationError(f"no built-in ensemble with beta={beta} and b={b}")


def sample_covariance(X) -> np.ndarray:
    """Z = X^* X (complex) or X^T X (real); also works on a stack of matrices."""
    X = np.asarray(X)
    if X.shape[-2] < X.shape[-1]:
        raise ValidationError("data matrix needs n >= m")
    Xh = np.swapaxes(X, -1, -2)
    if np.iscomplexobj(X):
        Xh = Xh.conj()
    return Xh @ X


def char_poly_product(Z, mu: float, nu: float) -> float:
    """det(Z - mu) det(Z - nu) via pivoted LU."""
    Z = np.asarray(Z)
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1]:
        raise ValidationError("Z must be square")
    return float(_accel.charpoly_products(Z[None], float(mu), float(nu))[0])


def _check_dims(n, m):
    if m < 0 or n < m:
        raise ValidationError(f"need n >= m >= 0, got n={n}, m={m}")


def _draw_block(spec, rng, count, n, m):
    shape = (count, n, m)
    X = spec.dist.sample(rng, shape)
    if spec.is_complex:
        X = X + 1j * spec.dist.sample(rng, shape)
    return X


def mc_correlation(spec: EnsembleSpec, n: int, m: int, mu: float, nu: float,
                   reps: int, seed: int = 0):
    """Monte Carlo estimate of f(n, m; mu, nu) and its standard error.

    Replicates are drawn in blocks of ``MC_BLOCK``; block j uses a Philox
    stream keyed by (seed, j), so the result does not depend on how blocks
    are scheduled.
    """
    _check_dims(n, m)
    if reps < 2:
        raise ValidationError("reps must be at least 2")
    if m == 0:
        return 1.0, 0.0
    vals = []
    for j, start in enumerate(range(0, reps, MC_BLOCK)):
        count = min(MC_BLOCK, reps - start)
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(j,))))
        Z = sample_covariance(_draw_block(spec, rng, count, n, m))
        vals.append(_accel.charpoly_products(np.ascontiguousarray(Z), float(mu), float(nu)))
    v = np.concatenate(vals)
    est = float(np.mean(v))
    err = float(np.std(v, ddof=1) / math.sqrt(reps))
    return est, err


def _batched_det_ext(A):
    """Determinants of a stack of matrices in long double, partial pivoting."""
    A = A.copy()
    B, m, _ = A.shape
    det = np.ones(B, dtype=A.dtype)
    rows = np.arange(B)
    for k in range(m):
        piv = k + np.argmax(np.abs(A[:, k:, k]), axis=1)
        swap = piv != k
        if swap.any():
            tmp = A[rows, k, :].copy()
            A[rows, k, :] = A[rows, piv, :]
            A[rows, piv, :] = tmp
            det[swap] = -det[swap]
        d = A[:, k, k]
        det *= d
        nz = d != 0
        if k + 1 < m and nz.any():
            f = np.zeros((B, m - k - 1), dtype=A.dtype)
            f[nz] = A[nz, k + 1:, k] / d[nz, None]
            A[:, k + 1:, k:] -= f[:, :, None] * A[:, k, None, k:]
    return det


def enumerate_correlation(spec: EnsembleSpec, n: int, m: int, mu: float, nu: float,
                          budget: int = DEFAULT_ENUM_BUDGET) -> float:
    """Exact f(n, m; mu, nu) by summing over every entry configuration.

    Only for finite-support Q with s**(beta n m) <= budget.
    """
    _check_dims(n, m)
    if not spec.dist.finite:
        raise ValidationError("enumeration needs a finite-support entry law")
    if m == 0:
        return 1.0
    vals = np.asarray(spec.dist.values, dtype=np.longdouble)
    probs = np.asarray(spec.dist.probs, dtype=np.longdouble)
    s = len(vals)
    K = int(spec.beta) * n * m
    total = s ** K
    if total > budget:
        raise ResourceError(f"enumeration needs {s}^{K} = {total} states, budget {budget}")
    extended = m >= 3
    eye = np.eye(m, dtype=np.longdouble)
    parts = []
    powers = s ** np.arange(K, dtype=np.int64)
    for start in range(0, total, _ENUM_CHUNK):
        idx = np.arange(start, min(total, start + _ENUM_CHUNK), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % s
        x = vals[digits]
        w = np.prod(probs[digits], axis=1)
        X = x[:, : n * m].reshape(-1, n, m)
        if spec.is_complex:
            X = X + 1j * x[:, n * m:].reshape(-1, n, m)
        if extended:
            Z = sample_covariance(X)
            p = _batched_det_ext(Z - mu * eye) * _batched_det_ext(Z - nu * eye)
            p = np.real(p)
        else:
            Z = sample_covariance(X.astype(np.complex128 if spec.is_complex else np.float64))
            p = _accel.charpoly_products(np.ascontiguousarray(Z), float(mu), float(nu))
        parts.append(float(np.sum(w * p)))
    return math.fsum(parts)
