"""Floating-point cross-checks on the real varieties of the I_p.

Random streams: sample ``i`` under seed ``s`` draws from a Philox-4x64
counter generator keyed by ``SeedSequence([s, i])``, so every sample is
reproducible on its own and batches can be split freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ideals import INF, IdealSpec, build_ideal, is_even_p, parse_p
from .poly import Polynomial
from .tensor_index import TensorShape

RESIDUAL_TOL = 1e-9


def rng(seed: int, index: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


@dataclass
class NumericPoint:
    shape: TensorShape
    values: np.ndarray  # float64, indexed by variable rank

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).reshape(-1)
        if self.values.size != self.shape.size:
            raise ValueError(f"point has {self.values.size} entries, shape {self.shape} needs {self.shape.size}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite entries")

    @property
    def tensor(self) -> np.ndarray:
        return self.values.reshape(self.shape.dims)

    @classmethod
    def from_tensor(cls, shape: TensorShape, T) -> NumericPoint:
        return cls(shape, np.asarray(T, dtype=float).reshape(-1))


def outer(vectors: Sequence[np.ndarray]) -> np.ndarray:
    T = np.asarray(vectors[0], dtype=float)
    for v in vectors[1:]:
        T = np.multiply.outer(T, v)
    return T


def unit_corner(shape: TensorShape) -> NumericPoint:
    """``e_1 (x) ... (x) e_1``."""
    v = np.zeros(shape.size)
    v[0] = 1.0
    return NumericPoint(shape, v)


def sample_rank_one(shape: TensorShape, p=2, seed: int = 0, index: int = 0) -> NumericPoint:
    """A real point of V(I_p).

    * even p: Gaussian factors, each scaled to unit p-norm;
    * p = inf: independent random signs in every factor;
    * p = 1: a signed standard basis tensor;
    * p = 0: unnormalized Gaussian rank-one tensor.
    """
    p = parse_p(p)
    g = rng(seed, index)
    if p == INF:
        vs = [g.choice([-1.0, 1.0], size=n) for n in shape.dims]
        return NumericPoint(shape, outer(vs).reshape(-1))
    if p == 1:
        v = np.zeros(shape.size)
        v[g.integers(shape.size)] = g.choice([-1.0, 1.0])
        return NumericPoint(shape, v)
    vs = [g.standard_normal(n) for n in shape.dims]
    if is_even_p(p):
        vs = [v / np.sum(np.abs(v) ** p) ** (1.0 / p) for v in vs]
    return NumericPoint(shape, outer(vs).reshape(-1))


def sample_batch(shape: TensorShape, p, seed: int, count: int, start: int = 0) -> np.ndarray:
    """``count`` samples as rows of an array, sample ``i`` using stream ``(seed, start + i)``."""
    return np.stack([sample_rank_one(shape, p, seed, start + i).values for i in range(count)])


class FloatEvaluator:
    """Vectorized float evaluation of a fixed list of exact polynomials."""

    def __init__(self, polys: Sequence[Polynomial], nvars: int):
        self.nvars = nvars
        self._compiled = []
        for f in polys:
            if f.is_zero():
                self._compiled.append((np.zeros((0, nvars)), np.zeros(0)))
                continue
            ms, cs = zip(*f.terms.items())
            self._compiled.append((np.array(ms, dtype=float), np.array([float(c) for c in cs])))

    def __len__(self):
        return len(self._compiled)

    def __call__(self, X: np.ndarray) -> np.ndarray:
        """Values, shape ``(m, len(polys))`` for points ``X`` of shape ``(m, nvars)``."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.zeros((X.shape[0], len(self._compiled)))
        for j, (E, c) in enumerate(self._compiled):
            if c.size:
                out[:, j] = np.prod(X[:, None, :] ** E[None, :, :], axis=2) @ c
        return out


def _evaluator(ideal: IdealSpec) -> FloatEvaluator:
    return FloatEvaluator(ideal.generators, ideal.shape.size)


def generator_residuals(X: np.ndarray, ideal: IdealSpec) -> np.ndarray:
    """Max absolute generator value at each row of ``X``."""
    if not ideal.generators:
        return np.zeros(np.atleast_2d(X).shape[0])
    return np.abs(_evaluator(ideal)(X)).max(axis=1)


def max_generator_residual(point: NumericPoint, ideal: IdealSpec) -> float:
    return float(generator_residuals(point.values, ideal)[0])


# orbit checks


def random_rotation(n: int, g: np.random.Generator, sweeps: int = 2) -> np.ndarray:
    """Random element of SO(n) as a product of Givens rotations."""
    U = np.eye(n)
    for _ in range(sweeps):
        for i in range(n):
            for j in range(i + 1, n):
                t = g.uniform(0.0, 2.0 * np.pi)
                c, s = np.cos(t), np.sin(t)
                ri, rj = U[i].copy(), U[j].copy()
                U[i] = c * ri - s * rj
                U[j] = s * ri + c * rj
    return U


def apply_mode_matrices(T: np.ndarray, mats: Sequence[np.ndarray]) -> np.ndarray:
    """``(U_1 x ... x U_d) . T``: multiply mode ``k`` of ``T`` by ``U_k``."""
    for k, U in enumerate(mats):
        T = np.moveaxis(np.tensordot(U, T, axes=(1, k)), 0, k)
    return T


def random_rotation_orbit_check(point: NumericPoint, shape: TensorShape, seed: int = 0,
                                index: int = 0, mode_matrices: Sequence[np.ndarray] | None = None,
                                ideal: IdealSpec | None = None) -> float:
    """Max I_2 generator residual after acting on ``point`` mode-wise.

    Random rotations from SO(n_1) x ... x SO(n_d) by default; explicit
    ``mode_matrices`` allow identity or non-orthogonal controls.
    """
    ideal = ideal or build_ideal(shape, 2)
    if mode_matrices is None:
        g = rng(seed, index)
        mode_matrices = [random_rotation(n, g) for n in shape.dims]
    T = apply_mode_matrices(point.tensor, mode_matrices)
    return max_generator_residual(NumericPoint.from_tensor(shape, T), ideal)


# singular values


def jacobi_singular_values(A, tol: float = 1e-15, max_sweeps: int = 100) -> np.ndarray:
    """Singular values of a small dense matrix by one-sided (Hestenes) Jacobi rotations.

    Columns are rotated pairwise until mutually orthogonal; the singular
    values are then the column norms, returned in decreasing order.
    """
    A = np.array(A, dtype=float, copy=True)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    if A.shape[0] < A.shape[1]:
        A = A.T.copy()
    n = A.shape[1]
    for _ in range(max_sweeps):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                a = A[:, i] @ A[:, i]
                b = A[:, j] @ A[:, j]
                c = A[:, i] @ A[:, j]
                if c == 0.0:
                    continue
                off = max(off, abs(c) / np.sqrt(a * b))
                zeta = (b - a) / (2.0 * c)
                t = np.sign(zeta) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta)) if zeta != 0 else 1.0
                cs = 1.0 / np.sqrt(1.0 + t * t)
                sn = cs * t
                ai = A[:, i].copy()
                A[:, i] = cs * ai - sn * A[:, j]
                A[:, j] = sn * ai + cs * A[:, j]
        if off <= tol:
            return np.sort(np.linalg.norm(A, axis=0))[::-1]
    raise RuntimeError(f"Jacobi SVD did not converge in {max_sweeps} sweeps")


def nuclear_norm_2x2_svd(matrix) -> float:
    """Sum of singular values (the matrix nuclear norm) via one-sided Jacobi."""
    return float(np.sum(jacobi_singular_values(matrix)))


# Jacobian rank


def _jacobian_evaluator(ideal: IdealSpec) -> FloatEvaluator:
    shape = ideal.shape
    derivs = [g.partial_derivative(a) for g in ideal.generators for a in shape.indices()]
    return FloatEvaluator(derivs, shape.size)


def numeric_jacobians(ideal: IdealSpec, X: np.ndarray) -> np.ndarray:
    """Float Jacobians, shape ``(m, #generators, #variables)``."""
    X = np.atleast_2d(X)
    k, n = len(ideal.generators), ideal.shape.size
    if k == 0:
        return np.zeros((X.shape[0], 0, n))
    return _jacobian_evaluator(ideal)(X).reshape(X.shape[0], k, n)


def _ranks(Js: np.ndarray, tol: float | None) -> np.ndarray:
    if Js.shape[1] == 0:
        return np.zeros(Js.shape[0], dtype=int)
    s = np.linalg.svd(Js, compute_uv=False)
    if tol is None:
        thresh = max(Js.shape[1:]) * np.finfo(float).eps * s[:, :1]
    else:
        thresh = np.full((Js.shape[0], 1), tol)
    return np.sum(s > thresh, axis=1)


def numeric_jacobian_rank(ideal: IdealSpec, point: NumericPoint, tol: float | None = None) -> int:
    """Rank of the float Jacobian by singular value thresholding.

    Default threshold: ``max(m, n) * eps * sigma_max``.
    """
    return int(_ranks(numeric_jacobians(ideal, point.values), tol)[0])


def numeric_jacobian_ranks(ideal: IdealSpec, X: np.ndarray, tol: float | None = None) -> np.ndarray:
    return _ranks(numeric_jacobians(ideal, X), tol)


def convex_combination(X: np.ndarray, g: np.random.Generator, k: int) -> np.ndarray:
    """Random convex combination of ``k`` rows of ``X``."""
    rows = X[g.choice(X.shape[0], size=k, replace=False)]
    lam = g.dirichlet(np.ones(k))
    return lam @ rows


def numeric_summary(shape: TensorShape, p=2, samples: int = 10_000, seed: int = 42,
                    combinations: int = 1000, orbit_checks: int = 100) -> dict:
    """Residual, Jacobian-rank and (for matrices) nuclear-norm statistics over seeded samples."""
    p = parse_p(p)
    ideal = build_ideal(shape, p)
    X = sample_batch(shape, p, seed, samples)
    res = generator_residuals(X, ideal)
    ranks = numeric_jacobian_ranks(ideal, X)
    hist: dict[str, int] = {}
    for r in ranks:
        hist[str(int(r))] = hist.get(str(int(r)), 0) + 1
    out = {
        "shape": str(shape),
        "samples": samples,
        "seed": seed,
        "max_residual": float(res.max()) if samples else 0.0,
        "rank_histogram": dict(sorted(hist.items(), key=lambda kv: int(kv[0]))),
        "nuclear_norm_max": None,
    }
    if is_even_p(p):
        out["expected_rank"] = shape.size - (sum(shape.dims) - shape.order)
    if p == 2 and shape.order == 2 and samples:
        g = rng(seed, samples)
        norms = [nuclear_norm_2x2_svd(convex_combination(X, g, min(4, samples)).reshape(shape.dims))
                 for _ in range(combinations)]
        out["nuclear_norm_max"] = max(norms) if norms else None
    if p == 2 and samples:
        orb = [random_rotation_orbit_check(NumericPoint(shape, X[i % samples]), shape, seed, samples + 1 + i)
               for i in range(orbit_checks)]
        out["orbit_max_residual"] = max(orb) if orb else None
    return out
