"""Exact quadrature rules for band-limited functions on SO(2) and SO(3)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .groups import Rotation, from_euler_zyz


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes on K = SO(n) with weights summing to one.

    For n = 2 ``angles`` has shape (N,); for n = 3 it has shape (N, 3) and
    holds zyz Euler angles. ``degree`` is the largest Wigner index (or
    Fourier mode) integrated exactly, including products up to that total.
    """

    n: int
    degree: int
    angles: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.weights)

    @property
    def nodes(self):
        """Iterator of (Rotation, weight) pairs."""
        for a, w in zip(self.angles, self.weights):
            if self.n == 2:
                yield Rotation.from_angle(float(a)), float(w)
            else:
                yield Rotation(from_euler_zyz(*a)), float(w)

    def matrices(self) -> np.ndarray:
        """Stack of node rotation matrices, shape (N, n, n)."""
        if self.n == 2:
            c, s = np.cos(self.angles), np.sin(self.angles)
            return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)
        a, b, g = self.angles.T
        return _euler_stack(a, b, g)


def _euler_stack(a, b, g):
    ca, sa, cb, sb, cg, sg = np.cos(a), np.sin(a), np.cos(b), np.sin(b), np.cos(g), np.sin(g)
    out = np.empty(a.shape + (3, 3))
    out[..., 0, 0] = ca * cb * cg - sa * sg
    out[..., 0, 1] = -ca * cb * sg - sa * cg
    out[..., 0, 2] = ca * sb
    out[..., 1, 0] = sa * cb * cg + ca * sg
    out[..., 1, 1] = -sa * cb * sg + ca * cg
    out[..., 1, 2] = sa * sb
    out[..., 2, 0] = -sb * cg
    out[..., 2, 1] = sb * sg
    out[..., 2, 2] = cb
    return out


@dataclass(frozen=True, eq=False)
class ProductRule:
    """SO(3) rule kept in factored form: uniform alpha and gamma, Gauss-Legendre in cos(beta)."""

    alphas: np.ndarray
    betas: np.ndarray
    beta_weights: np.ndarray
    gammas: np.ndarray


@lru_cache(maxsize=64)
def _so3_factors(degree: int) -> ProductRule:
    n_ag = degree + 1
    n_b = degree // 2 + 1
    x, w = np.polynomial.legendre.leggauss(n_b)
    ang = 2 * np.pi * np.arange(n_ag) / n_ag
    for arr in (ang, w):
        arr.setflags(write=False)
    betas = np.arccos(x)
    betas.setflags(write=False)
    return ProductRule(ang, betas, w / 2, ang)


def so3_factors(degree: int) -> ProductRule:
    return _so3_factors(int(degree))


@lru_cache(maxsize=64)
def _quadrature(n: int, degree: int) -> QuadratureRule:
    if n == 2:
        N = 2 * degree + 1
        angles = 2 * np.pi * np.arange(N) / N
        weights = np.full(N, 1.0 / N)
    elif n == 3:
        f = _so3_factors(degree)
        A, B, G = np.meshgrid(f.alphas, np.arange(len(f.betas)), f.gammas, indexing="ij")
        angles = np.stack([A.ravel(), f.betas[B.ravel()], G.ravel()], axis=1)
        na = len(f.alphas)
        weights = f.beta_weights[B.ravel()] / (na * na)
    else:
        raise ValueError("quadrature is available for n in {2, 3}")
    angles.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(n, degree, angles, weights)


def quadrature(n: int, degree: int) -> QuadratureRule:
    """Quadrature on SO(n) exact for matrix coefficients up to ``degree``.

    n = 2: uniform trapezoid with 2 degree + 1 nodes (exact for e^{i k theta}, |k| <= 2 degree).
    n = 3: (degree + 1)^2 uniform nodes in (alpha, gamma) times degree // 2 + 1
    Gauss-Legendre nodes in cos(beta); exact for D^j with j <= degree.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    return _quadrature(int(n), int(degree))
