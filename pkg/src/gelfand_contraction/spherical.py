"""Projections onto tau-isotypic parts and matrix-valued spherical functions.

Phi(g) = P pi(g) P, restricted to the image of P and written in the fixed
basis of V_tau given by :func:`gelfand_contraction.repmodels.tau_matrix`.
The identification is the K-intertwiner obtained by averaging a matrix
unit over K; any two such intertwiners differ by a scalar, which cancels
when conjugating, so the resulting matrices do not depend on the model.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .actions import make_action
from .groups import CompactElement, MotionElement, Rotation, euler_zyz
from .quadrature import QuadratureRule, quadrature
from .repmodels import C_AXIS, TauModel, tau_matrix
from .specfun import bessel_j, wigner_d

PAIRS = ("compact", "motion", "lorentz")


class SphericalError(ValueError):
    """Multiplicity or quadrature problems while building a spherical function."""


# --------------------------------------------------------------------------
# Projection
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ProjectionMatrix:
    """Block-diagonal projection on an orthonormal working basis.

    ``blocks`` is a list of (indices, square block). Blocks cover disjoint
    index sets; together they describe the full matrix.
    """

    dim: int
    blocks: tuple

    @property
    def mat(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for idx, blk in self.blocks:
            out[np.ix_(idx, idx)] = blk
        return out

    @property
    def trace(self) -> complex:
        return complex(sum(np.trace(blk) for _, blk in self.blocks))

    def idempotence_defect(self) -> float:
        return max((float(np.max(np.abs(blk @ blk - blk))) for _, blk in self.blocks), default=0.0)

    def hermitian_defect(self) -> float:
        return max((float(np.max(np.abs(blk - blk.conj().T))) for _, blk in self.blocks), default=0.0)

    @property
    def rank(self) -> int:
        r = 0
        for _, blk in self.blocks:
            ev = np.linalg.eigvalsh((blk + blk.conj().T) / 2)
            r += int(np.sum(ev > 0.5))
        return r

    def image(self) -> np.ndarray:
        """Orthonormal basis of the range, dim x rank; columns ordered by block."""
        cols = []
        for idx, blk in self.blocks:
            ev, vec = np.linalg.eigh((blk + blk.conj().T) / 2)
            for k in np.flatnonzero(ev > 0.5):
                v = np.zeros(self.dim, dtype=complex)
                v[idx] = vec[:, k]
                # fix the phase so the image is reproducible
                piv = np.argmax(np.abs(v))
                cols.append(v * (abs(v[piv]) / v[piv]))
        if not cols:
            return np.zeros((self.dim, 0), dtype=complex)
        return np.stack(cols, axis=1)


def _rule_nodes(rule: QuadratureRule):
    return list(rule.nodes)


def projection_matrix(rep_action, tau: TauModel, rule: QuadratureRule | None = None,
                      factored: bool = True) -> ProjectionMatrix:
    """P = d_tau sum_nodes w conj(chi_tau(k)) pi(k) on the working basis.

    With ``factored`` the action's own blockwise evaluation of the same
    sum is used when available; otherwise the dense node sum is formed.

    Raises:
        SphericalError: rank differs from d_tau * m(tau, pi).
    """
    if rule is None:
        rule = quadrature(tau.n, rep_action.k_degree() + abs(tau.t))
    if rule.n != tau.n:
        raise SphericalError("quadrature rule and tau live on different groups")
    if factored and hasattr(rep_action, "projection_blocks"):
        blocks = tuple(rep_action.projection_blocks(tau, rule))
    else:
        dim = rep_action.dim
        P = np.zeros((dim, dim), dtype=complex)
        for k, w in _rule_nodes(rule):
            P += w * np.conj(tau.character(k)) * rep_action.k_matrix(k)
        blocks = ((np.arange(dim), tau.dim * P),)
    proj = ProjectionMatrix(rep_action.dim, blocks)
    expected = tau.dim * rep_action.multiplicity(tau)
    if proj.rank != expected:
        raise SphericalError(
            f"multiplicity mismatch: rank(P) = {proj.rank}, expected d_tau * m = {expected}")
    return proj


# --------------------------------------------------------------------------
# Identification with V_tau
# --------------------------------------------------------------------------

def schur_identify(P: ProjectionMatrix, k_action, tau: TauModel,
                   rule: QuadratureRule | None = None, seed_start: int = 0) -> np.ndarray:
    """Unitary T : image(P) -> V_tau with T pi(k) T^+ = tau(k), as a d_tau x dim matrix.

    Averages pi_W(k) E tau(k)^-1 over K for matrix units E taken in row-major
    order starting at ``seed_start``; the first non-vanishing average is
    replaced by its polar (unitary) factor.
    """
    W = P.image()
    d = tau.dim
    if W.shape[1] != d:
        raise SphericalError(f"rank(P) = {W.shape[1]} but d_tau = {d}")
    if rule is None:
        rule = quadrature(tau.n, 2 * abs(tau.t))
    nodes = _rule_nodes(rule)
    piW = [k_action.compress(k_action.embed_k(k), W) for k, _ in nodes]
    taus = [tau_matrix(tau, k) for k, _ in nodes]
    for seed in range(seed_start, d * d):
        E = np.zeros((d, d), dtype=complex)
        E[divmod(seed, d)] = 1.0
        S = sum(w * (pw @ E @ tk.conj().T) for (k, w), pw, tk in zip(nodes, piW, taus))
        if np.linalg.norm(S) < 1e-12:
            continue
        u, _, vh = np.linalg.svd(S)
        S = u @ vh
        return (W @ S).conj().T
    raise SphericalError("every seed averaged to zero; no intertwiner found")


# --------------------------------------------------------------------------
# Spherical functions
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SphericalValue:
    """Phi(g) as a d_tau x d_tau matrix in the fixed V_tau basis."""

    mat: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.mat, 2))

    def __array__(self, dtype=None, copy=None):
        return self.mat if dtype is None else self.mat.astype(dtype)


class SphericalFunction:
    """Phi_pi^tau for one (pair, representation, tau), built once and evaluated many times."""

    def __init__(self, pair: str, rep, tau: TauModel, seed_start: int = 0):
        if pair not in PAIRS:
            raise SphericalError(f"pair must be one of {PAIRS}, got {pair!r}")
        self.pair, self.rep, self.tau = pair, rep, tau
        self.action = make_action(pair, rep, tau)
        if self.action.multiplicity(tau) == 0:
            raise SphericalError(f"multiplicity 0: tau = {tau.label} does not occur in {rep}")
        self.projection = projection_matrix(self.action, tau)
        if self.projection.idempotence_defect() > 1e-8:
            raise SphericalError("projection is not idempotent; raise the quadrature degree")
        self.T = schur_identify(self.projection, self.action, tau, seed_start=seed_start)
        self._V = self.T.conj().T

    def __call__(self, g) -> SphericalValue:
        return SphericalValue(self.action.compress(g, self._V))

    def embed_k(self, k: Rotation):
        return self.action.embed_k(k)

    def equivariance_residual(self, ks) -> float:
        """max_k |T pi(k) T^+ - tau(k)| over the given rotations."""
        return max(float(np.max(np.abs(self(self.embed_k(k)).mat - tau_matrix(self.tau, k))))
                   for k in ks)


@lru_cache(maxsize=128)
def spherical_function(pair: str, rep, tau: TauModel) -> SphericalFunction:
    """Cached :class:`SphericalFunction` for hashable (pair, rep, tau)."""
    return SphericalFunction(pair, rep, tau)


def spherical_value(pair: str, rep, tau: TauModel, g) -> SphericalValue:
    """Phi_pi^tau(g) for pair in {"compact", "motion", "lorentz"}."""
    return spherical_function(pair, rep, tau)(g)


# --------------------------------------------------------------------------
# Closed forms for n = 2
# --------------------------------------------------------------------------

def motion_oracle_n2(m: int, R: float, x, k: Rotation) -> complex:
    """Phi^{tau_m}(k, x) of M(2) with sigma trivial.

    The tau_m part of omega_R is spanned by exp(-i m theta). Expanding the
    plane wave by Jacobi-Anger, exp(i z cos(theta - psi)) =
    sum_n i^n J_n(z) exp(i n (theta - psi)), the diagonal matrix element
    keeps only n = 0, and the rotation contributes tau_m(k):
    Phi = exp(i m kappa) J_0(R |x|).
    """
    if not R > 0:
        raise ValueError("R must be positive")
    r = float(np.linalg.norm(np.asarray(x, dtype=float)))
    return complex(np.exp(1j * m * k.angle) * bessel_j(0, R * r))


def compact_oracle_n2(ell: int, m: int, g: CompactElement) -> complex:
    """Phi^{tau_m}_{(ell)}(g) of SO(3) as one Wigner entry.

    The embedded SO(2) acts on |ell, q> by exp(-i q theta), so tau_m is the
    weight q = -m and Phi(g) = D^ell_{-m,-m} of g seen with e1 as the z axis.
    """
    return wigner_d(ell, -m, -m, *euler_zyz(C_AXIS @ g.mat @ C_AXIS.T))


def motion_point(k: Rotation, x) -> MotionElement:
    return MotionElement(k, np.asarray(x, dtype=float))
