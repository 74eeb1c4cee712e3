"""Concrete unitary models of the representations that enter the spherical functions.

* tau in SO(n)^: characters e^{i m theta} (n = 2) or Wigner D^t (n = 3).
* Compact sequence rho_{sigma, ell} of SO(n+1): Wigner D^ell after moving
  e_1 to the z axis (n = 2), or D^{j1} (x) D^{j2} through the quaternion
  double cover of SO(4) (n = 3).
* omega_{sigma, R} of M(n): functions on K with the plane-wave action
  (omega(k, x) f)(h) = exp(i R <h^-1 x, e_1>) f(k^-1 h).
* Principal series of SO_0(2,1), induced picture restricted to K.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .groups import (
    CompactElement,
    GroupError,
    LorentzElement,
    MotionElement,
    Rotation,
    euler_zyz,
    iwasawa_so21,
    lift_so4,
    quat_to_rotation,
)
from .partitions import Partition, multiplicity
from .specfun import wigner_D_matrix


class RepresentationError(ValueError):
    """Invalid representation label or an unsupported model."""


# Permutation taking (e1, e2, e3) to (z, x, y): conjugating by it turns the
# stabiliser of e1 into rotations about z.
C_AXIS = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])


# --------------------------------------------------------------------------
# tau
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TauModel:
    n: int
    label: Partition

    def __post_init__(self):
        if self.n not in (2, 3):
            raise RepresentationError("tau models exist for n in {2, 3}")
        if self.label.group_size != self.n:
            raise RepresentationError(f"label {self.label} is not an SO({self.n}) partition")

    @classmethod
    def of(cls, n: int, t: int) -> "TauModel":
        return cls(n, Partition.of(n, t))

    @property
    def t(self) -> int:
        return self.label.first

    @property
    def dim(self) -> int:
        return 1 if self.n == 2 else 2 * self.t + 1

    def matrix(self, k: Rotation) -> np.ndarray:
        return tau_matrix(self, k)

    def character(self, k: Rotation) -> complex:
        return complex(np.trace(self.matrix(k)))


def tau_matrix(tau: TauModel, k: Rotation) -> np.ndarray:
    """Unitary d_tau x d_tau matrix of tau(k)."""
    if k.n != tau.n:
        raise RepresentationError(f"tau acts on SO({tau.n}), got an SO({k.n}) element")
    if tau.n == 2:
        return np.array([[np.exp(1j * tau.t * k.angle)]])
    return wigner_D_matrix(tau.t, *k.euler)


# --------------------------------------------------------------------------
# Parameters
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MotionRepParams:
    n: int
    sigma: Partition
    R: float

    def __post_init__(self):
        if not self.R > 0:
            raise RepresentationError("R must be positive")
        if self.sigma.group_size != self.n - 1:
            raise RepresentationError(f"sigma must label SO({self.n - 1}), got {self.sigma}")
        if self.n not in (2, 3):
            raise RepresentationError("motion models exist for n in {2, 3}")


@dataclass(frozen=True)
class CompactRepLabel:
    """rho_{sigma, ell} of SO(n+1), labelled by (ell, sigma_1, ...)."""

    partition: Partition

    def __post_init__(self):
        if self.partition.group_size not in (3, 4):
            raise RepresentationError("compact models exist for SO(3) and SO(4)")

    @property
    def n(self) -> int:
        return self.partition.group_size - 1

    @property
    def ell(self) -> int:
        return self.partition.first

    @property
    def sigma(self) -> Partition:
        return Partition(self.partition.entries[1:], self.n - 1)

    @property
    def spins(self) -> tuple[int, int]:
        """(j1, j2) of the SO(4) tensor model; needs ell + sigma_1 even."""
        ell, s = self.partition.entries
        if (ell + s) % 2:
            raise RepresentationError(
                f"label ({ell}, {s}) has odd parity; the tensor model needs ell + sigma_1 even")
        return (ell + s) // 2, (ell - s) // 2

    @property
    def dim(self) -> int:
        if self.n == 2:
            return 2 * self.ell + 1
        j1, j2 = self.spins
        return (2 * j1 + 1) * (2 * j2 + 1)


@dataclass(frozen=True)
class PrincipalSeriesParams:
    """Principal series of SO_0(2,1) with gamma = phi + i nu; M is trivial."""

    phi: float
    sigma: Partition = field(default_factory=lambda: Partition((), 1))
    nu: float = 0.5

    def __post_init__(self):
        if self.nu != 0.5:
            raise RepresentationError("nu is fixed to 1/2 for SO_0(2,1)")
        if self.sigma.group_size != 1:
            raise RepresentationError("M is trivial for SO_0(2,1); sigma must be the empty label")

    @property
    def gamma(self) -> complex:
        return complex(self.phi, self.nu)


# --------------------------------------------------------------------------
# Isotypic functions of omega_{sigma, R}
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IsotypicBasis:
    """d_tau functions on K spanning the tau-isotypic part of omega_{sigma, R}.

    n = 2: the single function exp(-i m theta).
    n = 3: f_q(h) = D^t_{q, s}(h C) with C the rotation taking z to e1, so
    that rotations about e1 act on the right through the weight s.
    """

    tau: TauModel
    sigma: Partition
    gram: np.ndarray

    @property
    def s(self) -> int:
        return self.sigma.first

    def __call__(self, h: Rotation) -> np.ndarray:
        if self.tau.n == 2:
            return np.array([np.exp(-1j * self.tau.t * h.angle)])
        D = wigner_D_matrix(self.tau.t, *euler_zyz(h.mat @ C_AXIS.T))
        return D[:, self.s + self.tau.t]

    def function(self, index: int) -> Callable[[Rotation], complex]:
        return lambda h: complex(self(h)[index])


def motion_isotypic_basis(tau: TauModel, sigma: Partition) -> IsotypicBasis:
    if sigma.group_size != tau.n - 1:
        raise RepresentationError(f"sigma must label SO({tau.n - 1})")
    if tau.n == 3 and multiplicity(sigma, tau.label) == 0:
        raise RepresentationError(f"tau not contained in omega_(sigma,R): {sigma} not in {tau.label}")
    d = tau.dim
    # Schur orthogonality gives the Gram matrix of matrix coefficients in closed form
    gram = np.eye(d, dtype=complex) / d
    return IsotypicBasis(tau, sigma, gram)


# --------------------------------------------------------------------------
# Actions
# --------------------------------------------------------------------------

def motion_action(params: MotionRepParams, g: MotionElement, f, h: Rotation) -> complex:
    """(omega_{sigma,R}(g) f)(h) = exp(i R <h^-1 x, e1>) f(k^-1 h)."""
    phase = np.exp(1j * params.R * h.inv().act(g.x)[0])
    return complex(phase * f(g.k.inv() @ h))


def compact_rep_matrix(label: CompactRepLabel, g: CompactElement) -> np.ndarray:
    """Unitary matrix of rho_{sigma, ell}(g)."""
    if g.n != label.n:
        raise RepresentationError(f"label acts on SO({label.n + 1}), got SO({g.n + 1})")
    if label.n == 2:
        return wigner_D_matrix(label.ell, *euler_zyz(C_AXIS @ g.mat @ C_AXIS.T))
    j1, j2 = label.spins
    pair = lift_so4(g)
    A = wigner_D_matrix(j1, *euler_zyz(quat_to_rotation(pair.u)))
    B = wigner_D_matrix(j2, *euler_zyz(quat_to_rotation(pair.v)))
    return np.kron(A, B)


def principal_action(params: PrincipalSeriesParams, g: LorentzElement, f, k: Rotation) -> complex:
    """(rho_phi(g) f)(k) = exp(-i gamma t') f(k') where g^-1 k = k' a(t') n."""
    kk = LorentzElement.from_k(k)
    fac = iwasawa_so21(g.inv() @ kk)
    return complex(np.exp(-1j * params.gamma * fac.t) * f(fac.k))


def scalar_character_rep(lam, g: MotionElement) -> complex:
    """(k, x) -> exp(i <lambda, x>); these characters carry zero Plancherel measure."""
    lam = np.asarray(lam, dtype=float)
    if lam.shape != g.x.shape:
        raise GroupError("lambda and x must have the same length")
    return complex(np.exp(1j * np.dot(lam, g.x)))
