"""Finite working bases on which the representations are evaluated.

Every action exposes:

* ``dim`` and ``k_matrix(k)``: the unitary matrix of pi(k), k in K, on an
  orthonormal working basis;
* ``compress(g, V)``: the small matrix V^H pi(g) V for a tall matrix V whose
  columns lie in the working span (the image of a projection);
* ``projection_blocks(tau, rule)`` (optional): a factored evaluation of the
  same quadrature sum as the dense projection, returned as diagonal blocks.

Compact models are finite-dimensional, so the working basis is the whole
space. For the infinite-dimensional motion and principal series models the
working basis is a finite band of K-types that contains the tau-isotypic
part; the compressed matrices are exact matrix elements between those
functions, computed by quadrature.
"""
from __future__ import annotations

import math

import numpy as np

from .groups import (
    CompactElement,
    LorentzElement,
    MotionElement,
    Rotation,
    euler_zyz,
    iwasawa_batch,
    lift_so4,
    quat_to_rotation,
)
from .partitions import multiplicity
from .quadrature import QuadratureRule, so3_factors
from .repmodels import (
    C_AXIS,
    CompactRepLabel,
    MotionRepParams,
    PrincipalSeriesParams,
    RepresentationError,
    TauModel,
    compact_rep_matrix,
)
from .specfun import small_d_entries, wigner_D_matrix


def _support(V, tol=1e-14):
    return np.flatnonzero(np.max(np.abs(V), axis=1) > tol)


def _diag_projection_blocks(weights, tau, rule):
    """Projection for a K-action that is diagonal, pi(k_theta) = diag(exp(i w theta)).

    Sums d_tau * sum_nodes w_k conj(chi_tau(k)) exp(i w theta_k) entry by entry.
    """
    if rule.n != 2:
        raise RepresentationError("diagonal actions need an SO(2) rule")
    phase = np.exp(1j * np.outer(weights, rule.angles) - 1j * tau.t * rule.angles[None, :])
    diag = tau.dim * (phase @ rule.weights)
    return [(np.array([i]), np.array([[diag[i]]])) for i in range(len(weights))]


class _DiagonalK:
    """Shared K-side behaviour for actions with pi(k_theta) = diag(exp(i w theta))."""

    k_weights: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.k_weights)

    def k_matrix(self, k: Rotation) -> np.ndarray:
        return np.diag(np.exp(1j * self.k_weights * k.angle))

    def projection_blocks(self, tau: TauModel, rule: QuadratureRule):
        return _diag_projection_blocks(self.k_weights, tau, rule)

    def k_degree(self) -> int:
        return int(np.max(np.abs(self.k_weights)))


# --------------------------------------------------------------------------
# Compact models
# --------------------------------------------------------------------------

class WignerAction(_DiagonalK):
    """rho_(ell) of SO(3) in the Wigner basis |ell, q>, q = -ell..ell, after moving e1 to z."""

    pair = "compact"
    n = 2

    def __init__(self, label: CompactRepLabel):
        if label.n != 2:
            raise RepresentationError("WignerAction models SO(3)")
        self.label = label
        self.ell = label.ell
        q = np.arange(-self.ell, self.ell + 1)
        # embedded k_theta becomes Rz(theta), acting on |q> by exp(-i q theta)
        self.k_weights = -q

    def multiplicity(self, tau: TauModel) -> int:
        return multiplicity(tau.label, self.label.partition)

    def embed_k(self, k: Rotation) -> CompactElement:
        return CompactElement.from_k(k)

    def matrix(self, g: CompactElement) -> np.ndarray:
        return compact_rep_matrix(self.label, g)

    def compress(self, g: CompactElement, V: np.ndarray) -> np.ndarray:
        supp = _support(V)
        a, b, c = euler_zyz(C_AXIS @ g.mat @ C_AXIS.T)
        q = supp - self.ell
        d = small_d_entries(self.ell, q[:, None], q[None, :], b)
        D = np.exp(-1j * q * a)[:, None] * d * np.exp(-1j * q * c)[None, :]
        Vs = V[supp]
        return Vs.conj().T @ D @ Vs


class TensorAction:
    """rho_(ell, s) of SO(4) as D^{j1}(u) (x) D^{j2}(v), (u, v) the quaternion lift.

    Basis index (p1, p2) is stored row-major; embedded K acts through u = v,
    i.e. by D^{j1}(k) (x) D^{j2}(k), whose weight is p1 + p2.
    """

    pair = "compact"
    n = 3

    def __init__(self, label: CompactRepLabel):
        if label.n != 3:
            raise RepresentationError("TensorAction models SO(4)")
        self.label = label
        self.j1, self.j2 = label.spins
        self.shape = (2 * self.j1 + 1, 2 * self.j2 + 1)

    @property
    def dim(self) -> int:
        return self.shape[0] * self.shape[1]

    def multiplicity(self, tau: TauModel) -> int:
        return multiplicity(tau.label, self.label.partition)

    def k_degree(self) -> int:
        return self.j1 + self.j2

    def embed_k(self, k: Rotation) -> CompactElement:
        return CompactElement.from_k(k)

    def k_matrix(self, k: Rotation) -> np.ndarray:
        e = k.euler
        return np.kron(wigner_D_matrix(self.j1, *e), wigner_D_matrix(self.j2, *e))

    def matrix(self, g: CompactElement) -> np.ndarray:
        return compact_rep_matrix(self.label, g)

    def _index(self, p1, p2):
        return (p1 + self.j1) * self.shape[1] + (p2 + self.j2)

    def projection_blocks(self, tau: TauModel, rule: QuadratureRule):
        """Weight-space blocks of d_tau * sum w conj(chi_tau(k)) pi(k).

        The uniform alpha and gamma sums select row and column weight r
        (the weight of chi_tau's diagonal entry), leaving a Gauss-Legendre
        sum over beta of d^t_rr(beta) d^{j1}(beta) (x) d^{j2}(beta).
        """
        if rule.n != 3:
            raise RepresentationError("TensorAction projections need an SO(3) rule")
        if rule.degree < self.k_degree() + tau.t:
            # below this the uniform sums alias and the factored form no longer
            # matches the node sum
            raise RepresentationError(
                f"rule degree {rule.degree} is below the band limit {self.k_degree() + tau.t}")
        fac = so3_factors(rule.degree)
        t = tau.t
        blocks = []
        for r in range(-self.j1 - self.j2, self.j1 + self.j2 + 1):
            p1 = np.arange(max(-self.j1, r - self.j2), min(self.j1, r + self.j2) + 1)
            p2 = r - p1
            idx = self._index(p1, p2)
            if abs(r) > t:
                blk = np.zeros((len(idx), len(idx)), dtype=complex)
            else:
                blk = self._weight_block(t, r, p1, p2, fac)
            blocks.append((idx, blk))
        return blocks

    def _weight_block(self, t, r, p1, p2, fac):
        b = fac.betas
        d1 = small_d_entries(self.j1, p1[:, None], p1[None, :], b)
        d2 = small_d_entries(self.j2, p2[:, None], p2[None, :], b)
        dt = small_d_entries(t, r, r, b)
        wts = fac.beta_weights * dt
        return (2 * t + 1) * np.einsum("ijb,ijb,b->ij", d1, d2, wts).astype(complex)

    def compress(self, g: CompactElement, V: np.ndarray) -> np.ndarray:
        pair = lift_so4(g)
        A = wigner_D_matrix(self.j1, *euler_zyz(quat_to_rotation(pair.u)))
        B = wigner_D_matrix(self.j2, *euler_zyz(quat_to_rotation(pair.v)))
        cols = V.T.reshape(V.shape[1], *self.shape)
        # (A (x) B) vec(X) = vec(A X B^T) for row-major vec
        img = (A @ cols @ B.T).reshape(V.shape[1], -1).T
        return V.conj().T @ img


# --------------------------------------------------------------------------
# Motion group models
# --------------------------------------------------------------------------

def plane_wave_nodes(t: int, R: float, radius: float) -> int:
    """Node budget 2 (t + ceil(R |x|) + 32) for plane-wave matrix elements."""
    return 2 * (int(t) + int(math.ceil(R * radius)) + 32)


class MotionActionN2(_DiagonalK):
    """omega_R of M(2) on characters e_j(theta) = exp(i j theta), |j| <= band."""

    pair = "motion"
    n = 2

    def __init__(self, params: MotionRepParams, band: int):
        if params.n != 2:
            raise RepresentationError("MotionActionN2 needs n = 2")
        self.params = params
        self.j = np.arange(-band, band + 1)
        # (omega(k) e_j)(h) = e_j(k^-1 h) = exp(-i j kappa) e_j(h)
        self.k_weights = -self.j

    def multiplicity(self, tau: TauModel) -> int:
        return 1 if abs(tau.t) <= self.j[-1] else 0

    def embed_k(self, k: Rotation) -> MotionElement:
        return MotionElement(k, np.zeros(2))

    def compress(self, g: MotionElement, V: np.ndarray) -> np.ndarray:
        AV = self.k_matrix(g.k) @ V
        rows, cols = _support(V), _support(AV)
        r = float(np.linalg.norm(g.x))
        N = plane_wave_nodes(int(np.max(np.abs(self.j))), self.params.R, r)
        th = 2 * np.pi * np.arange(N) / N
        wave = np.exp(1j * self.params.R * (g.x[0] * np.cos(th) + g.x[1] * np.sin(th)))
        Ea = np.exp(1j * np.outer(th, self.j[rows]))
        Eb = np.exp(1j * np.outer(th, self.j[cols]))
        M = Ea.conj().T @ (wave[:, None] * Eb) / N
        return V[rows].conj().T @ M @ AV[cols]


class MotionActionN3:
    """omega_{(s), R} of M(3) on f^j_q(h) = sqrt(2j+1) D^j_{q s}(h C), |s| <= j <= jmax.

    C takes z to e1, so the stabiliser of e1 acts on the right through the
    weight s. K acts on the coefficients of each j-block by conj(D^j(k)).
    """

    pair = "motion"
    n = 3

    def __init__(self, params: MotionRepParams, jmax: int):
        if params.n != 3:
            raise RepresentationError("MotionActionN3 needs n = 3")
        self.params = params
        self.s = params.sigma.first
        self.js = list(range(abs(self.s), jmax + 1))
        self.offsets = np.cumsum([0] + [2 * j + 1 for j in self.js])
        jj, qq = [], []
        for j in self.js:
            jj += [j] * (2 * j + 1)
            qq += list(range(-j, j + 1))
        self.basis_j = np.array(jj)
        self.basis_q = np.array(qq)

    @property
    def dim(self) -> int:
        return int(self.offsets[-1])

    def multiplicity(self, tau: TauModel) -> int:
        return multiplicity(self.params.sigma, tau.label) if tau.t in self.js else 0

    def k_degree(self) -> int:
        return self.js[-1] if self.js else 0

    def embed_k(self, k: Rotation) -> MotionElement:
        return MotionElement(k, np.zeros(3))

    def k_matrix(self, k: Rotation) -> np.ndarray:
        e = k.euler
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for i, j in enumerate(self.js):
            a, b = self.offsets[i], self.offsets[i + 1]
            out[a:b, a:b] = wigner_D_matrix(j, *e).conj()
        return out

    def compress(self, g: MotionElement, V: np.ndarray) -> np.ndarray:
        AV = self.k_matrix(g.k) @ V
        rows, cols = _support(V), _support(AV)
        r = float(np.linalg.norm(g.x))
        t = int(np.max(self.basis_j))
        fac = so3_factors(plane_wave_nodes(t, self.params.R, r))
        al, be = fac.alphas, fac.betas
        # h e1 = (hC) z: the direction depends on (alpha, beta) of hC only, and
        # the gamma phases of conj(f_a) f_b cancel, so gamma is integrated out.
        ca, sa = np.cos(al)[:, None], np.sin(al)[:, None]
        cb, sb = np.cos(be)[None, :], np.sin(be)[None, :]
        x = g.x
        wave = np.exp(1j * self.params.R * (x[0] * ca * sb + x[1] * sa * sb + x[2] * cb))
        w = fac.beta_weights[None, :] / len(al)

        def funcs(idx):
            j, q = self.basis_j[idx], self.basis_q[idx]
            d = np.stack([small_d_entries(int(jj), int(qq), self.s, be) for jj, qq in zip(j, q)])
            return np.sqrt(2 * j + 1)[:, None] * d, q

        dr, qr = funcs(rows)
        dc, qc = funcs(cols)
        # alpha part: exp(-i q alpha) for each basis function
        er = np.exp(-1j * np.outer(qr, al))
        ec = np.exp(-1j * np.outer(qc, al))
        Fr = er[:, :, None] * dr[:, None, :]
        Fc = ec[:, :, None] * dc[:, None, :]
        M = np.einsum("rab,ab,cab->rc", Fr.conj(), wave * w, Fc)
        return V[rows].conj().T @ M @ AV[cols]


# --------------------------------------------------------------------------
# Principal series of SO_0(2,1)
# --------------------------------------------------------------------------

class PrincipalActionN2(_DiagonalK):
    """rho_phi of SO_0(2,1) on characters e_j(theta) = exp(i j theta), |j| <= band."""

    pair = "lorentz"
    n = 2

    def __init__(self, params: PrincipalSeriesParams, band: int):
        self.params = params
        self.j = np.arange(-band, band + 1)
        self.k_weights = -self.j

    def multiplicity(self, tau: TauModel) -> int:
        return 1 if abs(tau.t) <= self.j[-1] else 0

    def embed_k(self, k: Rotation) -> LorentzElement:
        return LorentzElement.from_k(k)

    def node_count(self, g: LorentzElement) -> int:
        r = float(np.arccosh(max(g.mat[2, 2], 1.0)))
        base = plane_wave_nodes(int(self.j[-1]), abs(self.params.phi), 2 * r)
        return int(math.ceil(base * math.exp(r)))

    def compress(self, g: LorentzElement, V: np.ndarray) -> np.ndarray:
        rows, cols = _support(V), _support(V)
        N = self.node_count(g)
        th = 2 * np.pi * np.arange(N) / N
        K = np.zeros((N, 3, 3))
        K[:, 0, 0] = K[:, 1, 1] = np.cos(th)
        K[:, 0, 1] = -np.sin(th)
        K[:, 1, 0] = np.sin(th)
        K[:, 2, 2] = 1.0
        thp, tp = iwasawa_batch(g.inv().mat[None, :, :] @ K)
        factor = np.exp(-1j * self.params.gamma * tp)
        Ea = np.exp(1j * np.outer(th, self.j[rows]))
        Eb = np.exp(1j * np.outer(thp, self.j[cols]))
        M = Ea.conj().T @ (factor[:, None] * Eb) / N
        return V[rows].conj().T @ M @ V[cols]


# --------------------------------------------------------------------------

def make_action(pair: str, rep, tau: TauModel):
    """Working model for (pair, rep) wide enough to contain the tau-isotypic part."""
    if pair == "compact":
        label = rep if isinstance(rep, CompactRepLabel) else CompactRepLabel(rep)
        if label.n != tau.n:
            raise RepresentationError("compact label and tau disagree on n")
        return WignerAction(label) if label.n == 2 else TensorAction(label)
    if pair == "motion":
        if rep.n != tau.n:
            raise RepresentationError("motion params and tau disagree on n")
        if rep.n == 2:
            return MotionActionN2(rep, abs(tau.t) + 2)
        return MotionActionN3(rep, tau.t + 1)
    if pair == "lorentz":
        if tau.n != 2:
            raise RepresentationError("the Lorentz pair is implemented for n = 2")
        return PrincipalActionN2(rep, abs(tau.t) + 2)
    raise RepresentationError(f"unknown pair {pair!r}")

