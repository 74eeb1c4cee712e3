"""Group elements of SO(n), M(n), SO(n+1) and SO_0(2,1), and the maps between them.

Conventions
-----------
* K = SO(n) sits in SO(n+1) as the stabiliser of e_1: ``diag(1, k)``.
* x in R^n enters so(n+1) as the antisymmetric matrix with first column
  (0, x) and first row (0, -x^T); ``exp_cartan(x)`` rotates e_1 toward x.
* SO_0(2,1) preserves eta = diag(1, 1, -1); K = SO(2) is the upper-left
  block and x in R^2 enters as the symmetric boost generator coupling
  coordinates (1, 2) with 3.
* M(n) elements (k, x) act on R^n by y -> k y + x, so
  (k1, x1)(k2, x2) = (k1 k2, x1 + k1 x2).
* Euler angles are zyz: R = Rz(alpha) Ry(beta) Rz(gamma).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL = 1e-10
ETA = np.diag([1.0, 1.0, -1.0])


class GroupError(ValueError):
    """Invalid group element or a point outside a decomposition's domain."""


def _check_orthogonal(mat, what):
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise GroupError(f"{what}: expected a square matrix, got shape {mat.shape}")
    if np.max(np.abs(mat.T @ mat - np.eye(len(mat)))) > TOL:
        raise GroupError(f"{what}: matrix is not orthogonal")
    if abs(np.linalg.det(mat) - 1.0) > TOL:
        raise GroupError(f"{what}: determinant is not +1")
    return mat


def rot2(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def rot_z(a: float) -> np.ndarray:
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rot_y(b: float) -> np.ndarray:
    c, s = np.cos(b), np.sin(b)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def euler_zyz(mat) -> tuple[float, float, float]:
    """zyz Euler angles of a 3x3 rotation.

    Near beta = 0 only alpha + gamma matters and it is read from a block
    weighted by (1 + cos beta); near beta = pi the same holds for
    alpha - gamma with weight (1 - cos beta). The poorly determined
    combination comes from the third row/column, where its influence on the
    matrix is correspondingly small.
    """
    R = np.asarray(mat)
    beta = np.arctan2(np.hypot(R[0, 2], R[1, 2]), R[2, 2])
    a_col = np.arctan2(R[1, 2], R[0, 2])
    g_row = np.arctan2(R[2, 1], -R[2, 0])
    if R[2, 2] >= 0:
        apg = np.arctan2(R[1, 0] - R[0, 1], R[0, 0] + R[1, 1])
        amg = a_col - g_row
    else:
        apg = a_col + g_row
        amg = np.arctan2(-(R[1, 0] + R[0, 1]), -(R[0, 0] - R[1, 1]))
    alpha = (apg + amg) / 2
    # halving leaves alpha + pi open; pick the branch nearest the column estimate
    if np.cos(alpha - a_col) < 0:
        alpha += np.pi
    gamma = alpha - amg
    return float(alpha), float(beta), float(gamma)


def from_euler_zyz(alpha, beta, gamma) -> np.ndarray:
    return rot_z(alpha) @ rot_y(beta) @ rot_z(gamma)


def random_rotation_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random element of SO(n)."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


@dataclass(frozen=True, eq=False)
class Rotation:
    """Element of SO(n), n in {2, 3, 4}."""

    mat: np.ndarray

    def __post_init__(self):
        m = _check_orthogonal(self.mat, "Rotation")
        if len(m) not in (2, 3, 4):
            raise GroupError("Rotation supports n in {2, 3, 4}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def n(self) -> int:
        return len(self.mat)

    @classmethod
    def identity(cls, n: int) -> "Rotation":
        return cls(np.eye(n))

    @classmethod
    def from_angle(cls, theta: float) -> "Rotation":
        return cls(rot2(theta))

    @classmethod
    def from_euler(cls, alpha, beta, gamma) -> "Rotation":
        return cls(from_euler_zyz(alpha, beta, gamma))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Rotation":
        return cls(random_rotation_matrix(n, rng))

    @property
    def angle(self) -> float:
        if self.n != 2:
            raise GroupError("angle is defined for SO(2) only")
        return float(np.arctan2(self.mat[1, 0], self.mat[0, 0]))

    @property
    def euler(self) -> tuple[float, float, float]:
        if self.n != 3:
            raise GroupError("Euler angles are defined for SO(3) only")
        return euler_zyz(self.mat)

    def __matmul__(self, other: "Rotation") -> "Rotation":
        return Rotation(self.mat @ other.mat)

    def inv(self) -> "Rotation":
        return Rotation(self.mat.T)

    def act(self, x) -> np.ndarray:
        return self.mat @ np.asarray(x, dtype=float)

    def geodesic_angle(self) -> float:
        """Rotation angle in [0, pi] (largest principal angle for n = 4)."""
        if self.n == 4:
            ev = np.angle(np.linalg.eigvals(self.mat))
            return float(np.max(np.abs(ev)))
        # atan2 keeps full precision near 0, where arccos of the trace does not
        c = (np.trace(self.mat) - (self.n - 2)) / 2
        s = np.linalg.norm(self.mat - self.mat.T) / np.sqrt(8)
        return float(np.arctan2(s, c))


@dataclass(frozen=True, eq=False)
class MotionElement:
    """(k, x) in M(n) = SO(n) semidirect R^n."""

    k: Rotation
    x: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float).reshape(-1)
        if len(x) != self.k.n:
            raise GroupError(f"translation has length {len(x)}, rotation acts on R^{self.k.n}")
        x.setflags(write=False)
        object.__setattr__(self, "x", x)

    @property
    def n(self) -> int:
        return self.k.n

    @classmethod
    def identity(cls, n: int) -> "MotionElement":
        return cls(Rotation.identity(n), np.zeros(n))

    @classmethod
    def translation(cls, x) -> "MotionElement":
        x = np.asarray(x, dtype=float)
        return cls(Rotation.identity(len(x)), x)

    def __matmul__(self, other: "MotionElement") -> "MotionElement":
        return MotionElement(self.k @ other.k, self.x + self.k.act(other.x))

    def inv(self) -> "MotionElement":
        ki = self.k.inv()
        return MotionElement(ki, -ki.act(self.x))

    def distance(self, other: "MotionElement") -> float:
        """Rotation geodesic angle plus Euclidean distance of translations."""
        return (self.k.inv() @ other.k).geodesic_angle() + float(np.linalg.norm(self.x - other.x))


@dataclass(frozen=True, eq=False)
class CompactElement:
    """Element of SO(n+1) with K = SO(n) the stabiliser of e_1."""

    mat: np.ndarray

    def __post_init__(self):
        m = _check_orthogonal(self.mat, "CompactElement").copy()
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def n(self) -> int:
        return len(self.mat) - 1

    @classmethod
    def identity(cls, n: int) -> "CompactElement":
        return cls(np.eye(n + 1))

    @classmethod
    def from_k(cls, k: Rotation) -> "CompactElement":
        m = np.eye(k.n + 1)
        m[1:, 1:] = k.mat
        return cls(m)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "CompactElement":
        return cls(random_rotation_matrix(n + 1, rng))

    def __matmul__(self, other: "CompactElement") -> "CompactElement":
        return CompactElement(self.mat @ other.mat)

    def inv(self) -> "CompactElement":
        return CompactElement(self.mat.T)


@dataclass(frozen=True, eq=False)
class LorentzElement:
    """Element of SO_0(2,1) for the form eta = diag(1, 1, -1)."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.array(self.mat, dtype=float)
        if m.shape != (3, 3):
            raise GroupError("LorentzElement must be 3x3")
        scale = max(1.0, np.max(np.abs(m)) ** 2)
        if np.max(np.abs(m.T @ ETA @ m - ETA)) > TOL * scale:
            raise GroupError("matrix does not preserve eta")
        if m[2, 2] < 1 - TOL:
            raise GroupError("matrix is outside the identity component")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    n = 2

    @classmethod
    def identity(cls) -> "LorentzElement":
        return cls(np.eye(3))

    @classmethod
    def from_k(cls, k: Rotation) -> "LorentzElement":
        if k.n != 2:
            raise GroupError("K of SO_0(2,1) is SO(2)")
        m = np.eye(3)
        m[:2, :2] = k.mat
        return cls(m)

    def __matmul__(self, other: "LorentzElement") -> "LorentzElement":
        return LorentzElement(self.mat @ other.mat)

    def inv(self) -> "LorentzElement":
        return LorentzElement(ETA @ self.mat.T @ ETA)


# --------------------------------------------------------------------------
# Cartan exponentials and contractions
# --------------------------------------------------------------------------

def cartan_generator(x) -> np.ndarray:
    """Antisymmetric (n+1)x(n+1) matrix representing x in the complement of so(n)."""
    x = np.asarray(x, dtype=float)
    X = np.zeros((len(x) + 1, len(x) + 1))
    X[1:, 0] = x
    X[0, 1:] = -x
    return X


def exp_cartan(x, n: int | None = None) -> CompactElement:
    """exp of the Cartan-complement generator of x (closed-form Rodrigues)."""
    x = np.asarray(x, dtype=float)
    if n is not None and len(x) != n:
        raise GroupError(f"x has length {len(x)}, expected {n}")
    X = cartan_generator(x)
    r = float(np.linalg.norm(x))
    if r == 0.0:
        return CompactElement(np.eye(len(x) + 1))
    # (1 - cos r) / r^2 written as 2 sin^2(r/2) / r^2 to avoid cancellation
    m = np.eye(len(x) + 1) + (np.sin(r) / r) * X + (2 * np.sin(r / 2) ** 2 / r**2) * (X @ X)
    return CompactElement(m)


def boost_generator(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    X = np.zeros((3, 3))
    X[:2, 2] = x
    X[2, :2] = x
    return X


def exp_lorentz(x) -> LorentzElement:
    """exp of the boost generator of x in R^2 (element of exp(p))."""
    x = np.asarray(x, dtype=float)
    if len(x) != 2:
        raise GroupError("SO_0(2,1) boosts take x in R^2")
    X = boost_generator(x)
    r = float(np.linalg.norm(x))
    if r == 0.0:
        return LorentzElement.identity()
    m = np.eye(3) + (np.sinh(r) / r) * X + (2 * np.sinh(r / 2) ** 2 / r**2) * (X @ X)
    return LorentzElement(m)


def contract_compact(alpha: float, h: MotionElement) -> CompactElement:
    """D_alpha(k, x) = exp(x / alpha) k in SO(n+1)."""
    if not alpha > 0:
        raise GroupError("alpha must be positive")
    return exp_cartan(h.x / alpha) @ CompactElement.from_k(h.k)


def contract_lorentz(beta: float, h: MotionElement) -> LorentzElement:
    """D_beta(k, x) = exp_G(x / beta) k in SO_0(2,1)."""
    if not beta > 0:
        raise GroupError("beta must be positive")
    if h.n != 2:
        raise GroupError("the Lorentz contraction is implemented for n = 2")
    return exp_lorentz(h.x / beta) @ LorentzElement.from_k(h.k)


def cartan_log(g) -> MotionElement:
    """The (k, p) with g = exp(p) k; inverse of the contraction at parameter 1.

    For compact g this needs the angle between g e_1 and e_1 below pi.
    """
    if isinstance(g, LorentzElement):
        v = g.mat[:, 2]
        w = v[:2]
        s = float(np.linalg.norm(w))
        r = float(np.arcsinh(s))
        p = np.zeros(2) if s == 0.0 else (r / s) * w
        kmat = (exp_lorentz(-p).mat @ g.mat)[:2, :2]
        return MotionElement(Rotation(_reorthonormalize(kmat)), p)
    if isinstance(g, CompactElement):
        v = g.mat[:, 0]
        w = v[1:]
        s = float(np.linalg.norm(w))
        r = float(np.arctan2(s, v[0]))
        if r > np.pi - 1e-8:
            raise GroupError("element lies outside the injectivity radius of exp(p) K")
        p = np.zeros(g.n) if s == 0.0 else (r / s) * w
        kmat = (exp_cartan(-p).mat @ g.mat)[1:, 1:]
        return MotionElement(Rotation(_reorthonormalize(kmat)), p)
    raise GroupError(f"cartan_log does not accept {type(g).__name__}")


def _reorthonormalize(m):
    u, _, vt = np.linalg.svd(m)
    return u @ vt


def contraction_defect(alpha: float, h1: MotionElement, h2: MotionElement,
                       kind: str = "compact") -> float:
    """Distance in M(n) between D^-1(D(h1) D(h2)^-1) and h1 h2^-1."""
    contract = {"compact": contract_compact, "lorentz": contract_lorentz}[kind]
    g = contract(alpha, h1) @ contract(alpha, h2).inv()
    k, p = (lambda e: (e.k, e.x))(cartan_log(g))
    pulled = MotionElement(k, alpha * p)
    return pulled.distance(h1 @ h2.inv())


# --------------------------------------------------------------------------
# Quaternions and the double cover SU(2) x SU(2) -> SO(4)
# --------------------------------------------------------------------------

def qmul(a, b) -> np.ndarray:
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.array([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ])


def qconj(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return np.array([a[0], -a[1], -a[2], -a[3]])


def left_mult_matrix(a) -> np.ndarray:
    """Matrix of q -> a q in the basis (1, i, j, k)."""
    a0, a1, a2, a3 = a
    return np.array([[a0, -a1, -a2, -a3],
                     [a1, a0, -a3, a2],
                     [a2, a3, a0, -a1],
                     [a3, -a2, a1, a0]])


def right_mult_matrix(b) -> np.ndarray:
    """Matrix of q -> q b in the basis (1, i, j, k)."""
    b0, b1, b2, b3 = b
    return np.array([[b0, -b1, -b2, -b3],
                     [b1, b0, b3, -b2],
                     [b2, -b3, b0, b1],
                     [b3, b2, -b1, b0]])


def quat_to_rotation(u) -> np.ndarray:
    """3x3 matrix of v -> u v u* on imaginary quaternions."""
    w, x, y, z = u
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def rotation_to_quat(R) -> np.ndarray:
    """Unit quaternion u with quat_to_rotation(u) = R (Shepperd's method)."""
    R = np.asarray(R)
    tr = np.trace(R)
    cands = [tr, R[0, 0], R[1, 1], R[2, 2]]
    i = int(np.argmax(cands))
    if i == 0:
        s = 2 * np.sqrt(1 + tr)
        q = [s / 4, (R[2, 1] - R[1, 2]) / s, (R[0, 2] - R[2, 0]) / s, (R[1, 0] - R[0, 1]) / s]
    elif i == 1:
        s = 2 * np.sqrt(1 + 2 * R[0, 0] - tr)
        q = [(R[2, 1] - R[1, 2]) / s, s / 4, (R[0, 1] + R[1, 0]) / s, (R[0, 2] + R[2, 0]) / s]
    elif i == 2:
        s = 2 * np.sqrt(1 + 2 * R[1, 1] - tr)
        q = [(R[0, 2] - R[2, 0]) / s, (R[0, 1] + R[1, 0]) / s, s / 4, (R[1, 2] + R[2, 1]) / s]
    else:
        s = 2 * np.sqrt(1 + 2 * R[2, 2] - tr)
        q = [(R[1, 0] - R[0, 1]) / s, (R[0, 2] + R[2, 0]) / s, (R[1, 2] + R[2, 1]) / s, s / 4]
    q = np.array(q)
    return q / np.linalg.norm(q)


def _canonical_sign(u):
    for c in u:
        if abs(c) > 1e-14:
            return 1.0 if c > 0 else -1.0
    return 1.0


@dataclass(frozen=True, eq=False)
class QuaternionPair:
    """(u, v) in SU(2) x SU(2) acting on R^4 = H by q -> u q v*."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        for name in ("u", "v"):
            q = np.array(getattr(self, name), dtype=float)
            if q.shape != (4,) or abs(np.linalg.norm(q) - 1) > 1e-12:
                raise GroupError(f"{name} must be a unit quaternion")
            q.setflags(write=False)
            object.__setattr__(self, name, q)

    def matrix(self) -> np.ndarray:
        return left_mult_matrix(self.u) @ right_mult_matrix(qconj(self.v))


def lift_so4(g) -> QuaternionPair:
    """Lift g in SO(4) to (u, v) with g(q) = u q v*, sign fixed by u_0 >= 0."""
    mat = g.mat if isinstance(g, CompactElement) else _check_orthogonal(g, "lift_so4")
    if mat.shape != (4, 4):
        raise GroupError("lift_so4 needs a 4x4 rotation")
    w = mat[:, 0]  # g(1) = u v*
    conj_part = right_mult_matrix(qconj(w)) @ mat  # q -> u q u*
    u = rotation_to_quat(conj_part[1:, 1:])
    v = qmul(qconj(w), u)
    sgn = _canonical_sign(u)
    u, v = sgn * u, sgn * v
    v = v / np.linalg.norm(v)
    pair = QuaternionPair(u, v)
    if np.max(np.abs(pair.matrix() - mat)) > 1e-9:
        raise GroupError("quaternion lift failed to reproduce the input")
    return pair


# --------------------------------------------------------------------------
# Iwasawa decomposition of SO_0(2,1)
# --------------------------------------------------------------------------

H0 = boost_generator([1.0, 0.0])
_Z = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
_Y = boost_generator([0.0, 1.0])
# Root space of ad(H0) with eigenvalue -1; it fixes the null vector e1 - e3.
NILPOTENT = _Z - _Y
_NULL = np.array([1.0, 0.0, -1.0])


def a_of(t: float) -> np.ndarray:
    return exp_lorentz([t, 0.0]).mat


def n_of(u: float) -> np.ndarray:
    return np.eye(3) + u * NILPOTENT + 0.5 * u * u * (NILPOTENT @ NILPOTENT)


@dataclass(frozen=True)
class IwasawaFactors:
    """g = k a(t) n(u) with a(t) = exp(t H0) and n(u) = exp(u N)."""

    k: Rotation
    t: float
    u: float

    def recompose(self) -> LorentzElement:
        return LorentzElement(LorentzElement.from_k(self.k).mat @ a_of(self.t) @ n_of(self.u))


def iwasawa_so21(g) -> IwasawaFactors:
    """Global KAN factorisation of an SO_0(2,1) element.

    n(u) fixes the null vector e1 - e3 and a(t) scales it by exp(-t), so
    g (e1 - e3) = exp(-t) k (e1 - e3) determines t and k; u is read off
    n = a(-t) k^-1 g.
    """
    mat = g.mat if isinstance(g, LorentzElement) else np.asarray(g, dtype=float)
    w = mat @ _NULL
    t = -float(np.log(-w[2]))
    theta = float(np.arctan2(w[1], w[0]))
    k = Rotation.from_angle(theta)
    kinv = np.eye(3)
    kinv[:2, :2] = k.mat.T
    nmat = a_of(-t) @ kinv @ mat
    return IwasawaFactors(k, t, float(nmat[0, 1]))


def iwasawa_batch(mats: np.ndarray):
    """Vectorised Iwasawa factors (theta, t) for a stack of SO_0(2,1) matrices."""
    w = mats @ _NULL
    t = -np.log(-w[..., 2])
    theta = np.arctan2(w[..., 1], w[..., 0])
    return theta, t
