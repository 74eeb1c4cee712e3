import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gelfand_contraction.groups import (
    CompactElement,
    LorentzElement,
    MotionElement,
    Rotation,
    exp_cartan,
    exp_lorentz,
)
from gelfand_contraction.partitions import Partition, dimension
from gelfand_contraction.repmodels import (
    CompactRepLabel,
    MotionRepParams,
    PrincipalSeriesParams,
    RepresentationError,
    TauModel,
    compact_rep_matrix,
    motion_action,
    motion_isotypic_basis,
    principal_action,
    scalar_character_rep,
    tau_matrix,
)

seeds = st.integers(0, 2**32 - 1)


def so3_character(j, theta):
    return sum(np.exp(1j * q * theta) for q in range(-j, j + 1)).real


def circle_nodes(count=400):
    th = 2 * np.pi * np.arange(count) / count
    return [Rotation.from_angle(t) for t in th], np.full(count, 1.0 / count)


class TestTau:
    def test_sign_at_pi(self):
        assert tau_matrix(TauModel.of(2, 1), Rotation.from_angle(np.pi))[0, 0] == pytest.approx(-1)

    @given(seeds, st.integers(0, 4))
    def test_so3_homomorphism_and_unitarity(self, seed, t):
        rng = np.random.default_rng(seed)
        tau = TauModel.of(3, t)
        a, b = Rotation.random(3, rng), Rotation.random(3, rng)
        A, B = tau.matrix(a), tau.matrix(b)
        np.testing.assert_allclose(tau.matrix(a @ b), A @ B, atol=1e-12)
        np.testing.assert_allclose(A @ A.conj().T, np.eye(2 * t + 1), atol=1e-12)

    @pytest.mark.parametrize("t", [0, 1, 2, 5])
    def test_character(self, t):
        k = Rotation.from_euler(0.3, 1.1, -0.4)
        assert TauModel.of(3, t).character(k) == pytest.approx(so3_character(t, k.geodesic_angle()))

    def test_validation(self):
        with pytest.raises(RepresentationError):
            TauModel(3, Partition.of(2, 1))
        with pytest.raises(RepresentationError):
            tau_matrix(TauModel.of(2, 1), Rotation.identity(3))


class TestCompact:
    def test_so3_trace(self):
        label = CompactRepLabel(Partition.of(3, 1))
        for th in (0.0, 0.7, 2.5):
            g = exp_cartan([th, 0.0])
            assert np.trace(compact_rep_matrix(label, g)).real == pytest.approx(1 + 2 * np.cos(th))

    def test_dims(self):
        assert CompactRepLabel(Partition.of(3, 5)).dim == 11
        assert CompactRepLabel(Partition.of(4, 3, 1)).dim == 3 * 5 == dimension(Partition.of(4, 3, 1))
        assert CompactRepLabel(Partition.of(4, 4, 2)).dim == 21 == dimension(Partition.of(4, 4, 2))

    def test_odd_parity_rejected(self):
        with pytest.raises(RepresentationError, match="parity"):
            CompactRepLabel(Partition.of(4, 2, 1)).spins

    @given(seeds, st.sampled_from([(3, (2,)), (3, (4,)), (4, (2, 0)), (4, (3, 1)), (4, (2, -2))]))
    def test_homomorphism(self, seed, lab):
        rng = np.random.default_rng(seed)
        N, entries = lab
        label = CompactRepLabel(Partition.of(N, *entries))
        a, b = CompactElement.random(N - 1, rng), CompactElement.random(N - 1, rng)
        A, B = compact_rep_matrix(label, a), compact_rep_matrix(label, b)
        np.testing.assert_allclose(compact_rep_matrix(label, a @ b), A @ B, atol=1e-10)
        np.testing.assert_allclose(A @ A.conj().T, np.eye(label.dim), atol=1e-10)

    @given(seeds)
    def test_so4_restriction_to_k(self, seed):
        # restricted to K = SO(3) the tensor model is D^{j1} (x) D^{j2}
        k = Rotation.random(3, np.random.default_rng(seed))
        th = k.geodesic_angle()
        for entries in ((2, 0), (3, 1), (4, 2)):
            label = CompactRepLabel(Partition.of(4, *entries))
            j1, j2 = label.spins
            tr = np.trace(compact_rep_matrix(label, CompactElement.from_k(k)))
            assert tr == pytest.approx(so3_character(j1, th) * so3_character(j2, th), abs=1e-9)

    def test_so4_self_dual_pairs_swap(self):
        # (ell, s) and (ell, -s) have swapped spins
        assert CompactRepLabel(Partition.of(4, 3, 1)).spins == (2, 1)
        assert CompactRepLabel(Partition.of(4, 3, -1)).spins == (1, 2)


class TestMotion:
    def test_params(self):
        with pytest.raises(RepresentationError):
            MotionRepParams(2, Partition((), 1), 0.0)
        with pytest.raises(RepresentationError):
            MotionRepParams(3, Partition((), 1), 1.0)

    @given(seeds)
    def test_group_law_n2(self, seed):
        rng = np.random.default_rng(seed)
        p = MotionRepParams(2, Partition((), 1), 1.3)
        f = lambda h: np.exp(2j * h.angle) + 0.5 * np.cos(h.angle)
        g1 = MotionElement(Rotation.random(2, rng), rng.standard_normal(2))
        g2 = MotionElement(Rotation.random(2, rng), rng.standard_normal(2))
        inner = lambda h: motion_action(p, g2, f, h)
        for h in (Rotation.random(2, rng) for _ in range(5)):
            lhs = motion_action(p, g1, inner, h)
            assert lhs == pytest.approx(motion_action(p, g1 @ g2, f, h), abs=1e-12)

    @given(seeds)
    def test_group_law_n3(self, seed):
        rng = np.random.default_rng(seed)
        p = MotionRepParams(3, Partition.of(2, 1), 0.8)
        f = motion_isotypic_basis(TauModel.of(3, 2), p.sigma).function(1)
        g1 = MotionElement(Rotation.random(3, rng), rng.standard_normal(3))
        g2 = MotionElement(Rotation.random(3, rng), rng.standard_normal(3))
        inner = lambda h: motion_action(p, g2, f, h)
        h = Rotation.random(3, rng)
        assert motion_action(p, g1, inner, h) == pytest.approx(motion_action(p, g1 @ g2, f, h), abs=1e-12)

    def test_unitary_n2(self):
        p = MotionRepParams(2, Partition((), 1), 2.0)
        f = lambda h: 1 + np.exp(1j * h.angle) + 0.3 * np.exp(-3j * h.angle)
        g = MotionElement(Rotation.from_angle(0.4), [1.5, -0.7])
        hs, w = circle_nodes()
        before = sum(wi * abs(f(h)) ** 2 for h, wi in zip(hs, w))
        after = sum(wi * abs(motion_action(p, g, f, h)) ** 2 for h, wi in zip(hs, w))
        assert after == pytest.approx(before, rel=1e-12)

    def test_isotypic_gram_and_equivariance(self):
        tau, sigma = TauModel.of(3, 2), Partition.of(2, 1)
        basis = motion_isotypic_basis(tau, sigma)
        from gelfand_contraction.quadrature import quadrature
        rule = quadrature(3, 6)
        gram = sum(w * np.outer(basis(k), basis(k).conj()) for k, w in rule.nodes)
        np.testing.assert_allclose(gram, basis.gram, atol=1e-12)
        # left translation by k acts through tau(k)
        rng = np.random.default_rng(4)
        k, h = Rotation.random(3, rng), Rotation.random(3, rng)
        np.testing.assert_allclose(basis(k.inv() @ h), tau.matrix(k).conj().T @ basis(h), atol=1e-12)

    def test_isotypic_requires_branching(self):
        with pytest.raises(RepresentationError, match="not contained"):
            motion_isotypic_basis(TauModel.of(3, 1), Partition.of(2, 2))

    def test_scalar_character(self):
        g = MotionElement(Rotation.from_angle(1.0), [0.5, 2.0])
        assert scalar_character_rep([1.0, 0.0], g) == pytest.approx(np.exp(0.5j))
        g2 = MotionElement(Rotation.from_angle(-0.3), [1.0, 1.0])
        lam = [0.2, -0.4]
        # characters only see translations; on pure translations they are multiplicative
        t1, t2 = MotionElement.translation(g.x), MotionElement.translation(g2.x)
        assert scalar_character_rep(lam, t1 @ t2) == pytest.approx(
            scalar_character_rep(lam, t1) * scalar_character_rep(lam, t2))


class TestPrincipal:
    P = PrincipalSeriesParams(0.9)

    def test_gamma(self):
        assert self.P.gamma == complex(0.9, 0.5)
        with pytest.raises(RepresentationError):
            PrincipalSeriesParams(1.0, nu=0.25)

    def test_k_acts_by_rotation(self):
        f = lambda k: np.exp(3j * k.angle)
        g = LorentzElement.from_k(Rotation.from_angle(0.6))
        h = Rotation.from_angle(1.1)
        assert principal_action(self.P, g, f, h) == pytest.approx(np.exp(3j * 0.5), abs=1e-12)

    @given(seeds)
    def test_group_law(self, seed):
        rng = np.random.default_rng(seed)
        f = lambda k: np.exp(1j * k.angle) - 0.4 * np.exp(-2j * k.angle)
        g1 = exp_lorentz(rng.uniform(-1, 1, 2)) @ LorentzElement.from_k(Rotation.random(2, rng))
        g2 = exp_lorentz(rng.uniform(-1, 1, 2)) @ LorentzElement.from_k(Rotation.random(2, rng))
        inner = lambda k: principal_action(self.P, g2, f, k)
        h = Rotation.random(2, rng)
        assert principal_action(self.P, g1, inner, h) == pytest.approx(
            principal_action(self.P, g1 @ g2, f, h), abs=1e-10)

    @pytest.mark.parametrize("x", [[0.5, 0.0], [0.3, -0.8], [1.2, 0.4]])
    def test_unitary(self, x):
        f = lambda k: 1 + 0.5 * np.exp(1j * k.angle) + 0.2j * np.exp(-2j * k.angle)
        g = exp_lorentz(x)
        hs, w = circle_nodes(2000)
        before = sum(wi * abs(f(h)) ** 2 for h, wi in zip(hs, w))
        after = sum(wi * abs(principal_action(self.P, g, f, h)) ** 2 for h, wi in zip(hs, w))
        assert after == pytest.approx(before, rel=1e-9)
