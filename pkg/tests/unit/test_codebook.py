"""
Unit Tests for Training Codebooks
=================================

Tests for the optimal Kronecker construction, the random-unitary baseline,
slot decoding and the MSE factor.
"""

import numpy as np
import pytest

from src.codebook import (
    BaseConditionError,
    BaseKind,
    GroupTopology,
    TrainingCodebook,
    build_codebook,
    build_group_base,
    build_phibar,
    codebook_mse_factor,
    haar_unitary,
    mse_bound_chain,
    random_codebook,
    restack_slot,
    slot_configuration,
    slot_matrices,
    uniform_groupings,
)
from src.linalg import (
    UnsupportedOrderError,
    circshift,
    dft_matrix,
    hadamard_matrix,
    hadamard_product,
    kron,
    max_unitarity_violation,
    vec,
)

from tests.conftest import GROUPINGS_32

F2 = dft_matrix(2)


def _all_groupings():
    for m in (2, 4, 8, 16, 32):
        for g, m_bar in uniform_groupings(m):
            yield g, m_bar


class TestTopology:
    """Test suite for GroupTopology and BaseKind."""

    def test_dimensions(self):
        """M, T_min and label follow from G and M_bar."""
        top = GroupTopology(n_bs=4, g=16, m_bar=2)

        assert top.m == 32
        assert top.t_min == 64
        assert top.label == "16x2"
        assert top.group_slice(3) == slice(6, 8)

    def test_from_ports(self):
        """Uniform split of M ports."""
        assert GroupTopology.from_ports(4, 32, 8).m_bar == 4
        with pytest.raises(ValueError):
            GroupTopology.from_ports(4, 32, 5)

    def test_invalid_fields(self):
        """Zero or negative sizes are rejected."""
        with pytest.raises(ValueError):
            GroupTopology(n_bs=0, g=1, m_bar=1)
        with pytest.raises(ValueError):
            GroupTopology(n_bs=1, g=2, m_bar=-1)

    def test_uniform_groupings(self):
        """All groupings of 32 ports, by increasing group size."""
        assert uniform_groupings(32) == GROUPINGS_32

    def test_parse_kind(self):
        """Strategy names and aliases."""
        assert BaseKind.parse("DFT") is BaseKind.DFT
        assert BaseKind.parse("hadamard") is BaseKind.HADAMARD
        assert BaseKind.parse("random") is BaseKind.RANDOM_UNITARY
        assert not BaseKind.RANDOM_UNITARY.is_structured
        with pytest.raises(ValueError):
            BaseKind.parse("qr")


class TestGroupBase:
    """Test suite for the outer base X."""

    def test_examples(self):
        """X for (1, DFT) and (2, Hadamard)."""
        np.testing.assert_array_equal(build_group_base(1, BaseKind.DFT), [[1]])
        np.testing.assert_array_equal(build_group_base(2, BaseKind.HADAMARD), [[1, 1], [1, -1]])

    def test_dft_constraints(self):
        """X X^H = G I with unit-modulus entries."""
        x = build_group_base(4, BaseKind.DFT)

        assert np.max(np.abs(x @ x.conj().T - 4 * np.eye(4))) <= 1e-10
        assert np.max(np.abs(np.abs(x) - 1)) <= 1e-12

    def test_hadamard_unsupported_order(self):
        """Hadamard needs a power-of-two G."""
        with pytest.raises(UnsupportedOrderError):
            build_group_base(6, BaseKind.HADAMARD)

    def test_random_rejected(self):
        """The random baseline has no outer base."""
        with pytest.raises(ValueError):
            build_group_base(2, BaseKind.RANDOM_UNITARY)


class TestPhibar:
    """Test suite for the inner base Phi_bar."""

    def test_single_connected(self):
        """M_bar = 1 gives [1]."""
        np.testing.assert_allclose(build_phibar(1, np.ones((1, 1)), np.ones((1, 1))), [[1]])

    def test_first_column_m2(self):
        """First column for M_bar = 2 is [1, 1, 1, -1]/sqrt(2) and unvecs to F2/sqrt(2)."""
        phibar = build_phibar(2, F2, F2 / np.sqrt(2))

        np.testing.assert_allclose(phibar[:, 0], np.array([1, 1, 1, -1]) / np.sqrt(2), atol=1e-15)
        block = phibar[:, 0].reshape(2, 2, order='F')
        np.testing.assert_allclose(block, F2 / np.sqrt(2), atol=1e-15)
        assert max_unitarity_violation(block) <= 1e-12

    @pytest.mark.parametrize("m_bar", [1, 2, 3, 4, 5, 8])
    def test_gram_and_column_unitarity(self, m_bar):
        """Phi_bar Phi_bar^H = M_bar I and every column unvecs to a unitary."""
        f = dft_matrix(m_bar)
        phibar = build_phibar(m_bar, f, f / np.sqrt(m_bar))
        size = m_bar ** 2

        assert np.max(np.abs(phibar @ phibar.conj().T - m_bar * np.eye(size))) <= 1e-10
        for k in range(size):
            block = phibar[:, k].reshape(m_bar, m_bar, order='F')
            assert max_unitarity_violation(block) <= 1e-10

    def test_columns_from_shift_and_modulation(self):
        """Column m*M_bar + n is circshift(vec(Z1), n*M_bar) times kron(Z2[:, m], 1)."""
        m_bar = 4
        z1, z2 = hadamard_matrix(m_bar), hadamard_matrix(m_bar) / np.sqrt(m_bar)
        phibar = build_phibar(m_bar, z1, z2)
        ones = np.ones((m_bar, 1))

        for m in range(m_bar):
            for n in range(m_bar):
                expected = hadamard_product(circshift(vec(z1), n * m_bar), kron(z2[:, [m]], ones))
                np.testing.assert_array_equal(phibar[:, [m * m_bar + n]], expected)

    def test_other_scaling(self):
        """Any alpha1 * alpha2 = M_bar works, e.g. Z1 = F/2, Z2 = 2F for M_bar = 4."""
        f = dft_matrix(4)
        phibar = build_phibar(4, f / 2, 2 * f / 2)

        assert np.max(np.abs(phibar @ phibar.conj().T - 4 * np.eye(16))) <= 1e-10

    def test_non_unitary_base_rejected(self):
        """A non scaled-unitary Z1 is named in the error."""
        with pytest.raises(BaseConditionError, match="Z1"):
            build_phibar(2, np.array([[1, 1], [0, 1]]), F2 / np.sqrt(2))

    def test_bad_modulus_rejected(self):
        """Z2 must have constant-modulus entries."""
        with pytest.raises(BaseConditionError, match="modulus"):
            build_phibar(2, F2, np.eye(2))

    def test_bad_scaling_product_rejected(self):
        """alpha1 * alpha2 must equal M_bar."""
        with pytest.raises(BaseConditionError, match="alpha1"):
            build_phibar(2, F2, F2)


class TestBuildCodebook:
    """Test suite for the optimal construction."""

    def test_conventional_ris(self):
        """G=4, M_bar=1, DFT reduces to F4."""
        cb = build_codebook(GroupTopology(n_bs=4, g=4, m_bar=1), BaseKind.DFT)

        np.testing.assert_allclose(cb.phi_hat, dft_matrix(4), atol=1e-15)
        assert cb.t_slots == 4

    def test_hadamard_2x2(self):
        """G=2, M_bar=2, Hadamard: 8x8 with Phi Phi^H = 4 I."""
        cb = build_codebook(GroupTopology(n_bs=4, g=2, m_bar=2), BaseKind.HADAMARD)

        assert cb.phi_hat.shape == (8, 8)
        assert np.max(np.abs(cb.phi_hat @ cb.phi_hat.conj().T - 4 * np.eye(8))) <= 1e-10

    def test_single_group_is_phibar(self):
        """G=1 gives Phi_hat = Phi_bar."""
        cb = build_codebook(GroupTopology(n_bs=4, g=1, m_bar=2), BaseKind.DFT)
        np.testing.assert_array_equal(cb.phi_hat, cb.phibar)

    def test_recorded_scaling(self):
        """Default scaling alpha1 = M_bar, alpha2 = 1."""
        cb = build_codebook(GroupTopology(n_bs=4, g=2, m_bar=4), BaseKind.DFT)

        assert cb.alpha1 == pytest.approx(4.0)
        assert cb.alpha2 == pytest.approx(1.0)
        assert cb.alpha1 * cb.alpha2 == pytest.approx(cb.topology.m_bar)

    def test_custom_alpha1(self):
        """Non-default alpha1 is still optimal."""
        cb = build_codebook(GroupTopology(n_bs=4, g=2, m_bar=4), BaseKind.DFT, alpha1=2.0)

        assert cb.alpha2 == pytest.approx(2.0)
        assert codebook_mse_factor(cb) == pytest.approx(4.0, abs=1e-9)

    def test_invalid_requests(self):
        """Random kind and non-positive alpha1 are rejected."""
        top = GroupTopology(n_bs=4, g=2, m_bar=2)
        with pytest.raises(ValueError):
            build_codebook(top, BaseKind.RANDOM_UNITARY)
        with pytest.raises(ValueError):
            build_codebook(top, BaseKind.DFT, alpha1=0.0)
        with pytest.raises(UnsupportedOrderError):
            build_codebook(GroupTopology(n_bs=4, g=3, m_bar=2), BaseKind.HADAMARD)

    @pytest.mark.parametrize("g,m_bar", list(_all_groupings()))
    @pytest.mark.parametrize("kind", [BaseKind.DFT, BaseKind.HADAMARD])
    def test_gram_identities(self, g, m_bar, kind):
        """Both Gram matrices equal M I for every grouping of M in {2, ..., 32}."""
        cb = build_codebook(GroupTopology(n_bs=1, g=g, m_bar=m_bar), kind)
        phi = cb.phi_hat
        k = cb.topology.t_min
        m = g * m_bar

        assert np.max(np.abs(phi @ phi.conj().T - m * np.eye(k))) <= 1e-10
        assert np.max(np.abs(phi.conj().T @ phi - m * np.eye(k))) <= 1e-10

    @pytest.mark.parametrize("g,m_bar", GROUPINGS_32)
    @pytest.mark.parametrize("kind", [BaseKind.DFT, BaseKind.HADAMARD])
    def test_mse_factor_meets_bound(self, g, m_bar, kind):
        """tr((Phi Phi^H)^-1) = M_bar."""
        cb = build_codebook(GroupTopology(n_bs=4, g=g, m_bar=m_bar), kind)
        assert abs(codebook_mse_factor(cb) - m_bar) <= 1e-9

    def test_immutable(self, dft_codebook):
        """Codebook matrices are read-only."""
        with pytest.raises(ValueError):
            dft_codebook.phi_hat[0, 0] = 0

    def test_short_training_rejected(self, small_topology):
        """T below G * M_bar^2 is rejected."""
        with pytest.raises(ValueError):
            TrainingCodebook(
                topology=small_topology,
                t_slots=4,
                phi_hat=np.ones((8, 4), dtype=complex),
                kind=BaseKind.DFT,
            )


class TestRandomCodebook:
    """Test suite for the random-unitary baseline."""

    def test_haar_unitary(self, rng):
        """Haar draws are unitary."""
        for n in (1, 2, 5):
            assert max_unitarity_violation(haar_unitary(n, rng)) <= 1e-10

    def test_single_connected_phases(self, rng):
        """M_bar = 1 gives unit-modulus entries."""
        cb = random_codebook(GroupTopology(n_bs=4, g=8, m_bar=1), rng)
        np.testing.assert_allclose(np.abs(cb.phi_hat), 1.0, atol=1e-12)

    def test_blocks_unitary(self, random_unitary_codebook):
        """Every per-slot block is unitary."""
        for t in range(random_unitary_codebook.t_slots):
            for block in slot_matrices(random_unitary_codebook, t):
                assert max_unitarity_violation(block) <= 1e-10

    def test_mse_factor_above_bound(self):
        """tr((Phi Phi^H)^-1) > M_bar strictly on every one of 100 seeds."""
        top = GroupTopology(n_bs=4, g=2, m_bar=2)
        factors = [
            codebook_mse_factor(random_codebook(top, np.random.default_rng(seed)))
            for seed in range(100)
        ]

        assert len(factors) == 100
        assert all(factor > 2.0 + 1e-9 for factor in factors)

    def test_reproducible(self, small_topology):
        """Same seed, same codebook."""
        a = random_codebook(small_topology, np.random.default_rng(3))
        b = random_codebook(small_topology, np.random.default_rng(3))

        np.testing.assert_array_equal(a.phi_hat, b.phi_hat)
        assert a.identifier == b.identifier


class TestSlots:
    """Test suite for slot decoding."""

    def test_conventional_slot(self):
        """G=4, M_bar=1: slot 1 holds column 1 of F4."""
        cb = build_codebook(GroupTopology(n_bs=4, g=4, m_bar=1), BaseKind.DFT)
        values = [b[0, 0] for b in slot_matrices(cb, 1)]

        np.testing.assert_allclose(values, dft_matrix(4)[:, 1], atol=1e-15)

    def test_restack_round_trip(self, dft_codebook):
        """Restacking the blocks reproduces the column exactly."""
        for t in range(dft_codebook.t_slots):
            column = restack_slot(slot_matrices(dft_codebook, t))
            np.testing.assert_array_equal(column[:, 0], dft_codebook.phi_hat[:, t])

    def test_blocks_unitary(self, dft_codebook):
        """Slot 0 blocks of the 2x2 DFT codebook are unitary."""
        blocks = slot_matrices(dft_codebook, 0)

        assert len(blocks) == 2
        assert all(max_unitarity_violation(b) <= 1e-10 for b in blocks)

    def test_configuration_block_diagonal(self, dft_codebook):
        """The physical configuration is block diagonal and unitary."""
        config = slot_configuration(dft_codebook, 3)

        assert config.shape == (4, 4)
        np.testing.assert_array_equal(config[:2, 2:], 0)
        assert max_unitarity_violation(config) <= 1e-10

    def test_out_of_range(self, dft_codebook):
        """Slot indices are 0-based."""
        with pytest.raises(IndexError):
            slot_matrices(dft_codebook, dft_codebook.t_slots)
        with pytest.raises(IndexError):
            slot_matrices(dft_codebook, -1)


class TestMseBoundChain:
    """Test suite for the lower-bound chain."""

    def test_structured_terms_coincide(self, dft_codebook):
        """All terms equal M_bar for an optimal codebook."""
        chain = mse_bound_chain(dft_codebook)

        assert chain.trace_inverse == pytest.approx(2.0, abs=1e-9)
        assert chain.diagonal_bound == pytest.approx(2.0, abs=1e-9)
        assert chain.am_hm_bound == pytest.approx(2.0, abs=1e-9)

    def test_random_chain_ordering(self, random_unitary_codebook):
        """tr(W^-1) >= sum 1/W_ii >= K^2/tr(W) = M_bar."""
        chain = mse_bound_chain(random_unitary_codebook)

        assert chain.trace_inverse >= chain.diagonal_bound - 1e-12
        assert chain.diagonal_bound >= chain.am_hm_bound - 1e-12
        assert chain.am_hm_bound == pytest.approx(2.0, abs=1e-9)


class TestBruteForceOracle:
    """Explicit inner-product oracle for the construction."""

    @staticmethod
    def _oracle_gram(mat):
        cols = mat.shape[1]
        rows = mat.shape[0]
        gram = np.zeros((rows, rows), dtype=complex)
        for i in range(rows):
            for j in range(rows):
                total = 0j
                for t in range(cols):
                    total += mat[i, t] * np.conj(mat[j, t])
                gram[i, j] = total
        return gram

    @staticmethod
    def _oracle_block_gram(column, m_bar):
        block = [[column[c * m_bar + r] for c in range(m_bar)] for r in range(m_bar)]
        gram = np.zeros((m_bar, m_bar), dtype=complex)
        for a in range(m_bar):
            for b in range(m_bar):
                gram[a, b] = sum(np.conj(block[r][a]) * block[r][b] for r in range(m_bar))
        return gram

    @pytest.mark.parametrize("g,m_bar,kind", [
        (1, 2, BaseKind.DFT),
        (1, 2, BaseKind.HADAMARD),
        (2, 2, BaseKind.DFT),
        (2, 2, BaseKind.HADAMARD),
        (1, 3, BaseKind.DFT),
        (1, 4, BaseKind.DFT),
        (1, 4, BaseKind.HADAMARD),
    ])
    def test_constraints_entrywise(self, g, m_bar, kind):
        """Gram of Phi_hat and Phi_bar plus every per-slot block Gram, summed explicitly."""
        cb = build_codebook(GroupTopology(n_bs=1, g=g, m_bar=m_bar), kind)
        m = g * m_bar
        k = cb.topology.t_min
        seg = m_bar ** 2

        assert np.max(np.abs(self._oracle_gram(cb.phi_hat) - m * np.eye(k))) <= 1e-12
        assert np.max(np.abs(self._oracle_gram(cb.phibar) - m_bar * np.eye(seg))) <= 1e-12
        for t in range(k):
            for grp in range(g):
                column = cb.phi_hat[grp * seg:(grp + 1) * seg, t]
                residual = self._oracle_block_gram(column, m_bar) - np.eye(m_bar)
                assert np.max(np.abs(residual)) <= 1e-12
        for col in range(seg):
            residual = self._oracle_block_gram(cb.phibar[:, col], m_bar) - np.eye(m_bar)
            assert np.max(np.abs(residual)) <= 1e-12
