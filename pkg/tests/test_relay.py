import numpy as np
import pytest

import oracles
from eafrelay.errors import ArgumentError
from eafrelay.probability import JointPMF, cond_mutual_information, marginalize
from eafrelay.relay import (
    InputDistributions,
    Quantizer,
    RelayChannel,
    RelayJoint,
    assemble_joint,
    direct_link_distribution,
    factorization_residual,
    markov_residual,
)


def build(px1, px2, ch, qz):
    return assemble_joint(RelayChannel.from_array(ch), InputDistributions.from_arrays(px1, px2),
                          Quantizer.from_array(qz))


def deterministic_channel(f, sizes):
    """Channel table with (y, y1) = f(x1, x2)."""
    n1, n2, ny, ny1 = sizes
    t = np.zeros(sizes)
    for a in range(n1):
        for b in range(n2):
            t[(a, b) + f(a, b)] = 1.0
    return t


def copy_quantizer(n2, ny1):
    q = np.zeros((n2, ny1, ny1))
    for b in range(n2):
        q[b] = np.eye(ny1)
    return q


class TestAssemble:
    def test_product_of_uniforms(self):
        ch = np.full((2, 2, 2, 2), 0.25)
        qz = np.zeros((2, 2, 2))
        qz[..., 0] = 1
        rj = build([0.5, 0.5], [0.5, 0.5], ch, qz)
        expected = np.zeros((2, 2, 2, 2, 2))
        expected[..., 0] = 1 / 16
        np.testing.assert_allclose(rj.joint.mass, expected, atol=1e-15)
        assert rj.joint.names == ("x1", "x2", "y", "y1", "yhat")

    def test_deterministic_support_count(self):
        ch = deterministic_channel(lambda a, b: (a, a), (3, 2, 3, 3))
        rj = build(np.full(3, 1 / 3), [0.5, 0.5], ch, copy_quantizer(2, 3))
        assert np.count_nonzero(rj.joint.mass) == 3 * 2

    def test_matches_product_oracle(self):
        px1, px2, ch, qz = oracles.dirichlet_instance(np.random.default_rng(42), (2, 2, 2, 2, 2))
        rj = build(px1, px2, ch, qz)
        np.testing.assert_allclose(rj.joint.mass, oracles.relay_joint(px1, px2, ch, qz), atol=1e-12, rtol=0)
        assert abs(rj.joint.mass.sum() - 1) <= 1e-12

    def test_alphabet_mismatch(self):
        px1, px2, ch, qz = oracles.dirichlet_instance(np.random.default_rng(0), (2, 2, 2, 2, 2))
        with pytest.raises(ArgumentError, match="y1"):
            build(px1, px2, ch, np.full((2, 3, 2), 0.5))
        with pytest.raises(ArgumentError, match="x1"):
            build([1 / 3] * 3, px2, ch, qz)

    def test_channel_axes_enforced(self):
        with pytest.raises(ArgumentError):
            RelayChannel.from_array(np.full((2, 2, 2), 0.5))

    @pytest.mark.parametrize("seed", range(20))
    def test_factor_recovery(self, seed):
        rng = np.random.default_rng(seed)
        sizes = tuple(rng.integers(1, 4, size=5))
        px1, px2, ch, qz = oracles.dirichlet_instance(rng, sizes)
        rj = build(px1, px2, ch, qz)
        np.testing.assert_allclose(marginalize(rj.joint, ["x1"]).mass, px1, atol=1e-12, rtol=0)
        np.testing.assert_allclose(marginalize(rj.joint, ["x2"]).mass, px2, atol=1e-12, rtol=0)
        m4 = marginalize(rj.joint, ["x1", "x2", "y", "y1"]).mass
        np.testing.assert_allclose(m4 / np.multiply.outer(px1, px2)[..., None, None], ch, atol=1e-10, rtol=0)
        assert factorization_residual(rj) <= 1e-10
        assert markov_residual(rj) <= 1e-10

    def test_factor_recovery_skips_zero_inputs(self):
        px1, _, ch, qz = oracles.dirichlet_instance(np.random.default_rng(1), (2, 2, 2, 2, 2))
        rj = build(px1, [1.0, 0.0], ch, qz)
        assert factorization_residual(rj) <= 1e-10


class TestMarkovResidual:
    def test_constant_quantizer_exact_zero(self):
        px1, px2, ch, _ = oracles.dirichlet_instance(np.random.default_rng(3), (2, 2, 2, 2, 2))
        rj = build(px1, px2, ch, np.ones((2, 2, 1)))
        assert markov_residual(rj) == 0.0

    def test_violating_table_positive(self):
        px1, px2, ch, qz = oracles.dirichlet_instance(np.random.default_rng(4), (2, 2, 2, 2, 2))
        good = build(px1, px2, ch, qz)
        # yhat copies x1 instead of looking at (x2, y1)
        m = np.einsum("abcd,ae->abcde", good.joint.mass.sum(axis=4), np.eye(2))
        bad = RelayJoint(JointPMF(good.joint.axes, m), good.channel, good.inputs, good.quantizer)
        want = oracles.cmi(m, [4], [0, 2], [1, 3])
        assert want > 1e-3
        assert markov_residual(bad) == pytest.approx(want, abs=1e-10)


class TestDirectLink:
    def test_noiseless(self):
        ch = deterministic_channel(lambda a, b: (b, 0), (2, 3, 3, 1))
        link = direct_link_distribution(RelayChannel.from_array(ch), InputDistributions.from_arrays([0.3, 0.7], [1 / 3] * 3))
        np.testing.assert_allclose(link.mass, np.eye(3), atol=1e-15)

    def test_useless(self):
        ch = np.zeros((2, 3, 2, 2))
        ch[...] = np.array([[0.1, 0.2], [0.3, 0.4]])
        link = direct_link_distribution(RelayChannel.from_array(ch), InputDistributions.from_arrays([0.5, 0.5], [1 / 3] * 3))
        for row in link.mass:
            np.testing.assert_allclose(row, link.mass[0], atol=1e-15)

    def test_oracle(self):
        px1, px2, ch, qz = oracles.dirichlet_instance(np.random.default_rng(9), (3, 2, 3, 2, 2))
        link = direct_link_distribution(RelayChannel.from_array(ch), InputDistributions.from_arrays(px1, px2))
        want = np.zeros((2, 3))
        for x1 in range(3):
            for x2 in range(2):
                for y in range(3):
                    for y1 in range(2):
                        want[x2, y] += px1[x1] * ch[x1, x2, y, y1]
        np.testing.assert_allclose(link.mass, want, atol=1e-12, rtol=0)
        np.testing.assert_allclose(link.mass.sum(axis=1), 1.0, atol=1e-12)


def test_markov_identity_on_joint():
    px1, px2, ch, qz = oracles.dirichlet_instance(np.random.default_rng(8), (3, 3, 2, 3, 2))
    rj = build(px1, px2, ch, qz)
    assert cond_mutual_information(rj.joint, ["yhat"], ["x1"], ["x2", "y", "y1"]) <= 1e-10
