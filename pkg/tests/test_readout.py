"""Ridge readout training, scoring, and decoding."""

import numpy as np
import pytest

from ringgesn.data import Graph, Dataset, encode_targets, TargetEncoding
from ringgesn.readout import (
    Readout,
    decode,
    predict_classes,
    predict_scores,
    train_readout,
    train_readout_sweep,
)


def encoding(values, num_classes=2):
    return TargetEncoding(num_classes, np.asarray(values, dtype=np.float64))


class TestReadoutType:
    def test_binary_needs_one_output(self):
        with pytest.raises(ValueError, match="output"):
            Readout(weights=np.zeros((2, 4)), num_classes=2, beta=1.0)

    def test_multiclass_needs_one_per_class(self):
        with pytest.raises(ValueError, match="output"):
            Readout(weights=np.zeros((2, 4)), num_classes=3, beta=1.0)

    def test_weights_must_be_finite(self):
        with pytest.raises(ValueError, match="finite"):
            Readout(weights=np.full((1, 4), np.nan), num_classes=2, beta=1.0)

    def test_dimensions(self):
        r = Readout(weights=np.zeros((3, 11)), num_classes=3, beta=1.0)
        assert r.hidden_units == 10
        assert r.output_dim == 3


class TestTrain:
    def test_separable_one_dimensional(self):
        embeddings = np.array([[1.0], [-1.0]])
        readout = train_readout(embeddings, encoding([[1.0], [-1.0]]), beta=1e-10)
        assert predict_classes(readout, embeddings).tolist() == [1, 0]

    def test_identical_embeddings_shrunk_mean(self):
        # All columns of the design equal z = [e; 1], so Sherman-Morrison
        # collapses the ridge solution to W = M ybar z^T / (beta + M |z|^2)
        # and every prediction is the shrunk mean target.
        e = np.array([0.5, -2.0, 1.0])
        targets = np.array([[1.0], [1.0], [-1.0], [1.0]])
        m, beta = 4, 2.5
        readout = train_readout(np.tile(e, (m, 1)), encoding(targets), beta=beta)
        z_sq = float(e @ e) + 1.0
        expected = targets.mean() * m * z_sq / (beta + m * z_sq)
        assert predict_scores(readout, e)[0] == pytest.approx(expected, abs=1e-12)

    def test_all_zero_embeddings_shrunk_mean_bias(self):
        targets = np.array([[1.0], [-1.0], [1.0]])
        readout = train_readout(np.zeros((3, 5)), encoding(targets), beta=2.0)
        assert np.allclose(readout.weights[0, :-1], 0.0)
        assert readout.weights[0, -1] == pytest.approx(targets.sum() / (3 + 2.0))

    def test_norm_non_increasing_in_beta(self):
        rng = np.random.default_rng(3)
        embeddings = rng.normal(size=(40, 12))
        targets = encoding(np.where(rng.random(40) < 0.5, -1.0, 1.0).reshape(-1, 1))
        betas = [10.0**e for e in range(-10, 6)]
        readouts = train_readout_sweep(embeddings, targets, betas)
        norms = [np.linalg.norm(r.weights) for r in readouts]
        assert all(a >= b - 1e-12 for a, b in zip(norms, norms[1:]))

    def test_sweep_matches_single_fits(self):
        rng = np.random.default_rng(4)
        embeddings = rng.normal(size=(25, 8))
        targets = encoding(rng.choice([-1.0, 1.0], size=(25, 1)))
        betas = [1e-10, 1e-3, 1.0, 1e4]
        swept = train_readout_sweep(embeddings, targets, betas)
        for readout, beta in zip(swept, betas):
            single = train_readout(embeddings, targets, beta)
            assert readout.beta == beta
            assert np.array_equal(readout.weights, single.weights)

    def test_training_consistency_full_rank(self):
        # M <= N_H + 1 with a full-rank design: near-zero beta interpolates.
        rng = np.random.default_rng(5)
        embeddings = rng.normal(size=(10, 15))
        classes = np.array([0, 1, 2, 0, 1, 2, 0, 1, 2, 0])
        vectors = np.full((10, 3), -1.0)
        vectors[np.arange(10), classes] = 1.0
        readout = train_readout(embeddings, encoding(vectors, 3), beta=1e-10)
        assert predict_classes(readout, embeddings).tolist() == classes.tolist()

    def test_multiclass_output_rows(self):
        rng = np.random.default_rng(6)
        vectors = np.full((9, 3), -1.0)
        vectors[np.arange(9), np.arange(9) % 3] = 1.0
        readout = train_readout(rng.normal(size=(9, 4)), encoding(vectors, 3), beta=0.1)
        assert readout.output_dim == 3
        assert readout.hidden_units == 4

    def test_empty_embeddings_rejected(self):
        with pytest.raises(ValueError, match="non-empty"):
            train_readout(np.zeros((0, 4)), encoding(np.zeros((0, 1))), beta=1.0)

    def test_count_mismatch(self):
        with pytest.raises(ValueError, match="vs"):
            train_readout(np.zeros((3, 4)), encoding([[1.0], [-1.0]]), beta=1.0)


class TestPredict:
    def test_zero_weights_zero_scores(self):
        readout = Readout(weights=np.zeros((3, 6)), num_classes=3, beta=1.0)
        assert np.array_equal(predict_scores(readout, np.ones(5)), np.zeros(3))

    def test_selector_row(self):
        weights = np.array([[1.0, 0.0, 0.0, 0.0]])
        readout = Readout(weights=weights, num_classes=2, beta=1.0)
        e = np.array([7.5, -1.0, 3.0])
        assert predict_scores(readout, e)[0] == 7.5

    def test_matches_dot_product_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n_h = int(rng.integers(1, 9))
            n_o = int(rng.choice([1, 3, 4]))
            num_classes = 2 if n_o == 1 else n_o
            weights = rng.normal(size=(n_o, n_h + 1))
            readout = Readout(weights=weights, num_classes=num_classes, beta=1.0)
            e = rng.normal(size=n_h)
            oracle = np.array(
                [sum(weights[o, j] * e[j] for j in range(n_h)) + weights[o, -1] for o in range(n_o)]
            )
            assert np.allclose(predict_scores(readout, e), oracle, atol=1e-12)

    def test_exact_affine_identity(self):
        # scores(a*x + b*y) = a*scores(x) + b*scores(y) + (1-a-b)*scores(0);
        # when a + b = 2 this is the same as
        # scores(a*x + b*y) + scores(0) = a*scores(x) + b*scores(y).
        rng = np.random.default_rng(8)
        weights = rng.normal(size=(3, 7))
        readout = Readout(weights=weights, num_classes=3, beta=1.0)
        x, y = rng.normal(size=6), rng.normal(size=6)
        zero = predict_scores(readout, np.zeros(6))
        for a, b in [(0.3, 2.2), (1.5, 0.5), (-1.0, 0.25)]:
            combined = predict_scores(readout, a * x + b * y)
            expected = (
                a * predict_scores(readout, x)
                + b * predict_scores(readout, y)
                + (1 - a - b) * zero
            )
            assert np.allclose(combined, expected, atol=1e-12)
        a, b = 1.5, 0.5
        lhs = predict_scores(readout, a * x + b * y) + zero
        rhs = a * predict_scores(readout, x) + b * predict_scores(readout, y)
        assert np.allclose(lhs, rhs, atol=1e-12)

    def test_length_mismatch(self):
        readout = Readout(weights=np.zeros((1, 4)), num_classes=2, beta=1.0)
        with pytest.raises(ValueError, match="shape"):
            predict_scores(readout, np.ones(5))

    def test_batch_matches_single(self):
        rng = np.random.default_rng(9)
        weights = rng.normal(size=(4, 6))
        readout = Readout(weights=weights, num_classes=4, beta=1.0)
        embeddings = rng.normal(size=(11, 5))
        batch = predict_classes(readout, embeddings)
        singles = [decode(readout, predict_scores(readout, e)) for e in embeddings]
        assert batch.tolist() == singles


class TestDecode:
    def binary(self):
        return Readout(weights=np.zeros((1, 3)), num_classes=2, beta=1.0)

    def ternary(self):
        return Readout(weights=np.zeros((3, 3)), num_classes=3, beta=1.0)

    def test_binary_negative(self):
        assert decode(self.binary(), np.array([-0.3])) == 0

    def test_binary_positive(self):
        assert decode(self.binary(), np.array([0.7])) == 1

    def test_binary_zero_boundary(self):
        assert decode(self.binary(), np.array([0.0])) == 1

    def test_multiclass_argmax(self):
        assert decode(self.ternary(), np.array([0.2, -0.1, 0.8])) == 2

    def test_multiclass_tie_lowest_index(self):
        assert decode(self.ternary(), np.array([0.1, 0.9, 0.9])) == 1

    def test_shift_invariance(self):
        scores = np.array([0.2, -0.4, 0.1])
        shifted = scores + 5.0
        assert decode(self.ternary(), scores) == decode(self.ternary(), shifted)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="shape"):
            decode(self.ternary(), np.array([1.0]))


class TestEncodeDecodeIdentity:
    @pytest.mark.parametrize("num_classes", [2, 3, 5])
    def test_round_trip(self, num_classes):
        g = Graph(num_vertices=1, edges=np.zeros((0, 2)), vertex_labels=np.ones((1, 1)))
        ds = Dataset(
            name="t",
            graphs=(g,) * num_classes,
            targets=np.arange(num_classes),
            num_classes=num_classes,
            input_dim=1,
            degree=0,
        )
        enc = encode_targets(ds)
        readout = Readout(
            weights=np.zeros((enc.output_dim, 3)), num_classes=num_classes, beta=1.0
        )
        for c in range(num_classes):
            assert decode(readout, enc.vectors[c]) == c
