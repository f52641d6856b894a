"""The closed-form ridge readout: targets, regularizer sweep, decoding.

The readout is the only trained part of every model.  Classification is
cast as regression onto -1/+1 targets (a single column for two classes,
one column per class otherwise), solved in closed form with Tikhonov
regularization, and decoded back by sign or argmax.

Run:  python3 demos/ridge_readout.py
"""

import numpy as np

from ringgesn import (
    TargetEncoding,
    decode,
    predict_classes,
    predict_scores,
    train_readout,
    train_readout_sweep,
)


def make_blobs(rng, per_class=40, dim=10, gap=1.2):
    """Two Gaussian clouds along the first axis; class 1 sits higher."""
    a = rng.normal(size=(per_class, dim))
    b = rng.normal(size=(per_class, dim))
    a[:, 0] -= gap
    b[:, 0] += gap
    embeddings = np.vstack([a, b])
    classes = np.repeat([0, 1], per_class)
    return embeddings, classes


def main():
    rng = np.random.default_rng(7)
    embeddings, classes = make_blobs(rng)
    targets = TargetEncoding(2, np.where(classes == 1, 1.0, -1.0).reshape(-1, 1))

    print("binary targets use one column of -1/+1:")
    print(f"  classes {classes[:4].tolist()} ... -> "
          f"{targets.vectors[:4, 0].tolist()} ...")
    print()

    betas = np.logspace(-10, 5, 16)
    readouts = train_readout_sweep(embeddings, targets, betas)
    print("regularizer sweep (one matrix factorization for the whole grid):")
    print(f"  {'beta':>8}  {'||weights||':>11}  {'train acc':>9}")
    for beta, readout in zip(betas, readouts):
        norm = np.linalg.norm(readout.weights)
        acc = np.mean(predict_classes(readout, embeddings) == classes)
        print(f"  {beta:8.0e}  {norm:11.4f}  {acc:9.3f}")
    print("  the weight norm only shrinks as beta grows.")
    print()

    readout = train_readout(embeddings, targets, beta=1e-2)
    scores = [predict_scores(readout, e) for e in embeddings[[0, -1]]]
    print("decoding is a sign rule for two classes (score 0 -> class 1):")
    for score in scores:
        print(f"  score {score[0]:+.3f} -> class {decode(readout, score)}")
    print()

    print("three or more classes use one-hot -1/+1 targets and argmax:")
    multi = TargetEncoding(3, np.array([
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ]))
    anchors = np.eye(3)
    readout3 = train_readout(anchors, multi, beta=1e-6)
    for row, embedding in enumerate(anchors):
        score = predict_scores(readout3, embedding)
        with np.printoptions(precision=2, suppress=True):
            print(f"  embedding e_{row}: scores {score} -> "
                  f"class {decode(readout3, score)}")


if __name__ == "__main__":
    main()
