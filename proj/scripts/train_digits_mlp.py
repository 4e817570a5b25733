#!/usr/bin/env python3
"""Regenerates the bundled desk-scale classifier and its test set.

Trains a bias-free 64-128-10 ReLU MLP on the scikit-learn digits images
(8x8 handwritten digits, intensities normalized to [0, 1]), rescales each
layer by its peak training activation so a unit firing threshold works for
rate-coded spiking inference, and writes:

  data/digits_mlp.txt   plain-text network (layers / thresholds / matrices)
  data/digits_test.csv  1000 held-out samples, label + 64 intensities per row

Deterministic: fixed seeds, full-batch shuffling with a pinned generator.
Requires numpy and scikit-learn only.
"""

import pathlib

import numpy as np
from sklearn.datasets import load_digits

OUT_DIR = pathlib.Path(__file__).resolve().parent.parent / "data"
HIDDEN = 128
TEST_SAMPLES = 1000
EPOCHS = 400
BATCH = 64
LEARNING_RATE = 3e-3
SEED = 7


def forward(x, w1, w2):
    h = np.maximum(x @ w1, 0.0)
    return h, h @ w2


def main():
    rng = np.random.default_rng(SEED)
    digits = load_digits()
    x = digits.data / 16.0
    y = digits.target

    order = rng.permutation(len(x))
    x, y = x[order], y[order]
    x_test, y_test = x[:TEST_SAMPLES], y[:TEST_SAMPLES]
    x_train, y_train = x[TEST_SAMPLES:], y[TEST_SAMPLES:]

    n_in, n_out = x.shape[1], 10
    w1 = rng.normal(0.0, np.sqrt(2.0 / n_in), size=(n_in, HIDDEN))
    w2 = rng.normal(0.0, np.sqrt(2.0 / HIDDEN), size=(HIDDEN, n_out))

    # Adam, cross-entropy, no biases (biases have no counterpart in the
    # integrate-and-fire readout this network is consumed by).
    m1 = np.zeros_like(w1); v1 = np.zeros_like(w1)
    m2 = np.zeros_like(w2); v2 = np.zeros_like(w2)
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    step = 0
    onehot = np.eye(n_out)[y_train]

    for epoch in range(EPOCHS):
        perm = rng.permutation(len(x_train))
        for start in range(0, len(x_train), BATCH):
            idx = perm[start:start + BATCH]
            xb, tb = x_train[idx], onehot[idx]
            h, logits = forward(xb, w1, w2)
            z = logits - logits.max(axis=1, keepdims=True)
            p = np.exp(z)
            p /= p.sum(axis=1, keepdims=True)
            g_logits = (p - tb) / len(xb)
            g_w2 = h.T @ g_logits
            g_h = g_logits @ w2.T
            g_h[h <= 0.0] = 0.0
            g_w1 = xb.T @ g_h

            step += 1
            for w, g, m, v in ((w1, g_w1, m1, v1), (w2, g_w2, m2, v2)):
                m *= beta1; m += (1 - beta1) * g
                v *= beta2; v += (1 - beta2) * g * g
                mhat = m / (1 - beta1 ** step)
                vhat = v / (1 - beta2 ** step)
                w -= LEARNING_RATE * mhat / (np.sqrt(vhat) + eps)

    _, logits = forward(x_train, w1, w2)
    train_acc = float((logits.argmax(axis=1) == y_train).mean())
    _, logits = forward(x_test, w1, w2)
    test_acc = float((logits.argmax(axis=1) == y_test).mean())
    print(f"ann train acc {train_acc:.4f}  test acc {test_acc:.4f}")

    # Layer-wise max-activation normalization: with inputs already in [0, 1],
    # divide each layer's weights by its 99.9th-percentile peak activation so
    # every normalized activation stays near or below 1 and a threshold of
    # 1.0 is meaningful for spike counting.
    h_pre = x_train @ w1
    scale1 = np.percentile(np.maximum(h_pre, 0.0).max(axis=1), 99.9)
    w1_n = w1 / scale1
    h_norm = np.maximum(x_train @ w1_n, 0.0)
    out_pre = h_norm @ w2
    scale2 = np.percentile(np.maximum(out_pre, 0.0).max(axis=1), 99.9)
    w2_n = w2 / scale2
    print(f"normalization scales {scale1:.4f} {scale2:.4f}")

    OUT_DIR.mkdir(exist_ok=True)
    net_path = OUT_DIR / "digits_mlp.txt"
    with open(net_path, "w") as f:
        f.write("# bias-free relu mlp trained on the scikit-learn digits set,\n")
        f.write("# weights rescaled per layer for unit firing thresholds\n")
        f.write(f"layers: {n_in} {HIDDEN} {n_out}\n")
        f.write("thresholds: 1.0 1.0\n")
        for w in (w1_n, w2_n):
            for row in w:
                f.write(" ".join(f"{value:.17g}" for value in row) + "\n")
    print(f"wrote {net_path}")

    data_path = OUT_DIR / "digits_test.csv"
    with open(data_path, "w") as f:
        f.write("label," + ",".join(f"x{i}" for i in range(n_in)) + "\n")
        for label, row in zip(y_test, x_test):
            f.write(str(int(label)) + "," + ",".join(f"{v:.6g}" for v in row) + "\n")
    print(f"wrote {data_path} ({len(y_test)} samples)")


if __name__ == "__main__":
    main()
