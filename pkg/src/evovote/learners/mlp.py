"""Multilayer perceptron: softmax output, cross-entropy loss, mini-batch SGD.

One or two equal-width hidden layers. The jitted step routine exposes the
analytic gradients it trains with, so they can be checked directly against
finite differences of the jitted loss.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._rng import make_state, next_double, shuffle_inplace
from .scaling import MinMaxScaler

ACT_CODES = {"relu": 0, "tanh": 1, "logistic": 2}
BATCH_SIZE = 16


@njit(cache=True)
def _activate(Z, code):
    A = np.empty_like(Z)
    for i in range(Z.shape[0]):
        for j in range(Z.shape[1]):
            z = Z[i, j]
            if code == 0:
                A[i, j] = z if z > 0.0 else 0.0
            elif code == 1:
                A[i, j] = np.tanh(z)
            else:
                A[i, j] = 1.0 / (1.0 + np.exp(-z)) if z >= 0.0 else np.exp(z) / (1.0 + np.exp(z))
    return A


@njit(cache=True)
def _act_grad(Z, A, dA, code):
    dZ = np.empty_like(dA)
    for i in range(dA.shape[0]):
        for j in range(dA.shape[1]):
            if code == 0:
                dZ[i, j] = dA[i, j] if Z[i, j] > 0.0 else 0.0
            elif code == 1:
                dZ[i, j] = dA[i, j] * (1.0 - A[i, j] * A[i, j])
            else:
                dZ[i, j] = dA[i, j] * A[i, j] * (1.0 - A[i, j])
    return dZ


@njit(cache=True)
def _affine(A, W, b):
    Z = np.dot(A, W)
    for i in range(Z.shape[0]):
        for j in range(Z.shape[1]):
            Z[i, j] += b[j]
    return Z


@njit(cache=True)
def _softmax_ce(out, Y):
    """Row-wise softmax probabilities and mean cross-entropy."""
    n = out.shape[0]
    P = np.empty_like(out)
    loss = 0.0
    for i in range(n):
        m = out[i, 0] if out[i, 0] > out[i, 1] else out[i, 1]
        e0 = np.exp(out[i, 0] - m)
        e1 = np.exp(out[i, 1] - m)
        s = e0 + e1
        P[i, 0] = e0 / s
        P[i, 1] = e1 / s
        lse = m + np.log(s)
        loss += Y[i, 0] * (lse - out[i, 0]) + Y[i, 1] * (lse - out[i, 1])
    return P, loss / n


@njit(cache=True)
def _forward_loss(X, Y, W1, b1, W2, b2, Wo, bo, two_layers, act):
    A1 = _activate(_affine(X, W1, b1), act)
    A_last = _activate(_affine(A1, W2, b2), act) if two_layers else A1
    _, loss = _softmax_ce(_affine(A_last, Wo, bo), Y)
    return loss


@njit(cache=True)
def _loss_and_grads(X, Y, W1, b1, W2, b2, Wo, bo, two_layers, act):
    n = X.shape[0]
    Z1 = _affine(X, W1, b1)
    A1 = _activate(Z1, act)
    if two_layers:
        Z2 = _affine(A1, W2, b2)
        A2 = _activate(Z2, act)
        A_last = A2
    else:
        Z2 = Z1  # placeholders, unused
        A2 = A1
        A_last = A1
    out = _affine(A_last, Wo, bo)
    P, loss = _softmax_ce(out, Y)

    dOut = (P - Y) / n
    gWo = np.dot(A_last.T, dOut)
    gbo = dOut.sum(axis=0)
    dA_last = np.dot(dOut, Wo.T)

    if two_layers:
        dZ2 = _act_grad(Z2, A2, dA_last, act)
        gW2 = np.dot(A1.T, dZ2)
        gb2 = dZ2.sum(axis=0)
        dA1 = np.dot(dZ2, W2.T)
    else:
        gW2 = np.zeros_like(W2)
        gb2 = np.zeros_like(b2)
        dA1 = dA_last
    dZ1 = _act_grad(Z1, A1, dA1, act)
    gW1 = np.dot(X.T, dZ1)
    gb1 = dZ1.sum(axis=0)
    return loss, gW1, gb1, gW2, gb2, gWo, gbo


@njit(cache=True)
def _glorot(state, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    W = np.empty((fan_in, fan_out), dtype=np.float64)
    for i in range(fan_in):
        for j in range(fan_out):
            W[i, j] = (2.0 * next_double(state) - 1.0) * limit
    return W


@njit(cache=True)
def _fit_sgd(X, Y, h1, h2, act, lr, epochs, batch, seed):
    n, f = X.shape
    state = np.empty(1, dtype=np.uint64)
    state[0] = seed
    two_layers = h2 > 0

    W1 = _glorot(state, f, h1)
    b1 = np.zeros(h1, dtype=np.float64)
    if two_layers:
        W2 = _glorot(state, h1, h2)
        b2 = np.zeros(h2, dtype=np.float64)
        last = h2
    else:
        W2 = np.zeros((0, 0), dtype=np.float64)
        b2 = np.zeros(0, dtype=np.float64)
        last = h1
    Wo = _glorot(state, last, 2)
    bo = np.zeros(2, dtype=np.float64)

    perm = np.arange(n)
    for _ in range(epochs):
        shuffle_inplace(state, perm)
        start = 0
        while start < n:
            stop = min(start + batch, n)
            Xb = X[perm[start:stop]]
            Yb = Y[perm[start:stop]]
            _, gW1, gb1, gW2, gb2, gWo, gbo = _loss_and_grads(
                Xb, Yb, W1, b1, W2, b2, Wo, bo, two_layers, act
            )
            W1 -= lr * gW1
            b1 -= lr * gb1
            if two_layers:
                W2 -= lr * gW2
                b2 -= lr * gb2
            Wo -= lr * gWo
            bo -= lr * gbo
            start = stop
    return W1, b1, W2, b2, Wo, bo


class MlpClassifier:
    def __init__(self, hidden_layers=(16,), activation: str = "relu",
                 learning_rate: float = 0.01, epochs: int = 100, seed: int = 0):
        self.hidden_layers = tuple(hidden_layers)
        self.activation = activation
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.seed = seed

    def fit(self, X: np.ndarray, y: np.ndarray):
        self._scaler = MinMaxScaler().fit(X)
        Xs = self._scaler.transform(X)
        y = np.asarray(y, dtype=np.int64)
        Y = np.zeros((y.size, 2), dtype=np.float64)
        Y[np.arange(y.size), y] = 1.0
        h1 = self.hidden_layers[0]
        h2 = self.hidden_layers[1] if len(self.hidden_layers) > 1 else 0
        self._weights = _fit_sgd(
            Xs, Y, h1, h2, ACT_CODES[self.activation],
            self.learning_rate, self.epochs, BATCH_SIZE,
            np.uint64(self.seed & 0xFFFFFFFFFFFFFFFF),
        )
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        Xs = self._scaler.transform(X)
        W1, b1, W2, b2, Wo, bo = self._weights
        act = ACT_CODES[self.activation]
        Y_dummy = np.zeros((Xs.shape[0], 2), dtype=np.float64)
        two_layers = len(self.hidden_layers) > 1
        A1 = _activate(_affine(Xs, W1, b1), act)
        A_last = _activate(_affine(A1, W2, b2), act) if two_layers else A1
        P, _ = _softmax_ce(_affine(A_last, Wo, bo), Y_dummy)
        return P

    # gradient-check hooks: the exact jitted routines training runs on
    def loss_and_gradients(self, weights, X, Y):
        W1, b1, W2, b2, Wo, bo = weights
        two_layers = len(self.hidden_layers) > 1
        return _loss_and_grads(X, Y, W1, b1, W2, b2, Wo, bo, two_layers,
                               ACT_CODES[self.activation])

    def loss(self, weights, X, Y):
        W1, b1, W2, b2, Wo, bo = weights
        two_layers = len(self.hidden_layers) > 1
        return _forward_loss(X, Y, W1, b1, W2, b2, Wo, bo, two_layers,
                             ACT_CODES[self.activation])

    def initial_weights(self, n_features: int):
        state = make_state(self.seed)
        h1 = self.hidden_layers[0]
        h2 = self.hidden_layers[1] if len(self.hidden_layers) > 1 else 0
        W1 = _glorot(state, n_features, h1)
        if h2 > 0:
            W2 = _glorot(state, h1, h2)
            b2 = np.zeros(h2)
            last = h2
        else:
            W2 = np.zeros((0, 0))
            b2 = np.zeros(0)
            last = h1
        Wo = _glorot(state, last, 2)
        return W1, np.zeros(h1), W2, b2, Wo, np.zeros(2)
