"""Multi-output multilayer perceptron trained by mini-batch SGD.

The loss is mean squared error over every sample and output component plus
an L2 penalty on the weight matrices (biases excluded). Gradients come
from exact backpropagation; the training loop is plain constant-rate SGD
so each update is an auditable function of the loss gradient.
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin

from .validation import ValidationError, as_matrix, check_fitted, check_same_rows

ACTIVATIONS = ("relu", "tanh")


def _activate(z, kind):
    if kind == "relu":
        return np.maximum(z, 0.0)
    return np.tanh(z)


def _activate_grad(z, kind):
    if kind == "relu":
        return (z > 0.0).astype(np.float64)
    t = np.tanh(z)
    return 1.0 - t * t


class MlpRegressor(BaseEstimator, RegressorMixin):
    """Dense feed-forward regressor with a linear output layer.

    Weights start uniform in +-sqrt(6 / (fan_in + fan_out)) drawn from the
    seeded stream; biases start at zero. When early stopping is enabled, a
    seeded ``validation_fraction`` of the fitting rows is carved off to
    monitor validation MSE, and the best-validation weights are restored
    at the end of training.

    Inputs are assumed pre-standardized; no internal rescaling happens.
    """

    def __init__(self, hidden_layers=(100,), activation="relu",
                 learning_rate=0.01, l2_alpha=0.0, batch_size=32,
                 max_epochs=200, early_stop_patience=10,
                 validation_fraction=0.1, seed=0):
        self.hidden_layers = hidden_layers
        self.activation = activation
        self.learning_rate = learning_rate
        self.l2_alpha = l2_alpha
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.early_stop_patience = early_stop_patience
        self.validation_fraction = validation_fraction
        self.seed = seed

    def _check_params(self):
        if any(int(h) < 1 for h in self.hidden_layers):
            raise ValidationError("hidden layer sizes must be positive")
        if self.activation not in ACTIVATIONS:
            raise ValidationError(
                f"activation must be one of {ACTIVATIONS}, got {self.activation!r}"
            )
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be positive")
        if self.l2_alpha < 0:
            raise ValidationError("l2_alpha must be nonnegative")
        if self.batch_size < 1:
            raise ValidationError("batch_size must be positive")
        if self.max_epochs < 0:
            raise ValidationError("max_epochs must be >= 0")
        if self.early_stop_patience is not None and self.early_stop_patience < 1:
            raise ValidationError("early_stop_patience must be positive or None")
        if not 0.0 < self.validation_fraction <= 0.5:
            raise ValidationError("validation_fraction must be in (0, 0.5]")
        if int(self.seed) < 0:
            raise ValidationError("seed must be a nonnegative integer")

    def _init_weights(self, n_features, n_outputs, rng):
        sizes = [n_features] + [int(h) for h in self.hidden_layers] + [n_outputs]
        self.coefs_ = []
        self.intercepts_ = []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            self.coefs_.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            self.intercepts_.append(np.zeros(fan_out))

    def forward(self, X):
        """Network output for pre-standardized inputs."""
        check_fitted(self, "coefs_")
        X = as_matrix(X, n_cols=self.n_features_in_)
        h = X
        last = len(self.coefs_) - 1
        for l, (W, b) in enumerate(zip(self.coefs_, self.intercepts_)):
            z = h @ W + b
            h = z if l == last else _activate(z, self.activation)
        return h

    def loss_and_gradients(self, X, Y, l2_alpha=None):
        """Loss and its exact gradient at the current weights.

        loss = mean((forward(X) - Y)^2) + l2_alpha * sum(|W_l|^2); the
        penalty covers weight matrices only, never biases.
        """
        check_fitted(self, "coefs_")
        alpha = self.l2_alpha if l2_alpha is None else l2_alpha
        X = as_matrix(X, n_cols=self.n_features_in_)
        Y = as_matrix(Y, name="Y", n_cols=self.n_outputs_)
        check_same_rows(X, Y, "X", "Y")

        last = len(self.coefs_) - 1
        pre = []
        acts = [X]
        h = X
        for l, (W, b) in enumerate(zip(self.coefs_, self.intercepts_)):
            z = h @ W + b
            pre.append(z)
            h = z if l == last else _activate(z, self.activation)
            acts.append(h)

        diff = acts[-1] - Y
        loss = float(np.mean(diff * diff))
        loss += alpha * sum(float(np.sum(W * W)) for W in self.coefs_)

        grads_w = [None] * len(self.coefs_)
        grads_b = [None] * len(self.coefs_)
        delta = 2.0 * diff / diff.size
        for l in range(last, -1, -1):
            grads_w[l] = acts[l].T @ delta + 2.0 * alpha * self.coefs_[l]
            grads_b[l] = delta.sum(axis=0)
            if l > 0:
                delta = (delta @ self.coefs_[l].T) * _activate_grad(
                    pre[l - 1], self.activation
                )
        return loss, (grads_w, grads_b)

    def _objective(self, X, Y):
        diff = self.forward(X) - Y
        loss = float(np.mean(diff * diff))
        return loss + self.l2_alpha * sum(
            float(np.sum(W * W)) for W in self.coefs_
        )

    def fit(self, X, y):
        self._check_params()
        X = as_matrix(X)
        y = np.asarray(y, dtype=np.float64)
        self._single_output = y.ndim == 1
        Y = y.reshape(-1, 1) if self._single_output else as_matrix(y, name="y")
        check_same_rows(X, Y, "X", "y")
        n = X.shape[0]
        if n < 2:
            raise ValidationError(f"need at least 2 rows to fit, got {n}")

        self.n_features_in_ = X.shape[1]
        self.n_outputs_ = Y.shape[1]
        rng = np.random.default_rng(int(self.seed))
        self._init_weights(self.n_features_in_, self.n_outputs_, rng)

        early_stopping = self.early_stop_patience is not None
        if early_stopping:
            n_val = max(1, int(round(self.validation_fraction * n)))
            perm = rng.permutation(n)
            X_val, Y_val = X[perm[:n_val]], Y[perm[:n_val]]
            X_fit, Y_fit = X[perm[n_val:]], Y[perm[n_val:]]
        else:
            X_fit, Y_fit = X, Y
            X_val = Y_val = None
        n_fit = X_fit.shape[0]
        if n_fit < 1:
            raise ValidationError("validation split left no fitting rows")
        batch = min(int(self.batch_size), n_fit)

        def val_mse():
            diff = self.forward(X_val) - Y_val
            return float(np.mean(diff * diff))

        curve = [{
            "epoch": 0,
            "train_loss": self._objective(X_fit, Y_fit),
            "val_loss": val_mse() if early_stopping else None,
        }]
        best_val = curve[0]["val_loss"]
        best_weights = None
        if early_stopping:
            best_weights = ([W.copy() for W in self.coefs_],
                            [b.copy() for b in self.intercepts_])
        stale = 0

        for epoch in range(1, int(self.max_epochs) + 1):
            order = rng.permutation(n_fit)
            # overflow during divergence is caught by the finite check below
            with np.errstate(over="ignore", invalid="ignore"):
                for start in range(0, n_fit, batch):
                    rows = order[start:start + batch]
                    _, (gW, gb) = self.loss_and_gradients(X_fit[rows],
                                                          Y_fit[rows])
                    for l in range(len(self.coefs_)):
                        self.coefs_[l] -= self.learning_rate * gW[l]
                        self.intercepts_[l] -= self.learning_rate * gb[l]
                train_loss = self._objective(X_fit, Y_fit)
            if not np.isfinite(train_loss):
                raise ValidationError(
                    f"training diverged: non-finite loss at epoch {epoch}"
                )
            entry = {"epoch": epoch, "train_loss": train_loss, "val_loss": None}
            if early_stopping:
                entry["val_loss"] = val_mse()
                if entry["val_loss"] < best_val:
                    best_val = entry["val_loss"]
                    best_weights = ([W.copy() for W in self.coefs_],
                                    [b.copy() for b in self.intercepts_])
                    stale = 0
                else:
                    stale += 1
            curve.append(entry)
            if early_stopping and stale >= self.early_stop_patience:
                break

        if early_stopping and best_weights is not None:
            self.coefs_, self.intercepts_ = best_weights
        self.training_curve_ = curve
        return self

    def predict(self, X):
        out = self.forward(X)
        return out[:, 0] if self._single_output else out

    def to_dict(self):
        check_fitted(self, "coefs_")
        params = self.get_params()
        params["hidden_layers"] = list(params["hidden_layers"])
        return {
            "kind": "mlp",
            "params": params,
            "n_features": self.n_features_in_,
            "n_outputs": self.n_outputs_,
            "single_output": self._single_output,
            "coefs": [W.tolist() for W in self.coefs_],
            "intercepts": [b.tolist() for b in self.intercepts_],
        }

    @classmethod
    def from_dict(cls, d):
        model = cls(**d["params"])
        model.n_features_in_ = d["n_features"]
        model.n_outputs_ = d["n_outputs"]
        model._single_output = d["single_output"]
        model.coefs_ = [np.asarray(W, dtype=np.float64) for W in d["coefs"]]
        model.intercepts_ = [np.asarray(b, dtype=np.float64)
                             for b in d["intercepts"]]
        return model
