"""Decision tree labeller and logistic scorer used in the second pass."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from ..errors import DegenerateData, FormatError

N_FEATURES = 5


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _check_labels(y: np.ndarray) -> None:
    if y.size == 0 or y.min() == y.max():
        raise DegenerateData("training data needs both positive and negative examples")


# ---------------------------------------------------------------- logistic regression

def logistic_loss_and_grad(params: np.ndarray, X: np.ndarray, y: np.ndarray,
                           l2: float = 0.0) -> Tuple[float, np.ndarray]:
    """Mean log loss plus ``l2/2 * ||w||^2`` and its gradient.

    ``params`` is ``[w_1..w_d, bias]``; the bias is not regularized.
    """
    w, b = params[:-1], params[-1]
    z = X @ w + b
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * (w @ w))
    residual = (sigmoid(z) - y) / len(y)
    grad = np.empty_like(params)
    grad[:-1] = X.T @ residual + l2 * w
    grad[-1] = residual.sum()
    return loss, grad


@dataclass
class LogisticHyper:
    learning_rate: float = 0.5
    epochs: int = 2000
    l2: float = 1e-3


def train_logistic(X, y, hyper: LogisticHyper = LogisticHyper()) -> Tuple[np.ndarray, float]:
    """Full-batch gradient descent from zero; returns ``(weights, bias)``."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    _check_labels(y)
    params = np.zeros(X.shape[1] + 1)
    for _ in range(hyper.epochs):
        _, grad = logistic_loss_and_grad(params, X, y, hyper.l2)
        params -= hyper.learning_rate * grad
    return params[:-1].copy(), float(params[-1])


# ---------------------------------------------------------------- decision tree

@dataclass
class TreeNode:
    feature: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None
    leaf: Optional[bool] = None

    @property
    def is_leaf(self) -> bool:
        return self.leaf is not None

    def predict(self, x: Sequence[float]) -> bool:
        node = self
        while not node.is_leaf:
            node = node.right if x[node.feature] > node.threshold else node.left
        return node.leaf

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"leaf": self.leaf}
        return {"feature": self.feature, "threshold": self.threshold,
                "left": self.left.to_dict(), "right": self.right.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "TreeNode":
        if "leaf" in data:
            return cls(leaf=bool(data["leaf"]))
        try:
            feature = int(data["feature"])
            if not 0 <= feature < N_FEATURES:
                raise ValueError(f"feature index {feature} out of range")
            return cls(feature=feature, threshold=float(data["threshold"]),
                       left=cls.from_dict(data["left"]), right=cls.from_dict(data["right"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad tree node: {exc}") from None


def _gini(pos: float, n: float) -> float:
    if n == 0:
        return 0.0
    p = pos / n
    return 2.0 * p * (1.0 - p)


@dataclass
class TreeHyper:
    max_depth: int = 4
    min_leaf: int = 1


def train_tree(X, y, hyper: TreeHyper = TreeHyper()) -> TreeNode:
    """Greedy CART on Gini impurity with midpoint thresholds.

    A split must strictly reduce impurity; among equal reductions the lower
    feature index, then the lower threshold, wins. Leaves take the majority
    label, with ties going to False.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=bool)
    _check_labels(y)
    return _grow(X, y, 0, hyper)


def _grow(X: np.ndarray, y: np.ndarray, depth: int, hyper: TreeHyper) -> TreeNode:
    n = len(y)
    pos = int(y.sum())
    majority = pos * 2 > n
    if pos == 0 or pos == n or depth >= hyper.max_depth or n < 2 * hyper.min_leaf:
        return TreeNode(leaf=majority)
    parent = _gini(pos, n)
    best = None  # (gain, feature, threshold)
    for f in range(X.shape[1]):
        order = np.argsort(X[:, f], kind="stable")
        xs, ys = X[order, f], y[order]
        left_pos = np.cumsum(ys)
        for i in range(hyper.min_leaf, n - hyper.min_leaf + 1):
            if xs[i - 1] == xs[i]:
                continue
            lp = int(left_pos[i - 1])
            child = (i * _gini(lp, i) + (n - i) * _gini(pos - lp, n - i)) / n
            gain = parent - child
            if gain > 1e-12 and (best is None or gain > best[0] + 1e-12):
                best = (gain, f, (xs[i - 1] + xs[i]) / 2.0)
    if best is None:
        return TreeNode(leaf=majority)
    _, f, threshold = best
    go_right = X[:, f] > threshold
    return TreeNode(feature=f, threshold=float(threshold),
                    left=_grow(X[~go_right], y[~go_right], depth + 1, hyper),
                    right=_grow(X[go_right], y[go_right], depth + 1, hyper))


# ---------------------------------------------------------------- ensemble

@dataclass
class ClassifierModel:
    weights: np.ndarray
    bias: float
    tree: TreeNode
    hyperparameters: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.weights.shape != (N_FEATURES,):
            raise FormatError(f"expected {N_FEATURES} logistic weights, got {self.weights.shape}")
        self._w = [float(w) for w in self.weights]

    def score(self, x: Sequence[float]) -> float:
        z = self.bias + sum(w * v for w, v in zip(self._w, x))
        if z >= 0:
            return 1.0 / (1.0 + math.exp(-z))
        ez = math.exp(z)
        return ez / (1.0 + ez)

    def to_dict(self) -> dict:
        return {"logistic": {"weights": [float(w) for w in self.weights], "bias": self.bias},
                "tree": self.tree.to_dict(), "hyperparameters": self.hyperparameters,
                "metadata": self.metadata}

    @classmethod
    def from_dict(cls, data: dict) -> "ClassifierModel":
        try:
            logistic = data["logistic"]
            return cls(weights=logistic["weights"], bias=float(logistic["bias"]),
                       tree=TreeNode.from_dict(data["tree"]),
                       hyperparameters=dict(data.get("hyperparameters", {})),
                       metadata=dict(data.get("metadata", {})))
        except (KeyError, TypeError) as exc:
            raise FormatError(f"bad model file: {exc!r}") from None

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ClassifierModel":
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise FormatError(str(exc), path, exc.lineno) from None
        return cls.from_dict(data)


def classify_and_score(vector, model: ClassifierModel) -> Tuple[bool, float]:
    """Tree label and logistic score for one feature vector."""
    x = vector.as_list() if hasattr(vector, "as_list") else list(vector)
    return model.tree.predict(x), model.score(x)
