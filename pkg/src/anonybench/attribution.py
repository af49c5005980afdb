"""Multiclass attribution models with calibrated confidence vectors.

Both learners expose the same surface: fit(X, y), predict_proba(X),
confidence_vector(x), predict(X), to_json/from_json. The forest stores a
Laplace-smoothed class distribution at every node, which keeps every
confidence strictly inside (0, 1) and is what the tree-path explainer
decomposes later.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import check_is_fitted, check_labels, check_matrix, check_vector
from .errors import SchemaError, TrainingError


class ConfidenceVector:
    """A validated attribution output: entries strictly in (0, 1), summing
    to 1 within 1e-9. Raises ValueError otherwise."""

    __slots__ = ("_values",)

    def __init__(self, values):
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError(f"confidence vector must be 1-D, got shape {arr.shape}")
        if arr.size < 2:
            raise ValueError("confidence vector needs at least 2 entries")
        if not np.all(np.isfinite(arr)):
            raise ValueError("confidence vector contains non-finite values")
        if np.any(arr <= 0.0) or np.any(arr >= 1.0):
            raise ValueError("confidences must lie strictly inside (0, 1)")
        total = float(arr.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"confidences must sum to 1, got {total!r}")
        arr = arr.copy()
        arr.setflags(write=False)
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        return self._values

    def argmax(self) -> int:
        """Index of the highest confidence; ties resolve to the lowest index."""
        return int(np.argmax(self._values))

    def argmax_unique(self) -> bool:
        top = self._values.max()
        return int(np.sum(self._values == top)) == 1

    def to_list(self) -> list[float]:
        return [float(v) for v in self._values]

    def __len__(self) -> int:
        return int(self._values.size)

    def __getitem__(self, i):
        return float(self._values[i])

    def __iter__(self):
        return iter(float(v) for v in self._values)

    def __repr__(self) -> str:
        return f"ConfidenceVector({self.to_list()!r})"


def _laplace(counts: np.ndarray) -> np.ndarray:
    """Additive smoothing: (count + 1) / (total + n_classes)."""
    total = counts.sum()
    return (counts + 1.0) / (total + counts.size)


class ForestAttributor(BaseEstimator):
    """Random forest over bootstrap samples with Gini splits.

    Tree i is grown from an rng seeded with seed + i, so any single tree can
    be reproduced without growing the others. Split tie-breaks are fixed:
    higher gain first, then lower feature index, then lower threshold.
    """

    def __init__(
        self,
        n_trees: int = 300,
        max_depth: int | None = None,
        min_split: int = 2,
        features_per_split: int | None = None,
        seed: int = 0,
    ):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_split = min_split
        self.features_per_split = features_per_split
        self.seed = seed

    def fit(self, X, y) -> "ForestAttributor":
        X = check_matrix(X)
        y = check_labels(y, X.shape[0])
        if self.n_trees < 1:
            raise TrainingError("n_trees must be at least 1")
        if self.min_split < 2:
            raise TrainingError("min_split must be at least 2")
        classes, y_idx = np.unique(y, return_inverse=True)
        if classes.size < 2:
            raise TrainingError("training data contains fewer than 2 classes")
        self.classes_ = classes
        self.n_classes_ = int(classes.size)
        self.n_features_in_ = int(X.shape[1])
        fps = self.features_per_split
        if fps is None:
            fps = math.ceil(math.sqrt(self.n_features_in_))
        fps = max(1, min(fps, self.n_features_in_))
        self._fps = fps
        self.trees_ = [
            self._build_tree(X, y_idx, np.random.default_rng(self.seed + i))
            for i in range(self.n_trees)
        ]
        return self

    def _build_tree(self, X, y_idx, rng) -> dict:
        n = X.shape[0]
        bootstrap = rng.integers(0, n, size=n)
        return self._grow(X, y_idx, bootstrap, 0, rng)

    def _grow(self, X, y_idx, idx, depth, rng) -> dict:
        counts = np.bincount(y_idx[idx], minlength=self.n_classes_).astype(np.float64)
        total = idx.size
        node = {"dist": [float(v) for v in _laplace(counts)]}
        if (
            total < self.min_split
            or counts.max() == total
            or (self.max_depth is not None and depth >= self.max_depth)
        ):
            return node
        feats = np.sort(rng.choice(self.n_features_in_, size=self._fps, replace=False))
        parent_gini = 1.0 - float(np.sum((counts / total) ** 2))
        best_gain = 0.0
        best: tuple[int, float] | None = None
        for f in feats:
            found = self._best_threshold(X[idx, f], y_idx[idx], counts, parent_gini)
            if found is not None and found[0] > best_gain:
                best_gain, thr = found
                best = (int(f), float(thr))
        if best is None:
            return node
        f, thr = best
        mask = X[idx, f] <= thr
        node["feature"] = f
        node["threshold"] = thr
        node["left"] = self._grow(X, y_idx, idx[mask], depth + 1, rng)
        node["right"] = self._grow(X, y_idx, idx[~mask], depth + 1, rng)
        return node

    def _best_threshold(self, v, yv, counts, parent_gini):
        order = np.argsort(v, kind="stable")
        vs = v[order]
        if vs[0] == vs[-1]:
            return None
        ys = yv[order]
        n = vs.size
        onehot = np.zeros((n, self.n_classes_))
        onehot[np.arange(n), ys] = 1.0
        cum = np.cumsum(onehot, axis=0)
        valid = vs[1:] > vs[:-1]
        if not np.any(valid):
            return None
        left_counts = cum[:-1][valid]
        nl = np.arange(1, n)[valid].astype(np.float64)
        nr = n - nl
        right_counts = counts - left_counts
        gini_l = 1.0 - np.sum((left_counts / nl[:, None]) ** 2, axis=1)
        gini_r = 1.0 - np.sum((right_counts / nr[:, None]) ** 2, axis=1)
        weighted = (nl * gini_l + nr * gini_r) / n
        gains = parent_gini - weighted
        pos = int(np.argmax(gains))
        if gains[pos] <= 0.0:
            return None
        thresholds = (vs[:-1][valid] + vs[1:][valid]) / 2.0
        return float(gains[pos]), float(thresholds[pos])

    def _tree_dist(self, tree: dict, x: np.ndarray) -> np.ndarray:
        node = tree
        while "feature" in node:
            node = node["left"] if x[node["feature"]] <= node["threshold"] else node["right"]
        return np.asarray(node["dist"])

    def predict_proba(self, X) -> np.ndarray:
        check_is_fitted(self, "trees_")
        X = check_matrix(X, self.n_features_in_)
        out = np.zeros((X.shape[0], self.n_classes_))
        for r in range(X.shape[0]):
            acc = np.zeros(self.n_classes_)
            for tree in self.trees_:
                acc += self._tree_dist(tree, X[r])
            out[r] = acc / len(self.trees_)
        return out

    def confidence_vector(self, x) -> ConfidenceVector:
        check_is_fitted(self, "trees_")
        x = check_vector(x, self.n_features_in_)
        return ConfidenceVector(self.predict_proba(x[None, :])[0])

    def predict(self, X):
        proba = self.predict_proba(X)
        return self.classes_[np.argmax(proba, axis=1)]

    def to_json(self) -> dict:
        check_is_fitted(self, "trees_")
        return {
            "type": "forest",
            "params": {
                "n_trees": self.n_trees,
                "max_depth": self.max_depth,
                "min_split": self.min_split,
                "features_per_split": self.features_per_split,
                "seed": self.seed,
            },
            "classes": [_plain(c) for c in self.classes_],
            "n_features": self.n_features_in_,
            "trees": self.trees_,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ForestAttributor":
        model = cls(**data["params"])
        model.classes_ = np.asarray(data["classes"])
        model.n_classes_ = len(data["classes"])
        model.n_features_in_ = int(data["n_features"])
        model.trees_ = data["trees"]
        if not model.trees_:
            raise SchemaError("forest model contains no trees")
        return model


class LinearAttributor(BaseEstimator):
    """Multinomial logistic regression trained by full-batch gradient
    descent from zero initialization, so fitting is deterministic."""

    def __init__(
        self,
        learning_rate: float = 0.5,
        epochs: int = 200,
        l2: float = 1e-3,
        seed: int = 0,
    ):
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.l2 = l2
        self.seed = seed

    def fit(self, X, y) -> "LinearAttributor":
        X = check_matrix(X)
        y = check_labels(y, X.shape[0])
        if self.epochs < 0:
            raise TrainingError("epochs must be non-negative")
        classes, y_idx = np.unique(y, return_inverse=True)
        if classes.size < 2:
            raise TrainingError("training data contains fewer than 2 classes")
        self.classes_ = classes
        self.n_classes_ = int(classes.size)
        self.n_features_in_ = int(X.shape[1])
        n = X.shape[0]
        K = self.n_classes_
        W = np.zeros((K, self.n_features_in_))
        b = np.zeros(K)
        onehot = np.zeros((n, K))
        onehot[np.arange(n), y_idx] = 1.0
        for _ in range(self.epochs):
            P = _softmax(X @ W.T + b)
            G = P - onehot
            W -= self.learning_rate * (G.T @ X / n + self.l2 * W)
            b -= self.learning_rate * G.mean(axis=0)
        self.weights_ = W
        self.bias_ = b
        return self

    def predict_proba(self, X) -> np.ndarray:
        check_is_fitted(self, "weights_")
        X = check_matrix(X, self.n_features_in_)
        return _softmax(X @ self.weights_.T + self.bias_)

    def confidence_vector(self, x) -> ConfidenceVector:
        check_is_fitted(self, "weights_")
        x = check_vector(x, self.n_features_in_)
        return ConfidenceVector(self.predict_proba(x[None, :])[0])

    def predict(self, X):
        proba = self.predict_proba(X)
        return self.classes_[np.argmax(proba, axis=1)]

    def to_json(self) -> dict:
        check_is_fitted(self, "weights_")
        return {
            "type": "linear",
            "params": {
                "learning_rate": self.learning_rate,
                "epochs": self.epochs,
                "l2": self.l2,
                "seed": self.seed,
            },
            "classes": [_plain(c) for c in self.classes_],
            "n_features": self.n_features_in_,
            "weights": [[float(v) for v in row] for row in self.weights_],
            "bias": [float(v) for v in self.bias_],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LinearAttributor":
        model = cls(**data["params"])
        model.classes_ = np.asarray(data["classes"])
        model.n_classes_ = len(data["classes"])
        model.n_features_in_ = int(data["n_features"])
        model.weights_ = np.asarray(data["weights"], dtype=np.float64)
        model.bias_ = np.asarray(data["bias"], dtype=np.float64)
        if model.weights_.shape != (model.n_classes_, model.n_features_in_):
            raise SchemaError("linear model weight shape does not match header")
        return model


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _plain(v):
    return v.item() if hasattr(v, "item") else v


@dataclass
class EvalResult:
    accuracy: float
    predicted: list
    correct: list[bool]
    confidences: list[ConfidenceVector]
    argmax_unique: list[bool]


def evaluate(model, X, y) -> EvalResult:
    """Accuracy plus per-sample confidence vectors and argmax uniqueness."""
    X = check_matrix(X, model.n_features_in_)
    y = check_labels(y, X.shape[0])
    proba = model.predict_proba(X)
    predicted = []
    correct = []
    confidences = []
    unique = []
    for r in range(X.shape[0]):
        cv = ConfidenceVector(proba[r])
        pred = model.classes_[cv.argmax()]
        predicted.append(_plain(pred))
        correct.append(bool(pred == y[r]))
        confidences.append(cv)
        unique.append(cv.argmax_unique())
    accuracy = float(np.mean(correct)) if correct else 0.0
    return EvalResult(accuracy, predicted, correct, confidences, unique)


MODEL_FORMAT = "anonybench-model"
MODEL_VERSION = 1

_LEARNERS = {"forest": ForestAttributor, "linear": LinearAttributor}


def make_learner(name: str, **params):
    """Instantiate a learner by its CLI name ('forest' or 'linear')."""
    if name not in _LEARNERS:
        raise SchemaError(f"unknown learner {name!r}; expected one of {sorted(_LEARNERS)}")
    return _LEARNERS[name](**params)


def save_bundle(path: str | Path, pipeline, model) -> None:
    """Write a feature pipeline and fitted model as one versioned JSON file."""
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "pipeline": pipeline.to_json(),
        "model": model.to_json(),
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_bundle(path: str | Path):
    """Read back a (pipeline, model) bundle, validating format and version."""
    from .features import FeaturePipeline

    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read model file {str(path)!r}: {exc}") from None
    if not isinstance(data, dict) or data.get("format") != MODEL_FORMAT:
        raise SchemaError(f"{str(path)!r} is not an attribution model file")
    if data.get("version") != MODEL_VERSION:
        raise SchemaError(
            f"unsupported model version {data.get('version')!r}; expected {MODEL_VERSION}"
        )
    for key in ("pipeline", "model"):
        if key not in data:
            raise SchemaError(f"model file is missing the {key!r} section")
    pipeline = FeaturePipeline.from_json(data["pipeline"])
    mtype = data["model"].get("type")
    if mtype == "forest":
        model = ForestAttributor.from_json(data["model"])
    elif mtype == "linear":
        model = LinearAttributor.from_json(data["model"])
    else:
        raise SchemaError(f"unknown model type {mtype!r}")
    return pipeline, model
