"""Scikit-learn style estimator facade over the training/inference stack.

``CalvingFrontSegmenter`` exposes fit/predict/score with get_params and
set_params from ``BaseEstimator``, so the model slots into generic tooling
(grid search over hook types, pipelines operating on scene lists).  X is a
list of Scene objects; labels ride inside the scenes, so y is accepted but
ignored throughout.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator

from .model import load_checkpoint
from .train import (
    TrainConfig,
    evaluate_scenes,
    network_from_checkpoint,
    predict,
    predict_zonemap,
    train,
)


def _check_scenes(X):
    scenes = list(X)
    if not scenes:
        raise ValueError("expected a non-empty list of Scene objects")
    for scene in scenes:
        if not hasattr(scene, "zones") or not hasattr(scene, "image"):
            raise TypeError(f"not a Scene: {scene!r}")
    return scenes


class CalvingFrontSegmenter(BaseEstimator):
    """Two-branch glacier zone segmenter with calving-front extraction.

    Parameters mirror the training configuration; after ``fit`` the
    trained network is available as ``net_`` and the run history as
    ``run_record_``.
    """

    def __init__(
        self,
        scale="tiny",
        hook_type="esca",
        supervision="cds",
        epochs=20,
        batch_size=8,
        lr0=0.01,
        lr_decay=0.9,
        lr_schedule="exponential",
        momentum=0.9,
        weight_decay=1e-4,
        lambda1=1.0,
        lambda2=1.0,
        lambda3=0.5,
        tau=0.1,
        val_fraction=0.1,
        seed=0,
        run_dir=None,
    ):
        self.scale = scale
        self.hook_type = hook_type
        self.supervision = supervision
        self.epochs = epochs
        self.batch_size = batch_size
        self.lr0 = lr0
        self.lr_decay = lr_decay
        self.lr_schedule = lr_schedule
        self.momentum = momentum
        self.weight_decay = weight_decay
        self.lambda1 = lambda1
        self.lambda2 = lambda2
        self.lambda3 = lambda3
        self.tau = tau
        self.val_fraction = val_fraction
        self.seed = seed
        self.run_dir = run_dir

    def _config(self):
        return TrainConfig(
            scale=self.scale,
            hook_type=self.hook_type,
            supervision=self.supervision,
            epochs=self.epochs,
            batch_size=self.batch_size,
            lr0=self.lr0,
            lr_decay=self.lr_decay,
            lr_schedule=self.lr_schedule,
            momentum=self.momentum,
            weight_decay=self.weight_decay,
            lambda1=self.lambda1,
            lambda2=self.lambda2,
            lambda3=self.lambda3,
            tau=self.tau,
            val_fraction=self.val_fraction,
            seed=self.seed,
        )

    def fit(self, X, y=None, val_scenes=None):
        scenes = _check_scenes(X)
        self.config_ = self._config()
        self.net_, self.run_record_ = train(
            self.config_, scenes, val_scenes=val_scenes, run_dir=self.run_dir, quiet=True
        )
        return self

    def _require_fitted(self):
        if not hasattr(self, "net_"):
            raise RuntimeError("call fit (or load_checkpoint) before predicting")

    def predict(self, X):
        """Cleaned zone map per scene."""
        self._require_fitted()
        return [predict(self.net_, s, self.batch_size)[0] for s in _check_scenes(X)]

    def predict_raw(self, X):
        """Stitched argmax zone map per scene, before ocean cleanup."""
        self._require_fitted()
        return [predict_zonemap(self.net_, s, self.batch_size) for s in _check_scenes(X)]

    def predict_front(self, X):
        """Extracted FrontSet per scene."""
        self._require_fitted()
        return [predict(self.net_, s, self.batch_size)[1] for s in _check_scenes(X)]

    def evaluate(self, X):
        """Full grouped MetricsReport over scenes."""
        self._require_fitted()
        report, _ = evaluate_scenes(self.net_, _check_scenes(X), self.batch_size)
        return report

    def score(self, X, y=None):
        """Validation-style macro IoU over pooled confusion counts."""
        return self.evaluate(X).overall.macro.iou

    def load_checkpoint(self, path):
        """Restore a fitted state from a checkpoint file."""
        self.net_ = network_from_checkpoint(load_checkpoint(path))
        return self
