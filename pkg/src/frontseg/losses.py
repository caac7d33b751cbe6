"""Training objectives: CE+Dice per branch, pixel-wise InfoNCE, and the
supervision terms attached to the fused decoder features.

The contrastive supervision path (``cds``) projects each fused feature map
to a small embedding space and pulls same-class pixels together against
different-class pixels of the same image; the plain deep-supervision path
(``ds``) trains auxiliary classifiers instead.  The weighted total is

    lambda1 * (CE+Dice)(target) + lambda2 * (CE+Dice)(context) + lambda3 * aux
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
import torch.nn.functional as F

from .validation import NUM_CLASSES


@dataclass(frozen=True)
class LossWeights:
    lambda1: float = 1.0
    lambda2: float = 1.0
    lambda3: float = 0.5
    tau: float = 0.1
    anchors_per_class: int = 64
    max_negatives: int = 512

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if min(self.lambda1, self.lambda2, self.lambda3) < 0:
            raise ValueError("loss weights must be nonnegative")
        if self.anchors_per_class < 1 or self.max_negatives < 1:
            raise ValueError("sampling sizes must be positive")


def _check_labels(labels):
    if labels.min() < 0 or labels.max() >= NUM_CLASSES:
        raise ValueError(
            f"labels outside [0, {NUM_CLASSES})): min={int(labels.min())}, "
            f"max={int(labels.max())}"
        )


def soft_dice_loss(logits, labels, eps=1.0):
    """1 - mean per-class soft Dice over the pooled batch, smoothing eps."""
    probs = torch.softmax(logits, dim=1)
    one_hot = F.one_hot(labels.long(), num_classes=logits.shape[1])
    one_hot = one_hot.permute(0, 3, 1, 2).to(probs.dtype)
    dims = (0, 2, 3)
    intersection = (probs * one_hot).sum(dims)
    union = probs.sum(dims) + one_hot.sum(dims)
    dice = (2.0 * intersection + eps) / (union + eps)
    return 1.0 - dice.mean()


def ce_dice(logits, labels):
    """Mean pixel cross-entropy plus multi-class soft Dice."""
    labels = labels.long()
    _check_labels(labels)
    return F.cross_entropy(logits, labels) + soft_dice_loss(logits, labels)


@dataclass
class PixelNceResult:
    loss: torch.Tensor
    active_anchors: int

    @property
    def degenerate(self):
        """True when no anchor had a positive, making the loss vacuous."""
        return self.active_anchors == 0


def pixel_nce(embeddings, labels, tau):
    """InfoNCE over pixel embeddings of one image.

    Every embedding is an anchor; its positives are the other same-class
    embeddings, its negatives all different-class embeddings.  Per anchor
    the loss averages -log( exp(s+) / (exp(s+) + sum exp(s-)) ) over the
    positives, where s are cosine similarities divided by ``tau``; the
    result averages over anchors that have at least one positive.
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    m = embeddings.shape[0]
    norms = embeddings.norm(dim=1)
    if m and (norms - 1.0).abs().max() > 1e-3:
        raise ValueError("pixel embeddings must be l2-normalized")

    sim = embeddings @ embeddings.t() / tau
    same = labels.view(-1, 1) == labels.view(1, -1)
    eye = torch.eye(m, dtype=torch.bool, device=embeddings.device)
    pos_mask = same & ~eye
    neg_mask = ~same

    neg_lse = torch.logsumexp(
        sim.masked_fill(~neg_mask, float("-inf")), dim=1
    )  # -inf when an anchor has no negatives
    pair_loss = torch.logaddexp(sim, neg_lse.view(-1, 1)) - sim

    pos_counts = pos_mask.sum(dim=1)
    active = pos_counts > 0
    if not bool(active.any()):
        return PixelNceResult(loss=sim.sum() * 0.0, active_anchors=0)
    per_anchor = (pair_loss * pos_mask).sum(dim=1)[active] / pos_counts[active]
    return PixelNceResult(loss=per_anchor.mean(), active_anchors=int(active.sum()))


def sample_pixel_indices(labels_flat, anchors_per_class, max_negatives, generator):
    """Up to ``anchors_per_class`` pixel indices per class, one image.

    If the batch complement of some class would exceed ``max_negatives``
    (possible only for oversized ``anchors_per_class``), the per-class
    budget shrinks so every anchor's negative set stays within bounds.
    """
    classes = torch.unique(labels_flat)
    budget = int(anchors_per_class)
    if len(classes) > 1:
        budget = min(budget, int(max_negatives) // (len(classes) - 1))
    budget = max(budget, 1)
    chosen = []
    for c in classes.tolist():
        idx = torch.nonzero(labels_flat == c, as_tuple=False).view(-1)
        if idx.numel() > budget:
            pick = torch.randperm(idx.numel(), generator=generator)[:budget]
            idx = idx[pick]
        chosen.append(idx)
    return torch.cat(chosen)


def _depth_labels(labels, feature_hw):
    """Nearest-neighbor label decimation onto a feature grid."""
    h, w = labels.shape[-2:]
    fh, fw = feature_hw
    if h % fh or w % fw:
        raise ValueError(f"labels {(h, w)} not decimatable to {feature_hw}")
    return labels[..., :: h // fh, :: w // fw]


def _upsample2(features):
    return F.interpolate(features, scale_factor=2, mode="bilinear", align_corners=False)


def cds_loss(fused_features, target_labels, heads, weights, seed=0):
    """Contrastive supervision over fused decoder features, summed by depth.

    Each fused map is upsampled by two, projected to the embedding width,
    and l2-normalized per pixel; labels are decimated to the same grid.
    Anchors are sampled per image with a seeded generator, so the value is
    reproducible given (inputs, seed).  Returns (loss, active anchor count).
    """
    total = None
    active = 0
    for depth_index, depth in enumerate(sorted(fused_features)):
        embeddings = F.normalize(heads[depth](_upsample2(fused_features[depth])), dim=1)
        b, d, fh, fw = embeddings.shape
        labels = _depth_labels(target_labels.long(), (fh, fw))
        depth_terms = []
        for image_index in range(b):
            generator = torch.Generator()
            generator.manual_seed(
                int(seed) * 1000003 + depth_index * 8191 + image_index
            )
            flat_labels = labels[image_index].reshape(-1)
            idx = sample_pixel_indices(
                flat_labels, weights.anchors_per_class, weights.max_negatives, generator
            )
            result = pixel_nce(
                embeddings[image_index].reshape(d, -1).t()[idx],
                flat_labels[idx],
                weights.tau,
            )
            depth_terms.append(result.loss)
            active += result.active_anchors
        depth_loss = torch.stack(depth_terms).mean()
        total = depth_loss if total is None else total + depth_loss
    if total is None:
        raise ValueError("contrastive supervision needs at least one fused feature")
    return total, active


def ds_loss(fused_features, target_labels, heads):
    """Plain deep supervision: per-depth auxiliary CE+Dice, summed."""
    total = None
    for depth in sorted(fused_features):
        logits = heads[depth](_upsample2(fused_features[depth]))
        labels = _depth_labels(target_labels.long(), logits.shape[-2:])
        term = ce_dice(logits, labels)
        total = term if total is None else total + term
    if total is None:
        raise ValueError("deep supervision needs at least one fused feature")
    return total


@dataclass
class LossBreakdown:
    total: torch.Tensor
    target_term: torch.Tensor
    context_term: torch.Tensor
    supervision_term: torch.Tensor
    active_anchors: int = 0

    def components(self):
        def scalar(value):
            return float(value.detach()) if torch.is_tensor(value) else float(value)

        return {
            "target": scalar(self.target_term),
            "context": scalar(self.context_term),
            "supervision": scalar(self.supervision_term),
            "total": scalar(self.total),
        }


def total_loss(
    target_logits,
    target_labels,
    context_logits=None,
    context_labels=None,
    fused_features=None,
    supervision_heads=None,
    supervision="none",
    weights=LossWeights(),
    seed=0,
):
    """Weighted sum of branch losses and the selected supervision term."""
    target_term = ce_dice(target_logits, target_labels)
    zero = target_term.detach() * 0.0

    if context_logits is not None:
        if context_labels is None:
            raise ValueError("context logits supplied without context labels")
        context_term = ce_dice(context_logits, context_labels)
    else:
        context_term = zero

    active = 0
    if supervision == "none" or not fused_features:
        supervision_term = zero
    elif supervision == "cds":
        supervision_term, active = cds_loss(
            fused_features, target_labels, supervision_heads, weights, seed=seed
        )
    elif supervision == "ds":
        supervision_term = ds_loss(fused_features, target_labels, supervision_heads)
    else:
        raise ValueError(f"unknown supervision mode {supervision!r}")

    total = (
        weights.lambda1 * target_term
        + weights.lambda2 * context_term
        + weights.lambda3 * supervision_term
    )
    return LossBreakdown(
        total=total,
        target_term=target_term,
        context_term=context_term,
        supervision_term=supervision_term,
        active_anchors=active,
    )
