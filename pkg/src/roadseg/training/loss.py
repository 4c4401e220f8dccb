"""
Tversky loss over ordinal score channels.
"""
from typing import Union

import torch

from roadseg.core.errors import InvalidArgumentError, ShapeError
from roadseg.core.types import OrdinalMask


def tversky_index(
    probs: torch.Tensor,
    target: torch.Tensor,
    beta: float = 0.7,
    eps: float = 1e-6,
) -> torch.Tensor:
    """
    Per-sample, per-channel Tversky index.

    Args:
        probs: Sigmoid outputs, shape (N, K, H, W)
        target: Binary targets of the same shape

    Returns:
        Tensor of shape (N, K)
    """
    dims = tuple(range(2, probs.dim()))
    tp = (target * probs).sum(dim=dims)
    fp = ((1 - target) * probs).sum(dim=dims)
    fn = (target * (1 - probs)).sum(dim=dims)
    return (tp + eps) / (tp + beta * fp + (1 - beta) * fn + eps)


def tversky_loss(
    scores: torch.Tensor,
    target: Union[torch.Tensor, OrdinalMask],
    beta: float = 0.7,
    eps: float = 1e-6,
) -> torch.Tensor:
    """
    1 - mean Tversky index of sigmoid(scores) against ordinal targets.

    beta weights false positives and 1 - beta false negatives, so
    beta > 0.5 penalizes over-prediction. Sums run over the pixels of
    each batch element; the mean runs over elements and channels.

    Args:
        scores: Raw scores, (K, H, W) or (N, K, H, W)
        target: Ordinal bits of the same shape
        beta: Weight of false positives, in (0, 1)
        eps: Smoothing added to numerator and denominator

    Raises:
        InvalidArgumentError: If beta is outside (0, 1).
        ShapeError: If target and scores differ in shape.
    """
    if not 0.0 < beta < 1.0:
        raise InvalidArgumentError(f"beta must be in (0, 1), got {beta}")
    if isinstance(target, OrdinalMask):
        target = torch.from_numpy(target.bits.astype("float32"))
    target = target.to(dtype=scores.dtype, device=scores.device)
    if target.shape != scores.shape:
        raise ShapeError(
            f"Target shape {tuple(target.shape)} does not match scores "
            f"{tuple(scores.shape)}"
        )
    if scores.dim() == 3:
        scores = scores.unsqueeze(0)
        target = target.unsqueeze(0)
    index = tversky_index(torch.sigmoid(scores), target, beta, eps)
    return 1 - index.mean()
