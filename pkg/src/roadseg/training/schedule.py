"""
Cosine annealing with warm restarts, stepped once per epoch.
"""
import math
from typing import List, Tuple

import torch
from torch.optim.lr_scheduler import CosineAnnealingWarmRestarts

from roadseg.core.errors import InvalidArgumentError


def lr_at(u: float, lr_max: float = 3e-4, lr_min: float = 0.0) -> float:
    """Learning rate at fraction u in [0, 1] of the current cycle."""
    if not 0.0 <= u <= 1.0:
        raise InvalidArgumentError(
            f"Cycle fraction must be in [0, 1], got {u}"
        )
    return lr_min + (lr_max - lr_min) * 0.5 * (1.0 + math.cos(math.pi * u))


def cycle_position(
    epoch: int, t0: int = 1, t_mult: int = 2
) -> Tuple[int, int, int]:
    """
    Locate an epoch in the restart schedule.

    Returns:
        (cycle index, epochs since the last restart, cycle length)
    """
    if epoch < 0:
        raise InvalidArgumentError(f"Epoch must be >= 0, got {epoch}")
    cycle, start, length = 0, 0, t0
    while epoch >= start + length:
        start += length
        length *= t_mult
        cycle += 1
    return cycle, epoch - start, length


def epoch_lr(
    epoch: int,
    lr_max: float = 3e-4,
    t0: int = 1,
    t_mult: int = 2,
    lr_min: float = 0.0,
) -> float:
    """Learning rate used during a given epoch."""
    _, offset, length = cycle_position(epoch, t0, t_mult)
    return lr_at(offset / length, lr_max, lr_min)


def restart_epochs(count: int, t0: int = 1, t_mult: int = 2) -> List[int]:
    """First count epochs at which the rate jumps back to its peak."""
    epochs = []
    start, length = 0, t0
    for _ in range(count):
        start += length
        length *= t_mult
        epochs.append(start)
    return epochs


def build_scheduler(
    optimizer: torch.optim.Optimizer, t0: int = 1, t_mult: int = 2
) -> CosineAnnealingWarmRestarts:
    return CosineAnnealingWarmRestarts(
        optimizer, T_0=t0, T_mult=t_mult, eta_min=0.0
    )
