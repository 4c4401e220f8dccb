"""
AdamW with weight decay decoupled from the learning rate.

torch's AdamW shrinks parameters by p * (1 - lr * weight_decay), so a
zero learning rate also switches decay off. Here the shrink uses the
schedule multiplier eta in [0, 1] instead of lr:

    p <- p * (1 - eta * weight_decay)

and the Adam update itself runs with weight_decay=0.
"""
from typing import Iterable, Optional

import torch
import torch.nn as nn

from roadseg.core.errors import InvalidArgumentError

DECAY_KEY = "decoupled_weight_decay"
MULTIPLIER_KEY = "schedule_multiplier"


class DecoupledAdamW(torch.optim.AdamW):
    """AdamW whose decay follows the schedule multiplier, not lr."""

    def __init__(
        self,
        params: Iterable[nn.Parameter],
        lr: float = 3e-4,
        weight_decay: float = 5e-4,
    ):
        if weight_decay < 0:
            raise InvalidArgumentError(
                f"weight_decay must be >= 0, got {weight_decay}"
            )
        super().__init__(params, lr=lr, weight_decay=0.0)
        for group in self.param_groups:
            group[DECAY_KEY] = weight_decay
            group[MULTIPLIER_KEY] = 1.0

    def set_multiplier(self, eta: float) -> None:
        """Set the schedule multiplier applied to the decay of every group."""
        if not 0.0 <= eta <= 1.0:
            raise InvalidArgumentError(
                f"Schedule multiplier must be in [0, 1], got {eta}"
            )
        for group in self.param_groups:
            group[MULTIPLIER_KEY] = eta

    @torch.no_grad()
    def step(self, closure=None) -> Optional[float]:
        for group in self.param_groups:
            factor = 1.0 - group[MULTIPLIER_KEY] * group[DECAY_KEY]
            if factor == 1.0:
                continue
            for param in group["params"]:
                if param.grad is not None:
                    param.mul_(factor)
        return super().step(closure)
