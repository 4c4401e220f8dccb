"""
Training loop with per-epoch validation and best-checkpoint selection.
"""
import copy
import csv
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Union

import torch
import torch.nn as nn
from tqdm import tqdm

from roadseg.core.ordinal import decode_ordinal_tensor, ordinal_targets
from roadseg.core.types import MetricsReport
from roadseg.metrics.scores import confusion_counts, pool_counts, scores
from roadseg.models.unet import RoadUNet
from roadseg.training.config import TrainConfig
from roadseg.training.dataset import (
    PatchDataset,
    SampleSource,
    make_loader,
    split_train_val,
)
from roadseg.training.loss import tversky_loss
from roadseg.training.optimizer import DecoupledAdamW
from roadseg.training.schedule import build_scheduler, epoch_lr

logger = logging.getLogger(__name__)

HISTORY_FIELDS = [
    "epoch",
    "train_loss",
    "lr",
    "val_f1_small",
    "val_f1_medium",
    "val_f1_big",
    "val_f1_avg",
]


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    lr: float
    val_f1_small: float
    val_f1_medium: float
    val_f1_big: float
    val_f1_avg: float


@dataclass
class TrainResult:
    """Best model (loaded, eval mode) and the per-epoch history."""
    model: RoadUNet
    history: List[EpochRecord] = field(default_factory=list)
    best_epoch: Optional[int] = None
    best_val_f1: Optional[float] = None

    def summary(self) -> dict:
        return {
            "epochs": len(self.history),
            "best_epoch": self.best_epoch,
            "best_val_f1": self.best_val_f1,
        }


def seed_everything(seed: int) -> None:
    """Seed torch and request deterministic kernels where available."""
    torch.manual_seed(seed)
    torch.use_deterministic_algorithms(True, warn_only=True)
    if torch.backends.cudnn.is_available():
        torch.backends.cudnn.benchmark = False


def build_optimizer(
    model: nn.Module, config: TrainConfig
) -> DecoupledAdamW:
    """AdamW whose decay p <- p * (1 - eta * weight_decay) ignores lr."""
    return DecoupledAdamW(
        model.parameters(), lr=config.lr, weight_decay=config.weight_decay
    )


@torch.no_grad()
def evaluate_dataset(
    model: RoadUNet,
    dataset: PatchDataset,
    batch_size: int = 8,
    device: str = "cpu",
) -> MetricsReport:
    """Pooled-pixel report of thresholded predictions at model resolution."""
    model.eval()
    counts = []
    for inputs, labels in make_loader(dataset, batch_size, shuffle=False):
        inputs = {k: v.to(device) for k, v in inputs.items()}
        probs = torch.sigmoid(model(**inputs))
        pred = decode_ordinal_tensor(probs > 0.5).cpu().numpy()
        truth = labels.numpy()
        counts.extend(
            confusion_counts(p, t) for p, t in zip(pred, truth)
        )
    return scores(pool_counts(counts))


def _train_epoch(
    model: RoadUNet,
    loader,
    optimizer: torch.optim.Optimizer,
    config: TrainConfig,
    device: str,
) -> float:
    model.train()
    total, batches = 0.0, 0
    for inputs, labels in loader:
        inputs = {k: v.to(device) for k, v in inputs.items()}
        targets = ordinal_targets(labels.to(device))
        optimizer.zero_grad()
        loss = tversky_loss(
            model(**inputs), targets, config.beta_tversky, config.smooth_eps
        )
        loss.backward()
        optimizer.step()
        total += float(loss.item())
        batches += 1
    return total / max(batches, 1)


def train(
    model: RoadUNet,
    samples: Sequence[SampleSource],
    config: TrainConfig,
    device: str = "cpu",
    history_path: Optional[Union[str, Path]] = None,
) -> TrainResult:
    """
    Train with AdamW and warm-restart cosine annealing.

    After every epoch the average road F1 is measured on a held-out
    fraction of the patches; the returned model carries the parameters
    of the best epoch (the first one on ties).

    Raises:
        ConfigurationError: If the train or validation split is empty.
    """
    train_idx, val_idx = split_train_val(
        len(samples), config.val_fraction, config.seed
    )
    seed_everything(config.seed)
    timestep = None if model.config.temporal else config.timestep
    train_set = PatchDataset(
        [samples[i] for i in train_idx],
        model.config,
        timestep=timestep,
        augment=config.augment,
        seed=config.seed,
    )
    val_set = PatchDataset(
        [samples[i] for i in val_idx], model.config, timestep=timestep
    )
    logger.info(
        "Training %s on %d patches, validating on %d",
        model.config.variant, len(train_set), len(val_set),
    )

    model.to(device)
    optimizer = build_optimizer(model, config)
    scheduler = build_scheduler(optimizer, config.t0, config.t_mult)
    result = TrainResult(model)
    best_state = None

    quiet = not sys.stderr.isatty() or not logger.isEnabledFor(logging.INFO)
    for epoch in tqdm(range(config.epochs), desc="epochs", disable=quiet):
        train_set.set_epoch(epoch)
        loader = make_loader(
            train_set, config.batch_size, shuffle=True,
            seed=config.seed + epoch,
        )
        optimizer.set_multiplier(
            epoch_lr(epoch, 1.0, config.t0, config.t_mult)
        )
        lr = optimizer.param_groups[0]["lr"]
        loss = _train_epoch(model, loader, optimizer, config, device)
        report = evaluate_dataset(model, val_set, config.batch_size, device)
        record = EpochRecord(
            epoch=epoch,
            train_loss=loss,
            lr=lr,
            val_f1_small=report.small.f1,
            val_f1_medium=report.medium.f1,
            val_f1_big=report.big.f1,
            val_f1_avg=report.average_f1,
        )
        result.history.append(record)
        logger.info(
            "epoch %d loss=%.4f lr=%.2e val_f1=%.3f/%.3f/%.3f avg=%.3f",
            epoch, loss, lr, report.small.f1, report.medium.f1,
            report.big.f1, report.average_f1,
        )
        if result.best_val_f1 is None or record.val_f1_avg > (
            result.best_val_f1
        ):
            result.best_val_f1 = record.val_f1_avg
            result.best_epoch = epoch
            best_state = copy.deepcopy(model.state_dict())
        scheduler.step()

    if best_state is not None:
        model.load_state_dict(best_state)
    model.eval()
    if history_path is not None:
        write_history(history_path, result.history)
    return result


def write_history(
    path: Union[str, Path], history: Sequence[EpochRecord]
) -> Path:
    """Write the per-epoch history as CSV."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=HISTORY_FIELDS)
        writer.writeheader()
        for record in history:
            writer.writerow(asdict(record))
    logger.info("Wrote training history to %s", path)
    return path
