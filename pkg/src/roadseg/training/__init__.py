# Loss, schedule, augmentation and the training loop
from roadseg.training.augment import augment
from roadseg.training.config import TrainConfig, build_train_config
from roadseg.training.dataset import PatchDataset, split_train_val
from roadseg.training.loss import tversky_loss
from roadseg.training.optimizer import DecoupledAdamW
from roadseg.training.schedule import (
    cycle_position,
    epoch_lr,
    lr_at,
    restart_epochs,
)
from roadseg.training.trainer import (
    EpochRecord,
    TrainResult,
    evaluate_dataset,
    train,
    write_history,
)

__all__ = [
    "DecoupledAdamW",
    "EpochRecord",
    "PatchDataset",
    "TrainConfig",
    "TrainResult",
    "augment",
    "build_train_config",
    "cycle_position",
    "epoch_lr",
    "evaluate_dataset",
    "lr_at",
    "restart_epochs",
    "split_train_val",
    "train",
    "tversky_loss",
    "write_history",
]
