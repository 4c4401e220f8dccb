# Dataset preparation and the model comparison protocol
from roadseg.experiments.compare import Comparison, run_comparison
from roadseg.experiments.datasets import (
    generate_dataset,
    ingest_dataset,
    load_split,
)

__all__ = [
    "Comparison",
    "generate_dataset",
    "ingest_dataset",
    "load_split",
    "run_comparison",
]
