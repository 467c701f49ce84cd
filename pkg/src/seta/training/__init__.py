from .data import Dataset, SynthSpec, generate_synthetic, load_csv
from .model import (
    MODEL_KINDS,
    ModelState,
    init_model,
    logits,
    loss_and_grads,
    objective,
    per_sample_loss,
)
from .trainer import TrainConfig, evaluate, sgd_epoch

__all__ = [
    "MODEL_KINDS",
    "Dataset",
    "ModelState",
    "SynthSpec",
    "TrainConfig",
    "evaluate",
    "generate_synthetic",
    "init_model",
    "load_csv",
    "logits",
    "loss_and_grads",
    "objective",
    "per_sample_loss",
    "sgd_epoch",
]
