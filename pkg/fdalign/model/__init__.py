from fdalign.model.checkpoint import load_checkpoint, save_checkpoint
from fdalign.model.model import (
    FORMER_GROUP,
    HEAD_WEIGHT,
    LATTER_GROUP,
    Model,
    conv_bias_name,
    conv_weight_name,
)
from fdalign.model.sgd import SGD, sgd_step

__all__ = [
    FORMER_GROUP,
    HEAD_WEIGHT,
    LATTER_GROUP,
    Model,
    SGD,
    conv_bias_name,
    conv_weight_name,
    load_checkpoint,
    save_checkpoint,
    sgd_step,
]
