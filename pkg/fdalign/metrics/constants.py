""" Names of the per-epoch training metrics """

import enum


class EpochMetrics(enum.Enum):
    L_CE = "L_CE"
    L_SIM = "L_sim"
    L_NORM = "L_norm"
    L_DROP = "L_drop"
    TRAIN_ACC = "train_acc"
    VAL_GT_LOC = "val_gt_loc"


EPOCH_STR = "epoch"
TAU_STR = "tau"
ACCURACY_STR = "accuracy"
