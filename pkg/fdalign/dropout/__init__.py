from fdalign.dropout.attentive_dropout import (
    apply_mask,
    attentive_set,
    channel_mean,
    make_mask,
)

__all__ = [apply_mask, attentive_set, channel_mean, make_mask]
