"""Training package: box, class, mask, track losses and gradient checks"""
from .losses import (
    LossBreakdown, EmbeddingPair,
    giou_loss, plain_giou_loss, giou_loss_grad, cls_loss, mask_loss, track_loss, total_loss,
)
from .gradcheck import numeric_gradient

__all__ = [
    'LossBreakdown', 'EmbeddingPair',
    'giou_loss', 'plain_giou_loss', 'giou_loss_grad', 'cls_loss', 'mask_loss', 'track_loss', 'total_loss',
    'numeric_gradient',
]
