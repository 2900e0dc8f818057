from neural_linucb.network.mlp import (
    ForwardCache,
    forward,
    forward_f,
    forward_phi,
    grad_f_all,
    grad_f_batch,
    grad_phi,
    init_params,
    phi_batch,
)
from neural_linucb.network.models import (
    HistoryMode,
    NetworkParams,
    NetworkShape,
    TrainConfig,
    TrainResult,
)
from neural_linucb.network.snapshot import WeightSnapshot, dump_params, load_params
from neural_linucb.network.training import train_epoch, train_full

__all__ = [
    "ForwardCache",
    "HistoryMode",
    "NetworkParams",
    "NetworkShape",
    "TrainConfig",
    "TrainResult",
    "WeightSnapshot",
    "dump_params",
    "forward",
    "forward_f",
    "forward_phi",
    "grad_f_all",
    "grad_f_batch",
    "grad_phi",
    "init_params",
    "load_params",
    "phi_batch",
    "train_epoch",
    "train_full",
]
