from .checkpoint import checkpoint_bytes, load_checkpoint, save_checkpoint
from .layers import (
    LSTMParams,
    affine,
    complete_graph_edges,
    glorot,
    gnn_layer,
    normalized_adjacency,
    recurrent_cell,
    zeros,
)
from .optim import Adam, adam_step
from .tensor import (
    Tape,
    Tensor,
    add,
    as_tensor,
    concat,
    div,
    exp,
    log,
    log_sum_exp,
    matmul,
    mul,
    neg,
    relu,
    reshape,
    set_debug,
    sigmoid,
    slice_cols,
    softplus,
    sqrt,
    sub,
    tanh,
    tmean,
    tsum,
)

__all__ = [
    "Adam", "LSTMParams", "Tape", "Tensor", "adam_step", "add", "affine",
    "as_tensor", "checkpoint_bytes", "complete_graph_edges", "concat", "div",
    "exp", "glorot", "gnn_layer", "load_checkpoint", "log", "log_sum_exp",
    "matmul", "mul", "neg", "normalized_adjacency", "recurrent_cell", "relu",
    "reshape", "save_checkpoint", "set_debug", "sigmoid", "slice_cols",
    "softplus", "sqrt", "sub", "tanh", "tmean", "tsum", "zeros",
]
