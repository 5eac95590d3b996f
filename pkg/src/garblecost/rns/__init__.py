"""Double-RNS Montgomery multiplication circuits."""
from .params import RnsParams, optimize_rns, select_rns_params
from .engine import (RnsValue, build_bajard_imbert_mul, build_bajard_imbert_square,
                     build_montgomery_reduce, build_multiply_accumulate,
                     build_rns_private_mul, build_rns_square, rns_constant, rns_input)
from .costs import cost_bajard_imbert, mac_reduction_count, published_mac_cost
from .two_layer import (TopValue, TwoLayerParams, build_two_layer_mul,
                        build_two_layer_square, cost_two_layer, published_cost_two_layer,
                        select_two_layer_params)

__all__ = [
    "RnsParams", "optimize_rns", "select_rns_params", "RnsValue",
    "build_bajard_imbert_mul", "build_bajard_imbert_square", "build_montgomery_reduce",
    "build_multiply_accumulate", "build_rns_private_mul", "build_rns_square",
    "rns_constant", "rns_input", "cost_bajard_imbert", "mac_reduction_count",
    "published_mac_cost", "TopValue", "TwoLayerParams", "build_two_layer_mul",
    "build_two_layer_square", "cost_two_layer", "published_cost_two_layer",
    "select_two_layer_params",
]
