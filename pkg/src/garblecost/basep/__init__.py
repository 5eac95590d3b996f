"""Base-p digit circuits: adders, digit products, Karatsuba, Montgomery."""
from .number import (BasePNumber, assign_number, decode_base_p, decode_number, encode_base_p,
                     number_const, number_input, signed_input)
from .arith import (Columns, build_abs, build_adder, build_digit_square, build_ripple_add,
                    build_single_digit_mul, build_single_digit_mul_const, difference, negate,
                    normalize)
from .karatsuba import (DEFAULT_THRESHOLD, build_karatsuba_mul, build_karatsuba_mul_const,
                        build_karatsuba_square, build_schoolbook_mul)
from .montgomery import (MontgomeryContext, build_montgomery_mul_base_p,
                         build_montgomery_square_base_p, default_modulus, digits_for_bits)
from .costs import (cost_karatsuba, cost_montgomery, digit_mul_report, optimize_montgomery,
                    published_karatsuba, published_karatsuba_square, published_montgomery)

__all__ = [
    "BasePNumber", "assign_number", "decode_base_p", "decode_number", "encode_base_p",
    "number_const", "number_input", "signed_input", "Columns", "build_abs", "build_adder",
    "build_digit_square", "build_ripple_add", "build_single_digit_mul",
    "build_single_digit_mul_const", "difference", "negate", "normalize", "DEFAULT_THRESHOLD",
    "build_karatsuba_mul", "build_karatsuba_mul_const", "build_karatsuba_square",
    "build_schoolbook_mul", "MontgomeryContext", "build_montgomery_mul_base_p",
    "build_montgomery_square_base_p", "default_modulus", "digits_for_bits", "cost_karatsuba",
    "cost_montgomery", "digit_mul_report", "optimize_montgomery", "published_karatsuba",
    "published_karatsuba_square", "published_montgomery",
]
