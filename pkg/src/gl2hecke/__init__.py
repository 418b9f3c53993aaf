"""Double coset operators for GL_2(F_p) and their verification.

Typical use::

    from gl2hecke import build_context, table2_row
    row = table2_row(build_context(7))
"""

from .eigen import lambda_NN_prime, table2_row, trace_pair_operator
from .field import build_context
from .operators import compose, epsilon_nonsplit, pair_operator
from .suite import SuiteConfig, run

__all__ = [
    "SuiteConfig",
    "build_context",
    "compose",
    "epsilon_nonsplit",
    "lambda_NN_prime",
    "pair_operator",
    "run",
    "table2_row",
    "trace_pair_operator",
]
