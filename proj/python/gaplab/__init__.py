"""Prime-gap constructions: sieve arithmetic, admissible tuples, covering
systems, variational functionals and gap statistics.

The heavy lifting lives in the C++ extension ``gaplab._core``; this package
re-exports it and adds a couple of conveniences for exact rational values.
"""

from fractions import Fraction

from ._core import (  # noqa: F401
    ArgumentError,
    GapRecord,
    InfeasibleError,
    KTuple,
    ParseError,
    PrimeStore,
    RangeError,
    ResidueCover,
    ResourceError,
    SumVariant,
    bv_error_scan,
    chain_points,
    chebyshev_psi,
    construct_tuple,
    crt_base_point,
    difference_hits,
    extend_cover,
    gap_stream,
    greedy_residue,
    integral_I,
    integral_J,
    integral_L,
    is_admissible,
    lemma46_report,
    locate_witness,
    measure_bounds,
    mertens_report,
    mk_lower_bound,
    parse_test_function,
    partition_equal,
    poisson_histogram,
    prime_pattern,
    psi_progression,
    residual,
    sieve_weight,
    smooth_count,
    translate,
    verify_sieved_interval,
    weighted_sum_S,
)

__version__ = "0.1.0"


def as_fraction(value):
    """Turn a 'p/q' string (as returned by the exact-arithmetic APIs) into a
    Fraction."""
    return Fraction(value)
