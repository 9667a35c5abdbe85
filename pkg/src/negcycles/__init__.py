"""Elements with only negative (or only positive) cycles in the Weyl groups
W(B_n) and W(D_n): exact counts, brute-force checks, Monte Carlo estimates
and a certified asymptotic bound."""

from .asymptotics import (
    BoundReport,
    RealEnclosure,
    Verdict,
    certify_upper_bound,
    check_stirling_bounds,
    h_enclosure,
    ratio_p_over_h,
)
from .counting import (
    count_all_negative_B,
    count_all_negative_coset,
    count_all_negative_D,
    count_all_positive_B,
    proportion_p,
    proportion_p_minus,
    proportion_p_plus,
)
from .sampling import EstimateReport, GroupSelector, estimate_proportion
from .signed_perm import SignedPermutation, parse_element

__version__ = "0.1.0"
