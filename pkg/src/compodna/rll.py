"""Run-length-limited counting and redundancy bounds for composite alphabets.

Sequences are drawn from an alphabet of size Q in which R symbols form a
restricted subset. A sequence of length n is ell-run-length-limited when
every window of ell consecutive positions contains at least one symbol from
outside the restricted subset, i.e. no run of ell or more restricted symbols
occurs. Only the split of the alphabet into restricted / unrestricted
matters for counting, so everything here works on (Q, R, ell, n).

Redundancy figures are measured in symbols, log base Q:
redundancy = n - log_Q(count).
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

_BRUTE_LIMIT = 20


@dataclass(frozen=True)
class RllParams:
    """Alphabet size Q, restricted-subset size R, window length ell, length n."""

    Q: int
    R: int
    ell: int
    n: int

    def __post_init__(self) -> None:
        if not 0 <= self.R < self.Q:
            raise ValueError(f"need 0 <= R < Q, got R={self.R}, Q={self.Q}")
        if self.ell < 1:
            raise ValueError(f"window length ell must be >= 1, got {self.ell}")
        if self.n < 0:
            raise ValueError(f"sequence length n must be >= 0, got {self.n}")


def is_run_length_limited(restricted_flags: Sequence[bool], ell: int) -> bool:
    """True when no window of ell consecutive positions is fully restricted.

    `restricted_flags[i]` marks position i as carrying a restricted symbol.
    Sequences shorter than ell qualify vacuously (no full window exists).
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    run = 0
    for flag in restricted_flags:
        run = run + 1 if flag else 0
        if run >= ell:
            return False
    return True


def count_rll_brute(params: RllParams) -> int:
    """Exhaustive count over all 2^n restricted/unrestricted patterns.

    Independent oracle for count_rll_exact: each valid position-class
    pattern with t restricted positions contributes R^t * (Q-R)^(n-t).
    Only feasible for small n.
    """
    Q, R, ell, n = params.Q, params.R, params.ell, params.n
    if n > _BRUTE_LIMIT:
        raise ValueError(f"brute-force count limited to n <= {_BRUTE_LIMIT}, got n={n}")
    good = Q - R
    total = 0
    for pattern in product((False, True), repeat=n):
        if is_run_length_limited(pattern, ell):
            t = sum(pattern)
            total += R**t * good ** (n - t)
    return total


def count_rll_exact(params: RllParams) -> int:
    """Exact size of the run-length-limited set, by dynamic programming.

    State r in [0, ell-1] is the length of the trailing restricted run.
    Appending an unrestricted symbol (Q-R ways) resets r to 0; appending a
    restricted symbol (R ways) advances r, and is dropped when the run
    would reach ell. O(n * ell) big-integer operations.
    """
    Q, R, ell, n = params.Q, params.R, params.ell, params.n
    good = Q - R
    state = [0] * ell
    state[0] = 1
    total = 1
    for _ in range(n):
        new = [good * total] + [R * state[r] for r in range(ell - 1)]
        state = new
        total = sum(state)
    return total


def window_count_closed_form(Q: int, R: int, ell: int) -> int:
    """Exact count of run-length-limited sequences of length 2*ell.

    Evaluates Q^(2l) - (l+1) R^l Q^l + l R^(l+1) Q^(l-1) in integer
    arithmetic; equals count_rll_exact at n = 2*ell.
    """
    RllParams(Q=Q, R=R, ell=ell, n=0)
    return Q ** (2 * ell) - (ell + 1) * R**ell * Q**ell + ell * R ** (ell + 1) * Q ** (ell - 1)


def forbidden_block_count(j: int, k: int, Q: int, R: int, ell: int) -> int:
    """Number of length-2*ell sequences whose first restricted run of length
    >= ell starts at position j and has length exactly k.

    Valid index pairs are j in [1, ell+1], k in [ell, 2*ell-j+1]. Summing
    over all valid pairs gives Q^(2l) - window_count_closed_form.
    """
    RllParams(Q=Q, R=R, ell=ell, n=0)
    if not 1 <= j <= ell + 1:
        raise ValueError(f"run start j={j} outside [1, {ell + 1}]")
    if not ell <= k <= 2 * ell - j + 1:
        raise ValueError(f"run length k={k} outside [{ell}, {2 * ell - j + 1}] for j={j}")
    two_ell = 2 * ell
    if j == 1 and k == two_ell:
        return R**two_ell
    if (j == 1 and k < two_ell) or (j > 1 and k == two_ell - j + 1):
        return R**k * Q ** (two_ell - k - 1) * (Q - R)
    return R**k * Q ** (two_ell - k - 2) * (Q - R) ** 2


def _log_q(value: int, Q: int) -> float:
    # math.log handles arbitrary-size ints without overflow.
    return math.log(value) / math.log(Q)


def redundancy_exact(params: RllParams) -> float:
    """n - log_Q(exact count), from the DP count."""
    count = count_rll_exact(params)
    return params.n - _log_q(count, params.Q)


def redundancy_lower_bound(params: RllParams) -> float:
    """Lower bound log_Q(e) (R/Q)^l (1 - R/Q) (n - 2l)/2; zero when n < 2l."""
    Q, R, ell, n = params.Q, params.R, params.ell, params.n
    if n < 2 * ell:
        return 0.0
    ratio = R / Q
    return math.log(math.e, Q) * ratio**ell * (1 - ratio) * (n - 2 * ell) / 2


@dataclass(frozen=True)
class RllUpperBounds:
    """Union-bound and local-lemma redundancy upper bounds.

    `union` is None whenever the union-bound derivation does not apply
    (its survival probability S reaches 1). `lll` is always evaluated, but
    its derivation assumes the local-lemma premises, which hold only for
    large enough ell; `lll_premises_hold` records the numeric check.
    """

    union: Optional[float]
    lll: float
    lll_premises_hold: bool


def lll_premises_hold(Q: int, R: int, ell: int) -> bool:
    """Numeric check of the local-lemma premise inequalities.

    With pi = (R/Q)^l (1 - R/Q) and pi1 = (R/Q)^l, weights phi = e*pi and
    phi1 = e*pi1 satisfy the lemma's conditions exactly when
    e((2l+2) pi + pi1) <= 1 and e((l-1) pi + pi1) <= 1.
    """
    ratio = R / Q
    pi1 = ratio**ell
    pi = pi1 * (1 - ratio)
    return (
        math.e * ((2 * ell + 2) * pi + pi1) <= 1.0
        and math.e * ((ell - 1) * pi + pi1) <= 1.0
    )


def redundancy_upper_bounds(params: RllParams) -> RllUpperBounds:
    """Both redundancy upper bounds.

    Let S = (R/Q)^l (1 + (1 - R/Q)(n - l)). The union-bound variant is
    log_Q(e) S / (1 - S), defined only for S < 1. The local-lemma variant
    e log_Q(e) S is always reported.
    """
    Q, R, ell, n = params.Q, params.R, params.ell, params.n
    if n < ell:
        raise ValueError(f"need n >= ell, got n={n}, ell={ell}")
    ratio = R / Q
    s = ratio**ell * (1 + (1 - ratio) * (n - ell))
    log_q_e = math.log(math.e, Q)
    union = log_q_e * s / (1 - s) if s < 1 else None
    return RllUpperBounds(union=union, lll=math.e * log_q_e * s, lll_premises_hold=lll_premises_hold(Q, R, ell))


def redundancy_trivial_bound(params: RllParams) -> float:
    """Baseline bound floor(n/l) log_Q(Q/(Q-R)) from forcing every l-th position."""
    Q, R, ell, n = params.Q, params.R, params.ell, params.n
    return (n // ell) * math.log(Q / (Q - R), Q)


def verify_summation_identities(Q: int, R: int, ell: int) -> bool:
    """Cross-check the algebraic identities behind the closed-form window count.

    Evaluates three identities in exact rational arithmetic and returns True
    only if all hold exactly:

    1. sum_{j=1}^{l} R^(2l-j) Q^j (1-R/Q) + sum_{k=l}^{2l-1} R^k Q^(2l-k) (1-R/Q)
       == 2 (QR)^l (1 - (R/Q)^l)
    2. sum_{j=1}^{l-1} sum_{k=l}^{2l-j-1} R^k Q^(2l-k) (1-R/Q)^2
       == (QR)^l ((l-1) - l(R/Q) + (R/Q)^l)
    3. the change-of-summation-order identity
       sum_{j=1}^{l-1} sum_{i=0}^{l-j-1} x^i == sum_{i=0}^{l-2} sum_{j=1}^{l-1-i} x^i
       at x = R/Q.
    """
    RllParams(Q=Q, R=R, ell=ell, n=0)
    if ell < 2:
        raise ValueError(f"identities need ell >= 2, got {ell}")
    x = Fraction(R, Q)
    one_minus = 1 - x

    lhs1 = sum(Fraction(R ** (2 * ell - j) * Q**j) * one_minus for j in range(1, ell + 1))
    lhs1 += sum(Fraction(R**k * Q ** (2 * ell - k)) * one_minus for k in range(ell, 2 * ell))
    rhs1 = 2 * Fraction((Q * R) ** ell) * (1 - x**ell)

    lhs2 = sum(
        Fraction(R**k * Q ** (2 * ell - k)) * one_minus**2
        for j in range(1, ell)
        for k in range(ell, 2 * ell - j)
    )
    rhs2 = Fraction((Q * R) ** ell) * ((ell - 1) - ell * x + x**ell)

    lhs3 = sum(x**i for j in range(1, ell) for i in range(ell - j))
    rhs3 = sum(x**i for i in range(ell - 1) for _ in range(1, ell - i))

    return lhs1 == rhs1 and lhs2 == rhs2 and lhs3 == rhs3


def verify_summation_identities_grid(points: int = 20, seed: int = 7, max_ell: int = 8) -> int:
    """Run verify_summation_identities on a seeded random grid; returns failure count."""
    rng = random.Random(seed)
    failures = 0
    for _ in range(points):
        Q = rng.randint(2, 100)
        R = rng.randint(0, Q - 1)
        ell = rng.randint(2, max_ell)
        if not verify_summation_identities(Q, R, ell):
            failures += 1
    return failures


@dataclass(frozen=True)
class BoundReport:
    """Exact count plus the four redundancy figures for one parameter point."""

    exact_count: int
    exact_redundancy: float
    lower_bound: float
    upper_bound_union: Optional[float]
    upper_bound_lll: float
    trivial_bound: float

    def to_json_dict(self) -> dict:
        return {
            "exact_count": str(self.exact_count),
            "exact_redundancy": self.exact_redundancy,
            "lower_bound": self.lower_bound,
            "upper_bound_union": self.upper_bound_union,
            "upper_bound_lll": self.upper_bound_lll,
            "trivial_bound": self.trivial_bound,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "BoundReport":
        obj = json.loads(text)
        return cls(
            exact_count=int(obj["exact_count"]),
            exact_redundancy=float(obj["exact_redundancy"]),
            lower_bound=float(obj["lower_bound"]),
            upper_bound_union=None if obj["upper_bound_union"] is None else float(obj["upper_bound_union"]),
            upper_bound_lll=float(obj["upper_bound_lll"]),
            trivial_bound=float(obj["trivial_bound"]),
        )


def bound_report(params: RllParams) -> BoundReport:
    """Exact count and all redundancy figures for one (Q, R, ell, n)."""
    count = count_rll_exact(params)
    # For n < ell every sequence qualifies and the redundancy is exactly 0,
    # so 0 is a valid stand-in where the upper-bound formulas do not apply.
    upper = redundancy_upper_bounds(params) if params.n >= params.ell else RllUpperBounds(None, 0.0, False)
    return BoundReport(
        exact_count=count,
        exact_redundancy=params.n - _log_q(count, params.Q),
        lower_bound=redundancy_lower_bound(params),
        upper_bound_union=upper.union,
        upper_bound_lll=upper.lll,
        trivial_bound=redundancy_trivial_bound(params),
    )


SWEEP_CSV_HEADER = (
    "Q,R,ell,n,exact_count,exact_redundancy,lower_bound,"
    "upper_bound_union,upper_bound_lll,trivial_bound"
)


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else f"{x:.12g}"


def sweep_csv_rows(Q: int, R: int, ells: Sequence[int], ns: Sequence[int]) -> list[str]:
    """One CSV row per (Q, R, ell, n); floats at 12 significant digits."""
    rows = []
    for ell in ells:
        for n in ns:
            rep = bound_report(RllParams(Q=Q, R=R, ell=ell, n=n))
            rows.append(
                f"{Q},{R},{ell},{n},{rep.exact_count},{_fmt(rep.exact_redundancy)},"
                f"{_fmt(rep.lower_bound)},{_fmt(rep.upper_bound_union)},"
                f"{_fmt(rep.upper_bound_lll)},{_fmt(rep.trivial_bound)}"
            )
    return rows
