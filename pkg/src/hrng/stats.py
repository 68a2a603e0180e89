"""Exhaustive and statistical checks on output uniformity.

The exhaustive oracles are exact. The chi-square checks fix alpha = 0.01 and
take an explicit seed so the verdict is reproducible.
"""
from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from scipy import stats as sps

from .adversary import AdversarySpec
from .config import SystemConfig
from .crypto.encoding import BitString
from .errors import Rejected, RoundFailed
from .gas import VerifierMode

ALPHA = 0.01


@dataclass
class UniformityReport:
    sample_count: int
    bucket_count: int
    chi_square: float
    p_value: float
    alpha: float = ALPHA
    histogram: list[int] = field(default_factory=list)
    failed_rounds: int = 0

    @property
    def passed(self) -> bool:
        return self.p_value >= self.alpha

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        d = asdict(self)
        d["verdict"] = self.verdict
        return d


def chi_square_uniform(samples: Iterable[int], buckets: int, alpha: float = ALPHA) -> UniformityReport:
    counts = Counter(samples)
    if any(not 0 <= s < buckets for s in counts):
        raise ValueError("sample outside the bucket range")
    hist = [counts.get(b, 0) for b in range(buckets)]
    n = sum(hist)
    if n == 0:
        return UniformityReport(0, buckets, float("inf"), 0.0, alpha, hist)
    chi2, pval = sps.chisquare(hist)
    return UniformityReport(n, buckets, float(chi2), float(pval), alpha, hist)


# ------------------------------------------------------------------ exhaustive


@dataclass(frozen=True)
class ExhaustiveVerdict:
    ok: bool
    cases: int
    detail: str = ""


def xor_outputs(bit_width: int, adversary_value: int) -> list[int]:
    return [h ^ adversary_value for h in range(1 << bit_width)]


def xor_uniformity_oracle(bit_width: int, adversary_values: Iterable[int]) -> ExhaustiveVerdict:
    """For each fixed adversary input, XOR with every honest value must hit each output once."""
    if bit_width > 16:
        raise ValueError("bit_width too large to enumerate")
    cases = 0
    for a in adversary_values:
        outs = xor_outputs(bit_width, a)
        cases += len(outs)
        if sorted(outs) != list(range(1 << bit_width)):
            return ExhaustiveVerdict(False, cases, f"not a bijection for a={a}")
    return ExhaustiveVerdict(True, cases)


def sum_mod_p_outputs(p: int, adversary_sum: int) -> list[int]:
    return [(m + adversary_sum) % p for m in range(p)]


def sum_mod_p_uniformity_oracle(p: int, adversary_sums: Iterable[int] | None = None) -> ExhaustiveVerdict:
    """m -> (m + a) mod p is a bijection for every fixed a, so each residue has probability 1/p."""
    if p > 10_000:
        raise ValueError("p too large to enumerate")
    sums = range(p) if adversary_sums is None else adversary_sums
    cases = 0
    for a in sums:
        counts = Counter(sum_mod_p_outputs(p, a))
        cases += p
        if len(counts) != p or set(counts.values()) != {1}:
            return ExhaustiveVerdict(False, cases, f"not a bijection for a={a}")
    return ExhaustiveVerdict(True, cases)


# ------------------------------------------------------------------ Irwin-Hall


def unreduced_sum_pmf(ell: int, high: int) -> list[Fraction]:
    """Exact distribution of the sum of ``ell`` independent uniforms on {0..high}, by enumeration."""
    size = high + 1
    counts = Counter(sum(c) for c in itertools.product(range(size), repeat=ell))
    total = size ** ell
    return [Fraction(counts.get(s, 0), total) for s in range(ell * high + 1)]


@dataclass
class IrwinHallResult:
    pmf: list[Fraction]
    unreduced: UniformityReport
    reduced: UniformityReport
    modulus: int

    @property
    def confirmed(self) -> bool:
        return not self.unreduced.passed and self.reduced.passed


def irwin_hall_negative_check(
    ell: int, high: int, *, modulus: int | None = None, samples: int = 10_000, seed: int = 0
) -> IrwinHallResult:
    """Plain integer sums are bell-shaped; the same sums taken mod (high + 1) are uniform."""
    if ell < 2:
        raise ValueError("need ell >= 2")
    modulus = modulus or high + 1
    rng = random.Random(seed)
    sums = [sum(rng.randint(0, high) for _ in range(ell)) for _ in range(samples)]
    return IrwinHallResult(
        unreduced_sum_pmf(ell, high),
        chi_square_uniform(sums, ell * high + 1),
        chi_square_uniform([s % modulus for s in sums], modulus),
        modulus,
    )


# ------------------------------------------------------------ reduction bias


def reduction_distribution(bit_len: int, p: int) -> list[int]:
    """How many ``bit_len``-bit strings land on each residue (closed form)."""
    q, r = divmod(1 << bit_len, p)
    return [q + 1 if res < r else q for res in range(p)]


def reduction_bias_bound(bit_len: int, p: int) -> Fraction:
    """Exact max |Pr[bits mod p = x] - 1/p| over residues x."""
    total = 1 << bit_len
    return max(abs(Fraction(c, total) - Fraction(1, p)) for c in set(reduction_distribution(bit_len, p)))


def reduction_bias_by_enumeration(bit_len: int, p: int) -> Fraction:
    if bit_len > 24:
        raise ValueError("bit_len too large to enumerate")
    counts = Counter(v % p for v in range(1 << bit_len))
    total = 1 << bit_len
    return max(abs(Fraction(counts.get(x, 0), total) - Fraction(1, p)) for x in range(p))


# ---------------------------------------------------------------- end to end


def final_bucket(value, cfg: SystemConfig, xor_bits: int) -> int:
    if isinstance(value, BitString):
        return value.low(xor_bits).value
    return int(value)


def end_to_end_uniformity(
    config: SystemConfig,
    adversary: AdversarySpec | None = None,
    trials: int = 10_000,
    *,
    enforce_diversity: bool = True,
    xor_bits: int = 3,
    alpha: float = ALPHA,
) -> UniformityReport:
    """Run ``trials`` rounds (round ids 1..trials under one seed) and chi-square the final values.

    OPTIMIZED rounds are bucketed by residue mod p; NON_OPTIMIZED rounds by the
    low ``xor_bits`` bits of the XOR output. Failed or rejected rounds are
    counted, never bucketed.
    """
    from .protocol import run_round

    if config.mode is VerifierMode.OPTIMIZED:
        buckets = config.p
    else:
        buckets = 1 << xor_bits
    if trials < 10 * buckets:
        raise ValueError(f"need trials >= 10 * buckets ({10 * buckets})")
    values, failed = [], 0
    for n in range(1, trials + 1):
        try:
            tr = run_round(config.replace(round_id=n), adversary, enforce_diversity=enforce_diversity)
        except (RoundFailed, Rejected):
            failed += 1
            continue
        values.append(final_bucket(tr.final_value, config, xor_bits))
    report = chi_square_uniform(values, buckets, alpha)
    report.failed_rounds = failed
    return report
