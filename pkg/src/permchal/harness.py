"""Seeded Monte Carlo experiment runner, bound comparison and reports.

Every trial derives its own RNG stream from (master seed, trial index),
so runs are reproducible bit-for-bit regardless of worker count, and
aggregate counts are order-insensitive. CSV output is the product: a
versioned header comment, a fixed column order, fixed float formatting.
Wall-clock measurements are kept out of the CSV by default so that two
runs of the same spec are byte-identical; ``timing=True`` (CLI
``--timing``) opts into measured seconds at the cost of that guarantee.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .attacks import (
    AttackConfig,
    bsgs_adversary,
    chain_preprocessing_dlog,
    constant_guess_adversary,
    daemen_em_adversary,
    pollard_rho_adversary,
    run_mi_game,
    sqddh_nonadaptive_adversary,
)
from .bounds import BoundTheorem, evaluate_bound, theorem_for_game
from .errors import ValidationError
from .games import GameKind, build_game, play_game, random_sigma
from .seeding import derive_trial_seed, trial_generator
from .shearer import (
    CoverFamily,
    bijection_shearer_gap,
    extremal_ratio_search,
    indicator_distribution,
    indicator_shearer_gap,
    product_shearer_gap,
    random_bijection_distribution,
    random_cover,
    random_read_k_family,
    read_k_concentration_gap,
)
from .infotheory import JointDistribution

WILSON_Z = 1.959963984540054  # two-sided 95%
SEED_NOTE = "trial seed = splitmix64(master ^ (index * golden64)); Fisher-Yates sigma then secret"

GAME_ALIASES = {
    "dlog": GameKind.DLOG,
    "ddh": GameKind.DDH,
    "sqddh": GameKind.SQDDH,
    "em": GameKind.EM_KR,
    "em1k": GameKind.EM_KR_SINGLE,
}

_ATTACK_GAMES = {
    "bsgs": {GameKind.DLOG},
    "rho": {GameKind.DLOG},
    "chains": {GameKind.DLOG},
    "daemen": {GameKind.EM_KR},
    "sqddh-majority": {GameKind.SQDDH},
    "guess": set(GAME_ALIASES.values()),
    "mi": {GameKind.DLOG},
}

CSV_COLUMNS = [
    "game",
    "attack",
    "n",
    "s_bits",
    "t",
    "trials",
    "successes",
    "p_hat",
    "ci_low",
    "ci_high",
    "bound_theorem",
    "bound_value",
    "seed",
    "seconds",
]

CSV_VERSION_LINE = "#permchal-v1 columns=" + ",".join(CSV_COLUMNS)


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> tuple:
    """Wilson score interval; always contains the point estimate."""
    if trials < 1 or not (0 <= successes <= trials):
        raise ValidationError("wilson_interval: need 0 <= successes <= trials, trials >= 1")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class ExperimentSpec:
    game: str
    attack: str
    n: int
    t: int
    trials: int
    master_seed: int = 0
    s_bits: Optional[int] = None
    theorem: Optional[str] = None  # None/"auto" resolves per game kind

    def __post_init__(self):
        if self.game not in GAME_ALIASES:
            raise ValidationError(f"unknown game {self.game!r}")
        if self.attack not in _ATTACK_GAMES:
            raise ValidationError(f"unknown attack {self.attack!r}")
        kind = GAME_ALIASES[self.game]
        if kind not in _ATTACK_GAMES[self.attack]:
            raise ValidationError(f"attack {self.attack!r} does not apply to game {self.game!r}")
        if self.trials < 1:
            raise ValidationError("trials must be at least 1")
        if self.t < 0:
            raise ValidationError("t must be non-negative")

    @property
    def kind(self) -> GameKind:
        return GAME_ALIASES[self.game]


@dataclass(frozen=True)
class ExperimentReport:
    spec: ExperimentSpec
    s_bits: int
    successes: int
    p_hat: float
    ci_low: float
    ci_high: float
    bound_theorem: str
    bound_value: Optional[float]
    seconds: float
    seed_note: str = SEED_NOTE

    def csv_row(self, timing: bool = False) -> list:
        return [
            self.spec.game,
            self.spec.attack,
            str(self.spec.n),
            str(self.s_bits),
            str(self.spec.t),
            str(self.spec.trials),
            str(self.successes),
            f"{self.p_hat:.6f}",
            f"{self.ci_low:.6f}",
            f"{self.ci_high:.6f}",
            self.bound_theorem,
            "" if self.bound_value is None else f"{self.bound_value:.6f}",
            str(self.spec.master_seed),
            f"{self.seconds:.3f}" if timing else "0.000",
        ]

    def to_json_dict(self) -> dict:
        d = asdict(self.spec)
        d.update(
            s_bits_declared=self.s_bits,
            successes=self.successes,
            p_hat=self.p_hat,
            ci_low=self.ci_low,
            ci_high=self.ci_high,
            bound_theorem=self.bound_theorem,
            bound_value=self.bound_value,
            seconds=self.seconds,
            seed_note=self.seed_note,
        )
        return d


def _attack_config(spec: ExperimentSpec, trial_seed: int) -> AttackConfig:
    base = dict(n=spec.n, t_budget=spec.t, s_bits=spec.s_bits)
    if spec.attack == "bsgs":
        return AttackConfig(**base, m=spec.t, seed=spec.master_seed)
    if spec.attack == "rho":
        return AttackConfig(**base, seed=trial_seed)
    if spec.attack == "chains":
        if spec.s_bits is None:
            raise ValidationError("chains attack needs --s-bits to size the endpoint table")
        width = max(1, (spec.n - 1).bit_length())
        chains = spec.s_bits // (2 * width)
        if chains < 1:
            raise ValidationError("s_bits too small for a single chain endpoint")
        return AttackConfig(
            **base, chains=chains, chain_length=spec.t, seed=spec.master_seed
        )
    if spec.attack == "daemen":
        return AttackConfig(**base, seed=spec.master_seed)
    if spec.attack == "sqddh-majority":
        buckets = spec.s_bits if spec.s_bits is not None else None
        return AttackConfig(**base, buckets=buckets, seed=spec.master_seed)
    return AttackConfig(**base, seed=spec.master_seed)


_ATTACK_BUILDERS: dict = {
    "bsgs": bsgs_adversary,
    "rho": pollard_rho_adversary,
    "chains": chain_preprocessing_dlog,
    "daemen": daemen_em_adversary,
    "sqddh-majority": sqddh_nonadaptive_adversary,
}


def build_adversary(spec: ExperimentSpec, game, trial_seed: int = 0):
    if spec.attack == "guess":
        return constant_guess_adversary(game)
    if spec.attack == "mi":
        raise ValidationError("the multi-instance game is run directly, not via play_game")
    return _ATTACK_BUILDERS[spec.attack](_attack_config(spec, trial_seed))


def resolve_theorem(spec: ExperimentSpec) -> Optional[BoundTheorem]:
    if spec.attack == "mi":
        if spec.theorem not in (None, "auto", "none"):
            raise ValidationError("the multi-instance game has no bound theorem")
        return None
    if spec.theorem in (None, "auto"):
        return theorem_for_game(spec.kind)
    if spec.theorem == "none":
        return None
    theorem = BoundTheorem(spec.theorem)
    expected = theorem_for_game(spec.kind)
    if theorem != expected:
        raise ValidationError(
            f"theorem {theorem.value} does not apply to game {spec.game!r}; expected {expected.value}"
        )
    return theorem


def _run_chunk(spec: ExperimentSpec, lo: int, hi: int) -> int:
    game = build_game(spec.kind, spec.n)
    successes = 0
    adversary = None
    for index in range(lo, hi):
        tseed = derive_trial_seed(spec.master_seed, index)
        if spec.attack == "mi":
            cfg = AttackConfig(
                n=spec.n, t_budget=spec.t, s_bits=spec.s_bits, forced_correct=False
            )
            successes += run_mi_game(cfg, seed=tseed).all_correct
            continue
        rng = trial_generator(spec.master_seed, index)
        sigma = random_sigma(rng, spec.n)
        secret = game.sample_secret(rng)
        if spec.attack == "rho":
            adversary = build_adversary(spec, game, tseed)
        elif adversary is None:
            adversary = build_adversary(spec, game)
        successes += play_game(game, adversary, sigma, secret).success
    return successes


def _chunk_worker(payload: tuple) -> int:
    spec_dict, lo, hi = payload
    return _run_chunk(ExperimentSpec(**spec_dict), lo, hi)


def run_trials(spec: ExperimentSpec, jobs: int = 1) -> ExperimentReport:
    """Run one experiment's trials and assemble the report row.

    Each trial samples a fresh uniform permutation (Fisher-Yates under
    the trial stream) and a fresh uniform secret, then plays the game.
    The report attaches the applicable ceiling at the attack's declared
    advice length and the experiment's t.
    """
    start = time.perf_counter()
    theorem = resolve_theorem(spec)
    game = build_game(spec.kind, spec.n)
    if spec.attack == "mi":
        declared_bits = spec.s_bits if spec.s_bits is not None else 0
    else:
        declared_bits = build_adversary(spec, game, derive_trial_seed(spec.master_seed, 0)).s_bits

    if jobs <= 1 or spec.trials < 2:
        successes = _run_chunk(spec, 0, spec.trials)
    else:
        chunk = max(1, math.ceil(spec.trials / (jobs * 4)))
        payloads = [
            (asdict(spec), lo, min(spec.trials, lo + chunk))
            for lo in range(0, spec.trials, chunk)
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            successes = sum(pool.map(_chunk_worker, payloads))

    ci_low, ci_high = wilson_interval(successes, spec.trials)
    bound = (
        evaluate_bound(theorem, spec.n, declared_bits, spec.t) if theorem is not None else None
    )
    return ExperimentReport(
        spec=spec,
        s_bits=declared_bits,
        successes=successes,
        p_hat=successes / spec.trials,
        ci_low=ci_low,
        ci_high=ci_high,
        bound_theorem=theorem.value if theorem is not None else "",
        bound_value=bound,
        seconds=time.perf_counter() - start,
    )


def sweep_grid(
    specs: Sequence[ExperimentSpec],
    jobs: int = 1,
    on_report: Optional[Callable[[ExperimentReport], None]] = None,
) -> list:
    """Run specs in order; flush each report as it completes.

    A hard failure aborts the sweep after the callback has seen every
    completed report, so partial results are already flushed.
    """
    if not specs:
        raise ValidationError("sweep_grid: empty grid")
    reports = []
    for spec in specs:
        report = run_trials(spec, jobs=jobs)
        reports.append(report)
        if on_report is not None:
            on_report(report)
    return reports


def write_csv(reports: Iterable[ExperimentReport], fh, timing: bool = False) -> None:
    fh.write(CSV_VERSION_LINE + "\n")
    fh.write(",".join(CSV_COLUMNS) + "\n")
    for r in reports:
        fh.write(",".join(r.csv_row(timing=timing)) + "\n")


def write_json(reports: Iterable[ExperimentReport], fh) -> None:
    json.dump([r.to_json_dict() for r in reports], fh, indent=2)
    fh.write("\n")


def check_bound_assertions(reports: Iterable[ExperimentReport], slack: float = 0.01) -> list:
    """Rows violating p_hat <= bound + Wilson halfwidth + slack.

    Only non-adaptive attacks are held to the ceilings.
    """
    adaptive = {"rho", "chains", "mi"}
    bad = []
    for r in reports:
        if r.spec.attack in adaptive or r.bound_value is None:
            continue
        half = (r.ci_high - r.ci_low) / 2.0
        if r.p_hat > r.bound_value + half + slack:
            bad.append(r)
    return bad


# ---------------------------------------------------------------------------
# Inequality verification front end
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InequalitySummary:
    n: int
    trials: int
    seed: int
    min_bijection_gap_c2: Optional[float] = None
    min_bijection_gap_c9: Optional[float] = None
    min_read_k_gap: Optional[float] = None
    min_indicator_gap: Optional[float] = None
    min_product_gap: Optional[float] = None
    extremal_ratio: Optional[float] = None

    def all_gaps_nonnegative(self, tol: float = 1e-9) -> bool:
        gaps = [
            self.min_bijection_gap_c2,
            self.min_bijection_gap_c9,
            self.min_read_k_gap,
            self.min_indicator_gap,
            self.min_product_gap,
        ]
        return all(g is None or g >= -tol for g in gaps)


def verify_inequalities(n: int, random_trials: int, seed: int) -> InequalitySummary:
    """Exhaustive random verification of every inequality at one n.

    Samples Dirichlet-random distributions with fresh random covers and
    read-k families per trial and tracks the minimum gap of each
    inequality; also runs the extremal ratio search on singleton covers.
    trials = 0 yields an empty summary.
    """
    if n < 2:
        raise ValidationError("verify_inequalities: need n >= 2")
    if random_trials < 0:
        raise ValidationError("verify_inequalities: negative trial count")
    if random_trials == 0:
        return InequalitySummary(n=n, trials=0, seed=seed)
    rng = np.random.Generator(np.random.PCG64(seed))
    min_c2 = min_c9 = min_rk = min_ind = min_prod = math.inf
    axes = tuple(f"x{i}" for i in range(n))
    supports = tuple((0, 1) for _ in range(n))
    for _ in range(random_trials):
        p = random_bijection_distribution(rng, n)
        cover = random_cover(rng, n)
        min_c2 = min(min_c2, bijection_shearer_gap(p, cover, 2.0))
        min_c9 = min(min_c9, bijection_shearer_gap(p, cover, 9.0))
        fam = random_read_k_family(rng, n)
        min_rk = min(min_rk, read_k_concentration_gap(p, fam))
        probs = rng.dirichlet(np.ones(n))
        min_ind = min(
            min_ind, indicator_shearer_gap(indicator_distribution(probs), random_cover(rng, n))
        )
        table = rng.dirichlet(np.ones(2**n)).reshape((2,) * n)
        joint = JointDistribution(axes, supports, table)
        min_prod = min(min_prod, product_shearer_gap(joint, random_cover(rng, n)))
    singles = CoverFamily(n, tuple(frozenset([i]) for i in range(n)))
    search = extremal_ratio_search(n, singles, trials=min(10, random_trials), seed=seed)
    ratio = search.best_ratio
    # the search witness is the closest-to-tight distribution seen; its gap
    # belongs in the minima (at n=2 the point-mass witness reaches 0 exactly)
    min_c2 = min(min_c2, bijection_shearer_gap(search.witness, singles, 2.0))
    min_c9 = min(min_c9, bijection_shearer_gap(search.witness, singles, 9.0))
    return InequalitySummary(
        n=n,
        trials=random_trials,
        seed=seed,
        min_bijection_gap_c2=min_c2,
        min_bijection_gap_c9=min_c9,
        min_read_k_gap=min_rk,
        min_indicator_gap=min_ind,
        min_product_gap=min_prod,
        extremal_ratio=ratio,
    )
