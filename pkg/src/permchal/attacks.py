"""Reference adversaries for the oracle games.

Non-adaptive preprocessing attacks (compared against the closed-form
ceilings):

* baby-step giant-step for the hidden-exponent search game;
* an XOR-difference table attack recovering both keys of the XOR cipher;
* a majority-advice distinguisher for the squared decision game.

Adaptive baselines (excluded from those comparisons, kept for contrast):

* cycle-finding collision search for the hidden exponent;
* endpoint-table random-walk chains exploiting preprocessing.

Plus the multi-instance search game used to probe how colliding query
sets determine later secrets.

Advice strings are literal '0'/'1' strings; each attack documents its
own encoding and the engine enforces only the declared length bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ContractViolation, ValidationError
from .games import (
    AdaptiveAdversary,
    DlogGame,
    GameKind,
    NonAdaptiveAdversary,
    PCGame,
    is_power_of_two,
    is_prime,
    random_sigma,
)
from .seeding import mix64, mix64_array, splitmix64


@dataclass(frozen=True)
class AttackConfig:
    """Shared attack parameterization; attack-specific fields are optional.

    ``s_bits`` may be omitted, in which case each attack declares the
    exact advice length its encoding needs.
    """

    n: int
    t_budget: int = 0
    s_bits: Optional[int] = None
    seed: int = 0
    # attack-specific knobs
    m: Optional[int] = None  # baby-step giant-step table width
    table_budget: Optional[int] = None  # XOR-difference attack t1
    alpha: Optional[int] = None  # XOR-difference offset (bit pattern, nonzero)
    chains: Optional[int] = None  # endpoint-table walk count
    chain_length: Optional[int] = None
    buckets: Optional[int] = None  # majority-advice bucket count
    instances: Optional[int] = None  # multi-instance game length
    guess_count: Optional[int] = None
    forced_correct: bool = False


def bits_encode(value: int, width: int) -> str:
    if not (0 <= value < (1 << width)):
        raise ValidationError(f"value {value} does not fit in {width} bits")
    return format(value, f"0{width}b")


def bits_decode(bits: str) -> int:
    return int(bits, 2) if bits else 0


def _element(residue: int, n: int) -> int:
    return n if residue % n == 0 else residue % n


def _slot(residue: int, n: int) -> int:
    """Array slot of the element representing this residue."""
    return (residue - 1) % n


# ---------------------------------------------------------------------------
# Baby-step giant-step (non-adaptive, hidden-exponent search)
# ---------------------------------------------------------------------------


class BsgsAdversary(NonAdaptiveAdversary):
    """Table of sigma on 0..m-1 as advice; m stride-m outer queries online.

    Advice encodes the table sorted by sigma value, 2*ceil(log2 n) bits
    per entry. Outer query i asks for sigma(d + i*m); a table hit at
    row j solves d = j - i*m mod n. With m = ceil(sqrt(n)) and m^2 >= n
    every secret is covered and the attack always succeeds.
    """

    def __init__(self, cfg: AttackConfig):
        if not is_prime(cfg.n):
            raise ValidationError("baby-step giant-step needs a prime group size")
        self.n = cfg.n
        self.m = cfg.m if cfg.m is not None else math.isqrt(cfg.n - 1) + 1
        if not (1 <= self.m <= cfg.n):
            raise ValidationError("table width m out of range")
        self.width = max(1, (cfg.n - 1).bit_length())
        required = self.m * 2 * self.width
        s_bits = cfg.s_bits if cfg.s_bits is not None else required
        if required > s_bits:
            raise ValidationError(
                f"table of {self.m} entries needs {required} advice bits, bound is {s_bits}"
            )
        super().__init__(s_bits, name="bsgs")
        self.queries = [(1, _element(i * self.m, self.n)) for i in range(self.m)]

    def preprocess(self, sigma: np.ndarray) -> str:
        entries = sorted(
            (int(sigma[_slot(j, self.n)]), j) for j in range(self.m)
        )
        return "".join(
            bits_encode(v - 1, self.width) + bits_encode(j, self.width) for v, j in entries
        )

    def _plan(self, z: str):
        return [], list(self.queries)

    def decide(self, z: str, inner_answers, outer_answers):
        w = self.width
        table = {}
        for pos in range(0, len(z), 2 * w):
            v = bits_decode(z[pos : pos + w]) + 1
            j = bits_decode(z[pos + w : pos + 2 * w])
            table[v] = j
        for i, ans in enumerate(outer_answers):
            j = table.get(ans)
            if j is not None:
                return _element(j - i * self.m, self.n)
        return self.n


def bsgs_adversary(cfg: AttackConfig) -> BsgsAdversary:
    return BsgsAdversary(cfg)


# ---------------------------------------------------------------------------
# Cycle-finding collision search (adaptive baseline, no preprocessing)
# ---------------------------------------------------------------------------


class PollardRhoAdversary(AdaptiveAdversary):
    """Floyd cycle finding over the encoding walk, 3-way partition.

    The walk state is an exponent pair (a, b) addressing sigma(a*d + b);
    the partition class of the current encoding picks the update
    (a+1, b), (2a, 2b) or (a, b+1). A collision with distinct exponent
    pairs solves the secret; degenerate collisions re-randomize the
    start, bounded by the query budget.
    """

    def __init__(self, cfg: AttackConfig):
        if not is_prime(cfg.n):
            raise ValidationError("cycle-finding search needs a prime group size")
        if cfg.t_budget < 4:
            raise ValidationError("query budget too small")
        super().__init__(s_bits=0, t_budget=cfg.t_budget, name="rho")
        self.n = cfg.n
        self.seed = cfg.seed

    def run(self, z: str, oracle):
        n = self.n
        rng = np.random.Generator(np.random.PCG64(splitmix64(self.seed)))
        challenge = oracle.outer((1, n))  # sigma(d)

        def query(a: int, b: int) -> int:
            a %= n
            b %= n
            if a == 0:
                return oracle.inner(_element(b, n))
            return oracle.outer((a, _element(b, n)))

        def step(a: int, b: int, enc: int):
            c = enc % 3
            if c == 0:
                a = (a + 1) % n
            elif c == 1:
                a, b = (2 * a) % n, (2 * b) % n
            else:
                b = (b + 1) % n
            return a, b, query(a, b)

        best_guess = n
        while oracle.remaining is None or oracle.remaining >= 4:
            a0 = int(rng.integers(1, n))
            b0 = int(rng.integers(0, n))
            try:
                enc0 = query(a0, b0)
                ta, tb, te = step(a0, b0, enc0)
                ha, hb, he = step(ta, tb, te)
                while te != he:
                    ta, tb, te = step(ta, tb, te)
                    ha, hb, he = step(ha, hb, he)
                    ha, hb, he = step(ha, hb, he)
            except ContractViolation:
                break
            if (ta - ha) % n == 0:
                continue  # exponent pairs coincide, retry from a fresh start
            d = ((hb - tb) * pow(ta - ha, -1, n)) % n
            cand = _element(d, n)
            best_guess = cand
            try:
                if oracle.inner(cand) == challenge:
                    return cand
            except ContractViolation:
                break
        return best_guess


def pollard_rho_adversary(cfg: AttackConfig) -> PollardRhoAdversary:
    return PollardRhoAdversary(cfg)


# ---------------------------------------------------------------------------
# Endpoint-table chains (adaptive, preprocessing)
# ---------------------------------------------------------------------------


class ChainPreprocessingDlog(AdaptiveAdversary):
    """Random-walk chains stored by endpoint; online walk from the challenge.

    Preprocessing walks ``chains`` chains of ``chain_length`` steps in
    exponent space, with the step size a keyed function of the current
    encoding, and stores (endpoint encoding, endpoint exponent) pairs.
    Online, the same walk is driven through outer queries starting from
    sigma(d); hitting a stored endpoint reveals d exactly (encodings are
    injective), so success is limited only by coverage and the budget.
    """

    def __init__(self, cfg: AttackConfig):
        if not is_prime(cfg.n):
            raise ValidationError("chain preprocessing needs a prime group size")
        chains = cfg.chains if cfg.chains is not None else 1
        length = cfg.chain_length if cfg.chain_length is not None else max(1, cfg.t_budget)
        if chains < 1 or length < 1 or cfg.t_budget < 0:
            raise ValidationError("chains and chain length must be positive, budget non-negative")
        self.n = cfg.n
        self.chains = chains
        self.length = length
        self.width = max(1, (cfg.n - 1).bit_length())
        self.walk_key = mix64(0xC4A1, cfg.seed)
        required = chains * 2 * self.width
        s_bits = cfg.s_bits if cfg.s_bits is not None else required
        if required > s_bits:
            raise ValidationError(
                f"{chains} endpoints need {required} advice bits, bound is {s_bits}"
            )
        super().__init__(s_bits=s_bits, t_budget=cfg.t_budget, name="chains")

    def _step_size(self, encoding: int) -> int:
        return 1 + mix64(self.walk_key, encoding) % (self.n - 1)

    def preprocess(self, sigma: np.ndarray) -> str:
        out = []
        endpoints = set()
        for c in range(self.chains):
            x = mix64(self.walk_key, 0x5747, c) % self.n
            for _ in range(self.length):
                x = (x + self._step_size(int(sigma[_slot(x, self.n)]))) % self.n
            endpoints.add(x)
            end_enc = int(sigma[_slot(x, self.n)])
            out.append(bits_encode(end_enc - 1, self.width) + bits_encode(x, self.width))
        # merged chains shrink coverage; reported for diagnostics, not fatal
        self.last_endpoint_collisions = self.chains - len(endpoints)
        return "".join(out)

    def run(self, z: str, oracle):
        n, w = self.n, self.width
        if oracle.remaining is not None and oracle.remaining < 1:
            return n  # no budget even for the challenge: bare guess
        endpoints = {}
        for pos in range(0, len(z), 2 * w):
            enc = bits_decode(z[pos : pos + w]) + 1
            endpoints[enc] = bits_decode(z[pos + w : pos + 2 * w])
        offset = 0
        y = oracle.outer((1, n))  # sigma(d)
        while True:
            hit = endpoints.get(y)
            if hit is not None:
                return _element(hit - offset, n)
            if oracle.remaining is not None and oracle.remaining < 1:
                return n
            offset = (offset + self._step_size(y)) % n
            y = oracle.outer((1, _element(offset, n)))


def chain_preprocessing_dlog(cfg: AttackConfig) -> ChainPreprocessingDlog:
    return ChainPreprocessingDlog(cfg)


# ---------------------------------------------------------------------------
# XOR-difference table key recovery (non-adaptive, XOR cipher)
# ---------------------------------------------------------------------------


class DaemenEmAdversary(NonAdaptiveAdversary):
    """Difference-table attack recovering (k1, k2) from chosen plaintexts.

    Preprocessing stores sigma on X and X^alpha for X = [0, t1/2) (bit
    patterns), t1 * ceil(log2 n) advice bits in total; the XOR table
    delta = sigma(x) ^ sigma(x^alpha) is reconstructed from it. Online
    queries come in quadruples {m, m^alpha, m^1, m^(alpha^1)} so that a
    difference match EM(m)^EM(m^alpha) = delta_x can be validated, and
    the k1 ambiguity (x vs x^alpha orientation) resolved, against the
    partner answer EM(m^1) predicted from the stored values. A validated
    match yields k1 = m^x (or m^x^alpha) and k2 = EM(m)^sigma(x^k1^m).

    Requires t1/2 a power of two >= 4 so X is closed under ^1; alpha
    defaults to t1/2, which makes the covered k1 set tile [0, t1*t2/4).
    """

    def __init__(self, cfg: AttackConfig):
        if not is_power_of_two(cfg.n):
            raise ValidationError("difference-table attack needs a power-of-two domain")
        self.n = cfg.n
        t2 = cfg.t_budget
        if t2 < 4 or t2 % 4 != 0:
            raise ValidationError("outer budget must be a positive multiple of 4")
        if cfg.table_budget is not None:
            self.t1 = cfg.table_budget
        else:
            # balanced default: t1 * t2 = 4n when possible, rounded down to 2^j
            raw = max(8, min(cfg.n, 4 * cfg.n // t2))
            self.t1 = 1 << (raw.bit_length() - 1)
        half = self.t1 // 2
        if self.t1 < 8 or half & (half - 1):
            raise ValidationError("table budget t1 must satisfy t1/2 a power of two >= 4")
        if self.t1 > cfg.n:
            raise ValidationError("table budget exceeds the domain")
        alpha = cfg.alpha if cfg.alpha is not None else half
        if not (1 <= alpha <= cfg.n - 1):
            raise ValidationError("alpha must be a nonzero bit pattern")
        if alpha < half:
            raise ValidationError("alpha must lie outside the table block [0, t1/2)")
        self.alpha = alpha
        self.beta = 1
        self.t2 = t2
        self.width = max(1, (cfg.n - 1).bit_length())
        self.stored = [x for x in range(half)] + [x ^ alpha for x in range(half)]
        required = len(self.stored) * self.width
        s_bits = cfg.s_bits if cfg.s_bits is not None else required
        if required > s_bits:
            raise ValidationError(
                f"storing {len(self.stored)} values needs {required} bits, bound is {s_bits}"
            )
        super().__init__(s_bits, name="daemen")
        bases = [(r * self.t1) % cfg.n for r in range(t2 // 4)]
        self.queries = []
        for mb in bases:
            for q in (mb, mb ^ alpha, mb ^ self.beta, mb ^ alpha ^ self.beta):
                self.queries.append(q + 1)

    def preprocess(self, sigma: np.ndarray) -> str:
        return "".join(bits_encode(int(sigma[p]) - 1, self.width) for p in self.stored)

    def _plan(self, z: str):
        return [], list(self.queries)

    def decide(self, z: str, inner_answers, outer_answers):
        w = self.width
        val = {}
        for idx, p in enumerate(self.stored):
            val[p] = bits_decode(z[idx * w : (idx + 1) * w])
        half = self.t1 // 2
        table: dict = {}
        for x in range(half):
            table.setdefault(val[x] ^ val[x ^ self.alpha], []).append(x)
        answers = [a - 1 for a in outer_answers]  # bit patterns
        for base_idx in range(0, len(answers), 4):
            e0, e1, e2, e3 = answers[base_idx : base_idx + 4]
            m0 = self.queries[base_idx] - 1
            for mm, ea, eb, partner in ((m0, e0, e1, e2), (m0 ^ self.beta, e2, e3, e0)):
                for x in table.get(ea ^ eb, ()):
                    for x_here, x_partner in ((x, x ^ self.beta), (x ^ self.alpha, x ^ self.alpha ^ self.beta)):
                        k1 = mm ^ x_here
                        k2 = ea ^ val[x_here]
                        if k2 ^ val[x_partner] == partner:
                            return (k1 + 1, k2 + 1)
        return (1, 1)


def daemen_em_adversary(cfg: AttackConfig) -> DaemenEmAdversary:
    return DaemenEmAdversary(cfg)


# ---------------------------------------------------------------------------
# Majority-advice distinguisher (non-adaptive, squared decision game)
# ---------------------------------------------------------------------------


class SqddhMajorityAdversary(NonAdaptiveAdversary):
    """Advice = one majority bit per hash bucket of the rare marked pairs.

    Preprocessing enumerates all value pairs (sigma(x), sigma(x^2)),
    keeps those a keyed predicate marks at rate 1/t, buckets them by a
    keyed hash into ``buckets`` cells and stores the majority of a
    balanced keyed bit per cell. Online, t/2 non-adaptive query pairs
    walk (d1*f(i), d2*f(i)^2); on the squared side the walk stays inside
    the marked-pair table, so the first marked response pair's balanced
    bit agrees with its bucket majority noticeably more often than a
    coin, while on the random side it is independent of the advice.
    """

    def __init__(self, cfg: AttackConfig):
        if not is_prime(cfg.n):
            raise ValidationError("majority-advice distinguisher needs a prime group size")
        if cfg.t_budget < 2 or cfg.t_budget % 2 != 0:
            raise ValidationError("query budget must be a positive even number")
        buckets = cfg.buckets if cfg.buckets is not None else 8
        if buckets < 1:
            raise ValidationError("bucket count must be positive")
        s_bits = cfg.s_bits if cfg.s_bits is not None else buckets
        if buckets > s_bits:
            raise ValidationError(f"{buckets} buckets need {buckets} advice bits")
        super().__init__(s_bits, name="sqddh-majority")
        self.n = cfg.n
        self.t = cfg.t_budget
        self.buckets = buckets
        self.key_mark = mix64(0x50, cfg.seed)
        self.key_bit = mix64(0x51, cfg.seed)
        self.key_bucket = mix64(0x52, cfg.seed)
        self.key_walk = mix64(0x53, cfg.seed)
        self.key_guess = mix64(0x54, cfg.seed)
        n = cfg.n
        self.queries = []
        for i in range(self.t // 2):
            f = 1 if i == 0 else 1 + mix64(self.key_walk, i) % (n - 1)
            self.queries.append((f, n, n))  # a1*d1 with a1 = f
            self.queries.append((n, (f * f) % n, n))  # a2*(d2 or d1^2) with a2 = f^2

    def _pair_code(self, w1, w2):
        return (np.asarray(w1, dtype=np.uint64) - 1) * np.uint64(self.n) + (
            np.asarray(w2, dtype=np.uint64) - 1
        )

    def preprocess(self, sigma: np.ndarray) -> str:
        n = self.n
        x = np.arange(n, dtype=np.int64)
        x2 = (x * x) % n
        w1 = sigma[(x - 1) % n]
        w2 = sigma[(x2 - 1) % n]
        code = self._pair_code(w1, w2)
        marked = mix64_array(self.key_mark, code) % np.uint64(self.t) == 0
        code_m = code[marked]
        bucket = (mix64_array(self.key_bucket, code_m) % np.uint64(self.buckets)).astype(np.int64)
        qbit = (mix64_array(self.key_bit, code_m) & np.uint64(1)).astype(np.float64)
        ones = np.bincount(bucket, weights=qbit, minlength=self.buckets)
        counts = np.bincount(bucket, minlength=self.buckets)
        maj = (2 * ones >= counts).astype(np.int64)  # ties and empty cells read 1
        return "".join("1" if b else "0" for b in maj)

    def _plan(self, z: str):
        return [], list(self.queries)

    def decide(self, z: str, inner_answers, outer_answers):
        for i in range(0, len(outer_answers), 2):
            w1, w2 = outer_answers[i], outer_answers[i + 1]
            code = int(self._pair_code(w1, w2))
            if mix64(self.key_mark, code) % self.t == 0:
                bucket = mix64(self.key_bucket, code) % self.buckets
                bit = mix64(self.key_bit, code) & 1
                return int(bit == int(z[bucket]))
        return mix64(self.key_guess, *outer_answers) & 1


def sqddh_nonadaptive_adversary(cfg: AttackConfig) -> SqddhMajorityAdversary:
    return SqddhMajorityAdversary(cfg)


# ---------------------------------------------------------------------------
# Constant-output baseline
# ---------------------------------------------------------------------------


class ConstantGuessAdversary(NonAdaptiveAdversary):
    """Zero queries, constant output; the floor every attack must beat."""

    def __init__(self, game: PCGame, value=None):
        super().__init__(s_bits=0, name="guess")
        if value is None:
            value = {
                GameKind.DLOG: 1,
                GameKind.DDH: 0,
                GameKind.SQDDH: 0,
                GameKind.EM_KR: (1, 1),
                GameKind.EM_KR_SINGLE: 1,
            }[game.kind]
        self.value = value

    def _plan(self, z: str):
        return [], []

    def decide(self, z: str, inner_answers, outer_answers):
        return self.value


def constant_guess_adversary(game: PCGame, value=None) -> ConstantGuessAdversary:
    return ConstantGuessAdversary(game, value)


# ---------------------------------------------------------------------------
# Multi-instance search game
# ---------------------------------------------------------------------------


@dataclass
class MiGameState:
    """Shared state of one multi-instance run.

    The permutation is drawn once and stays fixed across instances;
    secrets are independent and uniform; the oracle history maps each
    sigma output seen so far to the (instance, query index) that first
    produced it.
    """

    sigma: np.ndarray
    instance_secrets: list
    per_instance_queries: int
    answers_so_far: dict


@dataclass(frozen=True)
class MiGameResult:
    all_correct: int
    determined_fraction: float
    interval_coverage: float
    instances: int
    guessed: int
    determined: int


def _smallest_generator(n: int) -> int:
    """Smallest g of full order n-1 modulo the prime n."""
    phi = n - 1
    factors = []
    v = phi
    f = 2
    while f * f <= v:
        if v % f == 0:
            factors.append(f)
            while v % f == 0:
                v //= f
        f += 1
    if v > 1:
        factors.append(v)
    for g in range(2, n):
        if all(pow(g, phi // p, n) != 1 for p in factors):
            return g
    raise ValidationError(f"no generator found modulo {n}")


def run_mi_game(cfg: AttackConfig, seed: Optional[int] = None) -> MiGameResult:
    """One multi-instance run: guess the first few secrets, derive the rest.

    A fixed permutation hides the group; every instance gets a fresh
    uniform secret and the same non-adaptive query coefficients
    a_i = g^-i (i <= t/2) and a_i = g^((i - t/2) * t) (i > t/2). Output
    collisions across instances reveal linear relations between secrets,
    so any instance colliding with an already-known one is *determined*
    rather than guessed. ``forced_correct`` pins the guesses to the true
    secrets to isolate the determination mechanism, whose rate over the
    post-guess instances is reported along with the fraction of cyclic
    exponent windows of length t/2 containing at least one query.
    """
    n, t = cfg.n, cfg.t_budget
    if not is_prime(n):
        raise ValidationError("multi-instance game needs a prime group size")
    if t < 2 or t % 2 != 0:
        raise ValidationError("per-instance budget must be a positive even number")
    if t >= n:
        raise ValidationError("per-instance budget must be below the group size")
    instances = cfg.instances if cfg.instances is not None else 4 * math.ceil(n / (t * t))
    guess_count = (
        cfg.guess_count if cfg.guess_count is not None else math.ceil(4 * n / (t * t))
    )
    guess_count = min(guess_count, instances)
    if instances < 1:
        raise ValidationError("need at least one instance")

    rng = np.random.Generator(np.random.PCG64(seed if seed is not None else cfg.seed))
    state = MiGameState(
        sigma=random_sigma(rng, n),
        instance_secrets=[int(rng.integers(0, n)) for _ in range(instances)],
        per_instance_queries=t,
        answers_so_far={},
    )
    g = _smallest_generator(n)
    g_inv = pow(g, -1, n)
    coeff = [pow(g_inv, j, n) for j in range(1, t // 2 + 1)]
    coeff += [pow(g, (j - t // 2) * t, n) for j in range(t // 2 + 1, t + 1)]
    coeff_exp = [(-j) % (n - 1) for j in range(1, t // 2 + 1)]
    coeff_exp += [((j - t // 2) * t) % (n - 1) for j in range(t // 2 + 1, t + 1)]

    dlog = np.full(n, -1, dtype=np.int64)
    acc = 1
    for e in range(n - 1):
        dlog[acc] = e
        acc = (acc * g) % n

    believed: dict = {}  # instance -> residue the solver uses for derivations
    exponents = []
    all_correct = True
    determined = 0

    for inst in range(instances):
        d = state.instance_secrets[inst]  # residue; 0 is the element n
        answers = []
        points = []
        for a in coeff:
            u = (a * d) % n
            points.append(u)
            answers.append(int(state.sigma[_slot(u, n)]))
        if d != 0:
            base = int(dlog[d])
            exponents.extend((base + e) % (n - 1) for e in coeff_exp)

        derived: Optional[int] = None
        if len(set(points)) < len(points):
            derived = 0  # distinct nonzero coefficients can only collide at 0
        else:
            for j, v in enumerate(answers):
                owner = state.answers_so_far.get(v)
                if owner is not None and owner[0] in believed:
                    i_prev, j_prev = owner
                    derived = (coeff[j_prev] * believed[i_prev] * pow(coeff[j], -1, n)) % n
                    break

        if inst < guess_count:
            solved = d if cfg.forced_correct else int(rng.integers(0, n))
        elif derived is not None:
            solved = derived
            determined += 1
        else:
            solved = int(rng.integers(0, n))

        believed[inst] = solved
        if solved != d:
            all_correct = False
        for j, v in enumerate(answers):
            state.answers_so_far.setdefault(v, (inst, j))

    post = instances - guess_count
    determined_fraction = determined / post if post > 0 else 0.0

    window = t // 2
    if exponents:
        uniq = np.unique(np.array(exponents, dtype=np.int64))
        gaps = np.diff(np.concatenate([uniq, [uniq[0] + n - 1]]))
        uncovered = int(np.maximum(gaps - window, 0).sum())
        coverage = 1.0 - uncovered / (n - 1)
    else:
        coverage = 0.0

    return MiGameResult(
        all_correct=int(all_correct),
        determined_fraction=determined_fraction,
        interval_coverage=coverage,
        instances=instances,
        guessed=guess_count,
        determined=determined,
    )
