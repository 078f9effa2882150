"""Oracle games around a hidden permutation, and their adversary contracts.

A game couples a permutation sigma of [n] = {1, ..., n} with a secret d.
The adversary may query sigma directly (inner queries, optionally also
the inverse) and may query an outer oracle whose queries are first
mapped through a secret-dependent translation into a point of [n] and
whose answers pass through a secret-dependent post-processing step.
Success means outputting a fixed function of the secret.

Element convention: group elements are represented by [n] with n
standing for the residue 0, so all modular arithmetic maps 0 to the
element n. For the XOR-cipher games the bit pattern of an element a is
the standard binary representation of a - 1.

Supported instantiations (``build_game``):

* DLOG:   secrets d in [n]; outer query (a, b) with a != n translates to
          a*d + b mod n; trivial post-processing; target d.
* DDH:    secrets (d1, d2, d3, k); query (a1, a2, a3, b), not all a_i = n,
          translates to a1*d1 + a2*d2 + a3*d3 + b for k = 0 and to
          a1*d1 + a2*d2 + a3*(d1*d2) + b for k = 1; target k.
* SQDDH:  secrets (d1, d2, k); query (a1, a2, b), not both a_i = n,
          translates to a1*d1 + a2*d2 + b for k = 0 and to
          a1*d1 + a2*d1^2 + b for k = 1; target k.
* EM_KR:  secrets (k1, k2); encryption query m translates to m XOR k1,
          answers are post-processed with XOR k2; inverse inner queries
          allowed; target (k1, k2).
* EM_KR_SINGLE: the k1 = k2 variant with secret space [n]; target k1.

The GGM kinds require a prime n and forbid inverse inner queries; the
XOR kinds require n to be a power of two.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterator, Optional

import numpy as np

from .errors import ContractViolation, ValidationError

MAX_SECRET_ENUMERATION = 2_000_000


class GameKind(str, Enum):
    DLOG = "DLOG"
    DDH = "DDH"
    SQDDH = "SQDDH"
    EM_KR = "EM_KR"
    EM_KR_SINGLE = "EM_KR_SINGLE"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


def random_sigma(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform permutation of [n] as a 1-based value array (Fisher-Yates)."""
    return rng.permutation(n).astype(np.int64) + 1


def sigma_inverse(sigma: np.ndarray) -> np.ndarray:
    inv = np.empty_like(sigma)
    inv[sigma - 1] = np.arange(1, len(sigma) + 1, dtype=sigma.dtype)
    return inv


@dataclass(frozen=True)
class GameTranscript:
    sigma: np.ndarray
    secret: object
    advice: str
    inner_answers: tuple
    outer_answers: tuple
    output: object
    success: int
    t1: int
    t2: int

    @property
    def total_queries(self) -> int:
        return self.t1 + self.t2


class PCGame:
    """Base class; concrete kinds populate translation and secret space."""

    kind: GameKind
    allow_inverse_inner = False
    has_trivial_post = True

    def __init__(self, n: int):
        self.n = n

    # -- element helpers ---------------------------------------------------
    def element_from_index(self, idx: int) -> int:
        """Map the 0-based internal index back to an element of [n]."""
        raise NotImplementedError

    # -- secrets -----------------------------------------------------------
    @property
    def secret_count(self) -> int:
        raise NotImplementedError

    def sample_secret(self, rng: np.random.Generator):
        raise NotImplementedError

    def iter_secrets(self) -> Iterator:
        raise NotImplementedError

    def success_target(self, secret):
        raise NotImplementedError

    # -- queries -----------------------------------------------------------
    @property
    def outer_query_count(self) -> int:
        raise NotImplementedError

    def iter_outer_queries(self) -> Iterator:
        raise NotImplementedError

    def validate_outer_query(self, m) -> None:
        raise NotImplementedError

    def translate_index(self, secret, m) -> int:
        """0-based index of the sigma input addressed by outer query m."""
        raise NotImplementedError

    def translate(self, secret, m) -> int:
        return self.element_from_index(self.translate_index(secret, m))

    def post_process(self, secret, j: int) -> int:
        return j

    # -- vectorized uniformity support --------------------------------------
    @cached_property
    def _secret_columns(self) -> tuple:
        if self.secret_count > MAX_SECRET_ENUMERATION:
            raise ValidationError(
                f"secret space of size {self.secret_count} is too large to enumerate"
            )
        return self._build_secret_columns()

    def _build_secret_columns(self) -> tuple:
        raise NotImplementedError

    def translate_index_batch(self, m) -> np.ndarray:
        """translate_index of m against every secret, in iter_secrets order."""
        raise NotImplementedError


class _GgmGame(PCGame):
    allow_inverse_inner = False
    has_trivial_post = True

    def __init__(self, n: int):
        if not is_prime(n):
            raise ValidationError(f"{type(self).__name__}: n={n} must be prime")
        super().__init__(n)

    def element_from_index(self, idx: int) -> int:
        return self.n if idx == 0 else idx

    def _residue(self, element: int) -> int:
        return element % self.n


class DlogGame(_GgmGame):
    kind = GameKind.DLOG

    @property
    def secret_count(self) -> int:
        return self.n

    def sample_secret(self, rng):
        return int(rng.integers(1, self.n + 1))

    def iter_secrets(self):
        return iter(range(1, self.n + 1))

    def success_target(self, secret):
        return secret

    @property
    def outer_query_count(self) -> int:
        return (self.n - 1) * self.n

    def iter_outer_queries(self):
        for a in range(1, self.n):
            for b in range(1, self.n + 1):
                yield (a, b)

    def validate_outer_query(self, m) -> None:
        if not (isinstance(m, tuple) and len(m) == 2):
            raise ValidationError("DLOG outer query must be a pair (a, b)")
        a, b = m
        if not (1 <= a <= self.n - 1 and 1 <= b <= self.n):
            raise ValidationError(f"DLOG outer query {m!r} out of range")

    def translate_index(self, secret, m) -> int:
        a, b = m
        return (a * self._residue(secret) + b) % self.n

    def _build_secret_columns(self):
        d = np.arange(1, self.n + 1, dtype=np.int64) % self.n
        return (d,)

    def translate_index_batch(self, m) -> np.ndarray:
        a, b = m
        (d,) = self._secret_columns
        return (a * d + b) % self.n


class DdhGame(_GgmGame):
    kind = GameKind.DDH

    @property
    def secret_count(self) -> int:
        return 2 * self.n**3

    def sample_secret(self, rng):
        d1, d2, d3 = (int(v) for v in rng.integers(1, self.n + 1, size=3))
        return (d1, d2, d3, int(rng.integers(0, 2)))

    def iter_secrets(self):
        rng_elems = range(1, self.n + 1)
        for d1, d2, d3, k in itertools.product(rng_elems, rng_elems, rng_elems, (0, 1)):
            yield (d1, d2, d3, k)

    def success_target(self, secret):
        return secret[3]

    @property
    def outer_query_count(self) -> int:
        return self.n**4 - self.n

    def iter_outer_queries(self):
        n = self.n
        rng_elems = range(1, n + 1)
        for a1, a2, a3, b in itertools.product(rng_elems, rng_elems, rng_elems, rng_elems):
            if a1 == n and a2 == n and a3 == n:
                continue
            yield (a1, a2, a3, b)

    def validate_outer_query(self, m) -> None:
        if not (isinstance(m, tuple) and len(m) == 4):
            raise ValidationError("DDH outer query must be (a1, a2, a3, b)")
        a1, a2, a3, b = m
        if not all(1 <= v <= self.n for v in m):
            raise ValidationError(f"DDH outer query {m!r} out of range")
        if a1 == self.n and a2 == self.n and a3 == self.n:
            raise ValidationError("DDH outer query with a1=a2=a3=0 is an inner query")

    def translate_index(self, secret, m) -> int:
        d1, d2, d3, k = secret
        a1, a2, a3, b = m
        r1, r2, r3 = self._residue(d1), self._residue(d2), self._residue(d3)
        quad = (r1 * r2) % self.n if k == 1 else r3
        return (a1 * r1 + a2 * r2 + a3 * quad + b) % self.n

    def _build_secret_columns(self):
        rows = np.array(list(self.iter_secrets()), dtype=np.int64)
        d1 = rows[:, 0] % self.n
        d2 = rows[:, 1] % self.n
        d3 = rows[:, 2] % self.n
        k = rows[:, 3]
        quad = np.where(k == 1, (d1 * d2) % self.n, d3)
        return d1, d2, quad

    def translate_index_batch(self, m) -> np.ndarray:
        a1, a2, a3, b = m
        d1, d2, quad = self._secret_columns
        return (a1 * d1 + a2 * d2 + a3 * quad + b) % self.n


class SqddhGame(_GgmGame):
    kind = GameKind.SQDDH

    @property
    def secret_count(self) -> int:
        return 2 * self.n**2

    def sample_secret(self, rng):
        d1, d2 = (int(v) for v in rng.integers(1, self.n + 1, size=2))
        return (d1, d2, int(rng.integers(0, 2)))

    def iter_secrets(self):
        rng_elems = range(1, self.n + 1)
        for d1, d2, k in itertools.product(rng_elems, rng_elems, (0, 1)):
            yield (d1, d2, k)

    def success_target(self, secret):
        return secret[2]

    @property
    def outer_query_count(self) -> int:
        return self.n**3 - self.n

    def iter_outer_queries(self):
        n = self.n
        rng_elems = range(1, n + 1)
        for a1, a2, b in itertools.product(rng_elems, rng_elems, rng_elems):
            if a1 == n and a2 == n:
                continue
            yield (a1, a2, b)

    def validate_outer_query(self, m) -> None:
        if not (isinstance(m, tuple) and len(m) == 3):
            raise ValidationError("sqDDH outer query must be (a1, a2, b)")
        a1, a2, b = m
        if not all(1 <= v <= self.n for v in m):
            raise ValidationError(f"sqDDH outer query {m!r} out of range")
        if a1 == self.n and a2 == self.n:
            raise ValidationError("sqDDH outer query with a1=a2=0 is an inner query")

    def translate_index(self, secret, m) -> int:
        d1, d2, k = secret
        a1, a2, b = m
        r1, r2 = self._residue(d1), self._residue(d2)
        second = (r1 * r1) % self.n if k == 1 else r2
        return (a1 * r1 + a2 * second + b) % self.n

    def _build_secret_columns(self):
        rows = np.array(list(self.iter_secrets()), dtype=np.int64)
        d1 = rows[:, 0] % self.n
        d2 = rows[:, 1] % self.n
        k = rows[:, 2]
        second = np.where(k == 1, (d1 * d1) % self.n, d2)
        return d1, second

    def translate_index_batch(self, m) -> np.ndarray:
        a1, a2, b = m
        d1, second = self._secret_columns
        return (a1 * d1 + a2 * second + b) % self.n


class _EmGame(PCGame):
    allow_inverse_inner = True
    has_trivial_post = False

    def __init__(self, n: int):
        if not is_power_of_two(n):
            raise ValidationError(f"{type(self).__name__}: n={n} must be a power of two")
        super().__init__(n)

    def element_from_index(self, idx: int) -> int:
        return idx + 1

    @staticmethod
    def _bits(element: int) -> int:
        return element - 1

    @property
    def outer_query_count(self) -> int:
        return self.n

    def iter_outer_queries(self):
        return iter(range(1, self.n + 1))

    def validate_outer_query(self, m) -> None:
        if not (isinstance(m, int) and 1 <= m <= self.n):
            raise ValidationError(f"encryption query {m!r} out of range")


class EmKrGame(_EmGame):
    kind = GameKind.EM_KR

    @property
    def secret_count(self) -> int:
        return self.n**2

    def sample_secret(self, rng):
        k1, k2 = (int(v) for v in rng.integers(1, self.n + 1, size=2))
        return (k1, k2)

    def iter_secrets(self):
        rng_elems = range(1, self.n + 1)
        return itertools.product(rng_elems, rng_elems)

    def success_target(self, secret):
        return secret

    def translate_index(self, secret, m) -> int:
        return self._bits(m) ^ self._bits(secret[0])

    def post_process(self, secret, j: int) -> int:
        return (self._bits(j) ^ self._bits(secret[1])) + 1

    def _build_secret_columns(self):
        rows = np.array(list(self.iter_secrets()), dtype=np.int64)
        return (rows[:, 0] - 1,)

    def translate_index_batch(self, m) -> np.ndarray:
        (k1,) = self._secret_columns
        return (m - 1) ^ k1


class EmKrSingleGame(_EmGame):
    kind = GameKind.EM_KR_SINGLE

    @property
    def secret_count(self) -> int:
        return self.n

    def sample_secret(self, rng):
        return int(rng.integers(1, self.n + 1))

    def iter_secrets(self):
        return iter(range(1, self.n + 1))

    def success_target(self, secret):
        return secret

    def translate_index(self, secret, m) -> int:
        return self._bits(m) ^ self._bits(secret)

    def post_process(self, secret, j: int) -> int:
        return (self._bits(j) ^ self._bits(secret)) + 1

    def _build_secret_columns(self):
        return (np.arange(self.n, dtype=np.int64),)

    def translate_index_batch(self, m) -> np.ndarray:
        (k1,) = self._secret_columns
        return (m - 1) ^ k1


_GAME_CLASSES = {
    GameKind.DLOG: DlogGame,
    GameKind.DDH: DdhGame,
    GameKind.SQDDH: SqddhGame,
    GameKind.EM_KR: EmKrGame,
    GameKind.EM_KR_SINGLE: EmKrSingleGame,
}


def build_game(kind, n: int) -> PCGame:
    kind = GameKind(kind)
    return _GAME_CLASSES[kind](n)


# ---------------------------------------------------------------------------
# Adversary contracts
# ---------------------------------------------------------------------------


class NonAdaptiveAdversary:
    """Commits to all queries after seeing only the advice string.

    Subclasses implement ``_plan`` and ``decide``. The engine arms the
    adversary per trial; invoking ``plan`` more than once, or after
    answers were delivered, is a contract violation.
    """

    adaptive = False

    def __init__(self, s_bits: int, name: str = "non-adaptive"):
        if s_bits < 0:
            raise ValidationError("s_bits must be non-negative")
        self.s_bits = s_bits
        self.name = name
        self._phase = "idle"

    def preprocess(self, sigma: np.ndarray) -> str:
        return ""

    def plan(self, z: str):
        if self._phase != "ready":
            raise ContractViolation(
                "non-adaptive contract: plan must be invoked exactly once, before any answer"
            )
        self._phase = "planned"
        return self._plan(z)

    def _plan(self, z: str):
        raise NotImplementedError

    def decide(self, z: str, inner_answers: tuple, outer_answers: tuple):
        raise NotImplementedError

    # engine hooks
    def _begin_trial(self) -> None:
        self._phase = "ready"

    def _mark_answered(self) -> None:
        self._phase = "answered"


class AdaptiveAdversary:
    """Step-wise adversary driving a query oracle; excluded from the
    non-adaptive bound comparisons."""

    adaptive = True

    def __init__(self, s_bits: int, t_budget: Optional[int] = None, name: str = "adaptive"):
        if s_bits < 0:
            raise ValidationError("s_bits must be non-negative")
        self.s_bits = s_bits
        self.t_budget = t_budget
        self.name = name

    def preprocess(self, sigma: np.ndarray) -> str:
        return ""

    def run(self, z: str, oracle: "GameOracle"):
        raise NotImplementedError


class GameOracle:
    """Query interface handed to adaptive adversaries; counts and logs."""

    def __init__(self, game: PCGame, sigma: np.ndarray, secret, t_budget: Optional[int]):
        self._game = game
        self._sigma = sigma
        self._inv: Optional[np.ndarray] = None
        self._secret = secret
        self._budget = t_budget
        self.inner_log: list = []
        self.outer_log: list = []

    @property
    def t1(self) -> int:
        return len(self.inner_log)

    @property
    def t2(self) -> int:
        return len(self.outer_log)

    @property
    def total(self) -> int:
        return self.t1 + self.t2

    @property
    def remaining(self) -> Optional[int]:
        return None if self._budget is None else self._budget - self.total

    def _charge(self) -> None:
        if self._budget is not None and self.total >= self._budget:
            raise ContractViolation(f"query budget {self._budget} exceeded")

    def inner(self, i: int, inverse: bool = False) -> int:
        self._charge()
        v = _answer_inner(self._game, self._sigma, self._inv_array() if inverse else None, i, inverse)
        self.inner_log.append(v)
        return v

    def _inv_array(self) -> np.ndarray:
        if self._inv is None:
            self._inv = sigma_inverse(self._sigma)
        return self._inv

    def outer(self, m) -> int:
        self._charge()
        self._game.validate_outer_query(m)
        v = _answer_outer(self._game, self._sigma, self._secret, m)
        self.outer_log.append(v)
        return v


def _answer_inner(game: PCGame, sigma: np.ndarray, inv: Optional[np.ndarray], i: int, inverse: bool) -> int:
    if not (isinstance(i, (int, np.integer)) and 1 <= i <= game.n):
        raise ValidationError(f"inner query {i!r} out of range [1, {game.n}]")
    if inverse:
        if not game.allow_inverse_inner:
            raise ContractViolation(f"{game.kind.value} forbids inverse inner queries")
        return int(inv[i - 1])
    return int(sigma[i - 1])


def _answer_outer(game: PCGame, sigma: np.ndarray, secret, m) -> int:
    element = game.element_from_index(game.translate_index(secret, m))
    return game.post_process(secret, int(sigma[element - 1]))


def play_game(game: PCGame, adversary, sigma, secret) -> GameTranscript:
    """Run one full game and assemble the transcript.

    The preprocessing stage receives the whole permutation; the online
    stage is driven per the adversary's adaptivity contract. Success is
    the comparison of the output with the game's function of the secret.
    """
    sigma = np.asarray(sigma, dtype=np.int64)
    if sigma.shape != (game.n,):
        raise ValidationError("sigma must be a permutation array of length n")

    advice = adversary.preprocess(sigma)
    if len(advice) > adversary.s_bits:
        raise ContractViolation(
            f"advice length {len(advice)} exceeds the declared bound {adversary.s_bits}"
        )

    if adversary.adaptive:
        oracle = GameOracle(game, sigma, secret, adversary.t_budget)
        output = adversary.run(advice, oracle)
        inner_answers = tuple(oracle.inner_log)
        outer_answers = tuple(oracle.outer_log)
    else:
        adversary._begin_trial()
        inner_queries, outer_queries = adversary.plan(advice)
        inv = None
        inner_answers = []
        for q in inner_queries:
            i, inverse = q if isinstance(q, tuple) else (q, False)
            if inverse and inv is None:
                if not game.allow_inverse_inner:
                    raise ContractViolation(f"{game.kind.value} forbids inverse inner queries")
                inv = sigma_inverse(sigma)
            inner_answers.append(_answer_inner(game, sigma, inv, i, inverse))
        outer_answers = []
        for m in outer_queries:
            game.validate_outer_query(m)
            outer_answers.append(_answer_outer(game, sigma, secret, m))
        inner_answers = tuple(inner_answers)
        outer_answers = tuple(outer_answers)
        adversary._mark_answered()
        output = adversary.decide(advice, inner_answers, outer_answers)

    success = int(output == game.success_target(secret))
    return GameTranscript(
        sigma=sigma,
        secret=secret,
        advice=advice,
        inner_answers=inner_answers,
        outer_answers=outer_answers,
        output=output,
        success=success,
        t1=len(inner_answers),
        t2=len(outer_answers),
    )


@dataclass(frozen=True)
class UniformityResult:
    u: float
    worst_query: object
    worst_target: int
    max_fiber: int
    secret_count: int


def measure_uniformity(game: PCGame) -> UniformityResult:
    """Exhaustive u = |D| / max_{m,j} |{d : translate(d, m) = j}|.

    Enumerates the full outer query space against the full secret space,
    so it is restricted to desk-scale games.
    """
    if game.outer_query_count == 0:
        raise ValidationError("measure_uniformity: empty outer query space")
    best_fiber = 0
    worst_query = None
    worst_idx = 0
    for m in game.iter_outer_queries():
        counts = np.bincount(game.translate_index_batch(m), minlength=game.n)
        fiber = int(counts.max())
        if fiber > best_fiber:
            best_fiber = fiber
            worst_query = m
            worst_idx = int(counts.argmax())
    return UniformityResult(
        u=game.secret_count / best_fiber,
        worst_query=worst_query,
        worst_target=game.element_from_index(worst_idx),
        max_fiber=best_fiber,
        secret_count=game.secret_count,
    )
