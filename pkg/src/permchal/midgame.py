"""The pinned-permutation hybrid game and its flagged lazy-sampling oracle.

In the hybrid game the adversary pre-pins T1 permutation values
(constraints I -> O), a permutation is sampled uniformly subject to
those pins, and only outer queries are allowed afterwards. The flagged
simulation oracle answers the same outer queries by lazy sampling,
raising W1 when a translated query lands on a pinned input and W2 when
a freshly sampled value collides with a pinned output; conditioned on
the pins it reproduces the hybrid game's answer distribution exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError
from .games import GameTranscript, PCGame


@dataclass(frozen=True)
class MidConstraints:
    """Pinned values sigma(inputs[j]) = outputs[j], no repeats, equal lengths."""

    inputs: tuple
    outputs: tuple

    def __post_init__(self):
        inputs = tuple(int(i) for i in self.inputs)
        outputs = tuple(int(o) for o in self.outputs)
        if len(inputs) != len(outputs):
            raise ValidationError("MidConstraints: inputs and outputs must have equal length")
        if len(set(inputs)) != len(inputs):
            raise ValidationError("MidConstraints: repeated input")
        if len(set(outputs)) != len(outputs):
            raise ValidationError("MidConstraints: repeated output")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "outputs", outputs)

    def __len__(self) -> int:
        return len(self.inputs)

    def validate_range(self, n: int) -> None:
        if any(not (1 <= v <= n) for v in self.inputs + self.outputs):
            raise ValidationError("MidConstraints: value out of range [1, n]")


def sample_constrained_permutation(
    n: int, constraints: MidConstraints, rng: np.random.Generator
) -> np.ndarray:
    """Uniform permutation of [n] subject to sigma(I_j) = O_j."""
    constraints.validate_range(n)
    sigma = np.zeros(n, dtype=np.int64)
    pinned_in = np.array(constraints.inputs, dtype=np.int64)
    pinned_out = np.array(constraints.outputs, dtype=np.int64)
    if len(pinned_in):
        sigma[pinned_in - 1] = pinned_out
    free_pos = np.setdiff1d(np.arange(1, n + 1, dtype=np.int64), pinned_in)
    free_val = np.setdiff1d(np.arange(1, n + 1, dtype=np.int64), pinned_out)
    sigma[free_pos - 1] = rng.permutation(free_val)
    return sigma


def play_mid_game(
    game: PCGame,
    constraints: MidConstraints,
    outer_queries: Sequence,
    decide: Callable[[tuple], object],
    secret,
    rng_seed: int,
) -> GameTranscript:
    """Outer-query-only run against a permutation sampled under the pins.

    ``decide`` maps the tuple of outer answers to the output value; the
    pinned values count as the t1 inner budget of the transcript.
    """
    rng = np.random.Generator(np.random.PCG64(rng_seed))
    sigma = sample_constrained_permutation(game.n, constraints, rng)
    answers = []
    for m in outer_queries:
        game.validate_outer_query(m)
        element = game.element_from_index(game.translate_index(secret, m))
        answers.append(game.post_process(secret, int(sigma[element - 1])))
    answers = tuple(answers)
    output = decide(answers)
    return GameTranscript(
        sigma=sigma,
        secret=secret,
        advice="",
        inner_answers=tuple(constraints.outputs),
        outer_answers=answers,
        output=output,
        success=int(output == game.success_target(secret)),
        t1=len(constraints),
        t2=len(answers),
    )


@dataclass(frozen=True)
class SimulationRun:
    responses: tuple
    w1: int
    w2: int


def mid_simulation_oracle(
    game: PCGame,
    constraints: MidConstraints,
    outer_queries: Sequence,
    secret,
    rng_seed: int,
) -> SimulationRun:
    """Lazy-sampling oracle with collision bookkeeping flags.

    For each outer query, the translated point u is resolved as:

    1. u is a pinned input I_k: answer from O_k and raise W1;
    2. u repeats an earlier translated point: reuse its value;
    3. otherwise sample a fresh value uniformly outside everything used
       so far; if it collides with a pinned output, raise W2 and resample
       uniformly outside the pinned outputs and the used values.

    Responses are post-processed with the secret as in the real game.
    """
    constraints.validate_range(game.n)
    rng = np.random.Generator(np.random.PCG64(rng_seed))
    pin = {i: o for i, o in zip(constraints.inputs, constraints.outputs)}
    pinned_out = set(constraints.outputs)
    value_of: dict = {}
    used: list = []
    used_set: set = set()
    w1 = 0
    w2 = 0
    responses = []
    for m in outer_queries:
        game.validate_outer_query(m)
        u = game.element_from_index(game.translate_index(secret, m))
        if u in pin:
            v = pin[u]
            w1 = 1
        elif u in value_of:
            v = value_of[u]
        else:
            v = _sample_outside(game.n, used_set, rng)
            if v in pinned_out:
                w2 = 1
                v = _sample_outside(game.n, pinned_out | used_set, rng)
            value_of[u] = v
            used.append(v)
            used_set.add(v)
        responses.append(game.post_process(secret, v))
    return SimulationRun(tuple(responses), w1, w2)


def _sample_outside(n: int, excluded: set, rng: np.random.Generator) -> int:
    if len(excluded) >= n:
        raise ValidationError("no values left to sample")
    while True:
        v = int(rng.integers(1, n + 1))
        if v not in excluded:
            return v


def trivial_post_reduction(
    game: PCGame, constraints: MidConstraints, observed_outputs: Sequence[int]
) -> tuple:
    """Relabeling permutation pi with pi(observed_i) = pinned output_i.

    Only defined for games whose post-processing is the identity. The
    remaining points are matched order-preservingly between the two
    complements, so the construction is deterministic in its inputs.
    Returns pi as a tuple with pi(x) = result[x - 1].
    """
    if not game.has_trivial_post:
        raise ValidationError("trivial_post_reduction requires an identity post-processing")
    constraints.validate_range(game.n)
    observed = tuple(int(v) for v in observed_outputs)
    if len(observed) != len(constraints):
        raise ValidationError("observed outputs and constraints differ in length")
    if len(set(observed)) != len(observed):
        raise ValidationError("observed outputs contain repeats")
    if any(not (1 <= v <= game.n) for v in observed):
        raise ValidationError("observed output out of range")
    n = game.n
    pi = [0] * n
    for src, dst in zip(observed, constraints.outputs):
        pi[src - 1] = dst
    rest_src = sorted(set(range(1, n + 1)) - set(observed))
    rest_dst = sorted(set(range(1, n + 1)) - set(constraints.outputs))
    for src, dst in zip(rest_src, rest_dst):
        pi[src - 1] = dst
    return tuple(pi)
