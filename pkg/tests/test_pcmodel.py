import itertools
import math

import numpy as np
import pytest
from scipy.stats import chi2

from permchal.bounds import evaluate_bound
from permchal.errors import ContractViolation, ValidationError
from permchal.games import (
    GameKind,
    NonAdaptiveAdversary,
    build_game,
    measure_uniformity,
    play_game,
    random_sigma,
)
from permchal.midgame import (
    MidConstraints,
    mid_simulation_oracle,
    play_mid_game,
    sample_constrained_permutation,
    trivial_post_reduction,
)
from permchal.seeding import derive_trial_seed, trial_generator

PRIMES = (2, 3, 5, 7, 11, 13)
POWERS_OF_TWO = (2, 4, 8, 16)


class _FixedQueryAdversary(NonAdaptiveAdversary):
    """Replays fixed query lists and returns a constant; test scaffolding."""

    def __init__(self, inner=(), outer=(), output=1):
        super().__init__(s_bits=0)
        self.inner = list(inner)
        self.outer = list(outer)
        self.output = output

    def _plan(self, z):
        return list(self.inner), list(self.outer)

    def decide(self, z, inner_answers, outer_answers):
        return self.output


class TestBuildGame:
    def test_dlog_translate_wraps_to_element_n(self):
        g = build_game("DLOG", 5)
        assert g.translate(3, (2, 4)) == 5

    def test_ddh_quadratic_branch(self):
        g = build_game("DDH", 5)
        d = (2, 3, 4, 1)
        a = (1, 1, 1, 5)  # b = 5 is the zero element
        expect = (2 + 3 + (2 * 3)) % 5
        assert g.translate(d, a) == (expect if expect else 5)
        d0 = (2, 3, 4, 0)
        expect0 = (2 + 3 + 4) % 5
        assert g.translate(d0, a) == (expect0 if expect0 else 5)

    def test_sqddh_square_branch(self):
        g = build_game("SQDDH", 7)
        assert g.translate((3, 5, 1), (1, 1, 7)) == (3 + 9) % 7  # 12 mod 7 = 5
        assert g.translate((3, 5, 0), (1, 1, 7)) == (3 + 5) % 7

    def test_em_bit_convention(self):
        g = build_game("EM_KR", 8)
        assert g.translate((3, 5), 3) == 1  # bits 2^2 = 0 -> element 1
        assert g.post_process((3, 5), 1) == 5  # bits 0^4 = 4 -> element 5

    def test_prime_validation(self):
        with pytest.raises(ValidationError):
            build_game("DLOG", 9)
        with pytest.raises(ValidationError):
            build_game("SQDDH", 15)

    def test_power_of_two_validation(self):
        with pytest.raises(ValidationError):
            build_game("EM_KR", 12)
        build_game("EM_KR_SINGLE", 16)


class TestMeasureUniformity:
    @pytest.mark.parametrize("n", PRIMES)
    def test_dlog_exact(self, n):
        assert measure_uniformity(build_game("DLOG", n)).u == float(n)

    @pytest.mark.parametrize("n", POWERS_OF_TWO)
    def test_em_exact(self, n):
        assert measure_uniformity(build_game("EM_KR", n)).u == float(n)
        assert measure_uniformity(build_game("EM_KR_SINGLE", n)).u == float(n)

    @pytest.mark.parametrize("n", PRIMES)
    def test_decision_games_at_least_half(self, n):
        assert measure_uniformity(build_game("SQDDH", n)).u >= n / 2
        if n <= 7:
            assert measure_uniformity(build_game("DDH", n)).u >= n / 2

    def test_worst_pair_is_reported(self):
        res = measure_uniformity(build_game("SQDDH", 5))
        g = build_game("SQDDH", 5)
        fiber = sum(
            1 for d in g.iter_secrets() if g.translate(d, res.worst_query) == res.worst_target
        )
        assert fiber == res.max_fiber

    @pytest.mark.parametrize(
        "kind,n", [("DLOG", 7), ("DDH", 3), ("SQDDH", 5), ("EM_KR", 8), ("EM_KR_SINGLE", 8)]
    )
    def test_batched_translation_matches_scalar(self, kind, n):
        g = build_game(kind, n)
        rng = np.random.Generator(np.random.PCG64(7))
        secrets = list(g.iter_secrets())
        queries = list(g.iter_outer_queries())
        for _ in range(10):
            m = queries[int(rng.integers(len(queries)))]
            batch = g.translate_index_batch(m)
            scalar = [g.translate_index(d, m) for d in secrets]
            assert batch.tolist() == scalar


class TestPlayGame:
    def test_guess_rate_matches_counting(self):
        g = build_game("EM_KR", 8)
        adv = _FixedQueryAdversary(output=(1, 1))
        rng = np.random.Generator(np.random.PCG64(0))
        wins = sum(
            play_game(g, adv, random_sigma(rng, 8), g.sample_secret(rng)).success
            for _ in range(20000)
        )
        assert wins / 20000 == pytest.approx(1 / 64, abs=0.004)

    @pytest.mark.parametrize(
        "kind,n",
        [("DLOG", 11), ("DDH", 5), ("SQDDH", 7), ("EM_KR", 8), ("EM_KR_SINGLE", 16)],
    )
    def test_outer_answers_recompute(self, kind, n):
        g = build_game(kind, n)
        rng = np.random.Generator(np.random.PCG64(99))
        trials = 2000
        for _ in range(trials):
            sigma = random_sigma(rng, n)
            secret = g.sample_secret(rng)
            queries = []
            for _ in range(3):
                while True:
                    try:
                        m = _random_outer_query(rng, g)
                        g.validate_outer_query(m)
                        break
                    except ValidationError:
                        continue
                queries.append(m)
            adv = _FixedQueryAdversary(outer=queries)
            tr = play_game(g, adv, sigma, secret)
            for m, ans in zip(queries, tr.outer_answers):
                element = g.element_from_index(g.translate_index(secret, m))
                assert ans == g.post_process(secret, int(sigma[element - 1]))
            assert tr.t1 + tr.t2 == tr.total_queries == 3
            assert tr.success == int(tr.output == g.success_target(secret))

    def test_non_adaptive_second_plan_is_hard_failure(self):
        g = build_game("DLOG", 5)

        class Cheater(_FixedQueryAdversary):
            def decide(self, z, inner_answers, outer_answers):
                self.plan(z)  # adaptivity attempt after answers arrived
                return 1

        with pytest.raises(ContractViolation):
            play_game(g, Cheater(outer=[(1, 5)]), np.arange(1, 6), 3)

    def test_engine_rejects_double_plan(self):
        adv = _FixedQueryAdversary()
        adv._begin_trial()
        adv.plan("")
        with pytest.raises(ContractViolation):
            adv.plan("")

    def test_advice_too_long_is_hard_failure(self):
        g = build_game("DLOG", 5)

        class Verbose(_FixedQueryAdversary):
            def preprocess(self, sigma):
                return "0101"

        with pytest.raises(ContractViolation):
            play_game(g, Verbose(), np.arange(1, 6), 2)

    def test_inverse_inner_rules(self):
        dlog = build_game("DLOG", 5)
        with pytest.raises(ContractViolation):
            play_game(dlog, _FixedQueryAdversary(inner=[(2, True)]), np.arange(1, 6), 1)
        em = build_game("EM_KR", 8)
        sigma = random_sigma(np.random.Generator(np.random.PCG64(1)), 8)
        tr = play_game(em, _FixedQueryAdversary(inner=[(int(sigma[4]), True)], output=(1, 1)), sigma, (1, 1))
        assert tr.inner_answers == (5,)

    def test_query_out_of_range(self):
        g = build_game("DLOG", 5)
        with pytest.raises(ValidationError):
            play_game(g, _FixedQueryAdversary(inner=[9]), np.arange(1, 6), 1)
        with pytest.raises(ValidationError):
            play_game(g, _FixedQueryAdversary(outer=[(5, 1)]), np.arange(1, 6), 1)


def _random_outer_query(rng, game):
    n = game.n
    if game.kind == GameKind.DLOG:
        return (int(rng.integers(1, n)), int(rng.integers(1, n + 1)))
    if game.kind == GameKind.DDH:
        return tuple(int(v) for v in rng.integers(1, n + 1, size=4))
    if game.kind == GameKind.SQDDH:
        return tuple(int(v) for v in rng.integers(1, n + 1, size=3))
    return int(rng.integers(1, n + 1))


class TestMidGame:
    def test_constraints_validation(self):
        with pytest.raises(ValidationError):
            MidConstraints((1, 1), (2, 3))
        with pytest.raises(ValidationError):
            MidConstraints((1, 2), (3, 3))
        with pytest.raises(ValidationError):
            MidConstraints((1,), (2, 3))

    def test_full_constraints_determine_sigma(self):
        g = build_game("DLOG", 5)
        perm = (3, 1, 4, 5, 2)
        tr = play_mid_game(g, MidConstraints((1, 2, 3, 4, 5), perm), [], lambda a: 1, 2, 7)
        assert tuple(tr.sigma) == perm
        assert tr.t1 == 5

    def test_pinned_value_marginal_is_conditionally_uniform(self):
        g = build_game("DLOG", 5)
        counts = np.zeros(6)
        samples = 40000
        for i in range(samples):
            tr = play_mid_game(
                g, MidConstraints((1,), (2,)), [], lambda a: 1, 1, derive_trial_seed(13, i)
            )
            counts[int(tr.sigma[1])] += 1
        assert counts[2] == 0
        p = 0.25
        band = 3 * math.sqrt(p * (1 - p) * samples)
        for v in (1, 3, 4, 5):
            assert abs(counts[v] - samples * p) <= band

    def test_empty_constraints_match_unconstrained_game(self):
        g = build_game("DLOG", 7)
        queries = [(2, 3), (1, 5)]
        samples = 20000
        counts_mid = np.zeros((8, 8))
        counts_plain = np.zeros((8, 8))
        for i in range(samples):
            tr = play_mid_game(
                g, MidConstraints((), ()), queries, lambda a: 1, 3, derive_trial_seed(17, i)
            )
            counts_mid[tr.outer_answers[0], tr.outer_answers[1]] += 1
            rng = trial_generator(18, i)
            sigma = random_sigma(rng, 7)
            tr2 = play_game(g, _FixedQueryAdversary(outer=queries), sigma, 3)
            counts_plain[tr2.outer_answers[0], tr2.outer_answers[1]] += 1
        # same support and close frequencies
        assert (counts_mid > 0).sum() == (counts_plain > 0).sum()
        diff = np.abs(counts_mid - counts_plain) / samples
        assert diff.max() < 0.02


class TestMidSimulationOracle:
    def test_empty_constraints_never_flag(self):
        g = build_game("DLOG", 11)
        for i in range(200):
            rng = trial_generator(21, i)
            queries = [(1, int(b) + 1) for b in rng.choice(11, size=4, replace=False)]
            run = mid_simulation_oracle(
                g, MidConstraints((), ()), queries, g.sample_secret(rng), derive_trial_seed(22, i)
            )
            assert run.w1 == 0 and run.w2 == 0

    def test_flag_rates_within_union_bounds(self):
        g = build_game("DLOG", 101)
        u = 101.0
        for t1, t2, master in ((5, 5, 31), (10, 10, 32)):
            runs = 20000
            w1 = w2 = 0
            for i in range(runs):
                rng = trial_generator(master, i)
                ins = [int(x) + 1 for x in rng.choice(101, size=t1, replace=False)]
                outs = [int(x) + 1 for x in rng.choice(101, size=t1, replace=False)]
                queries = [(1, int(b) + 1) for b in rng.choice(101, size=t2, replace=False)]
                d = g.sample_secret(rng)
                run = mid_simulation_oracle(
                    g, MidConstraints(ins, outs), queries, d, derive_trial_seed(master + 1, i)
                )
                w1 += run.w1
                w2 += run.w2
            t = t1 + t2
            b1, b2 = t1 * t2 / u, t * t / (4 * u)
            for observed, bound in ((w1 / runs, b1), (w2 / runs, b2)):
                sigma_hat = math.sqrt(max(observed * (1 - observed), 1e-4) / runs)
                assert observed <= min(1.0, bound) + 3 * sigma_hat

    def test_w1_rate_matches_exact_fiber_count(self):
        # For a fixed pin set and fixed queries, Pr[W1] over the uniform
        # secret equals the exactly-counted fraction of secrets whose
        # translated queries land on a pinned input.
        g = build_game("DLOG", 101)
        rng = np.random.Generator(np.random.PCG64(55))
        ins = [int(x) + 1 for x in rng.choice(101, size=10, replace=False)]
        outs = [int(x) + 1 for x in rng.choice(101, size=10, replace=False)]
        queries = [(1, int(b) + 1) for b in rng.choice(101, size=10, replace=False)]
        constraints = MidConstraints(ins, outs)
        exact = sum(
            1
            for d in g.iter_secrets()
            if any(g.element_from_index(g.translate_index(d, m)) in set(ins) for m in queries)
        ) / 101
        assert exact <= 100 / 101  # the union bound t1*t2/u
        runs = 30000
        w1 = 0
        for i in range(runs):
            rng_i = trial_generator(56, i)
            d = g.sample_secret(rng_i)
            run = mid_simulation_oracle(g, constraints, queries, d, derive_trial_seed(57, i))
            w1 += run.w1
        observed = w1 / runs
        band = 3 * math.sqrt(exact * (1 - exact) / runs)
        assert abs(observed - exact) <= band

    def test_matches_exact_hybrid_distribution(self):
        # chi-square goodness of fit of the oracle's joint responses
        # against the enumerated hybrid-game distribution at n=5.
        g = build_game("DLOG", 5)
        d = 2
        queries = [(1, 3), (1, 4)]  # translate to sigma inputs 5 and 1 (pinned)
        pins = (1, 2)

        exact = {}
        for o1, o2 in itertools.permutations(range(1, 6), 2):
            remaining = [v for v in range(1, 6) if v not in (o1, o2)]
            for r1 in remaining:
                exact[(r1, o1)] = exact.get((r1, o1), 0.0) + (1 / 20) * (1 / 3)
        assert abs(sum(exact.values()) - 1.0) < 1e-12

        samples = 100000
        counts = {}
        for i in range(samples):
            rng = trial_generator(41, i)
            sigma_prime = random_sigma(rng, 5)
            constraints = MidConstraints(pins, (int(sigma_prime[0]), int(sigma_prime[1])))
            run = mid_simulation_oracle(g, constraints, queries, d, derive_trial_seed(42, i))
            counts[run.responses] = counts.get(run.responses, 0) + 1

        assert set(counts) <= set(exact)
        stat = 0.0
        for cat, prob in exact.items():
            expected = prob * samples
            stat += (counts.get(cat, 0) - expected) ** 2 / expected
        threshold = chi2.ppf(1 - 1e-3, df=len(exact) - 1)
        assert stat <= threshold


class TestTrivialPostReduction:
    def test_identity_case(self):
        g = build_game("DLOG", 5)
        pi = trivial_post_reduction(g, MidConstraints((1, 3), (2, 4)), (2, 4))
        assert pi[1] == 2 and pi[3] == 4
        assert sorted(pi) == [1, 2, 3, 4, 5]

    def test_worked_example(self):
        g = build_game("DLOG", 5)
        pi = trivial_post_reduction(g, MidConstraints((1,), (2,)), (4,))
        assert pi == (1, 3, 4, 2, 5)

    def test_empty_constraints_identity(self):
        g = build_game("DLOG", 5)
        assert trivial_post_reduction(g, MidConstraints((), ()), ()) == (1, 2, 3, 4, 5)

    def test_relabeled_run_matches_pinned_run(self):
        # pi(sigma(.)) is uniform under the pins and answers stay consistent
        g = build_game("DLOG", 7)
        rng = np.random.Generator(np.random.PCG64(3))
        constraints = MidConstraints((2, 5), (7, 1))
        for _ in range(200):
            sigma = random_sigma(rng, 7)
            observed = tuple(int(sigma[i - 1]) for i in constraints.inputs)
            pi = trivial_post_reduction(g, constraints, observed)
            composed = [pi[int(sigma[i]) - 1] for i in range(7)]
            for i, o in zip(constraints.inputs, constraints.outputs):
                assert composed[i - 1] == o
            assert sorted(composed) == list(range(1, 8))

    def test_errors(self):
        g = build_game("EM_KR", 8)
        with pytest.raises(ValidationError):
            trivial_post_reduction(g, MidConstraints((1,), (2,)), (3,))
        g2 = build_game("DLOG", 5)
        with pytest.raises(ValidationError):
            trivial_post_reduction(g2, MidConstraints((1, 2), (2, 3)), (4,))
        with pytest.raises(ValidationError):
            trivial_post_reduction(g2, MidConstraints((1, 2), (2, 3)), (4, 4))


class TestEvaluateBound:
    def test_worked_example(self):
        v = evaluate_bound("T11", 1009, 20, 10, max_s=100 / 1009)
        assert v == pytest.approx(0.8469, abs=5e-4)

    def test_zero_queries_leave_only_max_s_terms(self):
        # The search-game forms keep their leading factor 2; the min()
        # forms and the decision form collapse to maxS itself.
        assert evaluate_bound("T11", 101, 0, 0, max_s=0.25) == 0.5
        assert evaluate_bound("T13", 101, 0, 0, max_s=0.25) == 0.5
        assert evaluate_bound("T12", 101, 0, 0, max_s=0.25) == 0.25
        assert evaluate_bound("T41", 101, 0, 0, u=101, max_s=0.25) == 0.25
        assert evaluate_bound("TE1", 101, 0, 0, u=101, max_s=0.25) == 0.25

    def test_te1_never_exceeds_t41(self):
        rng = np.random.Generator(np.random.PCG64(4))
        for _ in range(500):
            n = int(rng.integers(10, 5000))
            s = float(rng.integers(0, 200))
            t = float(rng.integers(0, 50))
            u = float(rng.integers(1, n + 1))
            max_s = float(rng.random() * 0.5)
            assert evaluate_bound("TE1", n, s, t, u=u, max_s=max_s) <= evaluate_bound(
                "T41", n, s, t, u=u, max_s=max_s
            ) + 1e-12

    def test_monotone_in_s_and_t(self):
        s_grid = [0, 5, 20, 80, 320]
        t_grid = [0, 2, 8, 32, 128]
        for theorem, kwargs in (
            ("T11", {}),
            ("T12", {}),
            ("T13", {}),
            ("T41", dict(u=500.0, max_s=0.01)),
            ("TE1", dict(u=500.0, max_s=0.01)),
        ):
            for t in t_grid:
                values = [evaluate_bound(theorem, 1009, s, t, **kwargs) for s in s_grid]
                assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))
            for s in s_grid:
                if theorem in ("T11", "T12", "T13"):
                    values = [evaluate_bound(theorem, 1009, s, t) for t in t_grid]
                else:
                    values = [evaluate_bound(theorem, 1009, s, t, **kwargs) for t in t_grid]
                assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))

    def test_defaults_per_theorem(self):
        n, t = 101, 5
        assert evaluate_bound("T11", n, 0, t) == pytest.approx(
            3 * t * t / n, abs=1e-12
        )
        assert evaluate_bound("T12", n, 0, t) == pytest.approx(0.5 + 2 * t * t / n, abs=1e-12)

    def test_validation(self):
        with pytest.raises(ValidationError):
            evaluate_bound("T41", 101, 1, 1, u=0, max_s=0.1)
        with pytest.raises(ValidationError):
            evaluate_bound("T41", 101, 1, 1, u=101)
        with pytest.raises(ValidationError):
            evaluate_bound("T11", 101, -1, 1)
        with pytest.raises(ValueError):
            evaluate_bound("T99", 101, 1, 1)

    def test_clamped_to_unit_interval(self):
        assert evaluate_bound("T11", 11, 1000, 1000) == 1.0
