"""Operator arithmetic, schedules, discretization, and full-run behavior."""

import math

import numpy as np
import pytest

from antcover.army_ant import (
    AntPopulation,
    ArchiveEntry,
    OptimizerParams,
    PreyArchive,
    ScheduleState,
    attacking_move,
    discretize,
    following_move,
    initialize_population,
    optimize,
    prey_count,
    recruitment_count,
    recruitment_mean,
    step,
    wander_move,
    wrap_angles,
)
from antcover.rng import RandomStream
from antcover.sensing import TWO_PI

from conftest import StubStream


def params_for(n=10, levels=None, t_max=20, **kw):
    return OptimizerParams(
        population=n, levels=levels or [4, 4], max_iterations=t_max, **kw
    )


class TestParams:
    def test_num_ini_defaults_to_half(self):
        assert params_for(n=50).num_ini == 25.0

    def test_validation(self):
        with pytest.raises(ValueError):
            params_for(n=3)  # smaller than the archive
        with pytest.raises(ValueError):
            params_for(levels=[])
        with pytest.raises(ValueError):
            params_for(levels=[4, 0])
        with pytest.raises(ValueError):
            params_for(t_max=0)
        with pytest.raises(ValueError):
            params_for(num_ini=-1.0)


class TestFollowingMove:
    def test_zero_noise_lands_on_prey(self):
        out = following_move(np.array([1.0]), np.array([2.0]), StubStream(normal=0.0))
        assert out.tolist() == [2.0]

    def test_negative_one_reflects_to_ant(self):
        out = following_move(np.array([1.0]), np.array([2.0]), StubStream(normal=-1.0))
        assert out.tolist() == [1.0]

    def test_elementwise(self):
        out = following_move(
            np.array([0.0, 0.0]), np.array([2.0, 4.0]), StubStream(normal=0.5)
        )
        assert out.tolist() == [3.0, 6.0]

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            following_move(np.zeros(2), np.zeros(3), StubStream())


class TestAttackingMove:
    def test_singleton_mean(self):
        v = np.array([1.5, -2.0])
        assert attacking_move([v]).tolist() == v.tolist()

    def test_two_results(self):
        assert attacking_move([np.array([1.0]), np.array([3.0])]).tolist() == [2.0]

    def test_three_results(self):
        out = attacking_move([np.array([0.0, 2.0]), np.array([2.0, 0.0]), np.array([4.0, 4.0])])
        assert out.tolist() == [2.0, 2.0]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            attacking_move([])


class TestWanderMove:
    def test_zero_noise_is_midpoint(self):
        out = wander_move(np.array([1.0]), np.array([3.0]), StubStream(cauchy=0.0))
        assert out.tolist() == [2.0]

    def test_noise_cancellation(self):
        out = wander_move(
            np.array([0.0]), np.array([0.0]), StubStream(cauchy=iter([2.0, -2.0]))
        )
        assert out.tolist() == [0.0]

    def test_two_dims(self):
        out = wander_move(np.array([0.0, 0.0]), np.array([2.0, 2.0]), StubStream(cauchy=0.0))
        assert out.tolist() == [1.0, 1.0]


class TestSchedules:
    def test_recruitment_mean_endpoint(self):
        p = params_for(n=50, t_max=100)
        assert recruitment_mean(100, p) == 50.0

    def test_recruitment_mean_midpoint(self):
        p = params_for(n=50, t_max=100)
        assert recruitment_mean(50, p) == 37.5

    def test_recruitment_mean_first_iteration(self):
        p = params_for(n=50, t_max=100)
        assert recruitment_mean(1, p) == 25.25

    def test_recruitment_mean_range_checked(self):
        p = params_for(n=50, t_max=100)
        with pytest.raises(ValueError):
            recruitment_mean(0, p)
        with pytest.raises(ValueError):
            recruitment_mean(101, p)

    def test_prey_count_starts_at_four(self):
        for t_max in (1, 7, 100, 12345):
            assert prey_count(1, t_max) == 4

    def test_prey_count_midpoint(self):
        assert prey_count(51, 100) == 2  # raw value exactly 2.0

    def test_prey_count_clamped_at_end(self):
        # raw round(0.04) = 0 gets clamped to 1
        assert prey_count(100, 100) == 1

    def test_prey_count_rounds_half_up(self):
        # t=2, t_max=8: 4 - 4/8 = 3.5 rounds away from zero to 4
        assert prey_count(2, 8) == 4

    def test_prey_count_range_checked(self):
        with pytest.raises(ValueError):
            prey_count(0, 10)
        with pytest.raises(ValueError):
            prey_count(11, 10)

    def test_schedule_state(self):
        p = params_for(n=50, t_max=100)
        s = ScheduleState.for_iteration(1, p)
        assert s.recruit_mean == 25.25
        assert s.prey_target == 4


def truncated_poisson_mean(mean: float, n: int) -> float:
    """Independent numeric oracle: E[k] for the pmf renormalized on 0..n."""
    log_terms = [k * math.log(mean) - mean - math.lgamma(k + 1) for k in range(n + 1)]
    probs = [math.exp(v) for v in log_terms]
    total = sum(probs)
    return sum(k * p for k, p in zip(range(n + 1), probs)) / total


class TestRecruitmentCount:
    def test_zero_mean_hook(self, monkeypatch):
        monkeypatch.setattr("antcover.army_ant.recruitment_mean", lambda t, p: 0.0)
        p = params_for(n=50, t_max=100)
        assert recruitment_count(1, p, RandomStream(0)) == 0

    def test_bounded_by_population(self):
        p = params_for(n=50, t_max=100)
        s = RandomStream(1)
        counts = [recruitment_count(100, p, s) for _ in range(2000)]
        assert all(0 <= k <= 50 for k in counts)

    def test_final_iteration_mean(self):
        # mean ramps to N; truncation pulls the expectation just below it
        p = params_for(n=50, t_max=100)
        expected = truncated_poisson_mean(50.0, 50)
        s = RandomStream(2)
        draws = [recruitment_count(100, p, s) for _ in range(100_000)]
        assert 48.0 <= expected <= 50.0
        assert abs(np.mean(draws) - expected) <= 0.1

    def test_mid_run_mean(self):
        p = params_for(n=50, t_max=100)
        expected = truncated_poisson_mean(37.5, 50)
        s = RandomStream(3)
        draws = [recruitment_count(50, p, s) for _ in range(100_000)]
        assert abs(np.mean(draws) - expected) <= 0.1


class TestDiscretize:
    def test_on_grid_value_is_fixed(self):
        s = RandomStream(4)
        grid_value = 3 * (TWO_PI / 8)
        for _ in range(100):
            assert discretize(grid_value, 8, s) == grid_value

    def test_midpoint_rounds_by_r2(self):
        # grid step pi/4; x = pi/8 has fractional offset 0.5
        x = math.pi / 8
        assert discretize(x, 8, StubStream(uniform=0.49)) == math.pi / 4
        assert discretize(x, 8, StubStream(uniform=0.51)) == 0.0

    def test_top_cell_wraps_to_zero(self):
        # x just past the last grid point rounds up to 2*pi == 0
        x = 7 * (TWO_PI / 8) + 0.9 * (TWO_PI / 8)
        assert discretize(x, 8, StubStream(uniform=0.5)) == 0.0

    def test_round_up_frequency(self):
        x = 2 * (TWO_PI / 8) + 0.8 * (TWO_PI / 8)
        s = RandomStream(5)
        ups = sum(discretize(x, 8, s) == 3 * (TWO_PI / 8) for _ in range(100_000))
        assert abs(ups / 100_000 - 0.8) <= 0.01

    def test_unbiased_between_grid_points(self):
        x = 2 * (TWO_PI / 8) + 0.3 * (TWO_PI / 8)
        s = RandomStream(6)
        draws = [discretize(x, 8, s) for _ in range(20_000)]
        assert abs(np.mean(draws) - x) <= 0.01

    def test_single_level_grid(self):
        s = RandomStream(7)
        assert discretize(1.234, 1, s) == 0.0

    def test_invalid_levels(self):
        with pytest.raises(ValueError):
            discretize(0.0, 0, RandomStream(8))


def test_wrap_angles_never_returns_two_pi():
    vals = wrap_angles(np.array([-1e-20, -0.0, TWO_PI, 2 * TWO_PI, -TWO_PI]))
    assert np.all(vals >= 0.0)
    assert np.all(vals < TWO_PI)


class TestPreyArchive:
    def test_keeps_best_four_distinct(self):
        a = PreyArchive()
        a.merge([(0,), (1,), (2,), (3,), (0,)], [5, 9, 7, 1, 5], stamp=0)
        a.offer((4,), 8, stamp=1)
        assert [e.assignment for e in a.entries] == [(1,), (4,), (2,), (0,)]
        assert a.best == ArchiveEntry((1,), 9, 0)

    def test_duplicate_assignment_keeps_first_stamp(self):
        a = PreyArchive()
        a.offer((1, 2), 5, stamp=0)
        a.offer((1, 2), 5, stamp=3)
        assert len(a.entries) == 1
        assert a.entries[0].stamp == 0

    def test_fitness_tie_breaks_by_stamp_then_assignment(self):
        a = PreyArchive()
        a.offer((2,), 5, stamp=1)
        a.offer((1,), 5, stamp=0)
        a.offer((0,), 5, stamp=1)
        assert [e.assignment for e in a.entries] == [(1,), (0,), (2,)]

    def test_active_is_clamped(self):
        a = PreyArchive()
        a.offer((0,), 1, stamp=0)
        a.offer((1,), 2, stamp=0)
        assert len(a.active(4)) == 2
        assert len(a.active(1)) == 1
        assert a.active(1)[0].assignment == (1,)

    def test_empty_archive_has_no_best(self):
        with pytest.raises(ValueError):
            PreyArchive().best


class TestStep:
    def test_fixed_point_when_swarm_sits_on_single_prey(self):
        # identical ants on the only prey, all noise forced to zero
        params = params_for(n=4, levels=[4, 4], t_max=10)
        idx = np.array([[1, 2]] * 4)
        angles = idx * (TWO_PI / np.array([4, 4]))
        pop = AntPopulation(angles=angles, indices=idx, fitness=[7, 7, 7, 7])
        archive = PreyArchive()
        archive.offer((1, 2), 7, stamp=0)
        stub = StubStream(normal=0.0, cauchy=0.0, uniform=0.5, roulette=2)
        new_pop, archive = step(pop, archive, 1, params, lambda a: 7, stub)
        assert np.array_equal(new_pop.indices, idx)
        assert np.array_equal(new_pop.angles, angles)
        assert archive.entries == [ArchiveEntry((1, 2), 7, 0)]

    def test_archive_best_never_decreases(self):
        params = params_for(n=6, levels=[5, 5, 5], t_max=30)
        stream = RandomStream(11)
        fn = lambda a: -((a[0] - 2) ** 2) - a[1] - a[2]
        pop, archive = initialize_population(params, fn, stream)
        best = archive.best.fitness
        for t in range(1, 31):
            pop, archive = step(pop, archive, t, params, fn, stream)
            assert archive.best.fitness >= best
            best = archive.best.fitness

    def test_all_indices_feasible_every_iteration(self):
        params = params_for(n=5, levels=[3, 7, 2], t_max=25)
        stream = RandomStream(12)
        fn = lambda a: a[0] + a[1] + a[2]
        pop, archive = initialize_population(params, fn, stream)
        for t in range(1, 26):
            pop, archive = step(pop, archive, t, params, fn, stream)
            assert pop.indices.shape == (5, 3)
            for d, p in enumerate(params.levels):
                assert np.all(pop.indices[:, d] >= 0)
                assert np.all(pop.indices[:, d] < p)


def _scalar_stochastic_round(pos: float, levels: int, r2: float) -> int:
    """Plain-arithmetic twin of the vectorized rounding, for replay tests."""
    step_len = TWO_PI / levels
    scaled = pos / step_len
    lower = math.floor(scaled)
    frac = scaled - lower
    if frac > 1.0 - 1e-9:
        lower += 1
        frac = 0.0
    elif frac < 1e-9:
        frac = 0.0
    return (lower + (1 if r2 < frac else 0)) % levels


def test_step_matches_hand_replay():
    """Replays one iteration draw by draw, applying the update equations with
    scalar arithmetic, and demands an exact match."""
    levels = [2, 2]
    params = OptimizerParams(population=4, levels=levels, max_iterations=2)
    fn = lambda a: 2 * a[0] + a[1]
    start = [(0, 0), (0, 1), (1, 0), (1, 1)]
    step_len = TWO_PI / 2

    idx = np.array(start, dtype=np.int64)
    pop = AntPopulation(
        angles=idx * (TWO_PI / np.array(levels)),
        indices=idx,
        fitness=[fn(a) for a in start],
    )
    archive = PreyArchive()
    archive.merge(start, pop.fitness, stamp=0)
    impl = RandomStream(904)
    new_pop, archive = step(pop, archive, 1, params, fn, impl)

    # --- replay ---
    twin = RandomStream(904)
    old_angles = [[a * step_len for a in row] for row in start]
    # archive sorted by fitness: (1,1)=3, (1,0)=2, (0,1)=1, (0,0)=0; all 4 active
    prey = [[v * step_len for v in e] for e in [(1, 1), (1, 0), (0, 1), (0, 0)]]

    mean = 2.0 + (4.0 - 2.0) * 1.0 / 2.0  # num_ini + (N - num_ini) * t / T
    weights = [math.exp(k * math.log(mean) - mean - math.lgamma(k + 1)) for k in range(5)]
    k = twin.roulette(weights)
    recruited = set(twin.distinct_indices(4, k).tolist())

    expected_raw = []
    for i in range(4):
        if i in recruited:
            moves = []
            for pv in prey:
                eps = twin.standard_normal(2)
                moves.append([pv[d] + (pv[d] - old_angles[i][d]) * eps[d] for d in range(2)])
            acc = list(moves[0])
            for mv in moves[1:]:
                acc = [acc[d] + mv[d] for d in range(2)]
            expected_raw.append([v / len(moves) for v in acc])
        else:
            a = twin.integer(3)
            if a >= i:
                a += 1
            b = twin.integer(2)
            for excl in sorted((i, a)):
                if b >= excl:
                    b += 1
            ca = twin.standard_cauchy(2)
            cb = twin.standard_cauchy(2)
            expected_raw.append(
                [
                    ((old_angles[a][d] + ca[d]) + (old_angles[b][d] + cb[d])) / 2.0
                    for d in range(2)
                ]
            )

    r2 = twin.uniform(size=(4, 2))
    expected_idx = []
    for i in range(4):
        row = []
        for d in range(2):
            wrapped = float(np.mod(expected_raw[i][d], TWO_PI))
            if wrapped >= TWO_PI:
                wrapped = 0.0
            row.append(_scalar_stochastic_round(wrapped, levels[d], float(r2[i, d])))
        expected_idx.append(row)

    assert new_pop.indices.tolist() == expected_idx
    assert new_pop.fitness == [fn(tuple(r)) for r in expected_idx]
    expected_angles = [[j * step_len for j in row] for row in expected_idx]
    assert new_pop.angles.tolist() == expected_angles

    # replayed archive merge: union of stamped entries, best four distinct
    pool: dict[tuple, tuple] = {}
    for e, f in zip([(1, 1), (1, 0), (0, 1), (0, 0)], [3, 2, 1, 0]):
        pool[e] = (f, 0)
    for row in expected_idx:
        key = tuple(row)
        if key not in pool:
            pool[key] = (fn(key), 1)
    ranked = sorted(pool.items(), key=lambda kv: (-kv[1][0], kv[1][1], kv[0]))[:4]
    assert [(e.assignment, e.fitness, e.stamp) for e in archive.entries] == [
        (a, f, st) for a, (f, st) in ranked
    ]


class TestOptimize:
    def test_constant_fitness_flat_history(self):
        params = params_for(n=5, levels=[3, 3], t_max=12)
        result = optimize(lambda a: 42, params, seed=0)
        assert result.best_fitness == 42
        assert result.history == [42] * 13
        assert result.evaluations == 5 * 13

    def test_needle_found_reliably(self):
        # fitness 1 only at index 2 of a 4-level single dimension
        params = OptimizerParams(population=10, levels=[4], max_iterations=50)
        hits = sum(
            optimize(lambda a: 1 if a[0] == 2 else 0, params, seed=s).best_fitness == 1
            for s in range(50)
        )
        assert hits >= 49

    def test_history_monotone_and_sized(self):
        params = params_for(n=6, levels=[4, 4, 4], t_max=40)
        result = optimize(lambda a: a[0] * 2 + a[1] - a[2], params, seed=3)
        assert len(result.history) == 41
        assert all(b >= a for a, b in zip(result.history, result.history[1:]))
        assert result.history[-1] == result.best_fitness

    def test_deterministic(self):
        params = params_for(n=8, levels=[5, 5], t_max=25)
        fn = lambda a: (a[0] * 3 + a[1]) % 7
        r1 = optimize(fn, params, seed=77)
        r2 = optimize(fn, params, seed=77)
        assert r1.best_assignment == r2.best_assignment
        assert r1.history == r2.history

    def test_callback_sees_archive_dominance(self):
        params = params_for(n=6, levels=[6, 6], t_max=20)
        fn = lambda a: a[0] + 10 * a[1]
        seen_max = -math.inf

        def check(t, population, archive):
            nonlocal seen_max
            seen_max = max(seen_max, max(population.fitness))
            assert archive.best.fitness >= seen_max

        optimize(fn, params, seed=5, callback=check)

    def test_best_assignment_feasible(self):
        params = params_for(n=5, levels=[2, 9, 3], t_max=15)
        result = optimize(lambda a: sum(a), params, seed=9)
        assert len(result.best_assignment) == 3
        for j, p in zip(result.best_assignment, [2, 9, 3]):
            assert 0 <= j < p
