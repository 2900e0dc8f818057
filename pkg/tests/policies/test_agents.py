import math
from collections.abc import Sequence

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neural_linucb.environments.models import ContextSet
from neural_linucb.environments.streams import draw_reward, synth_rounds
from neural_linucb.exceptions import BanditConfigError, DimensionError, NumericalError
from neural_linucb.explorer.models import AlphaSchedule
from neural_linucb.network.mlp import grad_f_batch, phi_batch
from neural_linucb.network.models import HistoryMode, TrainConfig
from neural_linucb.policies import (
    AgentConfig,
    Algorithm,
    BaseAgent,
    LinUCBAgent,
    NeuralLinearAgent,
    NeuralLinUCBAgent,
    NeuralUCBDiagAgent,
    UniformAgent,
    make_agent,
)
from tests.conftest import duplicated_unit

QUICK_TRAIN = TrainConfig(step_size=1e-2, max_iter=3, early_stop=0.0)


def _config(algorithm: Algorithm, **overrides: object) -> AgentConfig:
    values: dict[str, object] = {
        "algorithm": algorithm,
        "n_arms": 3,
        "dim": 4,
        "width": 8,
        "epoch_length": 4,
        "alpha": AlphaSchedule.fixed(0.5),
        "train": QUICK_TRAIN,
        "warm_start_pulls": 1,
    }
    values.update(overrides)
    return AgentConfig.model_validate(values)


def _round(
    t: int, raws: Sequence[Sequence[float]], rewards: Sequence[float] | None = None
) -> ContextSet:
    features = np.array([duplicated_unit(np.asarray(raw, dtype=float)) for raw in raws])
    if rewards is None:
        rewards = np.zeros(len(raws))
    return ContextSet(t=t, features=features, rewards=np.asarray(rewards, dtype=float))


def _identity(xs: np.ndarray) -> np.ndarray:
    return xs


def _play(agent: BaseAgent, horizon: int, seed: int = 0) -> list[int]:
    rng = np.random.default_rng(seed)
    arms = []
    for ctx in synth_rounds("linear", 2, agent.n_arms, horizon, seed=seed, noise=0.1):
        arm = agent.select_arm(ctx)
        agent.observe(ctx, arm, draw_reward(ctx, arm, rng))
        agent.maybe_retrain(ctx.t)
        arms.append(arm)
    return arms


class TestMakeAgent:
    @pytest.mark.parametrize(
        ("algorithm", "cls"),
        [
            (Algorithm.NEURAL_LINUCB, NeuralLinUCBAgent),
            (Algorithm.LINUCB, LinUCBAgent),
            (Algorithm.NEURALUCB_DIAG, NeuralUCBDiagAgent),
            (Algorithm.NEURAL_LINEAR, NeuralLinearAgent),
            (Algorithm.UNIFORM, UniformAgent),
        ],
    )
    def test_builds_requested_agent(self, algorithm: Algorithm, cls: type[BaseAgent]) -> None:
        assert type(make_agent(_config(algorithm))) is cls


class TestWarmStart:
    @pytest.mark.parametrize("algorithm", list(Algorithm))
    def test_round_robin(self, algorithm: Algorithm) -> None:
        agent = make_agent(_config(algorithm, warm_start_pulls=2))
        rounds = list(synth_rounds("linear", 2, 3, 6, seed=1))

        arms = []
        for ctx in rounds:
            arm = agent.select_arm(ctx)
            agent.observe(ctx, arm, 0.5)
            arms.append(arm)

        assert arms == [0, 1, 2, 0, 1, 2]

    @pytest.mark.parametrize("algorithm", list(Algorithm))
    def test_single_arm_always_pulled(self, algorithm: Algorithm) -> None:
        agent = make_agent(_config(algorithm, n_arms=1))
        assert set(_play(agent, 12)) == {0}

    def test_warm_start_updates_can_be_skipped(self) -> None:
        agent = NeuralLinUCBAgent(
            _config(Algorithm.NEURAL_LINUCB, warm_start_updates=False), feature_map=_identity
        )
        ctx = _round(1, [[1, 0], [0, 1], [1, 1]])
        agent.observe(ctx, 0, 1.0)

        assert agent.ridge.update_count == 0
        assert len(agent.buffer) == 1


class TestObserveValidation:
    @pytest.fixture
    def agent(self) -> BaseAgent:
        return make_agent(_config(Algorithm.NEURAL_LINUCB))

    def test_non_finite_reward(self, agent: BaseAgent) -> None:
        ctx = _round(1, [[1, 0], [0, 1], [1, 1]])
        with pytest.raises(NumericalError) as exc_info:
            agent.observe(ctx, 0, math.inf)
        assert exc_info.value.quantity == "reward"

    def test_arm_out_of_range(self, agent: BaseAgent) -> None:
        ctx = _round(1, [[1, 0], [0, 1], [1, 1]])
        with pytest.raises(DimensionError):
            agent.observe(ctx, 3, 1.0)

    def test_wrong_number_of_arms(self, agent: BaseAgent) -> None:
        with pytest.raises(DimensionError):
            agent.select_arm(_round(1, [[1, 0], [0, 1]]))

    def test_wrong_context_dimension(self, agent: BaseAgent) -> None:
        with pytest.raises(DimensionError):
            agent.select_arm(_round(1, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]))

    def test_retrain_needs_positive_round(self, agent: BaseAgent) -> None:
        with pytest.raises(BanditConfigError, match="at least 1"):
            agent.maybe_retrain(0)


class TestNeuralLinUCB:
    def _hand_agent(self, alpha: float) -> NeuralLinUCBAgent:
        config = _config(
            Algorithm.NEURAL_LINUCB,
            n_arms=2,
            alpha=AlphaSchedule.fixed(alpha),
            warm_start_pulls=0,
            shrink_to_init=False,
        )
        agent = NeuralLinUCBAgent(config, feature_map=_identity)
        agent.observe(_round(1, [[1, 0], [0, 1]]), 0, 1.0)
        return agent

    def test_hand_computed_bonus(self) -> None:
        # A = I + x1 x1^T, theta = x1 / 2, ||x1||_{A^-1} = 1/sqrt(2), ||x2||_{A^-1} = 1
        agent = self._hand_agent(alpha=1.0)
        ctx = _round(2, [[1, 0], [0, 1]])

        np.testing.assert_allclose(agent.scores(ctx), [0.5 + 1 / np.sqrt(2.0), 1.0])
        assert agent.select_arm(ctx) == 0

    def test_larger_alpha_prefers_unexplored_arm(self) -> None:
        agent = self._hand_agent(alpha=2.0)
        ctx = _round(2, [[1, 0], [0, 1]])

        np.testing.assert_allclose(agent.scores(ctx), [0.5 + np.sqrt(2.0), 2.0])
        assert agent.select_arm(ctx) == 1

    def test_alpha_zero_is_greedy(self) -> None:
        agent = make_agent(_config(Algorithm.NEURAL_LINUCB, alpha=AlphaSchedule.fixed(0.0)))
        assert isinstance(agent, NeuralLinUCBAgent)
        _play(agent, 7)
        ctx = next(iter(synth_rounds("linear", 2, 3, 8, seed=5)))

        expected = phi_batch(agent.params, ctx.features) @ agent.ridge.theta
        np.testing.assert_allclose(agent.scores(ctx), expected)

    def test_scores_match_brute_force(self) -> None:
        agent = make_agent(_config(Algorithm.NEURAL_LINUCB, alpha=AlphaSchedule.fixed(0.7)))
        assert isinstance(agent, NeuralLinUCBAgent)
        _play(agent, 10)
        ctx = next(iter(synth_rounds("linear", 2, 3, 11, seed=9)))

        phis = phi_batch(agent.params, ctx.features)
        a_inv = np.linalg.inv(agent.ridge.a)
        expected = [
            phi @ agent.ridge.theta + 0.7 * np.sqrt(phi @ a_inv @ phi) for phi in phis
        ]
        np.testing.assert_allclose(agent.scores(ctx), expected, atol=1e-10)

    def test_three_round_statistics(self) -> None:
        config = _config(Algorithm.NEURAL_LINUCB, n_arms=2, shrink_to_init=False)
        agent = NeuralLinUCBAgent(config, feature_map=_identity)
        history = [
            ([[1, 0], [0, 1]], 0, 1.0),
            ([[1, 0], [0, 1]], 1, 0.0),
            ([[1, 1], [1, -1]], 0, 0.5),
        ]

        a = np.eye(4)
        b = np.zeros(4)
        for t, (raws, arm, reward) in enumerate(history, start=1):
            ctx = _round(t, raws)
            agent.observe(ctx, arm, reward)
            x = ctx.features[arm]
            a += np.outer(x, x)
            b += reward * x

        np.testing.assert_allclose(agent.ridge.a, a)
        np.testing.assert_allclose(agent.ridge.b, b)
        np.testing.assert_allclose(agent.ridge.theta, np.linalg.solve(a, b), atol=1e-12)

    def test_identity_features_reproduce_shared_linucb(self) -> None:
        neural = NeuralLinUCBAgent(
            _config(Algorithm.NEURAL_LINUCB, shrink_to_init=False), feature_map=_identity
        )
        linear = LinUCBAgent(_config(Algorithm.LINUCB), disjoint=False)

        assert _play(neural, 60, seed=4) == _play(linear, 60, seed=4)
        np.testing.assert_allclose(neural.ridge.a, linear.models[0].a)
        np.testing.assert_allclose(neural.ridge.theta, linear.models[0].theta, atol=1e-10)
        assert neural.retrain_count == 0

    def test_weights_constant_within_epoch(self) -> None:
        agent = make_agent(_config(Algorithm.NEURAL_LINUCB, epoch_length=4))
        assert isinstance(agent, NeuralLinUCBAgent)
        rounds = list(synth_rounds("linear", 2, 3, 8, seed=2))

        for ctx in rounds[:3]:
            agent.observe(ctx, agent.select_arm(ctx), 1.0)
            assert not agent.maybe_retrain(ctx.t)
            assert agent.params is agent.initial_params

        agent.observe(rounds[3], agent.select_arm(rounds[3]), 1.0)
        assert agent.maybe_retrain(4)
        assert agent.retrain_count == 1
        assert len(agent.buffer) == 4
        assert not np.array_equal(agent.params.flat_weights, agent.initial_params.flat_weights)
        np.testing.assert_array_equal(agent.params.theta, agent.initial_params.theta)

        trained = agent.params
        agent.observe(rounds[4], agent.select_arm(rounds[4]), 1.0)
        assert not agent.maybe_retrain(5)
        assert agent.params is trained

    def test_epoch_only_training_window(self) -> None:
        config = _config(
            Algorithm.NEURAL_LINUCB,
            train=QUICK_TRAIN.model_copy(update={"history_mode": HistoryMode.EPOCH}),
        )
        agent = make_agent(config)
        assert isinstance(agent, NeuralLinUCBAgent)
        _play(agent, 8)

        window = agent.buffer.labelled(HistoryMode.EPOCH, 8, 4)
        assert len(window) == 4
        assert agent.buffer.rounds[-4:] == [5, 6, 7, 8]
        assert agent.retrain_count == 2

    def test_labels_are_post_update_estimates(self) -> None:
        agent = NeuralLinUCBAgent(_config(Algorithm.NEURAL_LINUCB), feature_map=_identity)
        ctx = _round(1, [[1, 0], [0, 1], [1, 1]])
        agent.observe(ctx, 0, 1.0)

        np.testing.assert_array_equal(agent.buffer.thetas[0], agent.ridge.theta)

    def test_deterministic_under_seed(self) -> None:
        first = _play(make_agent(_config(Algorithm.NEURAL_LINUCB, seed=3)), 20)
        second = _play(make_agent(_config(Algorithm.NEURAL_LINUCB, seed=3)), 20)
        assert first == second


class TestLinUCB:
    def test_disjoint_models_update_in_isolation(self) -> None:
        agent = LinUCBAgent(_config(Algorithm.LINUCB))
        agent.observe(_round(1, [[1, 0], [0, 1], [1, 1]]), 1, 1.0)

        assert [m.update_count for m in agent.models] == [0, 1, 0]
        np.testing.assert_array_equal(agent.models[0].a, np.eye(4))

    def test_shared_model(self) -> None:
        agent = LinUCBAgent(_config(Algorithm.LINUCB), disjoint=False)
        agent.observe(_round(1, [[1, 0], [0, 1], [1, 1]]), 2, 1.0)

        assert len(agent.models) == 1
        assert agent.model_for(0) is agent.model_for(2)

    @settings(max_examples=25, deadline=None)
    @given(scale=st.floats(min_value=0.1, max_value=50.0), seed=st.integers(0, 1000))
    def test_argmax_invariant_to_reward_scale(self, scale: float, seed: int) -> None:
        def run(factor: float) -> int:
            agent = LinUCBAgent(
                _config(Algorithm.LINUCB, alpha=AlphaSchedule.fixed(0.5 * factor)),
                disjoint=False,
            )
            rounds = list(synth_rounds("linear", 2, 3, 6, seed=seed, noise=0.0))
            for ctx in rounds[:5]:
                arm = (ctx.t - 1) % 3
                agent.observe(ctx, arm, factor * float(ctx.rewards[arm]))
            return int(np.argmax(agent.scores(rounds[5])))
        assert run(1.0) == run(scale)


class TestNeuralUCBDiag:
    def test_z_starts_at_lambda_and_grows(self) -> None:
        agent = NeuralUCBDiagAgent(_config(Algorithm.NEURALUCB_DIAG, lam=2.0))
        assert agent.z.shape == (4 + agent.params.shape.num_weights,)
        np.testing.assert_array_equal(agent.z, 2.0)

        _play(agent, 9)

        assert np.all(agent.z >= 2.0)
        assert agent.z.max() > 2.0

    def test_scores_match_brute_force(self) -> None:
        config = _config(Algorithm.NEURALUCB_DIAG, alpha=AlphaSchedule.fixed(0.3))
        agent = NeuralUCBDiagAgent(config)
        _play(agent, 6)
        ctx = next(iter(synth_rounds("linear", 2, 3, 7, seed=8)))

        values, grads = grad_f_batch(agent.params, ctx.features)
        bonus = [np.sqrt(np.sum(g**2 / (8 * agent.z))) for g in grads]
        np.testing.assert_allclose(agent.scores(ctx), values + 0.3 * np.array(bonus))

    def test_retrain_moves_theta(self) -> None:
        agent = NeuralUCBDiagAgent(_config(Algorithm.NEURALUCB_DIAG))
        _play(agent, 4)

        assert agent.retrain_count == 1
        assert not np.array_equal(agent.params.theta, agent.initial_params.theta)


class TestNeuralLinear:
    def test_alpha_zero_uses_point_estimate(self) -> None:
        config = _config(Algorithm.NEURAL_LINEAR, alpha=AlphaSchedule.fixed(0.0))
        agent = NeuralLinearAgent(config, feature_map=_identity)
        _play(agent, 5)

        np.testing.assert_array_equal(agent.sample_theta(0.0), agent.ridge.theta)

    def test_samples_spread_around_estimate(self) -> None:
        agent = NeuralLinearAgent(_config(Algorithm.NEURAL_LINEAR), feature_map=_identity)
        _play(agent, 5)

        samples = np.array([agent.sample_theta(1.0) for _ in range(4000)])
        np.testing.assert_allclose(samples.mean(axis=0), agent.ridge.theta, atol=0.1)
        np.testing.assert_allclose(np.cov(samples.T), agent.ridge.a_inv, atol=0.1)

    def test_deterministic_under_seed(self) -> None:
        first = _play(make_agent(_config(Algorithm.NEURAL_LINEAR, seed=11)), 15)
        second = _play(make_agent(_config(Algorithm.NEURAL_LINEAR, seed=11)), 15)
        assert first == second


class TestUniform:
    def test_pulls_every_arm(self) -> None:
        arms = _play(UniformAgent(_config(Algorithm.UNIFORM)), 200)
        assert set(arms) == {0, 1, 2}

    def test_does_not_score(self) -> None:
        with pytest.raises(NotImplementedError):
            UniformAgent(_config(Algorithm.UNIFORM)).scores(_round(1, [[1, 0], [0, 1], [1, 1]]))
