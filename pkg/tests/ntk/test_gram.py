import numpy as np
import pytest

from neural_linucb.exceptions import BanditConfigError
from neural_linucb.network.mlp import init_params
from neural_linucb.network.models import NetworkShape
from neural_linucb.ntk.gram import empirical_gram, gram_convergence, limit_gram, mean_errors
from tests.conftest import duplicated_unit


def _points(n: int, raw_dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.stack([duplicated_unit(rng.normal(size=raw_dim)) for _ in range(n)])


class TestEmpiricalGram:
    def test_positive_semidefinite_for_every_seed(self) -> None:
        points = _points(6, 3, seed=0)
        shape = NetworkShape(input_dim=6, width=32, depth=3)
        for seed in range(5):
            gram = empirical_gram(init_params(shape, seed), points)
            np.testing.assert_allclose(gram, gram.T, atol=1e-12)
            assert np.linalg.eigvalsh(gram).min() >= -1e-10

    def test_single_point_approaches_depth_times_theta_norm(self) -> None:
        point = _points(1, 4, seed=1)
        shape = NetworkShape(input_dim=8, width=2048, depth=2)
        errors = []
        for seed in range(5):
            params = init_params(shape, seed)
            expected = 2.0 * float(params.theta @ params.theta)
            errors.append(abs(empirical_gram(params, point)[0, 0] - expected) / expected)
        assert np.mean(errors) < 0.15

    def test_limit_uses_theta_norm(self) -> None:
        points = _points(3, 2, seed=2)
        theta = np.array([0.5, 0.5, 0.5, 0.5])
        np.testing.assert_allclose(np.diag(limit_gram(points, 3, theta)), 3.0)


class TestGramConvergence:
    def test_rows_per_width_and_seed(self) -> None:
        rows = gram_convergence(_points(4, 2, seed=3), 2, [8, 16], seeds=[0, 1, 2])
        assert [(row.width, row.seed) for row in rows] == [
            (8, 0), (8, 1), (8, 2), (16, 0), (16, 1), (16, 2)
        ]
        assert set(mean_errors(rows)) == {8, 16}

    def test_rejects_points_without_equal_halves(self) -> None:
        points = np.array([[1.0, 0.0, 0.0, 0.0]])
        with pytest.raises(BanditConfigError, match="equal halves"):
            gram_convergence(points, 2, [8], seeds=[0])

    def test_rejects_width_below_input_dim(self) -> None:
        with pytest.raises(BanditConfigError, match="width 4"):
            gram_convergence(_points(2, 4, seed=4), 2, [4], seeds=[0])

    def test_rejects_odd_width(self) -> None:
        with pytest.raises(BanditConfigError, match="width must be even"):
            gram_convergence(_points(2, 2, seed=4), 2, [16, 9], seeds=[0])

    @pytest.mark.slow
    def test_error_decreases_with_width(self) -> None:
        points = _points(16, 4, seed=5)
        means = mean_errors(gram_convergence(points, 2, [64, 256, 1024], seeds=range(5)))
        assert means[64] > means[256] > means[1024]

    def test_wide_beats_narrow(self) -> None:
        points = _points(8, 2, seed=6)
        means = mean_errors(gram_convergence(points, 2, [16, 512], seeds=range(5)))
        assert means[512] < means[16]
