import numpy as np
import pytest

from neural_linucb.exceptions import ConvergenceError, NumericalError
from neural_linucb.ntk.kernel import ntk_matrix
from neural_linucb.ntk.spectrum import min_eigenvalue


def _points(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    raw = rng.normal(size=(n, d))
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


class TestMinEigenvalue:
    @pytest.mark.parametrize(("n", "depth"), [(4, 1), (16, 2), (64, 2), (30, 4)])
    def test_matches_dense_solver(self, n: int, depth: int) -> None:
        gram = ntk_matrix(_points(np.random.default_rng(n), n, 10), depth)
        expected = np.linalg.eigvalsh(gram.matrix)[0]
        assert min_eigenvalue(gram) == pytest.approx(expected, abs=1e-7)

    def test_orthogonal_points_at_depth_zero(self) -> None:
        gram = ntk_matrix(np.eye(6), depth=0)
        assert min_eigenvalue(gram) == pytest.approx(1.0, abs=1e-8)

    def test_duplicated_points_are_singular(self) -> None:
        rng = np.random.default_rng(1)
        points = _points(rng, 8, 6)
        gram = ntk_matrix(np.vstack([points, points[:2]]), depth=2)
        assert abs(min_eigenvalue(gram)) <= 1e-8

    def test_psd_never_reported_negative(self) -> None:
        rng = np.random.default_rng(2)
        for _ in range(5):
            gram = ntk_matrix(_points(rng, 20, 4), depth=3)
            assert min_eigenvalue(gram) >= -1e-8

    def test_plain_arrays(self) -> None:
        h = np.array([[2.0, 1.0], [1.0, 2.0]])
        assert min_eigenvalue(h) == pytest.approx(1.0)

    def test_indefinite_matrix(self) -> None:
        h = np.diag([3.0, -2.0, 1.0])
        assert min_eigenvalue(h) == pytest.approx(-2.0)

    def test_large_matrix_without_dense_check(self) -> None:
        gram = ntk_matrix(_points(np.random.default_rng(3), 100, 20), depth=1)
        expected = np.linalg.eigvalsh(gram.matrix)[0]
        assert min_eigenvalue(gram, validate=False) == pytest.approx(expected, abs=1e-7)

    def test_zero_matrix(self) -> None:
        assert min_eigenvalue(np.zeros((3, 3))) == 0.0

    def test_iteration_cap(self) -> None:
        gram = ntk_matrix(_points(np.random.default_rng(4), 30, 6), depth=2)
        with pytest.raises(ConvergenceError) as exc_info:
            min_eigenvalue(gram, tol=1e-30, max_iter=3)
        assert exc_info.value.iterations == 3

    def test_rejects_asymmetric_input(self) -> None:
        with pytest.raises(NumericalError, match="symmetric"):
            min_eigenvalue(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_rejects_non_finite_input(self) -> None:
        with pytest.raises(NumericalError):
            min_eigenvalue(np.array([[np.nan, 0.0], [0.0, 1.0]]))
