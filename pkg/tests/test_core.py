import math

import numpy as np
import pytest
from scipy import stats

from latent_evo import (LatentShape, LatentTensor, SeededRng, l2_norm,
                        sample_standard_gaussian, shell_distance,
                        tensor_from_bytes, tensor_to_bytes)
from latent_evo.errors import BadConfig, IoError, ShapeMismatch

SHAPE_3072 = LatentShape(4, 24, 32)


def test_shape_validation():
    with pytest.raises(BadConfig):
        LatentShape(0, 4, 4)
    with pytest.raises(BadConfig):
        LatentShape(1, 1, 2)  # d = 2 < 4
    assert LatentShape(4, 24, 32).dim == 3072


def test_tensor_rejects_nonfinite_and_wrong_size():
    shape = LatentShape(1, 2, 2)
    with pytest.raises(BadConfig):
        LatentTensor(shape, np.array([1.0, np.nan, 0.0, 0.0]))
    with pytest.raises(ShapeMismatch):
        LatentTensor(shape, np.zeros(5))


def test_sample_statistics():
    z = sample_standard_gaussian(SHAPE_3072, SeededRng(7))
    assert -0.06 <= z.values.mean() <= 0.06
    assert 0.92 <= z.values.var() <= 1.08


def test_sampling_is_pure():
    rng = SeededRng(7)
    a = sample_standard_gaussian(SHAPE_3072, rng)
    b = sample_standard_gaussian(SHAPE_3072, rng)
    assert np.array_equal(a.values, b.values)


def test_seeds_give_disjoint_draws():
    a = sample_standard_gaussian(SHAPE_3072, SeededRng(7))
    b = sample_standard_gaussian(SHAPE_3072, SeededRng(8))
    assert np.mean(a.values != b.values) > 0.99


def test_child_streams_differ():
    rng = SeededRng(3)
    kids = [rng.child(i).gaussian(64) for i in range(8)]
    for i in range(8):
        for j in range(i + 1, 8):
            assert not np.array_equal(kids[i], kids[j])
    # nested indices address distinct streams too
    assert not np.array_equal(rng.child(1, 2).gaussian(8),
                              rng.child(2, 1).gaussian(8))


def test_norms():
    zero = LatentTensor(SHAPE_3072, np.zeros(3072))
    assert l2_norm(zero) == 0.0
    one_hot = np.zeros(3072)
    one_hot[17] = 3.0
    assert l2_norm(LatentTensor(SHAPE_3072, one_hot)) == 3.0
    assert shell_distance(zero) == pytest.approx(math.sqrt(3072))
    z = sample_standard_gaussian(SHAPE_3072, SeededRng(7))
    root_d = math.sqrt(3072)
    assert root_d - 4 <= l2_norm(z) <= root_d + 4


def test_gaussian_marginals_ks():
    # 10^5 pooled coordinates against the standard normal CDF
    pooled = np.concatenate([
        SeededRng(11).child(i).gaussian(20000) for i in range(5)])
    stat = stats.kstest(pooled, "norm")
    assert stat.pvalue > 0.01


def test_annulus_concentration():
    d = 3072
    root_d = math.sqrt(d)
    norms = np.empty(10000)
    for i in range(10000):
        z = SeededRng(1234).child(i).gaussian(d)
        norms[i] = np.linalg.norm(z)
    expected_mean = root_d * (1.0 - 1.0 / (4 * d))
    assert abs(norms.mean() - expected_mean) < 0.1
    assert np.mean(np.abs(norms - root_d) < 4.0) >= 0.999


def test_container_round_trip():
    z = sample_standard_gaussian(LatentShape(2, 3, 5), SeededRng(9))
    assert tensor_from_bytes(tensor_to_bytes(z)) == z


def test_container_rejects_corruption():
    data = tensor_to_bytes(
        sample_standard_gaussian(LatentShape(1, 2, 2), SeededRng(0)))
    with pytest.raises(IoError):
        tensor_from_bytes(data[:10])
    with pytest.raises(IoError):
        tensor_from_bytes(b"XXXX" + data[4:])
    with pytest.raises(IoError):
        tensor_from_bytes(data + b"\x00" * 8)
