"""Stratified block decomposition, spectra, SLEM and interlacing."""

import math

import numpy as np
import pytest

from fusedstar.spectral import (
    SpectralReport,
    SpectrumSizeError,
    StratifiedBlocks,
    block_spectrum,
    block_structure,
    build_blocks,
    full_spectrum,
    interlacing_check,
    perron_vector,
    stratification_basis,
)
from fusedstar.topology import InvalidParameterError, TfsParams, build_topology
from fusedstar.weighting import (
    OrbitWeights,
    assemble_weight_matrix,
    metropolis_weights,
)

# frozen optimum for (3,4,4,3); interior weights sit at 1/2
OPT_343 = OrbitWeights(
    {-3: 0.5, -2: 0.5, -1: 0.16361147830979006,
     1: 0.2886837942392352, 2: 0.5, 3: 0.5, 4: 0.5}
)
S_343 = 0.9545044654072468


def random_weights(params, seed):
    rng = np.random.default_rng(seed)
    return OrbitWeights(
        {label: rng.uniform(0.05, 0.5) for label in params.orbit_labels}
    )


def weighted_multiset(report: SpectralReport) -> np.ndarray:
    values = []
    for value, mult in report.eigenvalues:
        values.extend([value] * mult)
    return np.sort(np.array(values))


def test_center_block_small_example():
    p = TfsParams(1, 2, 1, 2)
    blocks = build_blocks(p, OrbitWeights({-1: 0.25, 1: 0.25}))
    r = math.sqrt(2) / 4
    expected = np.array([[0.75, r, 0.0], [r, 0.0, r], [0.0, r, 0.75]])
    assert np.allclose(blocks.block_center, expected, atol=1e-15)


def test_arm_block_entries():
    p = TfsParams(3, 2, 2, 3)
    ow = OrbitWeights({-3: 0.1, -2: 0.2, -1: 0.3, 1: 0.4, 2: 0.45})
    blocks = build_blocks(p, ow)
    minus = blocks.block_minus
    assert np.allclose(np.diag(minus), [1 - 0.1, 1 - 0.1 - 0.2, 1 - 0.2 - 0.3])
    assert np.allclose(np.diag(minus, 1), [0.1, 0.2])
    plus = blocks.block_plus
    assert np.allclose(np.diag(plus), [1 - 0.4 - 0.45, 1 - 0.45])
    assert np.allclose(np.diag(plus, 1), [0.45])
    # coupling rows of the center block carry sqrt(n) factors
    center = blocks.block_center
    m1 = p.m1
    assert center[m1, m1 - 1] == pytest.approx(math.sqrt(p.n1) * 0.3)
    assert center[m1, m1 + 1] == pytest.approx(math.sqrt(p.n2) * 0.4)
    assert center[m1, m1] == pytest.approx(1 - p.n1 * 0.3 - p.n2 * 0.4)


def test_center_block_embeds_arm_blocks():
    p = TfsParams(2, 3, 3, 4)
    blocks = build_blocks(p, random_weights(p, 7))
    c = blocks.block_center
    assert np.allclose(c[:2, :2], blocks.block_minus)
    assert np.allclose(c[-3:, -3:], blocks.block_plus)


def test_multiplicities_and_structure():
    p = TfsParams(3, 4, 4, 3)
    blocks = build_blocks(p, OPT_343)
    assert blocks.multiplicities == (3, 1, 2)
    sizes = block_structure(p)
    assert sizes == (3, 3, 3, 8, 4, 4)
    assert sum(sizes) == p.n_nodes


def test_perron_pair():
    p = TfsParams(3, 2, 2, 3)
    blocks = build_blocks(p, random_weights(p, 3))
    v = perron_vector(p)
    assert np.linalg.norm(blocks.block_center @ v - v, np.inf) <= 1e-12
    assert np.linalg.norm(v) == pytest.approx(1.0)


def test_basis_unitary():
    for params in [(2, 2, 2, 2), (3, 4, 4, 3), (2, 3, 1, 5)]:
        p = TfsParams(*params)
        phi = stratification_basis(p)
        eye = phi.conj().T @ phi
        assert np.max(np.abs(eye - np.eye(p.n_nodes))) <= 1e-12


def test_basis_trivial_branches_is_permutation():
    p = TfsParams(2, 1, 3, 1)
    phi = stratification_basis(p)
    assert np.max(np.abs(phi.imag)) <= 1e-15
    real = np.abs(phi.real)
    assert np.allclose(real @ real.T, np.eye(p.n_nodes), atol=1e-15)
    assert np.all(np.isin(np.round(real, 12), [0.0, 1.0]))


def test_basis_transport_is_block_diagonal():
    p = TfsParams(2, 2, 2, 2)
    ow = random_weights(p, 11)
    W = assemble_weight_matrix(p, ow).entries
    phi = stratification_basis(p)
    transported = phi.conj().T @ W @ phi
    assert np.max(np.abs(transported.imag)) <= 1e-12

    sizes = block_structure(p)
    mask = np.zeros_like(W, dtype=bool)
    start = 0
    for size in sizes:
        mask[start : start + size, start : start + size] = True
        start += size
    off_block = np.where(mask, 0.0, np.abs(transported))
    assert off_block.max() <= 1e-12

    # diagonal blocks reproduce build_blocks entrywise
    blocks = build_blocks(p, ow)
    expected = [blocks.block_minus] * (p.n1 - 1)
    expected.append(blocks.block_center)
    expected.extend([blocks.block_plus] * (p.n2 - 1))
    start = 0
    for size, ref in zip(sizes, expected):
        sub = transported[start : start + size, start : start + size].real
        assert np.allclose(sub, ref, atol=1e-12)
        start += size


@pytest.mark.parametrize("params", [(2, 2, 2, 2), (3, 2, 2, 3), (2, 3, 4, 2)])
def test_block_spectrum_matches_dense(params):
    p = TfsParams(*params)
    ow = random_weights(p, sum(params))
    blocks = build_blocks(p, ow)
    via_blocks = weighted_multiset(block_spectrum(blocks))
    dense = np.sort(
        np.linalg.eigvalsh(assemble_weight_matrix(p, ow).entries)
    )
    assert via_blocks.shape == dense.shape
    assert np.max(np.abs(via_blocks - dense)) <= 1e-10


def test_block_spectrum_zero_weights():
    p = TfsParams(2, 3, 2, 3)
    report = block_spectrum(build_blocks(p, OrbitWeights.constant(p, 0.0)))
    values = weighted_multiset(report)
    assert values.shape == (p.n_nodes,)
    assert np.allclose(values, 1.0, atol=1e-14)
    assert report.lambda2 == 1.0
    assert report.slem == 1.0


def test_block_spectrum_at_optimum():
    p = TfsParams(3, 4, 4, 3)
    report = block_spectrum(build_blocks(p, OPT_343))
    assert report.lambda2 == pytest.approx(S_343, abs=1e-9)
    # the smallest eigenvalue mirrors lambda2 exactly at the optimum
    assert report.lambda_min == pytest.approx(-S_343, abs=1e-9)
    assert report.slem == max(report.lambda2, -report.lambda_min)
    assert report.theta2 == pytest.approx(math.acos(report.lambda2))


def test_spectral_report_leading_eigenvalue():
    p = TfsParams(2, 2, 3, 3)
    report = block_spectrum(build_blocks(p, random_weights(p, 5)))
    assert report.eigenvalues[0][0] == pytest.approx(1.0, abs=1e-10)


def test_full_spectrum_identity():
    p = TfsParams(2, 2, 2, 2)
    wm = assemble_weight_matrix(p, OrbitWeights.constant(p, 0.0))
    report = full_spectrum(wm)
    assert report.eigenvalues[0][0] == pytest.approx(1.0)
    assert report.lambda2 == pytest.approx(1.0)


def test_full_spectrum_metropolis_benchmark():
    g = build_topology(TfsParams(3, 4, 4, 3))
    report = full_spectrum(metropolis_weights(g))
    assert report.slem == pytest.approx(0.97194, abs=5e-4)


def test_full_spectrum_size_guard():
    p = TfsParams(3, 2, 2, 3)
    wm = assemble_weight_matrix(p, OrbitWeights.constant(p, 0.25))
    with pytest.raises(SpectrumSizeError):
        full_spectrum(wm, max_size=10)


@pytest.mark.parametrize("seed", range(4))
def test_interlacing_random_weights(seed):
    p = TfsParams(2, 2, 2, 2)
    blocks = build_blocks(p, random_weights(p, seed))
    assert interlacing_check(blocks) <= 1e-10


def test_interlacing_symmetric_network():
    p = TfsParams(3, 3, 3, 3)
    blocks = build_blocks(p, random_weights(p, 13))
    assert interlacing_check(blocks) <= 1e-10


def test_interlacing_at_optimum_ties_lambda2():
    p = TfsParams(3, 4, 4, 3)
    blocks = build_blocks(p, OPT_343)
    assert interlacing_check(blocks) <= 1e-10
    # at the optimum lambda2 is shared with the arm-only matrix W'
    arm_top = max(
        np.linalg.eigvalsh(blocks.block_minus).max(),
        np.linalg.eigvalsh(blocks.block_plus).max(),
    )
    assert arm_top == pytest.approx(S_343, abs=1e-9)


def test_interlacing_requires_two_branches():
    p = TfsParams(2, 1, 2, 3)
    blocks = build_blocks(p, OrbitWeights.constant(p, 0.3))
    with pytest.raises(InvalidParameterError):
        interlacing_check(blocks)
