import networkx as nx
import numpy as np
import pytest

from kernelsrc.src.errors import NegativeCycleError, OrderMismatchError
from kernelsrc.src.floyd_warshall import (
    INF, DistanceMatrix, FwConfig, count_block_touches, count_sweep_touches, fw_iterative, fw_recursive,
    fwi_kernel,
)
from kernelsrc.src.generators import gen_distances, gen_graph


def dijkstra_oracle(n, edges):
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    for u, v, w in edges:
        if not g.has_edge(u, v) or g[u][v]["weight"] > w:
            g.add_edge(u, v, weight=w)
    d = np.full((n, n), INF)
    for src, lengths in nx.all_pairs_dijkstra_path_length(g):
        for dst, length in lengths.items():
            d[src, dst] = length
    return d


def test_edgeless_graph_unchanged():
    w = DistanceMatrix.from_edges(4, [])
    assert fw_iterative(w) == w


def test_three_vertex_example():
    w = DistanceMatrix.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0)])
    assert fw_iterative(w).dist[0, 2] == 2.0


def test_iterative_matches_dijkstra():
    edges = gen_graph(32, 0.15, 2, weighted=True)
    w = DistanceMatrix.from_edges(32, edges)
    assert np.array_equal(fw_iterative(w).dist, dijkstra_oracle(32, edges))


def test_fwi_kernel_self_call_is_iterative():
    w = gen_distances(16, 0.2, 1)
    d = w.dist.copy()
    fwi_kernel(d, d, d)
    assert np.array_equal(d, fw_iterative(w).dist)


def test_fwi_kernel_infinite_b_leaves_a():
    a = np.array([[3.0, 1.0], [2.0, 7.0]])
    before = a.copy()
    fwi_kernel(a, np.full((2, 2), INF), np.zeros((2, 2)))
    assert np.array_equal(a, before)


def test_fwi_kernel_disjoint_blocks():
    a = np.full((2, 2), 5.0)
    b = np.array([[1.0, 2.0], [3.0, 4.0]])
    c = np.ones((2, 2))
    fwi_kernel(a, b, c)
    assert np.array_equal(a, [[2.0, 2.0], [4.0, 4.0]])


def test_fwi_kernel_order_mismatch():
    with pytest.raises(OrderMismatchError):
        fwi_kernel(np.zeros((2, 2)), np.zeros((3, 3)), np.zeros((2, 2)))


def test_recursive_with_large_base_is_iterative():
    w = gen_distances(12, 0.3, 3)
    assert fw_recursive(w, FwConfig(64)) == fw_iterative(w)


def test_recursive_n8_base2():
    w = gen_distances(8, 0.4, 11)
    assert fw_recursive(w, FwConfig(2)) == fw_iterative(w)


def test_recursive_padded_input():
    w = gen_distances(5, 0.4, 12)
    assert fw_recursive(w, FwConfig(1)) == fw_iterative(w)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 16, 33, 64])
@pytest.mark.parametrize("base", [1, 2, 4, 8, 64])
def test_recursive_equals_iterative(n, base):
    if base == 1 and n > 16:
        pytest.skip("scalar base case on padded order 64 is slow")
    w = gen_distances(n, 0.1, n + base)
    assert fw_recursive(w, FwConfig(base)) == fw_iterative(w)


def test_recursive_call_order():
    calls = []
    w = gen_distances(4, 0.5, 0)
    fw_recursive(w, FwConfig(2), observer=lambda a, b, c, size: calls.append((a, b, c)))
    h = 2
    assert calls == [
        ((0, 0), (0, 0), (0, 0)),
        ((0, h), (0, 0), (0, h)),
        ((h, 0), (h, 0), (0, 0)),
        ((h, h), (h, 0), (0, h)),
        ((h, h), (h, h), (h, h)),
        ((h, 0), (h, h), (h, 0)),
        ((0, h), (0, h), (h, h)),
        ((0, 0), (0, h), (h, 0)),
    ]


def test_output_properties():
    d = fw_iterative(gen_distances(24, 0.2, 5)).dist
    # triangle inequality
    assert np.all(d[:, None, :] <= d[:, :, None] + d[None, :, :])
    # idempotence
    assert fw_iterative(DistanceMatrix(d)).dist.tolist() == d.tolist()


@pytest.mark.parametrize("run", [fw_iterative, lambda w: fw_recursive(w, FwConfig(1))])
def test_negative_cycle_detected(run):
    w = DistanceMatrix.from_edges(2, [(0, 1, 1.0), (1, 0, -3.0)])
    with pytest.raises(NegativeCycleError, match="negative cycle"):
        run(w)


def test_negative_weights_without_cycle():
    edges = [(0, 1, 4.0), (0, 2, 5.0), (2, 1, -2.0)]
    w = DistanceMatrix.from_edges(3, edges)
    assert fw_recursive(w, FwConfig(1)).dist[0, 1] == 3.0


# ------------------------------------------------------------
# block-touch proxy
# ------------------------------------------------------------
def test_touches_single_block():
    w = gen_distances(16, 0.2, 0)
    assert count_block_touches(w, FwConfig(16)) == 1
    assert count_sweep_touches(w, FwConfig(16)) == 1


def test_touches_deterministic():
    w = gen_distances(32, 0.1, 1)
    assert count_block_touches(w, FwConfig(4)) == count_block_touches(w, FwConfig(4))


def test_recursive_touches_fewer_than_sweep():
    w = gen_distances(64, 0.05, 2)
    recursive = count_block_touches(w, FwConfig(8))
    sweep = count_sweep_touches(w, FwConfig(8))
    assert 0 < recursive < sweep


def float_distances(n, density, seed):
    rng = np.random.default_rng(seed)
    edges = [(u, v, float(rng.uniform(0.1, 10.0))) for u, v, _ in gen_graph(n, density, seed, weighted=True)]
    return DistanceMatrix.from_edges(n, edges)


def test_observed_sweep_matches_plain_sweep():
    w = float_distances(40, 0.2, 3)
    calls = []
    observed = fw_iterative(w, FwConfig(16), observer=lambda a, b, c, size: calls.append((a, b, c, size)))
    assert observed == fw_iterative(w)
    # 40 rounds over a 3 x 3 grid of tiles of order 16
    assert len(calls) == 40 * 9
    assert calls[0] == ((0, 0), (0, 0), (0, 0), 16)
    assert calls[-1] == ((32, 32), (32, 32), (32, 32), 16)


def test_sweep_touches_follow_the_tile_walk():
    w = gen_distances(8, 0.3, 4)
    # 8 rounds over a 2 x 2 tile grid, at most three new tiles per visit
    touches = count_sweep_touches(w, FwConfig(4))
    assert 8 < touches <= 8 * 4 * 3
    assert count_sweep_touches(w, FwConfig(8)) == 1


@pytest.mark.parametrize("density", [0.1, 0.5, 1.0])
@pytest.mark.parametrize("n", [16, 33, 64])
def test_recursive_equals_iterative_by_density(n, density):
    w = gen_distances(n, density, n)
    assert fw_recursive(w, FwConfig(8)) == fw_iterative(w)


def test_recursive_float_weights_within_tolerance():
    w = float_distances(48, 0.3, 7)
    got, expected = fw_recursive(w, FwConfig(4)).dist, fw_iterative(w).dist
    assert np.allclose(got, expected, rtol=1e-12, atol=0)


def test_recursive_output_properties():
    d = fw_recursive(gen_distances(24, 0.2, 5), FwConfig(4)).dist
    assert np.all(d[:, None, :] <= d[:, :, None] + d[None, :, :])
    assert fw_recursive(DistanceMatrix(d), FwConfig(4)).dist.tolist() == d.tolist()


def test_recursive_touches_fewer_than_sweep_at_256():
    w = gen_distances(256, 0.02, 8)
    cfg = FwConfig(64)
    assert count_block_touches(w, cfg) < count_sweep_touches(w, cfg)
