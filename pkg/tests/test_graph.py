import numpy as np
import pytest

from starclique import graph as gr


def test_leaves_from_alpha_examples():
    assert gr.leaves_from_alpha(100, 0.5) == 10
    assert gr.leaves_from_alpha(100, 0.0) == 1
    assert gr.leaves_from_alpha(10, 1.5) == 31  # floor(31.62...)


def test_leaves_from_alpha_rejects_bad_input():
    with pytest.raises(ValueError):
        gr.leaves_from_alpha(2, 0.5)
    with pytest.raises(ValueError):
        gr.leaves_from_alpha(100, -0.1)


def test_leaves_from_alpha_lands_on_exact_powers():
    # pow() may come back a hair under the exact integer; the floor must not
    # drop to the integer below
    assert gr.leaves_from_alpha(4096, 1.5) == 262144
    assert gr.leaves_from_alpha(1024, 0.5) == 32
    assert gr.leaves_from_alpha(10000, 2.0) == 10**8
    assert gr.leaves_from_alpha(65536, 1.0) == 65536


def test_build_graph_smallest():
    g = gr.build_graph(3, 1)
    assert g.n_vertices == 4
    assert g.arc_count == 8
    assert g.degree[g.hub] == 3


def test_build_graph_counts():
    g = gr.build_graph(100, 10)
    assert g.n_vertices == 110
    assert g.arc_count == 9920


def test_build_graph_rejects_bad_sizes():
    with pytest.raises(ValueError):
        gr.build_graph(2, 1)
    with pytest.raises(ValueError):
        gr.build_graph(10, 0)


def test_build_graph_rejects_addressable_overflow():
    with pytest.raises(ValueError):
        gr.build_graph(4_000_000_000, 1)


@pytest.mark.parametrize(
    "n,m",
    [(3, 1), (3, 200), (4, 2), (10, 7), (50, 3), (100, 10), (200, 1), (200, 200)],
)
def test_graph_invariants(n, m):
    g = gr.build_graph(n, m)
    arcs = np.arange(g.arc_count)

    # inverse is an involution without fixed points and swaps the endpoints
    assert np.array_equal(g.inverse[g.inverse], arcs)
    assert not np.any(g.inverse == arcs)
    assert np.array_equal(g.origin[g.inverse], g.terminus)
    assert np.array_equal(g.terminus[g.inverse], g.origin)

    # degrees
    assert g.degree[g.hub] == n - 1 + m
    assert np.all(g.degree[1:n] == n - 1)
    assert np.all(g.degree[n:] == 1)
    assert int(g.degree.sum()) == g.arc_count

    # class labels recomputed from the endpoints agree with the stored ones
    recomputed = np.full(g.arc_count, gr.ArcClass.CLIQUE_INTERIOR, dtype=np.int64)
    leaf_origin = g.origin >= n
    leaf_terminus = g.terminus >= n
    recomputed[(g.terminus == g.hub) & ~leaf_origin] = gr.ArcClass.CLIQUE_IN
    recomputed[(g.origin == g.hub) & ~leaf_terminus] = gr.ArcClass.CLIQUE_OUT
    recomputed[leaf_origin] = gr.ArcClass.STAR_IN
    recomputed[leaf_terminus] = gr.ArcClass.STAR_OUT
    assert np.array_equal(recomputed, g.arc_class)

    # every leaf has exactly one incoming and one outgoing arc, both at the hub
    star_in = g.arc_class == gr.ArcClass.STAR_IN
    star_out = g.arc_class == gr.ArcClass.STAR_OUT
    assert np.array_equal(np.sort(g.origin[star_in]), np.arange(n, n + m))
    assert np.array_equal(np.sort(g.terminus[star_out]), np.arange(n, n + m))
    assert np.all(g.terminus[star_in] == g.hub)
    assert np.all(g.origin[star_out] == g.hub)


def test_class_sizes_examples():
    assert gr.class_sizes(100, 10) == (9702, 99, 99, 10, 10)
    assert gr.class_sizes(3, 1) == (2, 2, 2, 1, 1)


@pytest.mark.parametrize("n,m", [(3, 1), (7, 5), (41, 13), (200, 77)])
def test_class_sizes_partition(n, m):
    sizes = gr.class_sizes(n, m)
    assert sum(sizes) == n * (n - 1) + 2 * m
    g = gr.build_graph(n, m)
    assert np.array_equal(
        np.bincount(g.arc_class, minlength=5), np.asarray(sizes)
    )


def test_inverse_class_map():
    g = gr.build_graph(9, 4)
    expected = np.asarray([gr.INVERSE_CLASS[c] for c in g.arc_class])
    assert np.array_equal(g.arc_class[g.inverse], expected)
