from __future__ import annotations

import json

import numpy as np
import pytest

from cubicplanar.exceptions import (
    DecompositionError,
    InvalidGraphError,
    InvalidMapError,
    InvalidNetworkError,
    RadiusGuardError,
)
from cubicplanar.graph import (
    CubicGraph,
    DecompositionTree,
    Network,
    PlanarMap,
    automorphism_count,
    canonical_form,
    check_network,
    classify_network,
    decompose,
    dual_map,
    format_graph,
    from_dict,
    insert_network,
    map_from_embedding,
    neighborhood_key,
    network_from_graph,
    parse_graph,
    read_graph,
    recompose,
    rooted_map_key,
    three_connected_components,
    to_dict,
    validate,
    write_graph,
)
from tests.helpers import (
    ALL_NETWORKS,
    isthmus_network,
    k4,
    k33,
    loop_network,
    nested_h_network,
    prism,
    series_network,
)


def test_validate_k4():
    report = validate(k4())
    assert report.valid
    assert report.cubic and report.simple and report.connected and report.planar and report.euler
    assert set(report.embedding) == {0, 1, 2, 3}
    report.raise_if_invalid()


def test_validate_k33_not_planar():
    report = validate(k33())
    assert not report.planar
    assert report.cubic
    assert "not planar" in report.violations
    with pytest.raises(InvalidGraphError, match="not planar"):
        report.raise_if_invalid()


def test_validate_doubled_edge():
    graph = CubicGraph.from_edges([*prism().edges, (0, 1)])
    report = validate(graph)
    assert not report.simple
    assert not report.cubic
    assert not report.valid


def test_cubic_graph_rejects_unknown_vertex():
    with pytest.raises(InvalidGraphError, match="not in the graph"):
        CubicGraph((0, 1), ((0, 2),))
    with pytest.raises(InvalidGraphError, match="distinct"):
        CubicGraph((0, 0), ())


def test_network_needs_root_edge():
    with pytest.raises(InvalidNetworkError, match="not joined"):
        Network(prism(), (0, 4))
    with pytest.raises(InvalidNetworkError, match="class tag"):
        Network(k4(), (0, 1), "X")  # type: ignore[arg-type]


def test_check_network_rejects_multi_edges_off_the_root():
    graph = CubicGraph.from_edges([(0, 1), (0, 1), (0, 1), (2, 3), (2, 3), (2, 3)])
    with pytest.raises(InvalidNetworkError):
        check_network(Network(graph, (0, 1)))


@pytest.mark.parametrize(
    ("name", "expected"),
    [("L", "L"), ("P-double", "P"), ("S", "S"), ("P-pair", "P"), ("I", "I"), ("H", "H")],
)
def test_classify_network(name, expected):
    assert classify_network(ALL_NETWORKS[name]()) == expected


@pytest.mark.parametrize("root", [(0, 1), (1, 0), (2, 3), (3, 1)])
def test_k4_is_polyhedral_from_every_root(root):
    network = network_from_graph(k4(), root)
    assert classify_network(network) == "H"
    tree = decompose(network)
    assert tree.kind == "polyhedral"
    assert tree.core_sizes() == [4]
    assert len(tree.children) == 5
    assert all(child.is_empty for child in tree.children)


@pytest.mark.parametrize("name", sorted(ALL_NETWORKS))
def test_decompose_recompose_round_trip(name):
    network = ALL_NETWORKS[name]()
    tree = decompose(network)
    assert tree.size == network.n
    assert tree.class_tag == classify_network(network)
    rebuilt = recompose(tree)
    assert rebuilt.poles == network.poles
    assert rebuilt.graph.same_edges(network.graph)


def test_loop_tree_shape():
    tree = decompose(loop_network())
    assert tree.kind == "loop"
    assert tree.vertices == (0, 1)
    (child,) = tree.children
    assert child.poles == (2, 3)
    assert child.class_tag == "H"


def test_series_uses_bridge_closest_to_south_pole():
    tree = decompose(series_network())
    assert tree.kind == "series"
    first, second = tree.children
    assert first.poles == (0, 2)
    assert second.poles == (5, 1)
    assert tree.core_sizes() == [4, 4]


def test_isthmus_children_are_inner_networks():
    tree = decompose(isthmus_network())
    assert tree.kind == "isthmus"
    assert [c.poles for c in tree.children] == [(2, 3), (6, 7)]
    assert tree.size == 10


def test_nested_polyhedral_core_order():
    tree = decompose(nested_h_network())
    assert tree.core is not None
    assert tree.core.edges == ((0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
    kinds = [child.kind for child in tree.children]
    assert kinds == ["edge", "edge", "edge", "edge", "polyhedral"]
    assert tree.children[-1].poles == (4, 5)


def test_tree_dict_round_trip():
    tree = decompose(nested_h_network())
    data = json.loads(json.dumps(tree.to_dict()))
    assert data["size"] == 8
    assert data["class"] == "H"
    again = DecompositionTree.from_dict(data)
    assert recompose(again).graph.same_edges(nested_h_network().graph)


def test_recompose_rejects_empty_slot():
    with pytest.raises(DecompositionError, match="empty slot"):
        recompose(DecompositionTree("edge"))


def test_three_connected_components_prism():
    (component,) = three_connected_components(prism())
    assert component.same_edges(prism())


@pytest.mark.parametrize("rule", ["smallest", "largest"])
def test_three_connected_components_root_independent(rule):
    graph = series_network().graph
    components = three_connected_components(graph, rule)
    assert [c.n for c in components] == [4, 4]
    assert sorted(tuple(c.vertices) for c in components) == [(0, 2, 3, 4), (1, 5, 6, 7)]


def test_three_connected_components_relabel_invariant():
    graph = nested_h_network().graph
    relabelled = graph.relabel({v: 20 - v for v in graph.vertices})
    sizes = [c.n for c in three_connected_components(relabelled, "largest")]
    assert sizes == [c.n for c in three_connected_components(graph)]


def test_insert_nothing_is_identity():
    core = k4()
    assert insert_network(core, {(0, 1): None}).same_edges(core)


def test_insert_k4_network_into_k4():
    core = k4()
    network = network_from_graph(k4(), (0, 1))
    graph = insert_network(core, {(2, 3): network})
    assert graph.n == 8
    assert validate(graph).valid
    assert [c.n for c in three_connected_components(graph)] == [4, 4]


def test_insert_rejects_isthmus_and_missing_edges():
    with pytest.raises(InvalidNetworkError, match="isthmus"):
        insert_network(k4(), {(0, 1): isthmus_network()})
    with pytest.raises(InvalidGraphError, match="edge of the core"):
        insert_network(prism(), {(0, 4): network_from_graph(k4())})


def test_canonical_form_invariant_under_relabelling():
    graph = prism()
    mapping = {0: 5, 1: 3, 2: 4, 3: 0, 4: 2, 5: 1}
    assert canonical_form(graph) == canonical_form(graph.relabel(mapping))
    assert canonical_form(graph) != canonical_form(k33())
    assert canonical_form(k4()) != canonical_form(prism())


def test_automorphism_counts():
    assert automorphism_count(k4()) == 24
    assert automorphism_count(prism()) == 12
    assert automorphism_count(k33()) == 72


def test_neighborhood_keys():
    graph = nested_h_network().graph
    zero = {neighborhood_key(graph, v, 0) for v in graph.vertices}
    assert len(zero) == 1
    assert len({neighborhood_key(prism(), v, 2) for v in range(6)}) == 1
    assert neighborhood_key(graph, 0, 1) != neighborhood_key(graph, 2, 1)
    assert neighborhood_key(graph, 0, 1) == neighborhood_key(graph, 1, 1)
    assert neighborhood_key(graph, 0, 1).size == 4
    with pytest.raises(RadiusGuardError, match="outside"):
        neighborhood_key(graph, 0, 7)


def test_planar_map_of_tetrahedron():
    tetra = map_from_embedding(k4().with_embedding(validate(k4()).embedding))
    tetra.check()
    assert (tetra.num_vertices, tetra.num_edges, tetra.num_faces) == (4, 6, 4)
    assert tetra.is_simple
    assert list(tetra.face_degrees()) == [3, 3, 3, 3]
    dual = dual_map(tetra)
    assert np.array_equal(dual_map(dual).sigma, tetra.sigma)
    assert sorted(dual.face_degrees()) == sorted(tetra.vertex_degrees())
    assert rooted_map_key(dual) == rooted_map_key(tetra)
    assert rooted_map_key(tetra.mirror()) == rooted_map_key(tetra)
    graph, root = dual.to_graph()
    assert validate(graph).valid
    assert root[0] != root[1]


def test_planar_map_rejects_bad_permutations():
    with pytest.raises(InvalidMapError, match="involution"):
        PlanarMap(np.array([0, 1]), np.array([0, 1]))
    with pytest.raises(InvalidMapError, match="permutations"):
        PlanarMap(np.array([1, 0]), np.array([0, 0]))


def test_graph_text_round_trip(tmp_path):
    path = tmp_path / "g.txt"
    write_graph(path, prism(), root=(0, 3))
    graph, root = read_graph(path)
    assert graph.same_edges(prism())
    assert root == (0, 3)
    assert format_graph(k4()).splitlines()[0] == "4 6"


def test_parse_graph_errors():
    with pytest.raises(InvalidGraphError, match="announces"):
        parse_graph("4 6\n0 1\n")
    with pytest.raises(InvalidGraphError, match="labels"):
        parse_graph("2 1\n0 5\n")
    with pytest.raises(InvalidGraphError, match="Empty"):
        parse_graph("")


def test_graph_dict_round_trip():
    graph = CubicGraph.from_edges([(0, 0), (0, 1), (1, 1)])
    data = json.loads(json.dumps(to_dict(graph, (0, 1))))
    assert [e["id"] for e in data["edges"]] == [0, 1, 2]
    again, root = from_dict(data)
    assert again.same_edges(graph)
    assert root == (0, 1)
