import random

import pytest

from kronhf.errors import PreconditionError, ValidationError
from kronhf.fields import QQ, PrimeField
from kronhf.matrices import Matrix, random_invertible
from kronhf.modules import (KroneckerModule, PencilBlock, build_P, build_R,
                            build_postinjective_theta, direct_sum)
from kronhf.quiver import (BasisChoice, CoefficientQuiver, build_gamma, centroid,
                           degree_stats, export_edges, is_tree,
                           split_components, submodule_from_generators)


def _path_quiver(n):
    """Zigzag path on n vertices as the coefficient quiver of a P-type module."""
    assert n % 2 == 1
    return build_gamma(build_P(n // 2))


def test_build_gamma_edge_count_matches_nnz():
    rng = random.Random(1)
    for _ in range(20):
        n1, n2 = rng.randint(0, 4), rng.randint(0, 4)
        maps = [Matrix.from_entries(QQ, n2, n1,
                                    ((i, j, rng.randint(0, 1)) for i in range(n2)
                                     for j in range(n1)))
                for _ in range(2)]
        M = KroneckerModule(2, QQ, n1, n2, maps)
        gamma = build_gamma(M)
        assert len(gamma.edges) == sum(m.nnz for m in M.maps)


def test_build_gamma_p3_is_figure_zigzag():
    gamma = build_gamma(build_P(3))
    assert gamma.n_vertices == 7 and len(gamma.edges) == 6
    assert is_tree(gamma)
    # alternating arrow labels along the path
    labels = [k for (_, _, k, _) in sorted(gamma.edges)]
    assert labels == [0, 1, 0, 1, 0, 1]


def test_gamma_zero_module_empty():
    z = direct_sum([])
    gamma = build_gamma(z)
    assert gamma.n_vertices == 0 and gamma.edges == []
    assert not is_tree(gamma)


def test_gamma_regular_has_back_edges():
    # companion of an irreducible quadratic adds edges out of the last source
    r = build_R(PencilBlock("R_poly", poly=(1, 1), e=1), PrimeField(2))
    gamma = build_gamma(r)
    assert not is_tree(gamma)
    assert len(gamma.edges) >= gamma.n_vertices


def test_gamma_nonstandard_basis():
    rng = random.Random(3)
    M = build_P(2)
    g1 = random_invertible(QQ, 2, rng)
    g2 = random_invertible(QQ, 3, rng)
    B = BasisChoice(g1, g2)
    gamma = build_gamma(M, B)
    # entries of g2^{-1} m g1
    expected = sum(g2.solve(m @ g1).nnz for m in M.maps)
    assert len(gamma.edges) == expected
    with pytest.raises(ValidationError):
        build_gamma(M, BasisChoice(Matrix.zeros(QQ, 2, 2), g2))


def test_is_tree_singleton():
    gamma = CoefficientQuiver(1, 0, [], 2)
    assert is_tree(gamma)


def test_degree_stats():
    gamma = build_gamma(build_P(3))
    assert degree_stats(gamma) == (2, 2)
    assert degree_stats(CoefficientQuiver(0, 0, [], 2)) == (0, 0)
    q33 = build_gamma(build_postinjective_theta(3, 3))
    indeg, outdeg = degree_stats(q33)
    assert indeg <= 5 and outdeg <= 2


def test_centroid_path():
    gamma = _path_quiver(5)
    c = centroid(gamma)
    # path f1-e1-f2-e2-f3: middle is f2
    assert c == (1, 1)


def test_centroid_star():
    m = build_postinjective_theta(3, 1)  # star with sink center
    assert centroid(build_gamma(m)) == (1, 0)


def test_centroid_p3_and_postcondition():
    gamma = build_gamma(build_P(3))
    c = centroid(gamma)
    # 4th vertex along the path f1-e1-f2-e2-f3-e3-f4
    assert c == (0, 1)
    # exhaustive check: no vertex does better
    adj = gamma.adjacency()
    verts = list(gamma.vertices())

    def worst(v):
        rest = [u for u in verts if u != v]
        seen = set()
        best = 0
        for s in rest:
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                u = stack.pop()
                for wv, _ in adj[u]:
                    if wv != v and wv not in comp:
                        comp.add(wv)
                        stack.append(wv)
            seen |= comp
            best = max(best, len(comp))
        return best

    assert worst(c) == min(worst(v) for v in verts)
    assert worst(c) <= (len(verts) - 1 + 1) // 2


def test_centroid_random_trees():
    rng = random.Random(9)
    for _ in range(100):
        # random tree module: each sink attaches to a random earlier source
        n1 = rng.randint(1, 6)
        n2 = rng.randint(1, 6)
        ent = [[] for _ in range(2)]
        for i in range(n2):
            ent[rng.randrange(2)].append((i, rng.randrange(n1), 1))
        # connect sources in a chain through extra sinks to make it a tree:
        # simpler: only accept connected instances
        maps = [Matrix.from_entries(QQ, n2, n1, e) for e in ent]
        M = KroneckerModule(2, QQ, n1, n2, maps)
        gamma = build_gamma(M)
        if not is_tree(gamma):
            continue
        c = centroid(gamma)
        n = gamma.n_vertices
        adj = gamma.adjacency()
        comp_sizes = []
        seen = {c}
        for s in gamma.vertices():
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            seen.add(s)
            while stack:
                u = stack.pop()
                for wv, _ in adj[u]:
                    if wv not in seen:
                        seen.add(wv)
                        comp.add(wv)
                        stack.append(wv)
            comp_sizes.append(len(comp))
        assert all(s <= (n - 1 + 1) // 2 for s in comp_sizes)


def test_centroid_rejects_non_tree():
    r = build_R(PencilBlock("R_poly", poly=(1, 1), e=1), PrimeField(2))
    with pytest.raises(PreconditionError):
        centroid(build_gamma(r))


def test_submodule_generators_full_and_empty():
    M = build_P(4)
    sub, _ = submodule_from_generators(M, [(0, j) for j in range(4)])
    assert (sub.dim1, sub.dim2) == (4, 5)
    sub, _ = submodule_from_generators(M, [])
    assert sub.dim == 0


def test_submodule_generators_p7_drop_pattern():
    M = build_P(7)
    gens = [(0, j) for j in (0, 1, 3, 4, 6)]  # e1 e2 e4 e5 e7
    sub, (e1, e2) = submodule_from_generators(M, gens)
    assert (sub.dim1, sub.dim2) == (5, 8)
    assert sub.dim == 13
    # closure is exact: arrow images of the embedded sources stay inside
    for k in range(2):
        assert M.maps[k] @ e1 == e2 @ sub.maps[k]


def test_submodule_closure_property_random():
    rng = random.Random(17)
    for _ in range(25):
        M = build_P(rng.randint(1, 8))
        gens = [(0, j) for j in range(M.dim1) if rng.random() < 0.6]
        sub, (e1, e2) = submodule_from_generators(M, gens)
        for k in range(2):
            assert M.maps[k] @ e1 == e2 @ sub.maps[k]


def test_split_components_direct_sum():
    M = direct_sum([build_P(1), build_P(1)])
    comps = split_components(M)
    assert len(comps) == 2
    assert all((c.dim1, c.dim2) == (1, 2) for c, _ in comps)
    # reassembled block module equals M under the recorded permutation
    perm_src = [e for c, (e1, e2) in comps for e in e1.is_selection()]
    perm_snk = [e for c, (e1, e2) in comps for e in e2.is_selection()]
    D = direct_sum([c for c, _ in comps])
    sel1 = Matrix.selection(QQ, M.dim1, perm_src)
    sel2 = Matrix.selection(QQ, M.dim2, perm_snk)
    for k in range(2):
        assert M.maps[k] @ sel1 == sel2 @ D.maps[k]


def test_split_components_p7_witness_parts():
    M = build_P(7)
    sub, _ = submodule_from_generators(M, [(0, j) for j in (0, 1, 3, 4, 6)])
    comps = split_components(sub)
    dims = sorted(c.dim for c, _ in comps)
    assert dims == [3, 5, 5]  # P_1, P_2, P_2


def test_split_components_connected():
    M = build_P(3)
    assert len(split_components(M)) == 1


def test_split_component_dim_sum_invariant():
    rng = random.Random(23)
    for _ in range(20):
        mods = [build_P(rng.randint(0, 3)) for _ in range(rng.randint(1, 3))]
        M = direct_sum(mods)
        comps = split_components(M)
        assert sum(c.dim1 for c, _ in comps) == M.dim1
        assert sum(c.dim2 for c, _ in comps) == M.dim2


def test_export_edges_format():
    text = export_edges(build_gamma(build_P(1)))
    lines = text.strip().splitlines()
    assert lines[0] == "1.1 2.1 arrow=1 coeff=1"
    assert lines[1] == "1.1 2.2 arrow=2 coeff=1"
    z = KroneckerModule(2, QQ, 1, 1, [Matrix.zeros(QQ, 1, 1)] * 2)
    iso = export_edges(build_gamma(z)).strip().splitlines()
    assert iso == ["1.1", "2.1"]
