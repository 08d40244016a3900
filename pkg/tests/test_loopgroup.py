import pytest

from simplicial_holonomy.chains import homology, normalized_complex, simplicial_abelian_homotopy
from simplicial_holonomy.loopgroup import (
    GroupWord,
    abelianize,
    check_principal_fibration,
    constant_presentation,
    cyclic_group,
    loop_group,
    maximal_tree,
    parse_group,
    pi0_of_group,
    sset_check_group_identities,
    w_total,
    wbar,
    wbar_levels,
    _wbar_face,
)
from simplicial_holonomy.simpset import Cell, FinSimplicialSet, OrderedComplex, boundary_sphere, full_simplex, ordered_to_sset


def test_word_reduction_and_abelianization():
    g, h = GroupWord.gen("g"), GroupWord.gen("h")
    w = g * h * g.inverse()
    assert w.exponent_sums() == {"h": 1}
    assert (g * g.inverse()).is_identity()


def test_trees():
    T = maximal_tree(boundary_sphere(2, 2), "0")
    assert len(T.edges) == 2
    point = ordered_to_sset(OrderedComplex(["p"], [["p"]]), 1)
    assert not maximal_tree(point, "p").edges
    # two vertices joined by two parallel edges
    K = FinSimplicialSet(1, [["a", "b"], ["e", "f"]], {"e": [Cell("b", ()), Cell("a", ())], "f": [Cell("b", ()), Cell("a", ())]})
    assert len(maximal_tree(K, "a").edges) == 1


def test_circle_loop_group():
    P = loop_group(boundary_sphere(2, 2), "0", depth=1)
    assert len(P.gens[0]) == 1
    assert P.check_identities() == []
    assert pi0_of_group(P).describe() == "Z"


def test_disk_loop_group_trivial():
    P = loop_group(full_simplex(2, 3), "0", depth=2)
    assert pi0_of_group(P).is_trivial()
    assert all(simplicial_abelian_homotopy(P, i).is_trivial() for i in range(2))


def test_generator_count_formula():
    K = boundary_sphere(3, 4)
    T = maximal_tree(K, "0")
    P = loop_group(K, "0", T, depth=3)
    for n in range(4):
        cells = list(K.cells(n + 1))
        s0 = [c for c in cells if c.degens and c.degens[-1] == 0]
        tree = [c for c in cells if c not in s0 and T.contains_cell(c)]
        assert len(P.gens[n]) == len(cells) - len(s0) - len(tree)


def test_kan_sphere2():
    K = boundary_sphere(3, 3)
    A = abelianize(loop_group(K, "0", depth=2))
    assert str(simplicial_abelian_homotopy(A, 1)) == "Z"
    assert str(homology(normalized_complex(K, 3), 2)) == "Z"


def test_constant_group_pi0():
    assert str(pi0_of_group(constant_presentation(2, 1)).abelianization) == "Z/2"


def test_parse_group():
    assert parse_group("zmod:3").elements(0) and parse_group("trivial")
    with pytest.raises(ValueError):
        parse_group("zmod:x")
    with pytest.raises(ValueError):
        parse_group("sl2")


def test_wbar_levels_and_faces():
    G = cyclic_group(2)
    lv = wbar_levels(G, 4)
    assert len(lv[0]) == 1
    assert [len(x) for x in lv] == [1, 2, 4, 8, 16]
    assert [len(x) for x in wbar(G, 4).nondeg] == [1, 1, 1, 1, 1]
    t = lv[3][5]
    assert _wbar_face(G, t, 0) == tuple(t[1:])


@pytest.mark.parametrize("order,depth", [(2, 3), (3, 2), (1, 3)])
def test_principal_fibration(order, depth):
    recs = check_principal_fibration(cyclic_group(order), depth)
    assert all(r["status"] == "pass" for r in recs)
    for n in range(depth + 1):
        bij = next(r for r in recs if r["name"] == f"orbit bijection degree {n}")
        assert bij["witness"]["orbits"] == order ** (n + 1) // order


def test_identities_of_w_constructions():
    assert sset_check_group_identities(cyclic_group(3), 3) == []


def test_wbar_z2_homology():
    C = normalized_complex(wbar(cyclic_group(2), 4), 4)
    assert [str(homology(C, n)) for n in range(1, 4)] == ["Z/2", "0", "Z/2"]
    W = normalized_complex(w_total(cyclic_group(2), 4), 4)
    assert all(homology(W, n).is_trivial() for n in range(1, 4))
