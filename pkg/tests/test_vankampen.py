"""Spanning-tree fundamental groups and induced maps of glued skeletons."""

import pytest

from stablepi1 import fpgroup
from stablepi1.vankampen import (
    DisconnectedComplex,
    GluingComplex,
    GluingMap,
    IncompatibleMap,
    check_map,
    glue_fundamental_group,
    induced_hom,
    path_word,
    pi1_presentation,
)


def two_conics_complex():
    """Two spheres meeting in four points, one 4-gon cell per sphere."""
    return GluingComplex(
        vertices=("Q1", "Q2", "Q3", "Q4"),
        edges=(
            ("a1", "Q1", "Q2"),
            ("b1", "Q2", "Q3"),
            ("f1", "Q3", "Q4"),
            ("g1", "Q4", "Q1"),
            ("a2", "Q2", "Q3"),
            ("b2", "Q3", "Q4"),
            ("f2", "Q4", "Q1"),
            ("g2", "Q1", "Q2"),
        ),
        two_cells=(
            (("a1", 1), ("b1", 1), ("f1", 1), ("g1", 1)),
            (("a2", 1), ("b2", 1), ("f2", 1), ("g2", 1)),
        ),
        basepoint="Q2",
    )


def wedge_complex():
    return GluingComplex(
        vertices=("Q",),
        edges=(("A", "Q", "Q"), ("B", "Q", "Q"), ("F", "Q", "Q"), ("G", "Q", "Q")),
        two_cells=((("A", 1), ("B", 1), ("F", 1), ("G", 1)),),
        basepoint="Q",
    )


def folding_map():
    return GluingMap(
        vertex_map={v: "Q" for v in ("Q1", "Q2", "Q3", "Q4")},
        edge_map={
            "a1": ("A", 1),
            "a2": ("A", 1),
            "b1": ("B", 1),
            "b2": ("B", 1),
            "f1": ("F", 1),
            "f2": ("F", 1),
            "g1": ("G", 1),
            "g2": ("G", 1),
        },
    )


class TestComplexValidation:
    def test_dangling_endpoint(self):
        with pytest.raises(ValueError, match="dangling"):
            GluingComplex(("P",), (("e", "P", "X"),), (), "P")

    def test_disconnected(self):
        with pytest.raises(DisconnectedComplex):
            GluingComplex(("P", "R"), (), (), "P")

    def test_cell_must_close(self):
        with pytest.raises(ValueError, match="closed"):
            GluingComplex(
                ("P", "R"), (("e", "P", "R"),), ((("e", 1),),), "P"
            )

    def test_cell_must_be_a_path(self):
        with pytest.raises(ValueError, match="path"):
            GluingComplex(
                ("P", "R"),
                (("e", "P", "R"), ("f", "P", "R")),
                ((("e", 1), ("f", 1)),),
                "P",
            )

    def test_duplicate_edge_labels(self):
        with pytest.raises(ValueError, match="distinct"):
            GluingComplex(("P",), (("e", "P", "P"), ("e", "P", "P")), (), "P")


class TestPi1:
    def test_tree_is_trivial(self):
        c = GluingComplex(
            ("u", "v", "w"), (("e", "u", "v"), ("f", "v", "w")), (), "u"
        )
        data = pi1_presentation(c)
        assert data.presentation.ngens == 0
        assert fpgroup.todd_coxeter_order(data.presentation) == 1

    def test_graph_rank_formula(self):
        for complex_ in (two_conics_complex(), wedge_complex()):
            data = pi1_presentation(complex_)
            expected = len(complex_.edges) - len(complex_.vertices) + 1
            assert data.graph_rank == expected

    def test_two_conics_group_is_free_rank_three(self):
        data = pi1_presentation(two_conics_complex())
        inv = fpgroup.abelianization(data.presentation)
        assert inv.free_rank == 3 and inv.torsion == ()
        simplified = fpgroup.tietze_simplify(data.presentation)
        assert simplified.ngens - len(simplified.relators) == 3

    def test_wedge_with_cell(self):
        data = pi1_presentation(wedge_complex())
        inv = fpgroup.abelianization(data.presentation)
        assert inv.free_rank == 3 and inv.torsion == ()
        assert data.presentation.ngens == 4
        assert len(data.presentation.relators) == 1


class TestInducedHom:
    def test_identity_map_is_identity_hom(self):
        c = two_conics_complex()
        data = pi1_presentation(c)
        ident = GluingMap(
            vertex_map={v: v for v in c.vertices},
            edge_map={label: (label, 1) for (label, _s, _t) in c.edges},
        )
        hom = induced_hom(ident, data, data)
        assert hom.images == tuple((i + 1,) for i in range(data.presentation.ngens))

    def test_two_conics_loop_image(self):
        # the path a2 then b1^-1 is a loop at the basepoint; folding the two
        # conics together sends it to A B^-1 in the wedge
        tgt = pi1_presentation(wedge_complex())
        gmap = folding_map()
        path = [("a2", 1), ("b1", -1)]
        mapped = [(gmap.edge_map[l][0], s * gmap.edge_map[l][1]) for (l, s) in path]
        word = path_word(tgt, mapped)
        assert [tgt.presentation.names[abs(x) - 1] for x in word] == ["A", "B"]
        assert [1 if x > 0 else -1 for x in word] == [1, -1]

    def test_incidence_checked(self):
        c = two_conics_complex()
        w = wedge_complex()
        bad = GluingMap(
            vertex_map={v: "Q" for v in c.vertices},
            edge_map={label: ("A", 1) for (label, _s, _t) in c.edges},
        )
        # edges map fine for loops, but a vertex missing an image must fail
        incomplete = GluingMap(vertex_map={}, edge_map=bad.edge_map)
        with pytest.raises(IncompatibleMap):
            check_map(incomplete, c, w)

    def test_interleaved_lines_loop_image(self):
        # closed path around two components maps to the word A B G B
        dbar = GluingComplex(
            vertices=("Q1", "Q2", "Q3", "R1", "R2", "R3"),
            edges=(
                ("a1", "R1", "Q1"),
                ("b1", "Q1", "R2"),
                ("a2", "R3", "Q3"),
                ("b2", "Q3", "R1"),
                ("f3", "Q1", "R3"),
                ("g3", "R3", "Q2"),
                ("f4", "Q2", "R2"),
                ("g4", "R2", "Q3"),
            ),
            two_cells=(),
            basepoint="Q1",
        )
        d = GluingComplex(
            vertices=("Q", "R"),
            edges=(("B", "Q", "R"), ("A", "R", "Q"), ("F", "Q", "R"), ("G", "R", "Q")),
            two_cells=(),
            basepoint="Q",
        )
        gmap = GluingMap(
            vertex_map={"Q1": "Q", "Q2": "Q", "Q3": "Q", "R1": "R", "R2": "R", "R3": "R"},
            edge_map={
                "a1": ("A", 1),
                "a2": ("A", 1),
                "b1": ("B", 1),
                "b2": ("B", 1),
                "f3": ("F", 1),
                "f4": ("F", 1),
                "g3": ("G", 1),
                "g4": ("G", 1),
            },
        )
        tgt = pi1_presentation(d)
        # loop b1 g4 b2 a1 visits Q1 -> R2 -> Q3 -> R1 -> Q1; its image is
        # the edge path B G B A, re-expressed in the engine's generators
        path = [("b1", 1), ("g4", 1), ("b2", 1), ("a1", 1)]
        mapped = [(gmap.edge_map[l][0], s * gmap.edge_map[l][1]) for (l, s) in path]
        word = path_word(tgt, mapped)

        edge_index = {label: i + 1 for i, (label, _s, _t) in enumerate(d.edges)}

        def edge_letters(p):
            return tuple(sign * edge_index[label] for (label, sign) in p)

        expanded = []
        for letter in word:
            loop = tgt.loop_basis[abs(letter) - 1]
            if letter < 0:
                loop = [(l, -s) for (l, s) in reversed(loop)]
            expanded.extend(edge_letters(loop))
        assert fpgroup.reduce_word(tuple(expanded)) == edge_letters(mapped)


class TestGlue:
    def glue(self, dbar, d, gmap):
        src = pi1_presentation(dbar)
        tgt = pi1_presentation(d)
        hom = induced_hom(gmap, src, tgt)
        trivial = fpgroup.trivial_presentation()
        to_trivial = fpgroup.GroupHom(
            src.presentation, trivial, ((),) * src.presentation.ngens
        )
        return glue_fundamental_group(trivial, to_trivial, hom)

    def test_two_conics_gives_order_four(self):
        glued = self.glue(two_conics_complex(), wedge_complex(), folding_map())
        assert fpgroup.todd_coxeter_order(glued) == 4
        assert fpgroup.is_cyclic_of_order(glued, 4)

    def test_mismatched_sources_rejected(self):
        src = pi1_presentation(two_conics_complex())
        other = fpgroup.Presentation(("z",), ())
        trivial = fpgroup.trivial_presentation()
        to_trivial = fpgroup.GroupHom(other, trivial, ((),))
        hom = induced_hom(
            folding_map(), src, pi1_presentation(wedge_complex())
        )
        with pytest.raises(ValueError):
            glue_fundamental_group(trivial, to_trivial, hom)


def test_invariants_stable_under_edge_permutation():
    # reversing the declaration order changes tree and generators but not
    # the glued group
    base = two_conics_complex()
    permuted = GluingComplex(
        base.vertices, tuple(reversed(base.edges)), base.two_cells, "Q3"
    )
    wedge = wedge_complex()
    gmap = folding_map()

    def invariants(dbar):
        src = pi1_presentation(dbar)
        tgt = pi1_presentation(wedge)
        hom = induced_hom(gmap, src, tgt)
        trivial = fpgroup.trivial_presentation()
        to_trivial = fpgroup.GroupHom(
            src.presentation, trivial, ((),) * src.presentation.ngens
        )
        glued = glue_fundamental_group(trivial, to_trivial, hom)
        return fpgroup.todd_coxeter_order(glued), fpgroup.abelianization(glued)

    assert invariants(base) == invariants(permuted)
