"""Primitive Hadamard idempotents and universal bases."""

from fractions import Fraction

import pytest

from natspec.closure import SubspaceBasis, circ_generated, generated_double_algebra
from natspec.dpoly import B_ONE, X, eval_dpoly, proj_poly, circ_spectrum
from natspec.exact import Matrix
from natspec.graphs import complete_graph, enumerate_graphs, path_graph, petersen_graph
from natspec.idempotents import (
    IdempotentBasis,
    IdempotentError,
    check_basis,
    involution_close,
    primitive_circ_idempotents,
    strictify,
    universal_basis,
    universal_basis_full,
)

from conftest import random_zero_one_symmetric


class TestPrimitiveIdempotents:
    def test_span_of_j_only(self):
        b = SubspaceBasis(3)
        b.add(Matrix.ones(3))
        assert primitive_circ_idempotents(b) == [Matrix.ones(3)]

    def test_span_i_j(self):
        b = SubspaceBasis(3)
        b.add(Matrix.identity(3))
        b.add(Matrix.ones(3))
        got = primitive_circ_idempotents(b)
        off = Matrix.ones(3) - Matrix.identity(3)
        assert got == [Matrix.identity(3), off]

    def test_petersen_three_atoms(self):
        a = petersen_graph().adjacency_matrix()
        space = generated_double_algebra(a, early_exit=False).basis
        atoms = primitive_circ_idempotents(space)
        assert len(atoms) == 3
        assert sum(atoms[1:], atoms[0]) == Matrix.ones(10)
        assert a in atoms  # the adjacency itself is an atom of an SRG

    def test_requires_j(self):
        b = SubspaceBasis(2)
        b.add(Matrix.identity(2))
        with pytest.raises(IdempotentError):
            primitive_circ_idempotents(b)

    def test_requires_hadamard_closed(self):
        b = SubspaceBasis(2)
        b.add(Matrix([[1, 2], [3, 4]]))
        b.add(Matrix.ones(2))
        with pytest.raises(IdempotentError):
            primitive_circ_idempotents(b)

    def test_completeness_small_spaces(self, rng):
        # every 0/1 matrix of the space is a sum of the atoms it covers
        for _ in range(8):
            mats = [random_zero_one_symmetric(rng, 3) for _ in range(2)]
            space = circ_generated(mats)
            atoms = primitive_circ_idempotents(space)
            for m in space.rref_matrices():
                if m.is_zero_one() and not m.is_zero():
                    covered = [e for e in atoms if e.hadamard(m) == e]
                    assert sum(covered[1:], covered[0]) == m


class TestUniversalBasis:
    def test_two_member_family(self):
        fam = [
            complete_graph(2).adjacency_matrix(),
            Matrix.zero(2),
        ]
        basis = universal_basis(fam, [X, B_ONE])
        assert check_basis(basis) == []
        # on K2, I and J-I are separated; atoms evaluate consistently
        for m in range(2):
            vals = basis.nonzero_values_on(m)
            assert sum(vals[1:], vals[0]) == Matrix.ones(2)

    def test_reconstruction_identity(self, rng):
        # a = sum over its entry values of value * indicator
        for _ in range(10):
            n = rng.randint(2, 4)
            a = Matrix(
                [[rng.choice([0, 1, 2]) for _ in range(n)] for _ in range(n)]
            )
            lams = sorted(circ_spectrum(a))
            total = Matrix.zero(n)
            for lam in lams:
                ind = eval_dpoly(proj_poly(lams, lam), a)
                total = total + ind.scale(lam)
            assert total == a

    def test_atoms_evaluate_to_their_values(self):
        fam = [g.adjacency_matrix() for g in enumerate_graphs(3)]
        basis = universal_basis(fam, [X, B_ONE])
        assert check_basis(basis) == []
        for e in basis.entries:
            for m, a in enumerate(fam):
                assert eval_dpoly(e.dpoly, a) == e.values[m]

    def test_covering_sum(self):
        # any generating polynomial's value is recovered from the atoms:
        # x(a) = sum over atoms of (constant value of x on that atom) * atom
        fam = [path_graph(3).adjacency_matrix()]
        basis = universal_basis(fam, [X, B_ONE])
        a = fam[0]
        total = Matrix.zero(3)
        for e in basis.entries:
            v = e.values[0]
            if v.is_zero():
                continue
            # x is constant on each atom
            vals = {
                Fraction(a.rows[i][j])
                for i in range(3)
                for j in range(3)
                if v.rows[i][j] == 1
            }
            assert len(vals) == 1
            total = total + v.scale(vals.pop())
        assert total == a

    def test_empty_family_rejected(self):
        with pytest.raises(IdempotentError):
            universal_basis([], [X])


class TestStrictify:
    def test_removes_duplicates(self):
        fam = [path_graph(3).adjacency_matrix()]
        polys = [B_ONE, B_ONE, X]
        strict = strictify(polys, fam)
        vals = [eval_dpoly(p, fam[0]) for p in strict]
        assert vals[0] == Matrix.identity(3)
        assert vals[1].is_zero()
        assert vals[2] == fam[0]

    def test_preserves_totals(self, rng):
        fam = [random_zero_one_symmetric(rng, 3) for _ in range(2)]
        basis = universal_basis(fam, [X, B_ONE])
        polys = [e.dpoly for e in basis.entries]
        strict = strictify(polys, fam)
        for m, a in enumerate(fam):
            before = [eval_dpoly(p, a) for p in polys]
            after = [eval_dpoly(p, a) for p in strict]
            s1 = sum(before[1:], before[0])
            s2 = sum(after[1:], after[0])
            assert s1 == s2


class TestUniversalBasisFull:
    def test_matches_closure_oracle_n3(self):
        fams = [g.adjacency_matrix() for g in enumerate_graphs(3)]
        basis = universal_basis_full(fams)
        assert basis.stabilized
        assert check_basis(basis) == []
        for m, a in enumerate(fams):
            space = generated_double_algebra(a, early_exit=False).basis
            oracle = set(primitive_circ_idempotents(space))
            got = set(basis.nonzero_values_on(m))
            assert got == oracle

    def test_single_member_petersen(self):
        fam = [petersen_graph().adjacency_matrix()]
        basis = universal_basis_full(fam)
        vals = basis.nonzero_values_on(0)
        assert len(vals) == 3
        assert set(vals) == {
            Matrix.identity(10),
            fam[0],
            Matrix.ones(10) - Matrix.identity(10) - fam[0],
        }

    def test_dpolys_realize_values(self):
        fam = [g.adjacency_matrix() for g in enumerate_graphs(2)]
        basis = universal_basis_full(fam)
        for e in basis.entries:
            for m, a in enumerate(fam):
                assert eval_dpoly(e.dpoly, a) == e.values[m]

    def test_json_round_trip(self):
        fam = [g.adjacency_matrix() for g in enumerate_graphs(2)]
        basis = universal_basis_full(fam)
        back = IdempotentBasis.from_json(basis.to_json())
        assert back.family_size == basis.family_size
        for e1, e2 in zip(basis.entries, back.entries):
            assert e1.values == e2.values


class TestInvolutionClose:
    def test_symmetric_family_pairing(self):
        fam = [g.adjacency_matrix() for g in enumerate_graphs(3)]
        closed = involution_close(universal_basis_full(fam), fam)
        assert closed.diagnostics == []
        assert closed.involution_pairing is not None
        pairing = closed.involution_pairing
        for i, e in enumerate(closed.entries):
            partner = closed.entries[pairing[i]]
            for v, w in zip(e.values, partner.values):
                assert v.transpose() == w
        assert all(pairing[pairing[i]] == i for i in range(len(pairing)))

    def test_still_a_universal_basis(self):
        fam = [g.adjacency_matrix() for g in enumerate_graphs(3)]
        closed = involution_close(universal_basis_full(fam), fam)
        assert check_basis(closed) == []

    def test_asymmetric_rejected(self):
        m = Matrix([[0, 1], [0, 0]])
        basis = universal_basis([m], [X])
        with pytest.raises(IdempotentError):
            involution_close(basis, [m])
