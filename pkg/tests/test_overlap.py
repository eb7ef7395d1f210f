"""Change-of-basis matrix between full and split Fock bases."""

import numpy as np
import pytest

from htent import (CutConfig, TContext, assemble_M, build_U_T,
                   enumerate_full_basis, enumerate_split_basis,
                   gamma_coefficients, iso_defect, matrix_element,
                   product_basis, squeeze_kernel)


@pytest.fixture(scope="module")
def setup6():
    cut = CutConfig(1.0, 0.5, 6)
    g = gamma_coefficients(cut)
    ctx = TContext(g, squeeze_kernel(assemble_M(g)))
    full = enumerate_full_basis(6)
    left = enumerate_split_basis(g.s_left, cut.half_integer)
    right = enumerate_split_basis(g.s_right, cut.half_integer)
    prod = product_basis(left, right)
    iso = build_U_T(full, prod, ctx)
    return ctx, full, prod, iso


def test_vacuum_to_vacuum_is_one(setup6):
    ctx = setup6[0]
    assert matrix_element((), (), (), ctx) == 1.0


def test_odd_parity_elements_are_bit_exact_zero(setup6):
    ctx = setup6[0]
    # one split quantum against the full vacuum: odd total excitation
    assert matrix_element((1,), (), (), ctx) == 0.0
    assert matrix_element((1,), (1,), (1,), ctx) == 0.0


def test_methods_agree_on_matrix_elements(setup6):
    ctx = setup6[0]
    cases = [((2,), (), (1, 0, 1)), ((1, 1), (1, 1), (0, 2)),
             ((), (2,), (2,))]
    for nl, nr, nf in cases:
        a = matrix_element(nl, nr, nf, ctx, method="strings")
        b = matrix_element(nl, nr, nf, ctx, method="recursive")
        assert abs(a - b) < 1e-12


def test_vacuum_column_nearly_normalized(setup6):
    _, full, _, iso = setup6
    col = iso.U[:, 0]
    assert abs(np.linalg.norm(col) - 1.0) < 0.02


def test_columns_do_not_exceed_unit_norm(setup6):
    _, _, _, iso = setup6
    norms = np.linalg.norm(iso.U, axis=0)
    assert np.all(norms <= 1.0 + 1e-9)


def test_iso_defect_definition(setup6):
    _, _, _, iso = setup6
    G = iso.U.T @ iso.U
    assert iso.iso_defect == pytest.approx(
        np.max(np.abs(G - np.eye(G.shape[0]))))
    assert iso_defect(np.eye(4)) == 0.0


def test_vacuum_column_matches_elementwise_squeeze(setup6):
    """U columns must equal the normalized elementwise overlaps."""
    ctx, full, prod, iso = setup6
    norm = iso.U[prod.pair_index(0, 0), 0]
    for il, ir in [(0, 1), (1, 1), (2, 0)]:
        nl = prod.left.states[il]
        nr = prod.right.states[ir]
        el = matrix_element(nl, nr, (), ctx) * norm
        assert iso.U[prod.pair_index(il, ir), 0] == pytest.approx(el, abs=1e-12)


def test_parity_structure_of_U(setup6):
    _, full, prod, iso = setup6
    # every (row, column) pair with odd total quanta is exactly zero
    for a in range(0, prod.dim, 7):
        il, ir = prod.unpair(a)
        qa = sum(prod.left.states[il]) + sum(prod.right.states[ir])
        for b in range(0, full.dim, 5):
            if (qa + full.total_quanta(b)) % 2:
                assert iso.U[a, b] == 0.0
