import pytest

from pacone.cohomology import (
    action_matrix,
    char_poly,
    closed_block,
    eigenvalue_one_check,
    intersection_pairing,
    kernel,
    rational_factors,
    same_line,
)
from pacone.matrix import Matrix
from pacone.words import Word

from conftest import SYNTHETIC, synthetic


def test_action_matrix_fixture(inp, K):
    M = action_matrix(inp)
    assert list(M.row(0)) == [K(v) for v in (3, -1, -2, 1, -1, 0)]
    assert list(M.col(4)) == [K(v) for v in (-1, 1, 0, -2, 1, 0)]


def test_action_matrix_identity_words(inp, K):
    ident = {g: Word.gen(g) for g in inp.generators()}
    assert action_matrix(inp.with_(phi=ident)) == Matrix.identity(6, K.one, K.zero)


def test_char_poly_factors(inp, K):
    f = rational_factors(char_poly(action_matrix(inp)))
    assert f == [
        ([K(-1), K(1)], 2),
        ([K(1), K(-3), K(1)], 1),
        ([K(1), K(-5), K(1)], 1),
    ]


def test_eigenspaces(inp, K):
    M = action_matrix(inp)
    I = Matrix.identity(6, K.one, K.zero)
    lam = kernel(M - I * inp.lam)
    assert len(lam) == 1
    assert same_line(lam[0], inp.mu_u) is not None
    assert len(kernel(M - I * (1 / inp.lam))) == 1
    assert len(kernel(M - I)) == 2
    assert kernel(I) == []


@pytest.mark.parametrize("name", SYNTHETIC)
def test_measures_are_eigenvectors(name):
    inp = synthetic(name)
    M = action_matrix(inp)
    assert M.apply(inp.mu_u) == [inp.lam * x for x in inp.mu_u]
    assert M.apply(inp.mu_s) == [x / inp.lam for x in inp.mu_s]


def test_pairing_fixture(inp, r):
    # pinned orientation: i(a, b) = -2 sqrt 21, so omega_tot = 2 i(a, b)
    assert intersection_pairing(inp.a, inp.b, 2) == -2 * r
    assert intersection_pairing(inp.b, inp.a, 2) == 2 * r


def test_pairing_basics(inp, K):
    e = lambda i: [K.one if j == i else K.zero for j in range(4)]
    assert intersection_pairing(e(0), e(2), 2) == 1
    assert intersection_pairing(inp.a, inp.a, 2) == 0
    with pytest.raises(ValueError):
        intersection_pairing([K.one] * 3, [K.one] * 3, 2)


def test_eigenvalue_one(inp, K):
    assert eigenvalue_one_check(inp)
    ident = {g: Word.gen(g) for g in inp.generators()}
    assert not eigenvalue_one_check(inp.with_(phi=ident))
    assert closed_block(inp).nrows == 4


def test_same_line(K):
    u = [K(1), K(2), K.zero]
    assert same_line([x * K(0, 1) for x in u], u) == K(0, 1)
    assert same_line([K(1), K(3), K.zero], u) is None
    assert same_line([K(1), K(2), K(1)], u) is None
