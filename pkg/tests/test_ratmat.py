from fractions import Fraction

from cosegal import ratmat
from cosegal.ratmat import (
    cokernel, eye, hstack, inverse, kernel_basis, kron, mat, matmul, rank,
    rref, shape, solve_matrix, solve_vec, transpose, vstack, zeros,
)


def rand_matrix(rng, rows, cols, den=3):
    return mat([[Fraction(rng.randint(-4, 4), rng.randint(1, den))
                 for _ in range(cols)] for _ in range(rows)])


def test_rref_idempotent_and_canonical(rng):
    for _ in range(30):
        m = rand_matrix(rng, rng.randint(0, 4), rng.randint(0, 4))
        r, pivots = rref(m)
        r2, pivots2 = rref(r)
        assert r == r2 and pivots == pivots2
        assert len(pivots) == rank(m)


def test_solve_and_kernel(rng):
    for _ in range(40):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        a = rand_matrix(rng, rows, cols)
        x = rand_matrix(rng, cols, 1)
        b = matmul(a, x)
        sol = solve_matrix(a, b)
        assert sol is not None
        assert matmul(a, sol) == b
        k = kernel_basis(a)
        n, dim = shape(k)
        assert n == cols
        assert dim == cols - rank(a)
        if dim:
            assert ratmat.is_zero(matmul(a, k))


def test_solve_detects_inconsistency():
    a = mat([[1, 0], [2, 0]])
    assert solve_vec(a, (0, 1)) is None
    assert solve_vec(a, (1, 2)) == (1, 0)


def test_zero_column_solve():
    assert solve_matrix((), zeros(0, 0)) == ()
    a = zeros(2, 0)
    assert shape(a) == (2, 0)
    assert solve_vec(a, (0, 0)) == ()
    assert solve_vec(a, (1, 0)) is None


def test_cokernel_projection_section(rng):
    for _ in range(40):
        rows, cols = rng.randint(0, 4), rng.randint(0, 4)
        m = rand_matrix(rng, rows, cols)
        k, p, s = cokernel(m)
        assert k == rows - rank(m)
        if k and cols:
            assert ratmat.is_zero(matmul(p, m))
        if k:
            assert matmul(p, s) == eye(k)


def test_inverse(rng):
    assert inverse(mat([[1, 1], [0, 0]])) is None
    for _ in range(20):
        n = rng.randint(1, 4)
        m = rand_matrix(rng, n, n)
        inv = inverse(m)
        if rank(m) == n:
            assert matmul(m, inv) == eye(n)
        else:
            assert inv is None


def test_kron_mixed_product(rng):
    a = rand_matrix(rng, 2, 3)
    b = rand_matrix(rng, 3, 2)
    c = rand_matrix(rng, 2, 2)
    d = rand_matrix(rng, 2, 3)
    left = matmul(kron(a, c), kron(b, d))
    right = kron(matmul(a, b), matmul(c, d))
    assert left == right


def test_stack_edges():
    assert vstack([(), mat([[1, 2]])]) == mat([[1, 2]])
    assert vstack([zeros(0, 5), mat([[1, 2]])]) == mat([[1, 2]])
    assert hstack([zeros(2, 0), eye(2)]) == eye(2)
    assert transpose(()) == ()
    assert rank(()) == 0
    assert rank(zeros(3, 0)) == 0
