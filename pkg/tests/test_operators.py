import numpy as np
import pytest

from magnon_gates.operators import (
    SpaceLayout,
    annihilation,
    commutator,
    dagger,
    embed,
    expectation,
    fock_state,
    frobenius_norm,
    identity,
    is_hermitian,
    kron,
    matrix_exp,
    partial_trace,
    thermal_state,
    unvec,
    vec,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def test_layout_validation():
    lay = SpaceLayout((3, 3, 4), ("q1", "q2", "m"))
    assert lay.total_dim == 36
    assert lay.index("m") == 2
    with pytest.raises(ValueError):
        SpaceLayout((1, 3))
    with pytest.raises(ValueError):
        SpaceLayout((2, 2), ("a", "a"))
    with pytest.raises(ValueError):
        SpaceLayout((2, 2), ("a",))


def test_kron_identity_and_dims():
    assert np.array_equal(kron(identity(2), identity(2)), identity(4))
    sz_i = kron(SZ, identity(2))
    assert np.allclose(np.diag(sz_i), [1, 1, -1, -1])
    a = np.ones((2, 3)), np.ones((4, 5))
    assert kron(*a).shape == (8, 15)


def test_kron_associativity():
    rng = np.random.default_rng(1)
    a, b, c = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
               for _ in range(3))
    left = kron(kron(a, b), c)
    right = kron(a, kron(b, c))
    assert np.abs(left - right).max() <= 1e-13


def test_embed():
    lay = SpaceLayout((2, 2))
    assert np.array_equal(embed(SX, 0, lay), kron(SX, identity(2)))
    lay3 = SpaceLayout((3, 3, 4))
    assert np.array_equal(embed(identity(4), 2, lay3), identity(36))
    # ladder action on |0,0,1>
    a = embed(annihilation(4), 2, lay3)
    psi = kron(fock_state(3, 0), kron(fock_state(3, 0), fock_state(4, 1)))
    target = kron(fock_state(3, 0), kron(fock_state(3, 0), fock_state(4, 0)))
    assert np.allclose(a @ psi, target)
    with pytest.raises(ValueError):
        embed(SX, 0, lay3)  # dim mismatch


def test_embed_commutes_across_subsystems():
    lay = SpaceLayout((3, 3, 4))
    a = embed(annihilation(3), 0, lay)
    b = embed(annihilation(4) + annihilation(4).conj().T, 2, lay)
    assert np.abs(commutator(a, b)).max() == 0.0


def test_annihilation():
    assert np.array_equal(annihilation(2), [[0, 1], [0, 0]])
    a = annihilation(4)
    assert np.allclose(a.conj().T @ a, np.diag([0, 1, 2, 3]))
    # truncation defect sits in the last diagonal entry only
    defect = commutator(a, a.conj().T) - identity(4)
    assert defect[3, 3] == pytest.approx(-4)
    defect[3, 3] = 0
    assert np.abs(defect).max() <= 1e-14
    with pytest.raises(ValueError):
        annihilation(1)


def test_fock_state():
    assert np.allclose(fock_state(4, 0), [1, 0, 0, 0])
    assert np.allclose(fock_state(3, 2), [0, 0, 1])
    for n in range(3):
        psi = fock_state(3, n)
        assert psi.conj() @ psi == pytest.approx(1.0)
    with pytest.raises(ValueError):
        fock_state(3, 3)
    with pytest.raises(ValueError):
        fock_state(3, -1)


def test_thermal_state():
    rho = thermal_state(5, 0.0)
    assert np.allclose(rho, np.diag([1, 0, 0, 0, 0]))
    for dim, n_th in ((4, 0.3), (12, 0.99), (7, 5.0)):
        rho = thermal_state(dim, n_th)
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-14)
    # geometric law: p1/p0 = n_th / (1 + n_th)
    rho = thermal_state(12, 0.99)
    assert rho[1, 1].real / rho[0, 0].real == pytest.approx(0.99 / 1.99, rel=1e-12)
    with pytest.raises(ValueError):
        thermal_state(4, -0.1)


def test_partial_trace():
    lay = SpaceLayout((2, 3))
    rng = np.random.default_rng(2)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    rho_q = a @ a.conj().T
    rho_q /= np.trace(rho_q)
    m0 = np.outer(fock_state(3, 0), fock_state(3, 0).conj())
    rho = kron(rho_q, m0)
    assert np.allclose(partial_trace(rho, lay, keep=(0,)), rho_q)
    # full trace -> scalar
    total = partial_trace(rho, lay, keep=())
    assert total.shape == (1, 1)
    assert total[0, 0] == pytest.approx(np.trace(rho))
    # Bell state reduces to I/2
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    rho_b = np.outer(bell, bell.conj())
    assert np.allclose(partial_trace(rho_b, SpaceLayout((2, 2)), keep=(0,)),
                       identity(2) / 2)


def test_partial_trace_preserves_trace():
    lay = SpaceLayout((3, 3, 4))
    rng = np.random.default_rng(3)
    a = rng.standard_normal((36, 36)) + 1j * rng.standard_normal((36, 36))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    red = partial_trace(rho, lay, keep=(0, 1))
    assert abs(np.trace(red) - np.trace(rho)) <= 1e-12
    # keep order follows the layout
    assert red.shape == (9, 9)


def test_matrix_exp_basics():
    assert np.allclose(matrix_exp(np.zeros((3, 3))), identity(3))
    theta = 0.7
    u = matrix_exp(1j * theta * SZ)
    assert np.allclose(np.diag(u), [np.exp(1j * theta), np.exp(-1j * theta)])
    with pytest.raises(ValueError):
        matrix_exp(np.ones((2, 3)))


def test_matrix_exp_inverse_identity():
    rng = np.random.default_rng(4)
    for _ in range(5):
        a = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
        a *= 10.0 / np.linalg.norm(a, 2)
        residual = matrix_exp(a) @ matrix_exp(-a) - identity(12)
        assert np.abs(residual).max() <= 1e-9


def test_matrix_exp_direct_sum():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    oplus = kron(a, identity(4)) + kron(identity(3), b)
    assert np.abs(matrix_exp(oplus) - kron(matrix_exp(a), matrix_exp(b))).max() <= 1e-9


def test_small_helpers():
    rng = np.random.default_rng(6)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.array_equal(dagger(a), a.conj().T)
    h = a + dagger(a)
    assert is_hermitian(h)
    assert not is_hermitian(a + identity(3))
    rho = h @ h / np.trace(h @ h)
    assert expectation(identity(3), rho) == pytest.approx(1.0)
    assert frobenius_norm(a) == pytest.approx(np.linalg.norm(a))


def test_vec_column_stacking():
    rng = np.random.default_rng(7)
    a, b, rho = (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
                 for _ in range(3))
    lhs = vec(a @ rho @ b)
    rhs = kron(b.T, a) @ vec(rho)
    assert np.abs(lhs - rhs).max() <= 1e-12
    assert np.allclose(unvec(vec(rho)), rho)
