import itertools
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from bellhide import densematrix as dm
from bellhide import povmopt as po
from bellhide.bellcode import BellString, PauliString, enumerate_strings, singlet_count_index
from bellhide.states import hiding_state


def all_shifts(n):
    return [PauliString(m) for m in itertools.product(range(4), repeat=n)]


def test_ppt_constraint_examples():
    for n in (1, 2, 3):
        half = po.BellDiagonalPOVM.constant(n)
        assert {po.ppt_constraint(half, m) for m in all_shifts(n)} == {2 ** (n - 1)}
        assert po.ppt_constraint(po.BellDiagonalPOVM.constant(n, 1), PauliString([0] * n)) == 2**n


@pytest.mark.parametrize("n", [1, 2])
def test_ppt_constraint_is_scaled_diagonal_of_partial_transpose(n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        alpha = rng.random(4**n)
        pt = dm.partial_transpose(dm.diagonal_operator(n, alpha))
        u = dm.bell_basis(n)
        in_bell = u.conj().T @ pt @ u
        # diagonal in the Bell basis, with the constraint values on the diagonal
        assert np.max(np.abs(in_bell - np.diag(np.diag(in_bell)))) < 1e-12
        for m in all_shifts(n):
            assert abs(po.ppt_constraint(alpha, m) - 2**n * in_bell[m.index, m.index].real) < 1e-12


def test_ppt_constraint_of_twirled_product_projector():
    rng = np.random.default_rng(5)
    for _ in range(10):
        a = rng.normal(size=2) + 1j * rng.normal(size=2)
        b = rng.normal(size=2) + 1j * rng.normal(size=2)
        v = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
        pov = po.twirl(np.outer(v, v.conj()))
        for m in all_shifts(1):
            assert -1e-12 <= po.ppt_constraint(pov, m) <= 2 + 1e-12
        # twirling preserves the PPT property of a separable element
        assert dm.is_ppt(dm.diagonal_operator(1, pov.alpha))


def test_success_probabilities():
    for n in (1, 2, 3):
        assert po.success_probabilities(po.BellDiagonalPOVM.constant(n, 1), n) == (1, 0)
        assert po.success_probabilities(po.BellDiagonalPOVM.constant(n, 0), n) == (0, 1)
        assert po.success_probabilities(po.BellDiagonalPOVM.constant(n), n) == (Fraction(1, 2), Fraction(1, 2))


@pytest.mark.parametrize("n", [1, 2])
def test_success_probabilities_match_dense_traces(n):
    rng = np.random.default_rng(7)
    alpha = rng.random(4**n)
    m0 = dm.diagonal_operator(n, alpha)
    p00, p11 = po.success_probabilities(alpha, n)
    assert abs(p00 - dm.trace_pair(m0, dm.realize(hiding_state(n, 0)))) < 1e-12
    assert abs(p11 - dm.trace_pair(np.eye(4**n) - m0, dm.realize(hiding_state(n, 1)))) < 1e-12


def test_twirl():
    assert po.twirl(np.eye(4)).alpha == (1.0,) * 4
    singlet = dm.projector(BellString.parse("11"))
    np.testing.assert_allclose(po.twirl(singlet).alpha, [0, 0, 0, 1], atol=1e-12)
    with pytest.raises(ValueError):
        po.twirl(2 * np.eye(4))


def test_twirl_random_projector_preserves_bell_diagonal_traces():
    rng = np.random.default_rng(11)
    g = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
    q, _ = np.linalg.qr(g)
    p = q @ q.conj().T
    pov = po.twirl(p)
    u = dm.bell_basis(1)
    np.testing.assert_allclose(pov.alpha, [np.vdot(u[:, k], p @ u[:, k]).real for k in range(4)], atol=1e-12)
    for _ in range(5):
        w = rng.random(4)
        rho = dm.diagonal_operator(1, w / w.sum())
        assert abs(dm.trace_pair(p, rho) - dm.trace_pair(dm.diagonal_operator(1, pov.alpha), rho)) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_reduced_constraints_match_full_rows(n):
    rows = {sig[1]: coeffs for sig, coeffs in po.reduced_constraints(n)}
    full = po.constraint_matrix(n)
    counts = np.array([singlet_count_index(i, n) for i in range(4**n)])
    reduced_values = set()
    for m in range(4**n):
        row = [int(full[m][counts == j].sum()) for j in range(n + 1)]
        reduced_values.add(tuple(row))
    assert reduced_values == set(rows.values())
    assert len(rows) == n + 1
    # representatives reproduce their own rows
    for rep, coeffs in rows.items():
        m = PauliString(rep).index
        assert tuple(int(full[m][counts == j].sum()) for j in range(n + 1)) == coeffs


def test_reduced_objective_matches_full():
    for n in (1, 2, 3):
        w = po.objective_vector(n)
        red = po.reduced_objective(n)
        counts = np.array([singlet_count_index(i, n) for i in range(4**n)])
        for j in range(n + 1):
            assert abs(w[counts == j].sum() - float(red[j])) < 1e-12


@pytest.mark.parametrize("n", [1, 2])
def test_reduced_equals_full(n):
    full, red = po.optimize(n), po.optimize_reduced(n)
    assert abs(full.lp_optimum - float(red.lp_optimum)) <= 1e-9
    assert abs(full.lp_minimum - float(red.lp_minimum)) <= 1e-9


def test_certificates_and_bound():
    assert po.optimize_reduced(1).lp_optimum <= 1
    cert = po.optimize_reduced(3)
    assert cert.delta == Fraction(1, 4)
    assert cert.lp_optimum <= Fraction(1, 4)
    assert cert.certified
    assert po.optimize_reduced(6).solver_stats["variables"] == 7


def test_optimum_is_monotone():
    red = [po.optimize_reduced(n).lp_optimum for n in range(1, 13)]
    assert all(b <= a for a, b in zip(red, red[1:]))
    full = [po.optimize(n).lp_optimum for n in (1, 2, 3)]
    assert all(b <= a + 1e-12 for a, b in zip(full, full[1:]))


@pytest.mark.parametrize("n", [1, 2])
def test_witness_is_ppt(n):
    for cert in (po.optimize_reduced(n), po.optimize(n)):
        for w in (cert.witness, cert.min_witness):
            pov = po.BellDiagonalPOVM.from_singlet_counts(n, [float(x) for x in w])
            m0 = dm.diagonal_operator(n, pov.alpha)
            assert dm.is_ppt(m0)
            assert dm.is_ppt(np.eye(4**n) - m0)
            p00, p11 = po.success_probabilities(pov, n)
            assert abs(p00 + p11 - 1 - float(cert.lp_optimum if w is cert.witness else cert.lp_minimum)) < 1e-9


def test_full_witness_feasible_and_ppt():
    cert = po.optimize(2)
    assert po.is_feasible(cert.full_alpha, 2)
    m0 = dm.diagonal_operator(2, cert.full_alpha)
    assert dm.is_ppt(m0, 1e-8) and dm.is_ppt(np.eye(16) - m0, 1e-8)


def test_witness_is_lexicographically_smallest():
    # brute-force grid of class-constant measurements
    for n, den in ((1, 12), (2, 6)):
        cert = po.optimize_reduced(n)
        grid = [Fraction(k, den) for k in range(den + 1)]
        optimal = []
        for alpha in itertools.product(grid, repeat=n + 1):
            pov = po.BellDiagonalPOVM.from_singlet_counts(n, alpha)
            vals = [po.ppt_constraint(pov, m) for m in all_shifts(n)]
            if all(0 <= v <= 2**n for v in vals):
                p00, p11 = po.success_probabilities(pov, n)
                if p00 + p11 - 1 == cert.lp_optimum:
                    optimal.append(alpha)
        assert min(optimal) == cert.witness


def test_symmetrization_preserves_feasibility_and_objective():
    n = 2
    w = po.objective_vector(n)
    k = po.constraint_matrix(n).astype(float)
    rng = np.random.default_rng(3)
    for _ in range(4):
        # vertices of the feasible set for random objectives are generally not symmetric
        res = linprog(rng.normal(size=16), A_ub=np.vstack([k, -k]),
                      b_ub=np.concatenate([np.full(16, 4.0), np.zeros(16)]), bounds=(0, 1), method="highs")
        x = res.x
        sym = po.symmetrize(x, n)
        assert po.is_feasible(sym, n)
        assert abs(w @ np.array(sym) - w @ x) < 1e-12
        values = po.class_average(sym, n)
        assert np.allclose(sym, [values[singlet_count_index(i, n)] for i in range(16)])


def test_two_sided_bound_for_random_feasible_points():
    for n in (1, 2):
        cert = po.optimize(n)
        rng = np.random.default_rng(n)
        for _ in range(20):
            lam = rng.random()
            alpha = lam * np.array(cert.full_alpha) + (1 - lam) * 0.5
            assert po.is_feasible(alpha, n)
            p00, p11 = po.success_probabilities(alpha, n)
            assert -float(cert.delta) <= p00 + p11 - 1 <= float(cert.delta)


def test_security_and_information_bounds():
    assert po.security_bound(2) == Fraction(1, 2)
    assert po.mutual_info_bound(2, Fraction(1, 2)) == 0.5
    assert po.mutual_info_bound(2, 1 - 1e-12) < 1e-10
    for bad in (0, 1, Fraction(3, 2)):
        with pytest.raises(ValueError):
            po.mutual_info_bound(2, bad)


def test_certificate_json():
    doc = po.optimize_reduced(2).to_json()
    assert doc["delta"] == {"num": 1, "den": 2}
    assert doc["lp_optimum_minus_1"] == {"num": 2, "den": 5}
    assert doc["tight"] is False
    assert len(doc["witness_by_N11"]) == 3


def test_povm_validation():
    with pytest.raises(ValueError):
        po.BellDiagonalPOVM(1, (0, 0, 0, 2))
    with pytest.raises(ValueError):
        po.BellDiagonalPOVM(1, (0, 0, 0))
    assert len(enumerate_strings(1)) == len(po.BellDiagonalPOVM.constant(1).beta)
