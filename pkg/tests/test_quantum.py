import math

import numpy as np
import pytest

from seer_lab import classical, numkit, quantum
from seer_lab.quantum import (
    BELL_STATE,
    build_hardy,
    clifton_check,
    diachronic_quantum,
    diachronic_success_probability,
    hardy_chain_constraints,
    hardy_closed_form_sqrt3,
    hardy_optimize,
    hardy_value,
    heptagon_chain_rank,
    joint_pair_probs,
    klyachko_closed_form,
    klyachko_decomposition_residual,
    klyachko_table,
    klyachko_value,
    mermin_closed_form,
    mermin_value,
    odd_cycle_game_value,
    relative_state_chain,
    relative_state_partner,
    purification_state,
    ring_observables,
    seer_game_win_probability,
    sos_certificate_bell,
    sos_certificate_klyachko,
    star_polygon,
    symmetry_axis_state,
    transitivity_chain_klyachko,
)

# ---------------------------------------------------------------------------
# Star polygon geometry


@pytest.mark.parametrize("n", [5, 7, 9, 11])
def test_star_polygon_adjacent_orthogonality(n):
    kets = star_polygon(n).kets
    for a in range(n):
        assert abs(kets[a] @ kets[(a + 1) % n]) < 1e-12
        assert abs(kets[a] @ kets[a] - 1) < 1e-12


@pytest.mark.parametrize("n", [5, 7, 9, 11])
def test_star_polygon_symmetry_axis(n):
    poly = star_polygon(n)
    psi = symmetry_axis_state(poly)
    overlaps = [(k @ psi) ** 2 for k in poly.kets]
    assert max(overlaps) - min(overlaps) < 1e-12


def test_star_polygon_rejects_even():
    with pytest.raises(ValueError):
        star_polygon(4)


# ---------------------------------------------------------------------------
# Cycle anti-correlation values


def test_klyachko_five_matches_known_values():
    result = klyachko_value(5)
    assert result.r == pytest.approx(2 / math.sqrt(5), abs=1e-10)
    assert result.s == pytest.approx(5 - 4 * math.sqrt(5), abs=1e-10)
    assert result.per_pair_anticorrelation == pytest.approx(2 / math.sqrt(5), abs=1e-10)


@pytest.mark.parametrize("n", [5, 7, 9, 11])
def test_klyachko_value_matches_closed_form(n):
    result = klyachko_value(n)
    r_exp, s_exp = klyachko_closed_form(n)
    assert result.r == pytest.approx(r_exp, abs=1e-10)
    assert result.s == pytest.approx(s_exp, abs=1e-10)


@pytest.mark.parametrize("n", [5, 7, 9, 11])
def test_klyachko_beats_noncontextual_bound(n):
    assert klyachko_value(n).r > classical.ks_bound_ncycle(n).r_nc


@pytest.mark.parametrize("n", [51, 101])
def test_klyachko_quadratic_asymptote(n):
    r, _ = klyachko_closed_form(n)
    assert abs(r - (1 - math.pi**2 / (4 * n * n))) < 1 / n**3


def test_klyachko_three_is_rejected_with_explanation():
    with pytest.raises(ValueError, match="jointly diagonalizable"):
        klyachko_value(3)


def test_joint_measurement_marginal_consistency():
    # Coarse-grained joint statistics must reproduce single-projector Born
    # statistics for arbitrary states.
    rng = np.random.default_rng(29)
    kets = star_polygon(5).kets
    projs = [numkit.projector(k) for k in kets]
    for _ in range(50):
        psi = rng.normal(size=3)
        psi /= np.linalg.norm(psi)
        for a in range(5):
            dist = joint_pair_probs(psi, projs[a], projs[(a + 1) % 5])
            single = numkit.born_probability(psi, projs[a])
            assert dist[(1, 0)] + dist[(1, 1)] == pytest.approx(single, abs=1e-10)
            partner = numkit.born_probability(psi, projs[(a + 1) % 5])
            assert dist[(0, 1)] + dist[(1, 1)] == pytest.approx(partner, abs=1e-10)


def test_klyachko_table_is_valid_and_symmetric():
    table = klyachko_table(5)
    for dist in table.probs.values():
        assert sum(dist.values()) == pytest.approx(1, abs=1e-12)
        assert dist.get((1, 1), 0.0) == 0.0


# ---------------------------------------------------------------------------
# Cycle certificate


@pytest.mark.parametrize("n", [5, 7, 9])
def test_cycle_certificate(n):
    report = sos_certificate_klyachko(n)
    cos = math.cos(math.pi / n)
    assert report.residual < 1e-9
    assert report.min_coefficient >= -1e-12
    assert report.extremal_eigenvalue == pytest.approx(
        n - 4 * n * cos / (1 + cos), abs=1e-9
    )


def test_cycle_certificate_lambda_edge_cases():
    lam1, lam2 = quantum.klyachko_certificate_coefficients(5)
    assert lam1[-1] == pytest.approx(0.0, abs=1e-12)  # j = n term vanishes
    assert min(lam2) >= -1e-12


def test_cycle_decomposition_holds_for_generic_commuting_operators():
    # Diagonal matrices commute pairwise and have no dichotomy constraint, so
    # this exercises every term of the identity.
    rng = np.random.default_rng(31)
    for n in (5, 7):
        xbars = [np.diag(rng.normal(size=4)).astype(complex) for _ in range(n)]
        assert klyachko_decomposition_residual(xbars) < 1e-9


# ---------------------------------------------------------------------------
# Transitivity chain and the eight-ray coloring


def test_transitivity_chain_values():
    result = transitivity_chain_klyachko()
    assert result.implications_hold
    assert result.p_start == pytest.approx(1 - 2 / math.sqrt(5), abs=1e-10)


def test_forced_implication_is_state_independent():
    # X_a = 1 forces X_{a+1} = 0 for any state: orthogonal projectors never
    # both fire.
    rng = np.random.default_rng(37)
    kets = star_polygon(5).kets
    projs = [numkit.projector(k) for k in kets]
    for _ in range(20):
        psi = rng.normal(size=3)
        psi /= np.linalg.norm(psi)
        dist = joint_pair_probs(psi, projs[0], projs[1])
        assert dist[(1, 1)] == pytest.approx(0, abs=1e-12)


def test_heptagon_has_no_common_ray():
    assert heptagon_chain_rank() == 3


def test_clifton_eight_ray_report():
    report = clifton_check()
    assert len(report.edges) == 11
    expected_edges = {
        ("l1", "l2"), ("l1", "l5"), ("l2", "l3"), ("l3", "l4"), ("l4", "l5"),
        ("l2", "chi"), ("l3", "chi"), ("l4", "chi'"), ("l5", "chi'"),
        ("chi", "psi2"), ("chi'", "psi2"),
    }
    assert set(report.edges) == expected_edges
    assert set(report.triples) == {("l2", "l3", "chi"), ("l4", "l5", "chi'")}
    assert report.n_valid_colorings == 14
    assert report.n_colorings_start_and_psi2 == 0
    assert report.n_colorings_l1_zero == 11


# ---------------------------------------------------------------------------
# Two-wing ring game


def test_mermin_three_and_s3():
    assert mermin_value(3) == pytest.approx(5 / 6, abs=1e-10)
    assert classical.s3_of_table(quantum.mermin_table(3)) == pytest.approx(6, abs=1e-9)


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_mermin_value_matches_closed_form(n):
    assert mermin_value(n) == pytest.approx(mermin_closed_form(n), abs=1e-10)


def test_mermin_five_specific_value():
    assert mermin_value(5) == pytest.approx(1 / 3 + 2 / 3 * math.cos(math.pi / 10) ** 2, abs=1e-10)
    assert mermin_value(5) == pytest.approx(0.9363389981249825, abs=1e-10)


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_mermin_beats_local_bound(n):
    assert mermin_value(n) > classical.local_bound("os_ring", n).value


def test_ring_observables_square_to_identity():
    for op in ring_observables(5):
        assert np.max(np.abs(op @ op - np.eye(2))) < 1e-12


@pytest.mark.parametrize("n", [3, 5, 7])
def test_ring_certificate(n):
    report = sos_certificate_bell(n)
    assert report.residual < 1e-9
    closed = n * (4 * math.cos(math.pi / (2 * n)) ** 2 - 1)
    assert report.extremal_eigenvalue == pytest.approx(closed, abs=1e-9)
    assert report.min_coefficient >= -1e-12


def test_ring_certificate_n3_bound_is_six():
    assert sos_certificate_bell(3).certified_bound == pytest.approx(6.0, abs=1e-12)


def test_ring_decomposition_holds_for_generic_observables():
    rng = np.random.default_rng(43)
    for n in (3, 5):
        ops_a = [np.diag(rng.normal(size=2)).astype(complex) for _ in range(n)]
        ops_b = [np.diag(rng.normal(size=2)).astype(complex) for _ in range(n)]
        assert quantum.bell_decomposition_residual(ops_a, ops_b) < 1e-9


# ---------------------------------------------------------------------------
# Odd-cycle game


@pytest.mark.parametrize("n", [3, 5, 7])
def test_odd_cycle_game_value(n):
    assert odd_cycle_game_value(n) == pytest.approx(
        math.cos(math.pi / (4 * n)) ** 2, abs=1e-10
    )


def test_odd_cycle_specific_values():
    assert odd_cycle_game_value(3) == pytest.approx(0.9330127018922193, abs=1e-10)
    assert odd_cycle_game_value(5) == pytest.approx(0.9755282581475768, abs=1e-10)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_odd_cycle_quantum_beats_local(n):
    assert 1 - 1 / (2 * n) < odd_cycle_game_value(n)


# ---------------------------------------------------------------------------
# Hardy chain


def test_hardy_value_at_sqrt3():
    assert hardy_value(math.sqrt(3)) == pytest.approx(hardy_closed_form_sqrt3(), abs=1e-10)
    assert hardy_closed_form_sqrt3() == pytest.approx(0.17443, abs=5e-6)


def test_hardy_chain_constraints_vanish_for_various_eta():
    for eta in (0.3, 0.9, math.sqrt(3), 2.5, 4.0):
        worst = max(abs(v) for v in hardy_chain_constraints(build_hardy(eta)).values())
        assert worst < 1e-10


def test_hardy_state_normalized_and_kappas():
    cfg = build_hardy(math.sqrt(3))
    assert numkit.is_normalized(cfg.state)
    eta = math.sqrt(3)
    assert cfg.kappas == pytest.approx((eta**2.5, eta**0.5, eta**1.5))


def test_hardy_optimum_near_boschi_value():
    eta, value = hardy_optimize()
    assert value == pytest.approx(0.17455, abs=2e-5)
    assert 1.5 < eta < 2.0


def test_hardy_vanishes_for_product_state_limit():
    assert hardy_value(1e-6) < 1e-10


def test_hardy_rejects_nonpositive_eta():
    with pytest.raises(ValueError):
        hardy_value(0.0)


# ---------------------------------------------------------------------------
# Relative-state chains


def _random_density(rng, d):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def _random_unitary(rng, d):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, _ = np.linalg.qr(m)
    return q


def test_relative_state_chain_full_rank_has_support():
    rng = np.random.default_rng(47)
    rho = _random_density(rng, 3)
    u = _random_unitary(rng, 3)
    phi = rng.normal(size=3) + 1j * rng.normal(size=3)
    result = relative_state_chain(rho, u, phi, steps=5)
    assert result.overlap > 0
    assert len(result.chain) == 6


def test_relative_state_chain_kernel_case():
    # phi in the kernel of a real rho: the chain collapses and the initial
    # event itself has probability zero.
    phi = np.array([1.0, 0.0, 0.0])
    rho = np.diag([0.0, 0.4, 0.6])
    u = np.eye(3)
    result = relative_state_chain(rho, u, phi, steps=3)
    assert result.overlap == 0.0
    assert result.p_initial < 1e-10


def test_relative_state_chain_maximally_mixed_fixed_point():
    rng = np.random.default_rng(53)
    phi = rng.normal(size=4) + 1j * rng.normal(size=4)
    result = relative_state_chain(np.eye(4) / 4, np.eye(4), phi, steps=4)
    assert result.overlap == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(result.chain[0], result.chain[-1])


def test_relative_state_chain_validates_inputs():
    with pytest.raises(ValueError):
        relative_state_chain(np.diag([0.7, 0.6]), np.eye(2), [1, 0], 1)  # trace != 1
    with pytest.raises(ValueError):
        relative_state_chain(np.eye(2) / 2, np.array([[1, 1], [0, 1]]), [1, 0], 1)


def test_relative_state_inferences_are_certain_on_purification():
    # Finding phi on wing A forces the partner state on wing B, and finding
    # that partner on B forces rho^T phi on A: both checked by the Born rule
    # on the purified state.
    rng = np.random.default_rng(59)
    d = 3
    rho = _random_density(rng, d)
    u = _random_unitary(rng, d)
    psi = purification_state(rho, u)
    assert abs(np.vdot(psi, psi) - 1) < 1e-10
    phi = rng.normal(size=d) + 1j * rng.normal(size=d)
    phi /= np.linalg.norm(phi)
    partner = relative_state_partner(rho, u, phi)
    proj_phi = numkit.projector(phi)
    proj_partner = numkit.projector(partner)
    p_phi = numkit.born_probability(psi, numkit.tensor(proj_phi, np.eye(d)))
    p_joint = numkit.born_probability(psi, numkit.tensor(proj_phi, proj_partner))
    assert p_joint == pytest.approx(p_phi, abs=1e-10)  # p(partner | phi) = 1
    # Conditional on finding the partner on wing B, wing A collapses to
    # rho^T phi (the next chain element).
    nxt = rho.T @ phi
    nxt /= np.linalg.norm(nxt)
    p_partner = numkit.born_probability(psi, numkit.tensor(np.eye(d), proj_partner))
    p_joint2 = numkit.born_probability(
        psi, numkit.tensor(numkit.projector(nxt), proj_partner)
    )
    assert p_joint2 == pytest.approx(p_partner, abs=1e-10)


# ---------------------------------------------------------------------------
# Two-time protocol


def test_diachronic_value_and_obliviousness():
    result = diachronic_quantum()
    assert result.r == pytest.approx(5 / 6, abs=1e-10)
    assert result.obliviousness_defect < 1e-12


def test_diachronic_same_and_cross_cases():
    for t in (1, 2, 3):
        for b in (0, 1):
            assert diachronic_success_probability(t, b, t) == pytest.approx(1, abs=1e-12)
            for y in (1, 2, 3):
                if y != t:
                    assert diachronic_success_probability(t, b, y) == pytest.approx(
                        3 / 4, abs=1e-12
                    )


def test_diachronic_beats_pnc_bound():
    assert diachronic_quantum().r > classical.pnc_bound_diachronic().bound


# ---------------------------------------------------------------------------
# Seer game helper


def test_seer_game_win_probability_order_n_squared():
    for n in (5, 11, 101):
        p = seer_game_win_probability(n)
        r, _ = klyachko_closed_form(n)
        assert p == pytest.approx(1 - r, abs=1e-10)
    assert seer_game_win_probability(101) < 3e-4


def test_bell_state_is_normalized():
    assert abs(np.vdot(BELL_STATE, BELL_STATE) - 1) < 1e-12


def test_two_qubit_joint_measurement_marginal_consistency():
    # The product joint measurement of two wings reproduces each wing's
    # single-observable Born statistics on random two-qubit states.
    rng = np.random.default_rng(71)
    ops = ring_observables(3)
    for _ in range(50):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        for a in range(3):
            for b in range(3):
                pa = [(np.eye(2) + s * ops[a]) / 2 for s in (1, -1)]
                pb = [(np.eye(2) + s * ops[b]) / 2 for s in (1, -1)]
                dist = {
                    (i, j): numkit.born_probability(psi, numkit.tensor(pa[i], pb[j]))
                    for i in (0, 1)
                    for j in (0, 1)
                }
                single = numkit.born_probability(psi, numkit.tensor(pa[0], np.eye(2)))
                assert dist[(0, 0)] + dist[(0, 1)] == pytest.approx(single, abs=1e-10)


def test_klyachko_asymptote_holds_for_constructed_value():
    # Born-rule evaluation of the actual n=51 construction, not just the
    # closed form.
    n = 51
    value = klyachko_value(n)
    assert abs(value.r - (1 - math.pi**2 / (4 * n * n))) < 1 / n**3
