import itertools
from fractions import Fraction

import numpy as np
import pytest

from seer_lab import scenario
from seer_lab.classical import (
    GamePayoff,
    PayoffCell,
    algebraic_contradiction,
    bell_s3,
    brute_force_cycle_satisfiable,
    ks_bound_ncycle,
    local_bound,
    odd_cycle_payoff,
    os_ring_payoff,
    pnc_bound_diachronic,
    pnc_stochastic_response_value,
    s3_local_bound,
    s3_of_table,
)


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11, 13])
def test_ks_bound_matches_closed_form_exactly(n):
    result = ks_bound_ncycle(n)
    assert result.max_anticorrelated == n - 1
    assert result.r_nc_exact == 1 - Fraction(1, n)
    assert result.s_nc == -(n - 2)


def test_ks_bound_witness_is_lexicographic_optimum():
    result = ks_bound_ncycle(5)
    assert result.witness == (0, 0, 1, 0, 1)
    anti = sum(
        result.witness[a] != result.witness[(a + 1) % 5] for a in range(5)
    )
    assert anti == 4


def test_ks_bound_rejects_even_n():
    with pytest.raises(ValueError):
        ks_bound_ncycle(4)


@pytest.mark.parametrize(
    "game,n,expected",
    [
        ("os3", None, Fraction(7, 9)),
        ("os_ring", 5, Fraction(13, 15)),
        ("os_ring", 7, 1 - Fraction(2, 21)),
        ("os_ring", 9, 1 - Fraction(2, 27)),
        ("os_ring", 11, 1 - Fraction(2, 33)),
        ("odd_cycle", 3, Fraction(5, 6)),
        ("odd_cycle", 5, Fraction(9, 10)),
        ("odd_cycle", 7, 1 - Fraction(1, 14)),
    ],
)
def test_local_bounds(game, n, expected):
    assert local_bound(game, n).value_exact == expected


def test_local_bound_witness_attains_value():
    bound = local_bound("os3")
    payoff = os_ring_payoff(3)
    value = sum(
        cell.weight
        for cell in payoff.cells
        if (bound.witness_a[cell.a - 1], bound.witness_b[cell.b - 1]) in cell.wins
    )
    assert value == bound.value_exact


def test_local_bound_oversize_rejected():
    with pytest.raises(ValueError):
        local_bound("os_ring", 15)


def test_local_bound_gauge_invariance():
    # Relabeling outcomes of one A measurement (and flipping the win pairs of
    # its cells) leaves the optimal value unchanged.
    rng = np.random.default_rng(23)
    base = os_ring_payoff(5)
    for flip_a in (1, 3, 5):
        cells = []
        for cell in base.cells:
            wins = cell.wins
            if cell.a == flip_a:
                wins = frozenset((1 - xa, xb) for xa, xb in wins)
            cells.append(PayoffCell(cell.a, cell.b, cell.weight, wins))
        flipped = GamePayoff(base.n_a, base.n_b, tuple(cells))
        assert local_bound(flipped).value_exact == local_bound(base).value_exact
    del rng


def test_s3_local_bound_is_five():
    result = s3_local_bound()
    assert result.value == 5.0
    assert bell_s3(result.witness_a, result.witness_b) == 5


def test_s3_all_equal_strategy():
    assert bell_s3((0, 0, 0), (0, 0, 0)) == 3 - 6


def test_s3_of_foil_and_quantum_tables():
    from seer_lab import quantum

    foil = scenario.build_bipartite_table("nonlocal_os_3")
    assert s3_of_table(foil) == pytest.approx(9.0)
    assert s3_of_table(quantum.mermin_table(3)) == pytest.approx(6.0, abs=1e-10)


def test_pnc_bound():
    result = pnc_bound_diachronic()
    assert result.bound_exact == Fraction(7, 9)
    assert result.per_encoding == {
        "b": Fraction(2, 3),
        "c1": Fraction(7, 9),
        "c2": Fraction(7, 9),
        "c3": Fraction(7, 9),
    }


def test_pnc_stochastic_responses_never_beat_deterministic():
    rng = np.random.default_rng(41)
    for _ in range(200):
        name = rng.choice(["b", "c1", "c2", "c3"])
        probs = rng.random(6)
        assert pnc_stochastic_response_value(name, probs) <= 7 / 9 + 1e-12


@pytest.mark.parametrize(
    "signs,expected",
    [
        ((-1, -1, -1), False),
        ((-1, -1, 1), True),
        ((1, -1, -1, -1), False),  # PR-box sign pattern
    ],
)
def test_algebraic_contradiction_examples(signs, expected):
    assert algebraic_contradiction(signs) is expected


def test_algebraic_contradiction_matches_brute_force():
    for n in range(3, 11):
        for signs in itertools.product((1, -1), repeat=n):
            assert algebraic_contradiction(signs) == brute_force_cycle_satisfiable(signs)


def test_payoff_weight_validation():
    with pytest.raises(ValueError):
        GamePayoff(1, 1, (PayoffCell(1, 1, Fraction(1, 2), frozenset({(0, 0)})),))


def test_custom_payoff_local_bound():
    # Two settings per wing, all four cells weight 1/4, win on equal outcomes:
    # trivially winnable with constant strategies.
    cells = tuple(
        PayoffCell(a, b, Fraction(1, 4), frozenset({(0, 0), (1, 1)}))
        for a in (1, 2)
        for b in (1, 2)
    )
    assert local_bound(GamePayoff(2, 2, cells)).value == 1.0


def test_odd_cycle_payoff_weights():
    payoff = odd_cycle_payoff(5)
    assert len(payoff.cells) == 10
    assert sum(c.weight for c in payoff.cells) == 1


def test_ks_bound_larger_cycle_chunked_enumeration():
    result = ks_bound_ncycle(17)
    assert result.max_anticorrelated == 16
    assert result.r_nc_exact == Fraction(16, 17)
    assert result.s_nc == -15.0
    with pytest.raises(ValueError):
        ks_bound_ncycle(27)


def test_algebraic_contradiction_input_validation():
    with pytest.raises(ValueError):
        algebraic_contradiction((1, 0, -1))
    with pytest.raises(ValueError):
        algebraic_contradiction((1, -1))
