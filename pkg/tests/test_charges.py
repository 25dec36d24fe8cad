"""Conservation sequences, their charge monomials, and the conservation laws."""

import pytest

from nicolai.charges import (
    ConservationSequence,
    build_charge,
    charge_monomial,
    enumerate_sequences,
    enumerate_union,
    negate,
    verify_annihilation,
    verify_commutation,
)
from nicolai.fixtures import load_fixture
from nicolai.fock import (
    FockVector,
    SiteWindow,
    anticommutator,
    build_matrix,
    parity_operator,
    particle_hole_unitary,
)
from nicolai.ground import count_transfer, enumerate_upsilon_hat
from nicolai.model import build_supercharge


def _seq(k, l, text):
    return ConservationSequence.from_string(k, l, text)


# -- the sequence space -------------------------------------------------------

def test_validation_rules():
    with pytest.raises(ValueError):
        _seq(0, 1, "--")  # wrong length
    with pytest.raises(ValueError):
        _seq(0, 1, "-+-")  # left edge pair not constant
    with pytest.raises(ValueError):
        _seq(0, 2, "--+-+")  # right edge pair not constant
    with pytest.raises(ValueError):
        _seq(0, 2, "++-++")  # alternating triplet at the even center
    with pytest.raises(ValueError):
        ConservationSequence(1, 1, (1, 1, 1))
    # the same strings are fine with checking disabled (corruption fixtures)
    bad = ConservationSequence.from_string(0, 2, "+----", check=False)
    assert bad.to_string() == "+----"


def test_smallest_space_is_the_two_constants():
    seqs = enumerate_sequences(0, 1)
    assert [f.to_string() for f in seqs] == ["---", "+++"]
    assert seqs[0] == ConservationSequence.constant(0, 1, -1)
    assert seqs[1] == ConservationSequence.constant(0, 1, 1)


@pytest.mark.parametrize("name,expected_len", [
    ("xi_0_1", 2), ("xi_0_2", 6), ("xi_0_3", 18), ("xi_0_4", 54),
])
def test_fixture_tables_reproduced(name, expected_len):
    table = load_fixture(name)
    assert len(table["sequences"]) == expected_len
    produced = {f.to_string() for f in enumerate_sequences(table["k"], table["l"])}
    assert produced == set(table["sequences"])
    assert len(set(table["sequences"])) == expected_len


def test_size_law():
    for n in range(1, 11):
        assert len(enumerate_sequences(0, n)) == 2 * 3 ** (n - 1)
        assert count_transfer(n) == 2 * 3 ** (n - 1)


def test_sequence_config_bijection():
    # -1 <-> 0, +1 <-> 1 identifies the sequence space with the config space
    for n in range(1, 5):
        seq_strings = {
            f.to_string().replace("-", "0").replace("+", "1")
            for f in enumerate_sequences(0, n)
        }
        cfg_strings = {g.to_string() for g in enumerate_upsilon_hat(0, n)}
        assert seq_strings == cfg_strings


def test_union_sizes():
    assert len(enumerate_union(0, 1)) == 2
    assert len(enumerate_union(0, 2)) == 2 + 2 + 6
    assert len(enumerate_union(0, 3)) == 2 + 2 + 2 + 6 + 6 + 18
    with pytest.raises(ValueError):
        enumerate_union(2, 2)


def test_union_keeps_intervals_distinct():
    union = enumerate_union(0, 2)
    constants = [f for f in union if f.to_string() == "---"]
    assert {(f.k, f.l) for f in constants} == {(0, 1), (1, 2)}


# -- charge monomials ---------------------------------------------------------

def test_constant_charges():
    plus = charge_monomial(ConservationSequence.constant(0, 1, 1))
    assert plus.factors == ((0, True), (1, True), (2, True))
    minus = charge_monomial(ConservationSequence.constant(0, 1, -1))
    assert minus.factors == ((0, False), (1, False), (2, False))
    # the all-plus charge creates the fully occupied state from the vacuum
    w = SiteWindow(0, 2)
    out = build_matrix(plus, w).apply(FockVector.vacuum(w))
    assert out == FockVector.occupied(w)


def test_mixed_charges_from_tables():
    u_i = charge_monomial(_seq(0, 2, "---++"))
    assert u_i.factors == (
        (0, False), (1, False), (2, False), (3, True), (4, True)
    )
    t_i = charge_monomial(_seq(0, 3, "+++--++"))
    assert t_i.factors == (
        (0, True), (1, True), (2, True), (3, False), (4, False), (5, True), (6, True)
    )
    op = build_charge(_seq(0, 2, "---++"))
    assert op.monomial == u_i and op.sequence.to_string() == "---++"


def test_charges_are_odd():
    theta = None
    for f in enumerate_union(0, 2):
        mono = charge_monomial(f)
        assert mono.degree == 2 * (f.l - f.k) + 1
        window = SiteWindow(0, 4)
        theta = theta or parity_operator(window)
        assert anticommutator(theta, build_matrix(mono, window)).is_zero()


# -- negation and particle-hole ----------------------------------------------

def test_negate_is_an_involution():
    for f in enumerate_sequences(0, 2):
        assert negate(negate(f)) == f
    r_plus = ConservationSequence.constant(0, 1, 1)
    assert negate(r_plus) == ConservationSequence.constant(0, 1, -1)


def test_sequence_space_closed_under_negation():
    for n in (1, 2, 3):
        space = set(enumerate_sequences(0, n))
        assert {negate(f) for f in space} == space
    # blockwise pairings in the published list for n = 3
    assert negate(_seq(0, 3, "---++--")).to_string() == "+++--++"
    assert negate(_seq(0, 3, "-----++")).to_string() == "+++++--"


def test_negation_is_particle_hole_conjugation():
    # matrix(Q(-f)) equals U matrix(Q(f)) U^T up to one overall sign per window
    for f in enumerate_sequences(0, 2) + enumerate_sequences(0, 1):
        window = SiteWindow(2 * f.k, 2 * f.l)
        u = particle_hole_unitary(window)
        conjugated = u @ build_matrix(charge_monomial(f), window) @ u.transpose()
        negated = build_matrix(charge_monomial(negate(f)), window)
        assert conjugated == negated  # odd window: no residual sign


def test_adjoint_negation_sign():
    # Q(f)* = (-1)^(m(m-1)/2) Q(-f) with m factors
    for f in enumerate_union(0, 3):
        m = 2 * (f.l - f.k) + 1
        window = SiteWindow(2 * f.k, 2 * f.l)
        lhs = build_matrix(charge_monomial(f).adjoint(), window)
        sign = -1 if (m * (m - 1) // 2) % 2 else 1
        rhs = build_matrix(charge_monomial(negate(f)).scaled(sign), window)
        assert lhs == rhs


# -- conservation laws --------------------------------------------------------

def test_annihilation_examples():
    assert verify_annihilation(ConservationSequence.constant(0, 1, 1), SiteWindow(-1, 3))
    assert verify_annihilation(ConservationSequence.constant(0, 2, -1), SiteWindow(-1, 5))
    corrupted = ConservationSequence.from_string(0, 2, "+----", check=False)
    assert not verify_annihilation(corrupted, SiteWindow(-1, 5))
    with pytest.raises(ValueError):
        verify_annihilation(ConservationSequence.constant(0, 2, 1), SiteWindow(0, 3))


def test_commutation_examples():
    m1 = build_supercharge((0, 1), "open")
    assert verify_commutation(ConservationSequence.constant(0, 1, 1), m1)
    m2 = build_supercharge((0, 2), "open")
    assert verify_commutation(_seq(0, 2, "---++"), m2)
    with pytest.raises(ValueError):
        verify_commutation(_seq(0, 2, "---++"), m1)


def test_commutation_sweep_n3():
    m = build_supercharge((0, 3), "open")
    union = enumerate_union(0, 3)
    assert len(union) == 36
    assert all(verify_commutation(f, m) for f in union)
    assert all(verify_annihilation(f, m.window) for f in union)


def test_sequence_json_round_trip():
    f = _seq(0, 2, "---++")
    assert f.to_json() == {"k": 0, "l": 2, "values": "---++"}
    assert ConservationSequence.from_json(f.to_json()) == f
