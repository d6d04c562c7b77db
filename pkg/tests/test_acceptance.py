"""The full numbered verification battery, one test per criterion.

Each test runs its criterion through a shared Battery (expensive runs are
memoized across criteria), prints the one-line verdict, and asserts the
pass flag with the measured details in the failure message.  Criterion 8
is expected to fail: the slow-decay tail cannot vacate half the domain by
t = 0.01 for any admissible configuration, and the test records that
honestly instead of loosening the check.  The whole module takes a few
minutes; the reference-resolution extinction run dominates.
"""

import json

import pytest

from vhjlab.acceptance import Battery


@pytest.fixture(scope="module")
def battery():
    return Battery(seed=17)


def _check(result):
    print(result.line())
    assert result.passed, (
        f"{result.line()}\n{json.dumps(result.details, default=str, indent=2)}")


def test_01_exponent_identities_hold(battery):
    _check(battery.criterion_1())


def test_02_barrier_solves_operator_exactly(battery):
    _check(battery.criterion_2())


def test_03_closed_form_sign_certificates(battery):
    _check(battery.criterion_3())


def test_04_one_step_scheme_structure(battery):
    _check(battery.criterion_4())


def test_05_reference_bump_extinction_rate(battery):
    _check(battery.criterion_5())


def test_06_support_collapse_rate(battery):
    _check(battery.criterion_6())


def test_07_support_confined_to_initial_ball(battery):
    _check(battery.criterion_7())


def test_08_slow_decay_tail_shrinks_to_bounded_set(battery):
    _check(battery.criterion_8())


def test_09_fat_tail_survives_past_horizon(battery):
    _check(battery.criterion_9())


def test_10_complete_extinction_keeps_ball_positive(battery):
    _check(battery.criterion_10())


def test_11_gradient_envelope_refinement_stable(battery):
    _check(battery.criterion_11())


def test_12_flatness_floor_and_flux_balance_persist(battery):
    _check(battery.criterion_12())


def test_13_extinction_beats_certified_horizon(battery):
    _check(battery.criterion_13())
