import math
from fractions import Fraction
from pathlib import Path

import pytest

import ergocheck

NETWORKS = Path(__file__).resolve().parents[2] / "networks"


def net(name):
    return str(NETWORKS / name)


def test_vilar_is_proven_ergodic():
    report = ergocheck.analyze(net("vilar.net"), conserved_totals=[1, 1])
    assert report.verdict == "PROVEN_ERGODIC"
    assert report.exit_code == 0
    data = ergocheck.report_dict(report)
    assert data["schema"] == "ergocheck-report/1"
    assert data["drift"]["classification"]["binary"] == [1, 3, 15]
    assert all(x > 0 for x in report.lyapunov_vector)


def test_reference_witness_verifies():
    witness = ["2", "1", "2", "1", "2", "-1/2", "1/2", "-1/2", "1/2"]
    report = ergocheck.verify(net("vilar.net"), witness, conserved_totals=[1, 1])
    assert report.verdict == "PROVEN_ERGODIC"
    assert report.lyapunov_vector[5] == Fraction(1, 2)


def test_bad_witness_is_rejected():
    with pytest.raises(ergocheck.WitnessRejected):
        ergocheck.verify(net("vilar.net"), [1] * 9, conserved_totals=[1, 1])


def test_verdicts_of_small_networks():
    assert ergocheck.analyze(net("pure_birth.net")).verdict == "IRREDUCIBILITY_DISPROVEN"
    third = ergocheck.analyze(net("third_order.net"))
    assert third.verdict == "UNSUPPORTED"
    assert third.exit_code == 4
    assert ergocheck.analyze(net("catalytic.net")).verdict == "INCONCLUSIVE"


def test_missing_totals_and_parse_errors():
    with pytest.raises(ergocheck.InputError):
        ergocheck.analyze(net("vilar.net"))
    with pytest.raises(ergocheck.ParseError):
        ergocheck.parse_network("A -> ; 1\n")
    assert issubclass(ergocheck.ParseError, ergocheck.ErgocheckError)


def test_hermite_normal_form_contract():
    m = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    h, u, pivots = ergocheck.hermite_normal_form(m)
    product = [[sum(m[i][k] * u[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    assert product == h
    assert pivots == sorted(pivots)


def test_lfp_feasibility():
    # x >= 1, y >= 1, x + y <= 3
    witness = ergocheck.solve_lfp([[-1, 0], [0, -1], [1, 1]], [-1, -1, 3])
    assert witness is not None and sum(witness) <= 3 and min(witness) >= 1
    assert ergocheck.solve_lfp([[1]], [0], [[1]], [Fraction(1, 2)]) is None


def test_birth_death_stationary_is_poisson():
    network = ergocheck.parse_network("species: A\n0 -> A ; 2\nA -> 0 ; 1\n")
    est = ergocheck.stationary_distribution(network, [50])
    for state, p in zip(est["states"], est["probabilities"]):
        k = state[0]
        assert p == pytest.approx(math.exp(-2) * 2**k / math.factorial(k), abs=1e-12)
    assert est["exact"] is not None


def test_simulation_keeps_conserved_totals():
    network = ergocheck.parse_network(Path(net("vilar.net")).read_text())
    assert ergocheck.conservation_relations(network) == [[0, 0, 0, 0, 0, 1, 1, 0, 0], [0, 0, 0, 0, 0, 0, 0, 1, 1]]
    times, states = ergocheck.simulate(network, [0, 0, 0, 0, 0, 1, 0, 0, 1], 50.0, seed=3)
    assert times == sorted(times)
    assert all(s[5] + s[6] == 1 and s[7] + s[8] == 1 for s in states)
