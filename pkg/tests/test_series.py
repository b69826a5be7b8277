from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from cubicplanar.exceptions import ConstantsError, GrammarBudgetError, SeriesError
from cubicplanar.series import (
    NETWORK_CLASSES,
    TAU,
    TRIANGULATION_CONSTANT,
    PowerSeries,
    SingularData,
    class_values,
    conditioned_first_components,
    conditioned_first_joint,
    connected_value,
    critical_core_weights,
    evaluate_Y_law,
    pmf_power,
    product_first_joint,
    series_sqrt,
    solve_grammar,
    solve_singular_constants,
    triangulation_count,
    triangulation_series,
    tutte_count,
    tutte_series,
    verify_grammar,
)
from cubicplanar.series._triangulations import log_triangulation_counts


@pytest.fixture(scope="module")
def constants() -> SingularData:
    return solve_singular_constants(30)


@pytest.fixture(scope="module")
def exact_table():
    return solve_grammar(40)


def test_power_series_arithmetic():
    x = PowerSeries.monomial(1, 5)
    one = PowerSeries.constant(1, 5)
    geometric = (one - x).inverse()
    assert geometric.to_list() == [1] * 6
    assert (geometric * (one - x)).equals(one)
    assert (x**3).to_list() == [0, 0, 0, 1, 0, 0]
    assert geometric.derivative().to_list()[:5] == [1, 2, 3, 4, 5]
    assert x.shift(2).to_list() == [0, 0, 0, 1, 0, 0]


def test_power_series_errors():
    with pytest.raises(SeriesError, match="Unknown series mode"):
        PowerSeries([1], "decimal")
    with pytest.raises(SeriesError, match="even-only"):
        PowerSeries([1, 1], "exact", "even")
    with pytest.raises(SeriesError, match="Cannot combine"):
        PowerSeries([1, 1]) + PowerSeries([1.0, 1.0], "float")
    with pytest.raises(SeriesError, match="zero constant term"):
        PowerSeries([0, 1]).inverse()
    with pytest.raises(SeriesError, match="larger order"):
        PowerSeries([1, 2]).truncate(5)


@pytest.mark.parametrize("mode", ["exact", "float"])
def test_series_sqrt_squares_back(mode):
    rng = np.random.default_rng(3)
    values = [Fraction(int(v), 7) for v in rng.integers(1, 20, size=21)]
    values[0] = Fraction(9, 4)
    if mode == "float":
        values = [float(v) for v in values]
    s = PowerSeries(values, mode)
    root = series_sqrt(s)
    if mode == "exact":
        assert (root * root).equals(s)
    else:
        assert (root * root).allclose(s, rtol=1e-9)


def test_series_sqrt_rejects_irrational_start():
    with pytest.raises(SeriesError, match="no rational square root"):
        series_sqrt(PowerSeries([2, 1]))
    with pytest.raises(SeriesError, match="positive constant term"):
        series_sqrt(PowerSeries([-1.0, 1.0], "float"))


def test_triangulation_series_small():
    assert triangulation_series(3).to_list() == [0, 1, 1, 3]
    q = triangulation_series(30)
    assert all(q[n] == triangulation_count(n) for n in range(1, 31))
    u = tutte_series(30)
    assert all(u[n] == tutte_count(n) for n in range(1, 31))


def test_tutte_equation():
    u = tutte_series(25)
    one = PowerSeries.constant(1, 25)
    z = PowerSeries.monomial(1, 25)
    assert (u * (one - u) ** 3).equals(z)


def test_triangulation_asymptotics():
    n = 500
    logs = log_triangulation_counts(n)
    ratio = math.exp(logs[n] + 2.5 * math.log(n) + n * math.log(TAU)) / TRIANGULATION_CONSTANT
    assert 0.99 <= ratio <= 1.01


def test_critical_core_weights_sum():
    weights = critical_core_weights(2000)
    assert weights[0] == weights[1] == 0
    assert weights[2] == pytest.approx(float(TAU) ** 2)
    assert weights.sum() == pytest.approx(1 / 8 - 27 / 256, abs=1e-5)


def test_grammar_small_coefficients(exact_table):
    assert exact_table.coefficient("D", 0) == 0
    assert exact_table.coefficient("D", 2) == 0
    assert exact_table.coefficient("D", 3) == 0
    assert exact_table.labelled_count("D", 4) == 12
    assert exact_table.labelled_count("Cdot", 4) // 4 == 1
    assert exact_table.labelled_count("Cdot", 6) // 6 == 60
    assert exact_table.labelled_count("L", 6) == 180


def test_grammar_identities(exact_table):
    residuals = verify_grammar(exact_table)
    assert set(residuals) == {"loop", "isthmus", "series", "parallel", "polyhedral", "total", "simple", "ford"}
    assert all(value == 0.0 for value in residuals.values())
    coeffs = exact_table.t_coeffs
    for m in range(exact_table.t_order + 1):
        assert coeffs["N"][m] == coeffs["D"][m] + coeffs["I"][m]
        assert coeffs["D"][m] == sum(coeffs[k][m] for k in ("L", "S", "P", "H"))
        assert 3 * coeffs["Cdot"][m] == coeffs["Ns"][m]
        assert all(coeffs[k][m] >= 0 for k in NETWORK_CLASSES)


def test_grammar_methods_agree():
    online = solve_grammar(24)
    iterate = solve_grammar(24, method="iterate")
    for name in NETWORK_CLASSES:
        assert list(online.t_coeffs[name]) == list(iterate.t_coeffs[name])


@pytest.mark.slow
def test_exact_and_float_tables_agree():
    exact = solve_grammar(200)
    approx = solve_grammar(200, "float")
    for name in NETWORK_CLASSES:
        a = np.array([float(c) for c in exact.t_coeffs[name]])
        b = np.asarray(approx.t_coeffs[name], dtype=float)
        np.testing.assert_allclose(b, a, rtol=1e-10)


def test_grammar_errors(exact_table):
    with pytest.raises(GrammarBudgetError, match="mode='float'"):
        solve_grammar(700)
    with pytest.raises(SeriesError, match="non-negative"):
        solve_grammar(-2)
    with pytest.raises(SeriesError, match="Unknown method"):
        solve_grammar(10, method="newton")
    with pytest.raises(SeriesError, match="Unknown class"):
        exact_table.coefficient("X", 4)
    with pytest.raises(SeriesError, match="table of order"):
        exact_table.coefficient("D", 42)
    with pytest.raises(SeriesError, match="exact table"):
        solve_grammar(10, "float").labelled_count("D", 4)


def test_singular_constants(constants):
    expected = {
        "rho": "0.319224606195452700761429068280",
        "D0": "0.011525944379127380775581944095",
        "Dprime": "0.370296056465161996287563244273",
        "D3": "0.254267214080405673433969610493",
        "kappa": "0.850853090058314333870385348879",
        "c_v": "1.205660773457703954344217302817",
    }
    with mpmath.workdps(40):
        for name, digits in expected.items():
            assert abs(getattr(constants, name) - mpmath.mpf(digits)) < mpmath.mpf(10) ** -25, name
        assert abs(constants.Cidentity - 2) < 1e-9
        assert abs(constants.meanY - constants.meanY_from_kappa) < 1e-10
        tau = mpmath.mpf(27) / 256
        assert abs(constants.rho**2 * (1 + constants.D0) ** 3 - tau) < mpmath.mpf(10) ** -28
        assert all(abs(r) < mpmath.mpf(10) ** -30 for r in constants.residuals)
    assert float(constants.meanY) == pytest.approx(0.116861, abs=1e-6)
    assert constants.tau == Fraction(27, 256)


def test_singular_constants_round_trip(constants):
    restored = SingularData.from_dict(constants.to_dict())
    with mpmath.workdps(40):
        assert abs(restored.rho - constants.rho) < mpmath.mpf(10) ** -29
    assert restored.precision == constants.precision
    assert restored.as_floats() == pytest.approx(constants.as_floats())


def test_singular_constants_precision_guard():
    with pytest.raises(ConstantsError, match="at least 10 digits"):
        solve_singular_constants(5)


def test_class_values_add_up(constants):
    values = class_values(constants)
    assert values.L + values.S + values.P + values.H == pytest.approx(values.D, rel=1e-9)
    assert values.P == pytest.approx(values.P_double + values.P_pair)
    assert values.D == pytest.approx(float(constants.D0))


def test_connected_value(constants):
    rho2 = float(constants.rho) ** 2
    table = solve_grammar(400, "float", scale=rho2)
    value = connected_value(constants, table)
    assert value == pytest.approx(0.00060, abs=5e-5)
    with pytest.raises(ConstantsError, match="scale rho"):
        connected_value(constants, solve_grammar(10, "float"))


@pytest.mark.slow
def test_d_coefficient_asymptotics(constants):
    rho2 = float(constants.rho) ** 2
    law = evaluate_Y_law(2000, table=solve_grammar(2000, "float", scale=rho2), constants=constants)
    assert 0.95 <= law.tail_ratio(2000) <= 1.05


def test_y_law(constants):
    law = evaluate_Y_law(400, constants=constants)
    assert law.pmf(0) == pytest.approx(0.988605, abs=2e-6)
    assert law.pmf(2) == 0.0
    assert law.pmf(5) == 0.0
    assert law.pmf(402) == 0.0
    assert law.probabilities.sum() + law.tail_mass == pytest.approx(1.0)
    assert 0 < law.tail_mass < 1e-3
    assert law.mean == pytest.approx(float(constants.meanY))
    assert law.table_mean < law.mean
    assert law.w_values[0] == 1
    assert law.w_values[2] == 7
    assert law.size_biased_w.sum() + law.size_biased_tail_mass == pytest.approx(1.0)
    with pytest.raises(SeriesError, match="below the requested"):
        evaluate_Y_law(400, table=solve_grammar(100, "float"), constants=constants)


def test_pmf_power():
    pmf = np.array([0.5, 0.25, 0.25])
    squared = pmf_power(pmf, 2, 5)
    np.testing.assert_allclose(squared, np.convolve(pmf, pmf))
    assert pmf_power(pmf, 0, 3).tolist() == [1.0, 0.0, 0.0]
    cubed = pmf_power(pmf, 3, 4)
    np.testing.assert_allclose(cubed, np.convolve(np.convolve(pmf, pmf), pmf)[:4])


def test_conditioned_first_components(constants):
    law = evaluate_Y_law(200, constants=constants)
    single = conditioned_first_components(law, count=30, total=40)
    assert len(single) == 21
    assert single.sum() == pytest.approx(1.0)
    assert single[1] == pytest.approx(0.0, abs=1e-15)
    everything = conditioned_first_components(law, count=30, total=40, first=30)
    assert everything[-1] == pytest.approx(1.0)
    with pytest.raises(SeriesError, match="must be even"):
        conditioned_first_components(law, count=3, total=41)
    with pytest.raises(SeriesError, match="first <= count"):
        conditioned_first_components(law, count=3, total=40, first=4)


def test_first_joint_laws(constants):
    law = evaluate_Y_law(200, constants=constants)
    product = product_first_joint(law, 2, 4)
    assert len(product) == 17
    head = law.t_pmf[:4]
    np.testing.assert_allclose(product[:-1], np.outer(head, head).ravel())
    assert product.sum() == pytest.approx(1.0)
    # one component: the joint law is the single-component law on the alphabet
    single = conditioned_first_components(law, count=30, total=40)
    joint = conditioned_first_joint(law, 30, 40, 1, 6)
    np.testing.assert_allclose(joint[:-1], single[:6], atol=1e-12)
    assert joint[-1] == pytest.approx(single[6:].sum(), abs=1e-12)
    pair = conditioned_first_joint(law, 30, 40, 2, 6)
    assert pair.sum() == pytest.approx(1.0)
    assert np.all(pair >= 0)
    # with the sum fixed at 8 vertices, half sizes summing past 4 are impossible
    tight = conditioned_first_joint(law, 5, 8, 2, 6).reshape(-1)[:-1].reshape(6, 6)
    assert tight[3, 3] == 0
    assert tight.sum() + conditioned_first_joint(law, 5, 8, 2, 6)[-1] == pytest.approx(1.0)
    with pytest.raises(SeriesError, match="first <= count"):
        conditioned_first_joint(law, 3, 40, 4, 6)
