import pytest
from hypothesis import given, strategies as st
from mpmath import mp

from qmop import (ConstraintViolation, DegenerateParams, DivergentMoment,
                  IntegerAlpha, MissingSample, NonDecayingSummand, Params,
                  PoleProximity, PrecisionConfig, WeightSpec, ZeroArgument,
                  config_for, digits_for, g_eval, h_eval, jackson_integral,
                  qpoch_finite, qpoch_infinite, to_mp, truncation_index,
                  weight_eval, weight_table)


def test_to_mp_float_uses_decimal_repr():
    with mp.workdps(40):
        assert to_mp(0.1) == mp.mpf("0.1")
        assert to_mp("0.1") == mp.mpf("0.1")
        assert to_mp(3) == 3
        v = to_mp(0.5 + 0.25j)
        assert v.real == mp.mpf("0.5") and v.imag == mp.mpf("0.25")


def test_digits_policy():
    assert digits_for(4, "0.7") == 69
    assert digits_for(10, "0.7") == 115
    assert digits_for(12, "0.7") == 139
    cfg = config_for(10, "0.7")
    assert cfg.digits == 115 and cfg.guard == 40


def test_tail_tolerance():
    with mp.workdps(80):
        assert PrecisionConfig(digits=60).tail_tol == mp.power(10, -50)
        assert PrecisionConfig(digits=60, tail_exp=-33).tail_tol == mp.power(10, -33)


def test_params_validation():
    with pytest.raises(ConstraintViolation):
        Params(q="1.2", alpha="0.4", beta="0.6")
    with pytest.raises(ConstraintViolation):
        Params(q="0", alpha="0.4", beta="0.6")
    with pytest.raises(DegenerateParams):
        Params(q="0.7", alpha="1.4", beta="0.4")
    Params(q="0.7", alpha="1.0", beta="0.6")  # integer alpha alone is fine


def test_weight_spec_validation():
    with pytest.raises(ConstraintViolation):
        WeightSpec.zeta_family("0.4", "-0.5")
    w = WeightSpec.lattice_samples("0.4", [1.0, 1.1])
    with pytest.raises(MissingSample):
        weight_eval(w, 5, Params(q="0.7", alpha="0.4", beta="0.6"),
                    PrecisionConfig(digits=30))


@given(a=st.floats(-2, 2), n=st.integers(0, 12))
def test_qpoch_finite_definition(a, n):
    with mp.workdps(40):
        q = mp.mpf("0.7")
        av = to_mp(a)
        prod = mp.one
        for j in range(n):
            prod *= 1 - av * q ** j
        assert abs(qpoch_finite(av, q, n) - prod) <= 1e-30 * max(1, abs(prod))


@given(a=st.floats(-3, 3), k=st.integers(0, 6))
def test_qpoch_splitting(a, k):
    with mp.workdps(60):
        q = mp.mpf("0.7")
        av = to_mp(a)
        full = qpoch_finite(av, q, 9)
        split = qpoch_finite(av, q, k) * qpoch_finite(av * q ** k, q, 9 - k)
        assert abs(full - split) <= 1e-45 * max(1, abs(full))


def test_qpoch_infinite_reference():
    with mp.workdps(80):
        q = mp.mpf("0.7")
        for a in ("0.3", "-1.7", "0.99"):
            av = mp.mpf(a)
            ours = qpoch_infinite(av, q, mp.power(10, -70))
            ref = mp.qp(av, q)
            assert abs(ours - ref) <= 1e-60 * abs(ref)
        assert qpoch_infinite(0, q, mp.power(10, -70)) == 1


def test_jackson_closed_form():
    with mp.workdps(60):
        q = mp.mpf("0.7")
        for s in ("0.4", "1.3"):
            sv = mp.mpf(s)
            got = jackson_integral(lambda x: x ** sv, q, mp.power(10, -50))
            want = 1 / (1 - q ** (sv + 1))
            assert abs(got - want) <= 1e-45 * abs(want)


def test_jackson_rejects_growing_summand():
    with mp.workdps(40):
        q = mp.mpf("0.7")
        with pytest.raises(NonDecayingSummand):
            jackson_integral(lambda x: 1 / x ** 2, q, mp.power(10, -30))


def test_truncation_needs_integrable_exponent(params, cfg):
    with pytest.raises(DivergentMoment):
        truncation_index(WeightSpec.little_q_jacobi("-1.2"), params, cfg)
    assert truncation_index(WeightSpec.little_q_jacobi("0.4"), params, cfg) > 0


def test_weight_table_matches_pointwise(params, cfg):
    specs = [WeightSpec.little_q_jacobi("0.4"),
             WeightSpec.zeta_family("0.6", "1.5"),
             WeightSpec.lattice_samples("0.4", [1.0, 1.2, 1.05, 1.01])]
    with mp.workdps(cfg.digits + cfg.guard):
        for w in specs:
            tab = weight_table(w, params, cfg, 4)
            for k in range(4):
                pw = weight_eval(w, k, params, cfg)
                assert abs(tab[k] - pw) <= 1e-45 * abs(pw)


def test_zeta_zero_weight_is_pure_power(params, cfg):
    w = WeightSpec.zeta_family("0.4", "0")
    with mp.workdps(cfg.digits + cfg.guard):
        q = mp.mpf("0.7")
        for k in range(5):
            v = weight_eval(w, k, params, cfg)
            assert abs(v - q ** (k * mp.mpf("0.4"))) <= 1e-45


def test_weight_eval_rejects_negative_index(params, cfg):
    w = WeightSpec.little_q_jacobi("0.4")
    with pytest.raises(ConstraintViolation):
        weight_eval(w, -1, params, cfg)


def test_h_functional_equation(params, cfg):
    with mp.workdps(cfg.digits):
        q = mp.mpf("0.7")
        for a in ("-0.6", "0.4", "1.7"):
            for zs in ("0.83", "-1.9", "2.4", 0.3 + 0.4j):
                z = to_mp(zs)
                hq = h_eval(q * z, a, params, cfg)
                hz = h_eval(z, a, params, cfg)
                assert abs(hq - q ** mp.mpf(a) * hz) <= 1e-40 * abs(hq)


def test_h_residue_at_one(params, cfg):
    with mp.workdps(cfg.digits):
        eps = mp.power(10, -20)
        res = eps * h_eval(1 + eps, "0.4", params, cfg)
        assert abs(res - 1) <= 1e-15


def test_h_error_paths(params, cfg):
    with pytest.raises(IntegerAlpha):
        h_eval("0.5", 2, params, cfg)
    with pytest.raises(ZeroArgument):
        h_eval(0, "0.4", params, cfg)
    with mp.workdps(cfg.digits):
        z = mp.mpf("0.7") ** 3 * (1 + mp.power(10, -40))
        with pytest.raises(PoleProximity):
            h_eval(z, "0.4", params, cfg)


def test_g_functional_equation(params, cfg):
    with mp.workdps(cfg.digits):
        q = mp.mpf("0.7")
        for ts in ("0.37", "-2.6", 0.5 - 0.8j):
            t = to_mp(ts)
            gq = g_eval(q * t, params, cfg)
            gt = g_eval(t, params, cfg)
            assert abs(gq + gt / (q * t)) <= 1e-40 * abs(gq)


def test_g_vanishes_on_lattice(params, cfg):
    with mp.workdps(cfg.digits):
        q = mp.mpf("0.7")
        assert abs(g_eval(q ** 5, params, cfg)) <= mp.power(10, -50)
    with pytest.raises(ZeroArgument):
        g_eval(0, params, cfg)
