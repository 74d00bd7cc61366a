// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "hda/errors.hpp"
#include "hda/hw_power.hpp"
#include "oracles.hpp"

using namespace hda;

TEST_SUITE("hw_power") {

TEST_CASE("dissipation factors and pre-amplified power") {
    ArrayConfig c;
    auto [d, m] = dissipation_factors(c);
    CHECK(d == doctest::Approx(1.0 / 128));
    CHECK(m == doctest::Approx(1.0 / 4));
    CHECK(pre_amplified_power(c, 2e-3) == doctest::Approx(2e-3));
    c.arch = Arch::OSPS;
    std::tie(d, m) = dissipation_factors(c);
    CHECK(d == doctest::Approx(4.0 / 128));
    CHECK(m == 1.0);
    CHECK(pre_amplified_power(c, 2e-3) == doctest::Approx(8e-3));
    // OSPS loses M_RF less in combining, whatever the array size
    for (int M_RF : {1, 2, 8}) {
        ArrayConfig f, o;
        f.M_RF = o.M_RF = M_RF;
        o.arch = Arch::OSPS;
        CHECK(pre_amplified_power(o, 1.0) / pre_amplified_power(f, 1.0) == doctest::Approx(M_RF));
    }
    CHECK_THROWS_AS(pre_amplified_power(c, 0.0), DomainError);
}

TEST_CASE("PA efficiency law") {
    const PAParams pa;
    CHECK(eta_eff(pa.p_max_W, pa) == doctest::Approx(pa.eta_max));
    // 6 dB below saturation halves the efficiency
    CHECK(eta_eff(pa.p_max_W / db_to_linear(6.0), pa) == doctest::Approx(pa.eta_max / db_to_linear(3.0)));
    CHECK_THROWS_AS(pa_consumed(2.0 * pa.p_max_W, pa), SaturationError);
    CHECK_THROWS_AS(pa_consumed(0.0, pa), DomainError);
    PAParams bad;
    bad.eta_max = 1.5;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("back-off anchors for the three waveforms") {
    const PAReference ref;
    const double p0 = dbm_to_watt(3.0);
    const auto sc = eta_eff_option1(p0, papr_backoff(WaveformSpec::defaults(Waveform::SC)), ref);
    const auto sum = eta_eff_option1(p0, papr_backoff(WaveformSpec::defaults(Waveform::SC_SUM)), ref);
    const auto ofdm = eta_eff_option1(p0, papr_backoff(WaveformSpec::defaults(Waveform::OFDM)), ref);
    CHECK(watt_to_dbm(sc.p_rad_W) == doctest::Approx(3.0));
    CHECK(watt_to_dbm(sum.p_rad_W) == doctest::Approx(3.0 - 2.6));
    CHECK(watt_to_dbm(ofdm.p_rad_W) == doctest::Approx(3.0 - 4.2));
    // same PA: efficiency follows the square root of the radiated power
    CHECK(sum.eta_eff / sc.eta_eff == doctest::Approx(std::pow(10.0, -2.6 / 20.0)));

    const double one_mw = dbm_to_watt(0.0);
    const double e_sc = eta_eff_option2(one_mw, papr_backoff(WaveformSpec::defaults(Waveform::SC)), ref);
    const double e_sum = eta_eff_option2(one_mw, papr_backoff(WaveformSpec::defaults(Waveform::SC_SUM)), ref);
    const double e_ofdm = eta_eff_option2(one_mw, papr_backoff(WaveformSpec::defaults(Waveform::OFDM)), ref);
    CHECK(std::abs(e_sc - 0.1504) < 1e-3);
    CHECK(std::abs(e_sum - 0.1115) < 1e-3);
    CHECK(std::abs(e_ofdm - 0.0927) < 1e-3);
    // hand value: 0.3 * sqrt(1 / 10^0.6)
    CHECK(e_sc == doctest::Approx(0.3 / std::sqrt(db_to_linear(6.0))));
    CHECK_THROWS_AS(eta_eff_option1(p0, 0.0, ref), DomainError);
    CHECK_THROWS_AS(papr_backoff({Waveform::SC, -1.0, 1}), DomainError);
}

TEST_CASE("RRC taps") {
    for (double beta : {0.05, 0.25, 1.0}) {
        const RVector h = rrc_taps(beta, 4, 16);
        CHECK(h.size() == 65);
        CHECK(h.norm() == doctest::Approx(1.0));
        for (int i = 0; i < h.size(); ++i) CHECK(h(i) == doctest::Approx(h(h.size() - 1 - i)));
        // same shape as the continuous pulse
        const double s = h(32) / oracle::rrc(0.0, beta);
        for (int i = 0; i < h.size(); ++i)
            CHECK(h(i) == doctest::Approx(s * oracle::rrc((i - 32) / 4.0, beta)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(rrc_taps(-0.1, 4, 16), DomainError);
}

TEST_CASE("PAPR estimates") {
    PaprOptions opt;
    Rng rng = make_rng(11);
    const double one = estimate_sc_sum_papr(1, 1L << 17, 0.05, rng, opt);
    CHECK(one == doctest::Approx(7.2).epsilon(0.7 / 7.2));
    Rng rng2 = make_rng(11);
    const double wide = estimate_sc_sum_papr(1, 1L << 17, 0.5, rng2, opt);
    CHECK(wide < one);
    Rng rng3 = make_rng(12);
    const double four = estimate_sc_sum_papr(4, 1L << 15, 0.05, rng3, opt);
    CHECK(four > one);
    opt.unmodulated = true;
    Rng rng4 = make_rng(13);
    CHECK(estimate_sc_sum_papr(1, 1L << 13, 0.25, rng4, opt) < 0.5);
    CHECK_THROWS_AS(estimate_sc_sum_papr(0, 1024, 0.05, rng4), DomainError);
    CHECK_THROWS_AS(estimate_sc_sum_papr(1, 100, 0.05, rng4), DomainError);
}

}  // TEST_SUITE
