// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>

#include "hda/array_channel.hpp"
#include "hda/rng.hpp"

namespace hda {

inline double dbm_to_watt(double dbm) { return 1e-3 * db_to_linear(dbm); }
inline double watt_to_dbm(double w) { return linear_to_db(w / 1e-3); }

struct PAParams {
    double p_max_W = dbm_to_watt(6.0);  // saturation output power
    double eta_max = 0.3;               // efficiency at saturation

    void validate() const;
};

// Reference PA and its back-off; every option scales from this point.
struct PAReference {
    PAParams pa;
    double alpha_off0 = db_to_linear(-7.2);
};

enum class Waveform { SC, OFDM, SC_SUM };

const char* to_string(Waveform w);

struct WaveformSpec {
    Waveform kind = Waveform::SC;
    double papr_dB = 7.2;
    int streams = 1;

    // SC 7.2 dB, OFDM 11.4 dB, SC_SUM 9.8 dB (for 4 streams).
    static WaveformSpec defaults(Waveform kind, int streams = 4);
};

// (alpha_div, alpha_com)
std::pair<double, double> dissipation_factors(const ArrayConfig& cfg);

// Power ahead of the PAs for per-stream symbol energy epsilon.
double pre_amplified_power(const ArrayConfig& cfg, double epsilon);

// PA consumption for a radiated power; SaturationError above p_max.
double pa_consumed(double p_rad_W, const PAParams& pa);
// P_rad / P_cons
double eta_eff(double p_rad_W, const PAParams& pa);

struct Option1Point {
    double p_rad_W = 0.0;
    double eta_eff = 0.0;
};

// Same PA, different input back-off: radiated power scales with the back-off.
Option1Point eta_eff_option1(double p_rad0_W, double alpha_off, const PAReference& ref);

// PA resized so the back-off is met at the requested radiated power.
double eta_eff_option2(double p_rad_W, double alpha_off, const PAReference& ref);

double papr_backoff(const WaveformSpec& w);

struct PaprOptions {
    int oversampling = 4;
    int block_symbols = 512;
    int span_symbols = 16;  // RRC filter length in symbols
    double percentile = 99.9;
    bool unmodulated = false;  // constant symbols instead of QPSK
};

// Unit-energy root-raised-cosine taps sampled `oversampling` times per symbol.
RVector rrc_taps(double beta, int oversampling, int span_symbols);

// Sums n_streams independent pulse-shaped single-carrier waveforms of
// `symbols` symbols each and returns the percentile of per-block PAPR in dB.
double estimate_sc_sum_papr(int n_streams, long symbols, double beta, Rng& rng,
                            const PaprOptions& opt = {});

}  // namespace hda
