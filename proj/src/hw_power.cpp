// SPDX-License-Identifier: Apache-2.0
#include "hda/hw_power.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hda/errors.hpp"

namespace hda {

void PAParams::validate() const {
    if (!(p_max_W > 0.0)) throw DomainError("p_max must be > 0");
    if (!(eta_max > 0.0 && eta_max <= 1.0)) throw DomainError("eta_max must be in (0, 1]");
}

const char* to_string(Waveform w) {
    switch (w) {
        case Waveform::SC: return "SC";
        case Waveform::OFDM: return "OFDM";
        case Waveform::SC_SUM: return "SC_SUM";
    }
    return "?";
}

WaveformSpec WaveformSpec::defaults(Waveform kind, int streams) {
    switch (kind) {
        case Waveform::SC: return {kind, 7.2, 1};
        case Waveform::OFDM: return {kind, 11.4, 1};
        case Waveform::SC_SUM: return {kind, 9.8, streams};
    }
    throw DomainError("unknown waveform");
}

std::pair<double, double> dissipation_factors(const ArrayConfig& cfg) {
    cfg.validate();
    if (cfg.arch == Arch::FC) return {1.0 / cfg.M, 1.0 / cfg.M_RF};
    return {static_cast<double>(cfg.M_RF) / cfg.M, 1.0};
}

double pre_amplified_power(const ArrayConfig& cfg, double epsilon) {
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be > 0");
    const auto [alpha_div, alpha_com] = dissipation_factors(cfg);
    // BST with ||u_i||^2 = M (FC) or M/M_RF (OSPS) on each of the M_RF chains.
    return alpha_com * alpha_div * epsilon * cfg.M_RF * cfg.block_size();
}

double pa_consumed(double p_rad, const PAParams& pa) {
    pa.validate();
    if (!(p_rad > 0.0)) throw DomainError("radiated power must be > 0");
    if (p_rad > pa.p_max_W * (1.0 + 1e-12))
        throw SaturationError("radiated power exceeds the PA saturation power");
    return std::sqrt(pa.p_max_W) / pa.eta_max * std::sqrt(p_rad);
}

double eta_eff(double p_rad, const PAParams& pa) { return p_rad / pa_consumed(p_rad, pa); }

Option1Point eta_eff_option1(double p_rad0, double alpha_off, const PAReference& ref) {
    if (!(alpha_off > 0.0 && alpha_off <= 1.0)) throw DomainError("alpha_off must be in (0, 1]");
    ref.pa.validate();
    const double p_rad = alpha_off / ref.alpha_off0 * p_rad0;
    return {p_rad, std::sqrt(p_rad) * ref.pa.eta_max / std::sqrt(ref.pa.p_max_W)};
}

double eta_eff_option2(double p_rad, double alpha_off, const PAReference& ref) {
    if (!(alpha_off > 0.0 && alpha_off <= 1.0)) throw DomainError("alpha_off must be in (0, 1]");
    if (!(p_rad > 0.0)) throw DomainError("radiated power must be > 0");
    ref.pa.validate();
    return std::sqrt(p_rad) * ref.pa.eta_max / std::sqrt(ref.pa.p_max_W * ref.alpha_off0) *
           std::sqrt(alpha_off);
}

double papr_backoff(const WaveformSpec& w) {
    if (!(w.papr_dB >= 0.0)) throw DomainError("PAPR must be >= 0 dB");
    return 1.0 / db_to_linear(w.papr_dB);
}

RVector rrc_taps(double beta, int os, int span) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("beta must be in [0, 1]");
    if (os < 1 || span < 1) throw DomainError("oversampling and span must be >= 1");
    const int n = span * os + 1;
    RVector h(n);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i - n / 2) / os;  // in symbols
        double v;
        if (t == 0.0) {
            v = 1.0 - beta + 4.0 * beta / kPi;
        } else if (beta > 0.0 && std::abs(std::abs(4.0 * beta * t) - 1.0) < 1e-12) {
            v = beta / std::sqrt(2.0) *
                ((1.0 + 2.0 / kPi) * std::sin(kPi / (4.0 * beta)) +
                 (1.0 - 2.0 / kPi) * std::cos(kPi / (4.0 * beta)));
        } else {
            v = (std::sin(kPi * t * (1.0 - beta)) + 4.0 * beta * t * std::cos(kPi * t * (1.0 + beta))) /
                (kPi * t * (1.0 - 16.0 * beta * beta * t * t));
        }
        h(i) = v;
    }
    return h / h.norm();
}

namespace {

// Linear interpolation between order statistics (the usual "linear" rule).
double percentile(std::vector<double> v, double pct) {
    std::sort(v.begin(), v.end());
    const double pos = pct / 100.0 * (v.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(pos));
    const size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

}  // namespace

double estimate_sc_sum_papr(int n_streams, long symbols, double beta, Rng& rng,
                            const PaprOptions& opt) {
    if (n_streams < 1) throw DomainError("n_streams must be >= 1");
    if (opt.block_symbols < 1 || symbols < opt.block_symbols)
        throw DomainError("need at least one block of symbols");
    const RVector h = rrc_taps(beta, opt.oversampling, opt.span_symbols);
    const int os = opt.oversampling;
    const long ns = symbols * os;
    const int taps = static_cast<int>(h.size());
    const int delay = taps / 2;

    std::vector<cd> sum(ns, 0.0);
    std::bernoulli_distribution bit(0.5);
    const double a = 1.0 / std::sqrt(2.0);
    std::vector<cd> sym(symbols);
    for (int s = 0; s < n_streams; ++s) {
        for (auto& x : sym) x = opt.unmodulated ? cd(a, a) : cd(bit(rng) ? a : -a, bit(rng) ? a : -a);
        // Output sample j = sum_k sym[k] h[j - k*os + delay]; only taps aligned
        // with a symbol position contribute.
        for (long j = 0; j < ns; ++j) {
            cd acc = 0.0;
            const long k_lo = std::max(0L, (j + delay - (taps - 1) + os - 1) / os);
            const long k_hi = std::min(symbols - 1, (j + delay) / os);
            for (long k = k_lo; k <= k_hi; ++k) acc += sym[k] * h(j - k * os + delay);
            sum[j] += acc;
        }
    }

    // Skip filter transients at both ends, then cut into blocks.
    const long skip = static_cast<long>(opt.span_symbols) * os;
    const long usable = ns - 2 * skip;
    const long block = static_cast<long>(opt.block_symbols) * os;
    const long nblocks = usable / block;
    if (nblocks < 1) throw DomainError("too few symbols for one block after transients");
    std::vector<double> papr(nblocks);
    for (long b = 0; b < nblocks; ++b) {
        double peak = 0.0, mean = 0.0;
        for (long j = skip + b * block; j < skip + (b + 1) * block; ++j) {
            const double p = std::norm(sum[j]);
            peak = std::max(peak, p);
            mean += p;
        }
        mean /= block;
        papr[b] = mean > 0.0 ? peak / mean : 1.0;
    }
    return linear_to_db(percentile(std::move(papr), opt.percentile));
}

}  // namespace hda
