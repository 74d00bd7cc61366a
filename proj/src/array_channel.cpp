// SPDX-License-Identifier: Apache-2.0
#include "hda/array_channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hda/errors.hpp"

namespace hda {

const char* to_string(Arch arch) { return arch == Arch::FC ? "FC" : "OSPS"; }

Arch arch_from_string(const std::string& s) {
    if (s == "FC" || s == "fc") return Arch::FC;
    if (s == "OSPS" || s == "osps") return Arch::OSPS;
    throw DomainError("unknown architecture '" + s + "'");
}

void ArrayConfig::validate() const {
    if (M < 1 || N < 1 || M_RF < 1) throw DomainError("antenna and RF-chain counts must be >= 1");
    if (N_RF != 1) throw DomainError("N_RF must be 1");
    if (M_RF > M) throw StructuralError("M_RF must not exceed M");
    if (arch == Arch::OSPS && M % M_RF != 0)
        throw StructuralError("OSPS requires M divisible by M_RF");
    if (Dx && !(*Dx >= 0.0)) throw DomainError("Dx must be >= 0");
    if (!(carrier_freq_Hz > 0.0) || !(bandwidth_Hz > 0.0))
        throw DomainError("carrier frequency and bandwidth must be > 0");
}

namespace {

void check_angle(double a, const char* name) {
    if (!(a > -kPi / 2 && a < kPi / 2))
        throw DomainError(std::string(name) + " must lie in (-pi/2, pi/2)");
}

}  // namespace

void MultipathComponent::validate() const {
    check_angle(aoa_rad, "aoa");
    check_angle(aod_rad, "aod");
    if (!(strength > 0.0)) throw DomainError("path strength must be > 0");
    if (!rice.infinite && !(rice.value >= 0.0)) throw DomainError("rice factor must be >= 0");
    if (!(delay_s >= 0.0)) throw DomainError("delay must be >= 0");
}

double ChannelRealization::total_strength() const {
    double s = 0.0;
    for (const auto& p : paths) s += p.strength;
    return s;
}

int ChannelRealization::strongest_path() const {
    int best = 0;
    for (int l = 1; l < num_paths(); ++l)
        if (paths[l].strength > paths[best].strength) best = l;
    return best;
}

CVector array_response_tx_sin(const ArrayConfig& cfg, double s) {
    const int mh = cfg.block_size();
    const double dx = cfg.dx_wavelengths();
    CVector a(cfg.M);
    for (int b = 0; b < cfg.num_blocks(); ++b) {
        const double psi = 2.0 * kPi * b * dx * s;
        for (int d = 0; d < mh; ++d) a(b * mh + d) = std::polar(1.0, kPi * d * s + psi);
    }
    return a;
}

CVector array_response_rx_sin(int N, double s) {
    CVector a(N);
    for (int n = 0; n < N; ++n) a(n) = std::polar(1.0, kPi * n * s);
    return a;
}

CVector array_response_tx(const ArrayConfig& cfg, double theta) {
    check_angle(theta, "theta");
    return array_response_tx_sin(cfg, std::sin(theta));
}

CVector array_response_rx(const ArrayConfig& cfg, double phi) {
    check_angle(phi, "phi");
    return array_response_rx_sin(cfg.N, std::sin(phi));
}

cd sample_rice_gain(double gamma, RiceFactor eta, Rng& rng) {
    if (!(gamma > 0.0)) throw DomainError("gamma must be > 0");
    const double amp = std::sqrt(gamma);
    if (eta.infinite) return {amp, 0.0};
    if (!(eta.value >= 0.0)) throw DomainError("rice factor must be >= 0");
    const double los = std::sqrt(eta.value / (1.0 + eta.value));
    const double nlos = 1.0 / std::sqrt(1.0 + eta.value);
    return amp * (los + nlos * complex_normal(rng));
}

double grid_sin(int n, int m) { return 2.0 * m / n - 1.0; }

CMatrix dft_matrix(int n) {
    if (n < 1) throw DomainError("DFT size must be >= 1");
    CMatrix F(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int c = 0; c < n; ++c) {
        // phase = pi*k/n, reduced modulo 2 pi in integers
        for (int r = 0; r < n; ++r) {
            const long long k = static_cast<long long>(r) * (2LL * c - n);
            const long long twice_n = 2LL * n;
            const long long km = ((k % twice_n) + twice_n) % twice_n;
            F(r, c) = std::polar(scale, kPi * static_cast<double>(km) / n);
        }
    }
    return F;
}

void resample_gains(ChannelRealization& r, int slots, Rng& rng) {
    r.gains.assign(slots, std::vector<cd>(r.paths.size()));
    for (int s = 0; s < slots; ++s)
        for (int l = 0; l < r.num_paths(); ++l)
            r.gains[s][l] = sample_rice_gain(r.paths[l].strength, r.paths[l].rice, rng);
}

ChannelRealization draw_ue_channel(const ChannelProfile& profile, const ArrayConfig& cfg,
                                   int slots, Rng& rng) {
    if (profile.paths.empty()) throw DomainError("channel profile has no paths");
    const double sector = deg_to_rad(profile.sector_deg);
    if (!(sector > 0.0 && sector < kPi / 2)) throw DomainError("angle sector must be in (0, 90) deg");
    const double nu_max = cfg.carrier_freq_Hz * profile.ue_speed_mps / kSpeedOfLight;

    ChannelRealization r;
    const int L = static_cast<int>(profile.paths.size());
    std::vector<double> delays(L);
    for (auto& d : delays) d = uniform(rng, 0.0, profile.tau_max_chips) * cfg.chip_s();
    std::sort(delays.begin(), delays.end());

    r.paths.resize(L);
    for (int l = 0; l < L; ++l) {
        auto& p = r.paths[l];
        p.strength = profile.paths[l].gamma;
        p.rice = profile.paths[l].rice;
        p.aoa_rad = uniform(rng, -sector, sector);
        p.aod_rad = uniform(rng, -sector, sector);
        p.delay_s = delays[l];  // first (LOS) path gets the minimum delay
        p.doppler_Hz = l == 0 ? nu_max : uniform(rng, -nu_max, nu_max);
        p.initial_phase_rad = uniform(rng, 0.0, 2.0 * kPi);
        p.validate();
    }
    r.blocked.assign(L, false);
    resample_gains(r, slots, rng);
    return r;
}

std::vector<Tap> channel_matrix(const ChannelRealization& r, const ArrayConfig& cfg, double t,
                                int slot) {
    if (slot < 0 || slot >= r.num_slots()) throw DomainError("slot not sampled");
    std::vector<Tap> taps;
    taps.reserve(r.paths.size());
    for (int l = 0; l < r.num_paths(); ++l) {
        if (!r.blocked.empty() && r.blocked[l]) continue;
        const auto& p = r.paths[l];
        const cd g = r.gains[slot][l] *
                     std::polar(1.0, 2.0 * kPi * p.doppler_Hz * t + p.initial_phase_rad);
        const CVector aR = array_response_rx(cfg, p.aoa_rad);
        const CVector aT = array_response_tx(cfg, p.aod_rad);
        taps.push_back({g * aR * aT.adjoint(), p.delay_s});
    }
    return taps;
}

CMatrix beam_domain_transform(const CMatrix& H, const ArrayConfig& cfg,
                              std::optional<int> subarray) {
    if (H.rows() != cfg.N || H.cols() != cfg.M) throw StructuralError("H must be N x M");
    CMatrix FM = dft_matrix(cfg.M);
    if (subarray) {
        const int i = *subarray;
        if (i < 0 || i >= cfg.num_blocks()) throw DomainError("invalid subarray index");
        const int mh = cfg.block_size();
        for (int r = 0; r < cfg.M; ++r)
            if (r / mh != i) FM.row(r).setZero();
    }
    return dft_matrix(cfg.N).adjoint() * H * FM;
}

GammaMatrix gamma_matrix(const std::vector<std::vector<Tap>>& ensemble, const ArrayConfig& cfg,
                         std::optional<int> subarray) {
    if (ensemble.empty()) throw DomainError("empty ensemble");
    GammaMatrix G = GammaMatrix::Zero(cfg.N, cfg.M);
    for (const auto& taps : ensemble)
        for (const auto& tap : taps)
            G += beam_domain_transform(tap.H, cfg, subarray).cwiseAbs2();
    return G / static_cast<double>(ensemble.size());
}

GammaMatrix expected_gamma_matrix(const std::vector<MultipathComponent>& paths,
                                  const ArrayConfig& cfg) {
    const CMatrix FN = dft_matrix(cfg.N);
    const CMatrix FM = dft_matrix(cfg.M);
    GammaMatrix G = GammaMatrix::Zero(cfg.N, cfg.M);
    for (const auto& p : paths) {
        const RVector r = (FN.adjoint() * array_response_rx(cfg, p.aoa_rad)).cwiseAbs2();
        const RVector t = (FM.adjoint() * array_response_tx(cfg, p.aod_rad)).cwiseAbs2();
        G += p.strength * r * t.transpose();
    }
    return G;
}

double snr_bbf(double p_tot, const std::vector<double>& gammas, double n0, double B) {
    if (!(p_tot > 0.0) || !(n0 > 0.0) || !(B > 0.0) || gammas.empty())
        throw DomainError("snr_bbf inputs must be positive");
    double sum = 0.0;
    for (double g : gammas) {
        if (!(g > 0.0)) throw DomainError("snr_bbf path strengths must be positive");
        sum += g;
    }
    return p_tot * sum / (n0 * B);
}

}  // namespace hda
