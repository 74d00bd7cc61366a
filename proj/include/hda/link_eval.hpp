// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "hda/array_channel.hpp"
#include "hda/precoding.hpp"
#include "hda/pulse.hpp"

namespace hda {

struct LinkConfig {
    int K = 4;
    double beta = 0.25;  // pulse roll-off
    int N_d = 512;       // symbols per data slot
    double p_blk = 0.0;
    double delta_theta_min_deg = 8.0;
    int slots = 2;  // data slots per drop

    void validate(const ArrayConfig& cfg) const;
};

// Signal and interference per UE in units of E0 (per-chip energy of a
// stream); n0 is the matched-filter noise power in the same units.
struct SinrTerms {
    std::vector<double> S;
    std::vector<double> I;
    double n0 = 1.0;
};

struct RateResult {
    std::vector<double> rates;  // bit/s/Hz
    double sum = 0.0;
    std::vector<double> S;
    std::vector<double> I;
    double n0 = 1.0;
};

// Index of the strongest path that is not blocked (by nominal strength).
int sync_path(const ChannelRealization& r);
// Strongest unblocked path as seen through the UE combiner, gamma_l |v^H a_R|^2.
int sync_path(const ChannelRealization& r, const CVector& combiner, const ArrayConfig& cfg);

// E[|b_kk s|^2] and E[|sum_{k' != k} b_kk' s_k'|^2] over N_d QPSK symbols of
// `slot`, with b the combined coefficient seen at the UE's sync delay.
SinrTerms sinr_terms(const std::vector<ChannelRealization>& ues, const PrecoderSet& precoders,
                     const ArrayConfig& cfg, const LinkConfig& link, int slot, Rng& rng);

double rate(double s, double i, double n0);
double sum_rate(const std::vector<double>& rates);
// Rates for received energy e0 per stream and unit noise.
RateResult rates_at(const SinrTerms& terms, double e0_over_n0);

// With probability p_blk the strongest path is blocked and its gains zeroed.
ChannelRealization apply_blockage(const ChannelRealization& r, double p_blk, Rng& rng);

struct Candidate {
    double aod_rad = 0.0;    // strongest AoD
    double power_db = 0.0;   // strongest-path power
};

// Greedy pick of K candidates with pairwise AoD separation >= delta_theta_min
// and strongest-path power within power_tol_db of the first pick.
std::vector<int> schedule_ues(const std::vector<Candidate>& candidates, int K,
                              double delta_theta_min_rad, double power_tol_db = 3.0);

}  // namespace hda
