// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hda/array_channel.hpp"
#include "hda/beamformers.hpp"
#include "hda/nnls.hpp"

namespace hda {

struct BeaconSchedule {
    int T = 0;
    int streams = 0;
    std::vector<std::vector<std::vector<int>>> bs_subsets;  // [slot][stream], AoD grid
    std::vector<std::vector<int>> ue_subsets;               // [slot], AoA grid
    // Per-finger phases in radians, [slot][stream][hop][finger] and
    // [slot][hop][finger]. Each slot is split into `hops` equal parts that use
    // fresh phases; all phases are zero for a plain indicator schedule.
    int hops = 1;
    std::vector<std::vector<std::vector<std::vector<double>>>> bs_phases;
    std::vector<std::vector<std::vector<double>>> ue_phases;
    std::uint64_t seed = 0;
};

// Beacon slot timing. Each stream occupies the whole slot under its own code;
// the UE despreads coherently per segment and adds segment energies.
struct BeaconTiming {
    int slot_chips = 1512;
    int segment_chips = 504;
    int segments() const { return slot_chips / segment_chips; }
};

struct MeasurementSystem {
    RMatrix A;  // rows T*M_RF (row = slot*M_RF + stream), cols N*M (col = n*M + m)
    RVector q;  // normalized energies, noise mean removed and floored at 0
    RVector noise_scale;  // standard deviation of the noise part of each q entry
    int N = 0;
    int M = 0;
};

struct GammaEstimate {
    GammaMatrix entries;  // N x M
    int iterations = 0;
    double kkt_residual = 0.0;
};

struct BaOptions {
    ChannelProfile profile;
    int bs_fingers = 64;
    int ue_fingers = 8;
    int phase_hops = 3;  // one phase draw per segment
    BeaconTiming timing;
    NnlsOptions nnls{.max_iter = 3000, .tol = 1e-7, .accelerated = true, .kkt_tol = 1e-3, .warm_start = std::nullopt};
    int threads = 1;
};

BeaconSchedule generate_schedule(const ArrayConfig& cfg, int T, int bs_fingers, int ue_fingers,
                                 std::uint64_t seed, int phase_hops = 0);

// phase_hops = 0 keeps the real 1/sqrt(|subset|) indicator coefficients;
// phase_hops = h >= 1 draws h independent per-finger phase vectors per slot.
// One measurement per (slot, stream). `realization` must carry >= T slots of
// gains. A non-finite or nonpositive snr_bbf gives noise-free measurements.
MeasurementSystem simulate_measurements(const BeaconSchedule& schedule,
                                        const ChannelRealization& realization,
                                        const ArrayConfig& cfg, double snr_bbf, Rng& rng,
                                        const BeaconTiming& timing = {});

GammaEstimate nnls_solve(const MeasurementSystem& system, int max_iter, double tol);
GammaEstimate to_gamma_estimate(const NnlsResult& r, int N, int M);

// (aoa index, aod index) of the p largest entries, strongest first. Ties go
// to the smaller linear index n*M + m.
std::vector<std::pair<int, int>> detect_top_p(const GammaMatrix& estimate, int p);

// P_D per T: fraction of trials whose NNLS argmax equals the argmax of the
// true second-moment matrix. Trials share one schedule prefix and channel per
// trial across T values.
std::vector<std::pair<int, double>> detection_probability(const ArrayConfig& cfg, double snr_bbf,
                                                          const std::vector<int>& T_values,
                                                          int trials, std::uint64_t seed,
                                                          const BaOptions& opt = {});

}  // namespace hda
