// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hda/rng.hpp"
#include "hda/types.hpp"

namespace hda {

enum class Arch { FC, OSPS };

const char* to_string(Arch arch);
Arch arch_from_string(const std::string& s);

struct ArrayConfig {
    int M = 128;     // BS antennas
    int N = 16;      // UE antennas
    int M_RF = 4;    // BS RF chains
    int N_RF = 1;    // UE RF chains
    Arch arch = Arch::FC;
    // Subarray center-to-center spacing in wavelengths. Unset means contiguous
    // subarrays (M/M_RF half-wavelength elements apart).
    std::optional<double> Dx;
    double carrier_freq_Hz = 40e9;
    double bandwidth_Hz = 0.8e9;

    double wavelength_m() const { return kSpeedOfLight / carrier_freq_Hz; }
    double chip_s() const { return 1.0 / bandwidth_Hz; }
    // Elements per analog block: M for FC, M/M_RF for OSPS.
    int block_size() const { return arch == Arch::OSPS ? M / M_RF : M; }
    int num_blocks() const { return arch == Arch::OSPS ? M_RF : 1; }
    double dx_wavelengths() const { return Dx ? *Dx : 0.5 * (M / M_RF); }

    void validate() const;  // throws DomainError / StructuralError
};

// Rice factor with an explicit infinite state (pure specular path).
struct RiceFactor {
    double value = 0.0;
    bool infinite = false;

    static RiceFactor inf() { return {0.0, true}; }
    static RiceFactor of(double eta) { return {eta, false}; }
};

struct MultipathComponent {
    double aoa_rad = 0.0;
    double aod_rad = 0.0;
    double delay_s = 0.0;
    double doppler_Hz = 0.0;
    double strength = 1.0;  // gamma
    RiceFactor rice;
    double initial_phase_rad = 0.0;

    void validate() const;
};

// One UE's channel over a run of block-fading slots.
struct ChannelRealization {
    int ue = 0;
    std::vector<MultipathComponent> paths;
    std::vector<std::vector<cd>> gains;  // [slot][path]
    std::vector<bool> blocked;           // per path, data phase only

    int num_paths() const { return static_cast<int>(paths.size()); }
    int num_slots() const { return static_cast<int>(gains.size()); }
    double total_strength() const;
    // Index of the path with the largest nominal strength (ties: lowest index).
    int strongest_path() const;
};

struct Tap {
    CMatrix H;  // N x M
    double delay_s = 0.0;
};

struct PathSpec {
    double gamma = 1.0;
    RiceFactor rice;
};

// Statistical law used to draw a UE channel.
struct ChannelProfile {
    std::vector<PathSpec> paths{{1.0, RiceFactor::of(100.0)},
                                {0.6, RiceFactor::of(10.0)},
                                {0.4, RiceFactor::of(0.0)}};
    double ue_speed_mps = 1.0;
    double tau_max_chips = 100.0;
    double sector_deg = 60.0;  // angles uniform in [-sector, sector]
};

// Unit-modulus responses. Angles must lie in (-pi/2, pi/2).
CVector array_response_tx(const ArrayConfig& cfg, double theta_rad);
CVector array_response_rx(const ArrayConfig& cfg, double phi_rad);
// Same, parametrized by the sine of the angle (grid points include sin = -1).
CVector array_response_tx_sin(const ArrayConfig& cfg, double sin_theta);
CVector array_response_rx_sin(int N, double sin_phi);

cd sample_rice_gain(double gamma, RiceFactor eta, Rng& rng);

CMatrix dft_matrix(int n);
// Sine of the angle of grid point m (0-based), i.e. column m of dft_matrix(n)
// equals array_response(sin)/sqrt(n).
double grid_sin(int n, int m);

// Redraws gains for `slots` block-fading slots.
void resample_gains(ChannelRealization& r, int slots, Rng& rng);

ChannelRealization draw_ue_channel(const ChannelProfile& profile, const ArrayConfig& cfg,
                                   int slots, Rng& rng);

// Per-tap matrices rho * exp(j(2 pi nu t + phase)) a_R a_T^H at time t of `slot`.
// Blocked paths are skipped.
std::vector<Tap> channel_matrix(const ChannelRealization& r, const ArrayConfig& cfg, double t_s,
                                int slot = 0);

// F_N^H H (F_M masked to the rows of subarray `subarray`, 0-based). An unset
// subarray applies no mask (the FC transform).
CMatrix beam_domain_transform(const CMatrix& H, const ArrayConfig& cfg,
                              std::optional<int> subarray = std::nullopt);

using GammaMatrix = RMatrix;  // N x M, entry (n, m) with n on the AoA grid

// Average over the ensemble (outer: slots) of sum over taps of |beam-domain|^2.
GammaMatrix gamma_matrix(const std::vector<std::vector<Tap>>& ensemble, const ArrayConfig& cfg,
                         std::optional<int> subarray = std::nullopt);

// Closed-form second moment sum_l gamma_l |F_N^H a_R|^2 |a_T^H F_M|^2 (unmasked).
GammaMatrix expected_gamma_matrix(const std::vector<MultipathComponent>& paths,
                                  const ArrayConfig& cfg);

double snr_bbf(double p_tot_W, const std::vector<double>& gammas, double n0_W_per_Hz,
               double B_Hz);

}  // namespace hda
