// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "hda/array_channel.hpp"

namespace hda {

enum class Scheme { BST, MRT, MRZF };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct BeamPair {
    int aoa = 0;  // index on the N-point AoA grid
    int aod = 0;  // index on the M-point AoD grid
    bool operator==(const BeamPair&) const = default;
};

struct AngularSupport {
    CMatrix U_bar;  // M x pK, columns k*p .. k*p+p-1 belong to UE k
    int p = 1;
    int K = 0;
    std::vector<std::vector<BeamPair>> beams;  // [ue][p']
    bool duplicate_aod = false;  // some AoD index is shared by two UEs
};

struct EffectiveChannel {
    CMatrix H;  // K x pK
    int p = 1;
    std::vector<std::vector<BeamPair>> beams;
};

struct PrecoderSet {
    std::vector<CVector> combiners;  // K unit-norm N-vectors
    CMatrix U_bar;                   // M x pK
    CMatrix A_rf;                    // pK x K
    CMatrix W_bb;                    // K x K
    Scheme scheme = Scheme::BST;
    int p = 1;

    CMatrix analog() const { return U_bar * A_rf; }  // U^RF, M x K
};

// p strongest entries of the estimate with pairwise distinct AoA and AoD
// indices, strongest first (ties: smaller linear index).
std::vector<BeamPair> select_beams(const GammaMatrix& estimate, int p);

CVector ue_combiner(const std::vector<BeamPair>& beams, const ArrayConfig& cfg);
CVector ue_combiner(const GammaMatrix& estimate, int p, const ArrayConfig& cfg);

// Masked DFT columns on the selected AoDs. OSPS maps UE k to subarray k and
// needs K = M_RF.
AngularSupport angular_support(const std::vector<std::vector<BeamPair>>& beams,
                               const ArrayConfig& cfg);
AngularSupport angular_support(const std::vector<GammaMatrix>& estimates, int p,
                               const ArrayConfig& cfg);

PrecoderSet bst(const std::vector<CVector>& combiners, const AngularSupport& support,
                const ArrayConfig& cfg);
PrecoderSet mrt(const EffectiveChannel& h, const std::vector<CVector>& combiners,
                const AngularSupport& support, const ArrayConfig& cfg);
// Throws SingularityError when H~ A^RF is numerically singular.
PrecoderSet mr_zf(const EffectiveChannel& h, const std::vector<CVector>& combiners,
                  const AngularSupport& support, const ArrayConfig& cfg,
                  double max_condition = 1e10);
// (He)^H (He He^H)^-1 scaled to sum ||w_k||^2 = K.
CMatrix zf_baseband(const CMatrix& He, double max_condition = 1e10);
PrecoderSet make_precoder(Scheme scheme, const EffectiveChannel& h,
                          const std::vector<CVector>& combiners, const AngularSupport& support,
                          const ArrayConfig& cfg);

// Matched-filter-sampled narrowband channel of every UE at its sync delay,
// time t_s of `slot`: H~[k, :] = sum_l phi_r(tau_sync - tau_l) v_k^H H_l U_bar.
// A finite pilot_snr adds CN(0, 1/pilot_snr) estimation noise per entry.
EffectiveChannel estimate_effective_channel(const std::vector<ChannelRealization>& ues,
                                            const std::vector<CVector>& combiners,
                                            const AngularSupport& support,
                                            const ArrayConfig& cfg, double t_s, int slot,
                                            double pilot_snr, double beta, Rng& rng);

}  // namespace hda
