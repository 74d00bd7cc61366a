// SPDX-License-Identifier: Apache-2.0
#include "hda/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "hda/errors.hpp"
#include "hda/link_eval.hpp"

namespace hda {

const char* to_string(Scheme s) {
    switch (s) {
        case Scheme::BST: return "BST";
        case Scheme::MRT: return "MRT";
        case Scheme::MRZF: return "MR-ZF";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "BST" || s == "bst") return Scheme::BST;
    if (s == "MRT" || s == "mrt") return Scheme::MRT;
    if (s == "MR-ZF" || s == "MRZF" || s == "mr-zf" || s == "mrzf") return Scheme::MRZF;
    throw DomainError("unknown precoding scheme '" + s + "'");
}

std::vector<BeamPair> select_beams(const GammaMatrix& est, int p) {
    const int N = static_cast<int>(est.rows());
    const int M = static_cast<int>(est.cols());
    if (p < 1) throw DomainError("p must be >= 1");
    if (p > std::min(N, M)) throw DomainError("p exceeds the number of distinct AoA/AoD indices");
    std::vector<int> idx(static_cast<size_t>(N) * M);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return est(a / M, a % M) > est(b / M, b % M); });
    std::vector<BeamPair> out;
    std::vector<char> aoa_used(N, 0), aod_used(M, 0);
    for (int k : idx) {
        const int n = k / M, m = k % M;
        if (aoa_used[n] || aod_used[m]) continue;
        aoa_used[n] = aod_used[m] = 1;
        out.push_back({n, m});
        if (static_cast<int>(out.size()) == p) break;
    }
    return out;
}

CVector ue_combiner(const std::vector<BeamPair>& beams, const ArrayConfig& cfg) {
    if (beams.empty()) throw DomainError("no beams selected");
    const CMatrix FN = dft_matrix(cfg.N);
    CVector v = CVector::Zero(cfg.N);
    for (const auto& b : beams) v += FN.col(b.aoa);
    return v / std::sqrt(static_cast<double>(beams.size()));
}

CVector ue_combiner(const GammaMatrix& est, int p, const ArrayConfig& cfg) {
    return ue_combiner(select_beams(est, p), cfg);
}

AngularSupport angular_support(const std::vector<std::vector<BeamPair>>& beams,
                               const ArrayConfig& cfg) {
    if (beams.empty()) throw DomainError("no UEs");
    const int K = static_cast<int>(beams.size());
    const int p = static_cast<int>(beams.front().size());
    if (p < 1) throw DomainError("p must be >= 1");
    for (const auto& b : beams)
        if (static_cast<int>(b.size()) != p) throw StructuralError("every UE needs p beams");
    if (cfg.arch == Arch::OSPS && K != cfg.M_RF)
        throw StructuralError("OSPS maps one UE per subarray: K must equal M_RF");

    const CMatrix FM = dft_matrix(cfg.M);
    const int mh = cfg.block_size();
    AngularSupport s{CMatrix::Zero(cfg.M, p * K), p, K, beams, false};
    std::set<int> seen;
    for (int k = 0; k < K; ++k) {
        std::set<int> mine;
        for (int j = 0; j < p; ++j) {
            const int m = beams[k][j].aod;
            if (m < 0 || m >= cfg.M) throw DomainError("AoD index outside the grid");
            if (cfg.arch == Arch::FC)
                s.U_bar.col(k * p + j) = FM.col(m);
            else
                s.U_bar.block(k * mh, k * p + j, mh, 1) = FM.col(m).segment(k * mh, mh);
            mine.insert(m);
        }
        for (int m : mine)
            if (!seen.insert(m).second) s.duplicate_aod = true;
    }
    return s;
}

AngularSupport angular_support(const std::vector<GammaMatrix>& estimates, int p,
                               const ArrayConfig& cfg) {
    std::vector<std::vector<BeamPair>> beams;
    for (const auto& e : estimates) beams.push_back(select_beams(e, p));
    return angular_support(beams, cfg);
}

namespace {

// Global scale so that sum ||u_i||^2 = M_RF.
void normalize_analog(PrecoderSet& ps, const ArrayConfig& cfg) {
    const double e = (ps.U_bar * ps.A_rf).squaredNorm();
    if (!(e > 0.0)) throw DegenerateUeError("analog beamformer vanishes");
    ps.A_rf *= std::sqrt(cfg.M_RF / e);
}

PrecoderSet mrt_analog(const EffectiveChannel& h, const std::vector<CVector>& combiners,
                       const AngularSupport& support, const ArrayConfig& cfg, Scheme scheme) {
    const int K = support.K, p = support.p;
    if (h.H.rows() != K || h.H.cols() != p * K) throw StructuralError("effective channel must be K x pK");
    PrecoderSet ps{combiners, support.U_bar, CMatrix::Zero(p * K, K), CMatrix::Identity(K, K), scheme, p};
    for (int k = 0; k < K; ++k) {
        const CVector row = h.H.row(k).adjoint();
        if (cfg.arch == Arch::FC)
            ps.A_rf.col(k) = row;
        else
            ps.A_rf.block(k * p, k, p, 1) = row.segment(k * p, p);
        if (ps.A_rf.col(k).squaredNorm() == 0.0)
            throw DegenerateUeError("UE " + std::to_string(k) + " has a zero effective channel");
    }
    normalize_analog(ps, cfg);
    return ps;
}

}  // namespace

PrecoderSet bst(const std::vector<CVector>& combiners, const AngularSupport& support,
                const ArrayConfig& cfg) {
    if (support.p != 1) throw ContractError("BST requires p = 1");
    const int K = support.K;
    PrecoderSet ps{combiners, support.U_bar, CMatrix::Identity(K, K), CMatrix::Identity(K, K),
                   Scheme::BST, 1};
    normalize_analog(ps, cfg);
    return ps;
}

PrecoderSet mrt(const EffectiveChannel& h, const std::vector<CVector>& combiners,
                const AngularSupport& support, const ArrayConfig& cfg) {
    return mrt_analog(h, combiners, support, cfg, Scheme::MRT);
}

PrecoderSet mr_zf(const EffectiveChannel& h, const std::vector<CVector>& combiners,
                  const AngularSupport& support, const ArrayConfig& cfg, double max_condition) {
    PrecoderSet ps = mrt_analog(h, combiners, support, cfg, Scheme::MRZF);
    ps.W_bb = zf_baseband(h.H * ps.A_rf, max_condition);
    return ps;
}

CMatrix zf_baseband(const CMatrix& He, double max_condition) {
    const auto K = He.rows();
    if (He.cols() != K || K == 0) throw StructuralError("H~ A^RF must be square");
    Eigen::JacobiSVD<CMatrix> svd(He);
    const auto& sv = svd.singularValues();
    const double cond = sv(K - 1) > 0.0 ? sv(0) / sv(K - 1) : std::numeric_limits<double>::infinity();
    if (!(cond <= max_condition)) throw SingularityError("H~ A^RF is singular", cond);
    CMatrix W = He.adjoint() * (He * He.adjoint()).inverse();
    W *= std::sqrt(static_cast<double>(K) / W.squaredNorm());
    return W;
}

PrecoderSet make_precoder(Scheme scheme, const EffectiveChannel& h,
                          const std::vector<CVector>& combiners, const AngularSupport& support,
                          const ArrayConfig& cfg) {
    switch (scheme) {
        case Scheme::BST: return bst(combiners, support, cfg);
        case Scheme::MRT: return mrt(h, combiners, support, cfg);
        case Scheme::MRZF: return mr_zf(h, combiners, support, cfg);
    }
    throw DomainError("unknown scheme");
}

EffectiveChannel estimate_effective_channel(const std::vector<ChannelRealization>& ues,
                                            const std::vector<CVector>& combiners,
                                            const AngularSupport& support,
                                            const ArrayConfig& cfg, double t, int slot,
                                            double pilot_snr, double beta, Rng& rng) {
    const int K = static_cast<int>(ues.size());
    if (K != support.K || static_cast<int>(combiners.size()) != K)
        throw StructuralError("UE count mismatch between channels, combiners and support");
    EffectiveChannel h{CMatrix::Zero(K, support.U_bar.cols()), support.p, support.beams};
    for (int k = 0; k < K; ++k) {
        const auto& ue = ues[k];
        const double tau_sync = ue.paths[sync_path(ue, combiners[k], cfg)].delay_s;
        for (int l = 0; l < ue.num_paths(); ++l) {
            if (!ue.blocked.empty() && ue.blocked[l]) continue;
            const auto& p = ue.paths[l];
            const double w = pulse_autocorrelation(tau_sync - p.delay_s, beta, cfg.chip_s());
            const cd g = ue.gains[slot][l] *
                         std::polar(1.0, 2.0 * kPi * p.doppler_Hz * t + p.initial_phase_rad);
            const cd rx = combiners[k].dot(array_response_rx(cfg, p.aoa_rad));  // v^H a_R
            h.H.row(k) += (w * g * rx) *
                          (array_response_tx(cfg, p.aod_rad).adjoint() * support.U_bar);
        }
    }
    if (std::isfinite(pilot_snr) && pilot_snr > 0.0) {
        const double sd = std::sqrt(1.0 / pilot_snr);
        for (Eigen::Index i = 0; i < h.H.size(); ++i) h.H.data()[i] += sd * complex_normal(rng);
    }
    return h;
}

}  // namespace hda
