// SPDX-License-Identifier: Apache-2.0
#include "hda/link_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hda/errors.hpp"

namespace hda {

void LinkConfig::validate(const ArrayConfig& cfg) const {
    if (K != cfg.M_RF) throw DomainError("K must equal M_RF");
    if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("beta must be in [0, 1]");
    if (N_d < 1) throw DomainError("N_d must be >= 1");
    if (!(p_blk >= 0.0 && p_blk <= 1.0)) throw DomainError("p_blk must be in [0, 1]");
    if (!(delta_theta_min_deg >= 0.0)) throw DomainError("delta_theta_min must be >= 0");
    if (slots < 1) throw DomainError("slots must be >= 1");
}

int sync_path(const ChannelRealization& r) {
    int best = -1;
    for (int l = 0; l < r.num_paths(); ++l) {
        if (!r.blocked.empty() && r.blocked[l]) continue;
        if (best < 0 || r.paths[l].strength > r.paths[best].strength) best = l;
    }
    if (best < 0) throw DomainError("every path of the UE is blocked");
    return best;
}

int sync_path(const ChannelRealization& r, const CVector& combiner, const ArrayConfig& cfg) {
    int best = -1;
    double best_e = -1.0;
    for (int l = 0; l < r.num_paths(); ++l) {
        if (!r.blocked.empty() && r.blocked[l]) continue;
        const double e = r.paths[l].strength * std::norm(combiner.dot(array_response_rx(cfg, r.paths[l].aoa_rad)));
        if (e > best_e) {
            best = l;
            best_e = e;
        }
    }
    if (best < 0) throw DomainError("every path of the UE is blocked");
    return best;
}

SinrTerms sinr_terms(const std::vector<ChannelRealization>& ues, const PrecoderSet& pre,
                     const ArrayConfig& cfg, const LinkConfig& link, int slot, Rng& rng) {
    const int K = static_cast<int>(ues.size());
    if (static_cast<int>(pre.combiners.size()) != K || pre.W_bb.cols() != K)
        throw StructuralError("precoder and UE count differ");
    const CMatrix UW = pre.analog() * pre.W_bb;  // M x K
    const double Tc = cfg.chip_s();

    // g[k][l] row: coefficient of each stream on path l at UE k, before the
    // time-varying Doppler phase.
    struct PathTerm {
        Eigen::RowVectorXcd g;
        double nu;
        double phase0;
    };
    std::vector<std::vector<PathTerm>> terms(K);
    for (int k = 0; k < K; ++k) {
        const auto& ue = ues[k];
        const double tau_sync = ue.paths[sync_path(ue, pre.combiners[k], cfg)].delay_s;
        for (int l = 0; l < ue.num_paths(); ++l) {
            if (!ue.blocked.empty() && ue.blocked[l]) continue;
            const auto& p = ue.paths[l];
            const double w = pulse_autocorrelation(tau_sync - p.delay_s, link.beta, Tc);
            const cd rx = pre.combiners[k].dot(array_response_rx(cfg, p.aoa_rad));
            const Eigen::RowVectorXcd tx = array_response_tx(cfg, p.aod_rad).adjoint() * UW;
            terms[k].push_back({(ue.gains[slot][l] * w * rx) * tx, p.doppler_Hz, p.initial_phase_rad});
        }
    }

    SinrTerms out{std::vector<double>(K, 0.0), std::vector<double>(K, 0.0), 1.0};
    std::bernoulli_distribution bit(0.5);
    const double a = 1.0 / std::sqrt(2.0);
    CVector s(K);
    Eigen::RowVectorXcd b(K);
    for (int n = 0; n < link.N_d; ++n) {
        for (int k = 0; k < K; ++k) s(k) = cd(bit(rng) ? a : -a, bit(rng) ? a : -a);
        const double t = n * Tc;
        for (int k = 0; k < K; ++k) {
            b.setZero();
            for (const auto& pt : terms[k]) b += std::polar(1.0, 2.0 * kPi * pt.nu * t + pt.phase0) * pt.g;
            const cd desired = b(k) * s(k);
            const cd total = b * s;
            out.S[k] += std::norm(desired);
            out.I[k] += std::norm(total - desired);
        }
    }
    for (int k = 0; k < K; ++k) {
        out.S[k] /= link.N_d;
        out.I[k] /= link.N_d;
    }
    return out;
}

double rate(double s, double i, double n0) {
    if (!(s >= 0.0) || !(i >= 0.0)) throw DomainError("signal and interference must be >= 0");
    if (!(n0 > 0.0)) throw DomainError("noise power must be > 0");
    return std::log2(1.0 + s / (i + n0));
}

double sum_rate(const std::vector<double>& rates) {
    double s = 0.0;
    for (double r : rates) s += r;
    return s;
}

RateResult rates_at(const SinrTerms& terms, double e0) {
    RateResult r;
    r.n0 = terms.n0;
    for (size_t k = 0; k < terms.S.size(); ++k) {
        r.S.push_back(e0 * terms.S[k]);
        r.I.push_back(e0 * terms.I[k]);
        r.rates.push_back(rate(r.S.back(), r.I.back(), r.n0));
    }
    r.sum = sum_rate(r.rates);
    return r;
}

ChannelRealization apply_blockage(const ChannelRealization& r, double p_blk, Rng& rng) {
    if (!(p_blk >= 0.0 && p_blk <= 1.0)) throw DomainError("p_blk must be in [0, 1]");
    ChannelRealization out = r;
    if (out.blocked.size() != out.paths.size()) out.blocked.assign(out.paths.size(), false);
    const double u = uniform(rng, 0.0, 1.0);
    if (u < p_blk && out.num_paths() > 0) {
        const int l = out.strongest_path();
        out.blocked[l] = true;
        for (auto& g : out.gains) g[l] = 0.0;
    }
    return out;
}

std::vector<int> schedule_ues(const std::vector<Candidate>& c, int K, double dmin, double tol_db) {
    if (K < 1) throw DomainError("K must be >= 1");
    if (static_cast<int>(c.size()) < K) throw SchedulingError("fewer candidates than K", 0.0);
    std::vector<int> picked;
    // Largest separation a rejected candidate would have had, for the error report.
    double best_rejected = 0.0;
    for (int j = 0; j < static_cast<int>(c.size()) && static_cast<int>(picked.size()) < K; ++j) {
        if (!picked.empty() && std::abs(c[j].power_db - c[picked.front()].power_db) > tol_db) continue;
        double sep = std::numeric_limits<double>::infinity();
        for (int i : picked) sep = std::min(sep, std::abs(c[j].aod_rad - c[i].aod_rad));
        if (sep >= dmin)
            picked.push_back(j);
        else
            best_rejected = std::max(best_rejected, sep);
    }
    if (static_cast<int>(picked.size()) < K)
        throw SchedulingError("only " + std::to_string(picked.size()) + " of " + std::to_string(K) +
                                  " UEs satisfy the AoD separation",
                              best_rejected);
    return picked;
}

}  // namespace hda
