// SPDX-License-Identifier: Apache-2.0
#include "hda/beam_align.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hda/errors.hpp"
#include "hda/parallel.hpp"

namespace hda {

namespace {

std::vector<int> random_subset(int n, int k, Rng& rng) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int j = 0; j < k; ++j) {
        std::uniform_int_distribution<int> pick(j, n - 1);
        std::swap(idx[j], idx[pick(rng)]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

BeaconSchedule generate_schedule(const ArrayConfig& cfg, int T, int bs_fingers, int ue_fingers,
                                 std::uint64_t seed, int phase_hops) {
    if (T < 1) throw DomainError("T must be >= 1");
    if (bs_fingers < 1 || bs_fingers > cfg.M) throw DomainError("BS fingers must be in [1, M]");
    if (ue_fingers < 1 || ue_fingers > cfg.N) throw DomainError("UE fingers must be in [1, N]");
    if (phase_hops < 0) throw DomainError("phase_hops must be >= 0");
    Rng rng = make_rng(seed, 0x5c4ed);
    const int hops = std::max(1, phase_hops);
    auto phases = [&](int k) {
        std::vector<std::vector<double>> ph(hops, std::vector<double>(k, 0.0));
        if (phase_hops > 0)
            for (auto& h : ph)
                for (auto& x : h) x = uniform(rng, 0.0, 2.0 * kPi);
        return ph;
    };
    BeaconSchedule s;
    s.T = T;
    s.streams = cfg.M_RF;
    s.hops = hops;
    s.seed = seed;
    s.bs_subsets.resize(T);
    s.bs_phases.resize(T);
    s.ue_subsets.resize(T);
    s.ue_phases.resize(T);
    for (int t = 0; t < T; ++t) {
        for (int i = 0; i < cfg.M_RF; ++i) {
            s.bs_subsets[t].push_back(random_subset(cfg.M, bs_fingers, rng));
            s.bs_phases[t].push_back(phases(bs_fingers));
        }
        s.ue_subsets[t] = random_subset(cfg.N, ue_fingers, rng);
        s.ue_phases[t] = phases(ue_fingers);
    }
    return s;
}

MeasurementSystem simulate_measurements(const BeaconSchedule& schedule,
                                        const ChannelRealization& realization,
                                        const ArrayConfig& cfg, double snr, Rng& rng,
                                        const BeaconTiming& timing) {
    if (schedule.streams != cfg.M_RF) throw StructuralError("schedule stream count != M_RF");
    if (realization.num_slots() < schedule.T)
        throw StructuralError("realization carries fewer slots than the schedule");
    const int T = schedule.T;
    const int H = schedule.hops;
    const int L = realization.num_paths();
    const int mh = cfg.block_size();
    const CMatrix FN = dft_matrix(cfg.N);
    const CMatrix FM = dft_matrix(cfg.M);

    // Per path: UE-side projections F_N^H a_R and, per analog block, the
    // conjugated projections of the block-restricted a_T onto the dictionary.
    std::vector<CVector> bN(L);
    std::vector<std::vector<CVector>> dT(L, std::vector<CVector>(cfg.num_blocks()));
    for (int l = 0; l < L; ++l) {
        const auto& p = realization.paths[l];
        bN[l] = FN.adjoint() * array_response_rx(cfg, p.aoa_rad);
        const CVector aT = array_response_tx(cfg, p.aod_rad);
        for (int b = 0; b < cfg.num_blocks(); ++b)
            dT[l][b] = (FM.middleRows(b * mh, mh).adjoint() * aT.segment(b * mh, mh)).conjugate();
    }

    const bool noisy = std::isfinite(snr) && snr > 0.0;
    const int G = timing.segments();
    const double Lc = timing.segment_chips;
    const double e0 = noisy ? snr / (realization.total_strength() * cfg.M_RF) : 1.0;  // N0 = 1
    if (noisy && G < 1) throw DomainError("beacon slot shorter than one segment");

    MeasurementSystem sys;
    sys.N = cfg.N;
    sys.M = cfg.M;
    const int rows = T * cfg.M_RF;
    sys.A.resize(rows, static_cast<Eigen::Index>(cfg.N) * cfg.M);
    sys.q.resize(rows);
    sys.noise_scale = RVector::Constant(rows, noisy ? 1.0 / (std::sqrt(G) * Lc * e0) : 0.0);

    std::chi_squared_distribution<double> chi2(noisy ? 2.0 * (G - 1) : 1.0);
    std::vector<double> rx_gain(static_cast<size_t>(H) * L);
    for (int t = 0; t < T; ++t) {
        const auto& V = schedule.ue_subsets[t];
        const double vc2 = 1.0 / static_cast<double>(V.size());
        // F_N is unitary and unmasked, so the UE pattern projects onto its fingers only.
        RVector rN = RVector::Zero(cfg.N);
        for (int n : V) rN(n) = vc2;
        for (int h = 0; h < H; ++h) {
            const auto& vph = schedule.ue_phases[t][h];
            for (int l = 0; l < L; ++l) {
                cd acc = 0.0;
                for (size_t j = 0; j < V.size(); ++j) acc += std::polar(1.0, -vph[j]) * bN[l](V[j]);
                rx_gain[h * L + l] = vc2 * std::norm(acc);
            }
        }
        for (int i = 0; i < cfg.M_RF; ++i) {
            const int row = t * cfg.M_RF + i;
            const int block = cfg.arch == Arch::OSPS ? i : 0;
            const auto& U = schedule.bs_subsets[t][i];
            RVector rM = RVector::Zero(cfg.M);
            double c2 = 0.0;
            for (int h = 0; h < H; ++h) {
                const auto& ph = schedule.bs_phases[t][i][h];
                // u restricted to the rows of its block (all rows for FC)
                CVector ub = CVector::Zero(mh);
                for (size_t j = 0; j < U.size(); ++j)
                    ub += std::polar(1.0, ph[j]) * FM.col(U[j]).segment(block * mh, mh);
                const double norm2 = ub.squaredNorm();
                if (!(norm2 > 0.0)) throw DomainError("beamformed pattern vanishes on this subarray");
                rM += (FM.middleRows(block * mh, mh).adjoint() * ub).cwiseAbs2() / norm2;
                for (int l = 0; l < L; ++l) {
                    cd acc = 0.0;
                    for (size_t j = 0; j < U.size(); ++j) acc += std::polar(1.0, ph[j]) * dT[l][block](U[j]);
                    c2 += std::norm(realization.gains[t][l]) * rx_gain[h * L + l] * std::norm(acc) / norm2;
                }
            }
            rM /= H;
            c2 /= H;
            for (int n = 0; n < cfg.N; ++n)
                sys.A.row(row).segment(static_cast<Eigen::Index>(n) * cfg.M, cfg.M) =
                    rN(n) * rM.transpose();

            if (!noisy) {
                sys.q(row) = c2;
                continue;
            }
            // Energy summed over G segments: non-central chi-square whose
            // non-centrality only depends on the summed signal energy.
            const double a = Lc * std::sqrt(e0 * c2);
            const cd w = std::sqrt(Lc) * complex_normal(rng);
            double raw = std::norm(std::sqrt(static_cast<double>(G)) * a + w);
            if (G > 1) raw += 0.5 * Lc * chi2(rng);
            sys.q(row) = std::max(0.0, (raw - G * Lc) / (G * Lc * Lc * e0));
        }
    }
    return sys;
}

GammaEstimate to_gamma_estimate(const NnlsResult& r, int N, int M) {
    if (r.g.size() != static_cast<Eigen::Index>(N) * M) throw StructuralError("estimate is not N*M long");
    GammaEstimate est;
    est.entries = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        r.g.data(), N, M);
    est.iterations = r.iterations;
    est.kkt_residual = r.kkt_residual;
    return est;
}

GammaEstimate nnls_solve(const MeasurementSystem& system, int max_iter, double tol) {
    NnlsOptions opt;
    opt.max_iter = max_iter;
    opt.tol = tol;
    return to_gamma_estimate(nnls_solve(system.A, system.q, opt), system.N, system.M);
}

std::vector<std::pair<int, int>> detect_top_p(const GammaMatrix& est, int p) {
    const Eigen::Index total = est.size();
    if (p < 1 || p > total) throw DomainError("p must be in [1, N*M]");
    const int M = static_cast<int>(est.cols());
    std::vector<int> idx(total);
    std::iota(idx.begin(), idx.end(), 0);
    auto value = [&](int k) { return est(k / M, k % M); };
    std::partial_sort(idx.begin(), idx.begin() + p, idx.end(), [&](int a, int b) {
        const double va = value(a), vb = value(b);
        return va > vb || (va == vb && a < b);
    });
    std::vector<std::pair<int, int>> out;
    for (int j = 0; j < p; ++j) out.emplace_back(idx[j] / M, idx[j] % M);
    return out;
}

std::vector<std::pair<int, double>> detection_probability(const ArrayConfig& cfg, double snr,
                                                          const std::vector<int>& T_values,
                                                          int trials, std::uint64_t seed,
                                                          const BaOptions& opt) {
    if (trials < 1) throw DomainError("trials must be >= 1");
    if (T_values.empty()) throw DomainError("no T values");
    cfg.validate();
    std::vector<int> Ts = T_values;
    std::sort(Ts.begin(), Ts.end());
    Ts.erase(std::unique(Ts.begin(), Ts.end()), Ts.end());
    if (Ts.front() < 1) throw DomainError("T must be >= 1");
    const int Tmax = Ts.back();
    const int nT = static_cast<int>(Ts.size());

    std::vector<std::vector<char>> hit(trials, std::vector<char>(nT, 0));
    parallel_for(trials, opt.threads, [&](int trial) {
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(trial), 1);
        const ChannelRealization chan = draw_ue_channel(opt.profile, cfg, Tmax, rng);
        const auto truth = detect_top_p(expected_gamma_matrix(chan.paths, cfg), 1).front();
        const auto schedule = generate_schedule(cfg, Tmax, opt.bs_fingers, opt.ue_fingers, rng(),
                                                opt.phase_hops);
        const MeasurementSystem sys = simulate_measurements(schedule, chan, cfg, snr, rng, opt.timing);

        NnlsOptions nopt = opt.nnls;
        for (int k = 0; k < nT; ++k) {
            const int rows = Ts[k] * cfg.M_RF;
            const RMatrix A = sys.A.topRows(rows);
            const RVector q = sys.q.head(rows);
            if (q.maxCoeff() <= 0.0) continue;  // nothing above the noise floor
            const NnlsResult r = nnls_solve(A, q, nopt);
            const auto est = to_gamma_estimate(r, cfg.N, cfg.M);
            hit[trial][k] = detect_top_p(est.entries, 1).front() == truth;
            nopt.warm_start = r.g;
        }
    });

    std::vector<std::pair<int, double>> curve;
    for (int k = 0; k < nT; ++k) {
        int count = 0;
        for (int trial = 0; trial < trials; ++trial) count += hit[trial][k];
        curve.emplace_back(Ts[k], static_cast<double>(count) / trials);
    }
    return curve;
}

}  // namespace hda
