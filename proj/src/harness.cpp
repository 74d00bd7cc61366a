// SPDX-License-Identifier: Apache-2.0
#include "hda/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>

#include "hda/errors.hpp"
#include "hda/parallel.hpp"
#include "hda/rng.hpp"

namespace hda {

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"ba-curve", "se-curve", "power-curve", "papr-estimate"};
    return names;
}

namespace {

ArrayConfig with_arch(const ArrayConfig& a, Arch arch) {
    ArrayConfig c = a;
    c.arch = arch;
    return c;
}

BaOptions ba_options(const ScenarioConfig& cfg) {
    BaOptions o;
    o.profile = cfg.channel;
    o.bs_fingers = cfg.bs_fingers;
    o.ue_fingers = cfg.ue_fingers;
    o.phase_hops = cfg.phase_hops;
    o.timing = cfg.timing;
    o.nnls.max_iter = cfg.nnls_max_iter;
    o.nnls.tol = cfg.nnls_tol;
    o.nnls.kkt_tol = cfg.nnls_kkt_tol;
    o.nnls.accelerated = true;
    o.threads = cfg.threads;
    return o;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

ResultTable run_ba_curve(const ScenarioConfig& cfg) {
    if (cfg.ba_trials == 0) throw UsageError("ba-curve needs at least one trial");
    std::vector<int> Ts;
    for (double t : cfg.ba_T.values()) Ts.push_back(static_cast<int>(std::lround(t)));
    const BaOptions opt = ba_options(cfg);
    ResultTable out;
    for (Arch arch : cfg.archs) {
        const auto curve = detection_probability(with_arch(cfg.array, arch), db_to_linear(cfg.ba_snr_db),
                                                 Ts, cfg.ba_trials, cfg.seed, opt);
        for (const auto& [T, pd] : curve)
            out.push_back({"ba-curve", to_string(arch), "NNLS", 1, "T", static_cast<double>(T), "P_D", pd,
                           cfg.ba_trials, cfg.seed});
    }
    return out;
}

// Per-drop accumulators for one (arch, scheme, p, p_blk) cell.
struct DropTerms {
    std::vector<SinrTerms> slots;  // already averaged within each slot
    int singular = 0;
};

std::vector<ChannelRealization> draw_scheduled_ues(const ScenarioConfig& cfg, int slots, Rng& rng) {
    const double dmin = deg_to_rad(cfg.link.delta_theta_min_deg);
    for (int attempt = 0;; ++attempt) {
        std::vector<ChannelRealization> pool;
        std::vector<Candidate> cands;
        for (int c = 0; c < cfg.candidates; ++c) {
            pool.push_back(draw_ue_channel(cfg.channel, cfg.array, slots, rng));
            const auto& strongest = pool.back().paths[pool.back().strongest_path()];
            cands.push_back({strongest.aod_rad, linear_to_db(strongest.strength)});
        }
        try {
            std::vector<ChannelRealization> ues;
            for (int idx : schedule_ues(cands, cfg.link.K, dmin, cfg.power_tol_db)) {
                ues.push_back(pool[idx]);
                ues.back().ue = static_cast<int>(ues.size()) - 1;
            }
            return ues;
        } catch (const SchedulingError&) {
            if (attempt >= 9) throw;
        }
    }
}

GammaMatrix align_beam(const ChannelRealization& ue, const ArrayConfig& arr, const ScenarioConfig& cfg,
                       const BaOptions& opt, Rng& rng) {
    const auto schedule =
        generate_schedule(arr, cfg.se_ba_slots, opt.bs_fingers, opt.ue_fingers, rng(), opt.phase_hops);
    const MeasurementSystem sys =
        simulate_measurements(schedule, ue, arr, db_to_linear(cfg.ba_snr_db), rng, opt.timing);
    if (sys.q.maxCoeff() <= 0.0) return GammaMatrix::Zero(arr.N, arr.M);
    return to_gamma_estimate(nnls_solve(sys.A, sys.q, opt.nnls), arr.N, arr.M).entries;
}

ResultTable run_se_curve(const ScenarioConfig& cfg) {
    if (cfg.drops == 0) throw UsageError("se-curve needs at least one drop");
    const BaOptions opt = ba_options(cfg);
    const int K = cfg.link.K;
    const int data_slots = cfg.link.slots;
    const int total_slots = cfg.se_ba_slots + data_slots;
    const double pilot_snr = db_to_linear(cfg.pilot_snr_db);
    double strength = 0.0;
    for (const auto& p : cfg.channel.paths) strength += p.gamma;

    const int nA = static_cast<int>(cfg.archs.size());
    const int nS = static_cast<int>(cfg.schemes.size());
    const int nB = static_cast<int>(cfg.p_blk_values.size());
    auto cell = [&](int a, int s, int b) { return (a * nS + s) * nB + b; };

    // [drop][cell]
    std::vector<std::vector<DropTerms>> per_drop(cfg.drops, std::vector<DropTerms>(nA * nS * nB));
    parallel_for(cfg.drops, cfg.threads, [&](int d) {
        const auto drop = static_cast<std::uint64_t>(d);
        Rng rng = make_rng(cfg.seed, drop, 2);
        const auto ues = draw_scheduled_ues(cfg, total_slots, rng);

        for (int a = 0; a < nA; ++a) {
            const ArrayConfig arr = with_arch(cfg.array, cfg.archs[a]);
            Rng ba_rng = make_rng(cfg.seed, drop, 5, static_cast<std::uint64_t>(a));
            std::vector<GammaMatrix> est;
            for (const auto& ue : ues) est.push_back(align_beam(ue, arr, cfg, opt, ba_rng));

            std::map<int, std::pair<std::vector<CVector>, AngularSupport>> designs;
            for (int s = 0; s < nS; ++s) {
                const int p = cfg.schemes[s].p;
                if (!designs.count(p)) {
                    std::vector<std::vector<BeamPair>> beams;
                    std::vector<CVector> comb;
                    for (const auto& e : est) {
                        beams.push_back(select_beams(e, p));
                        comb.push_back(ue_combiner(beams.back(), arr));
                    }
                    designs.emplace(p, std::make_pair(comb, angular_support(beams, arr)));
                }
            }

            for (int b = 0; b < nB; ++b) {
                Rng blk_rng = make_rng(cfg.seed, drop, 3, static_cast<std::uint64_t>(b));
                std::vector<ChannelRealization> data_ues;
                for (const auto& ue : ues) data_ues.push_back(apply_blockage(ue, cfg.p_blk_values[b], blk_rng));

                for (int s = 0; s < nS; ++s) {
                    const auto& [comb, support] = designs.at(cfg.schemes[s].p);
                    DropTerms& acc = per_drop[d][cell(a, s, b)];
                    for (int t = 0; t < data_slots; ++t) {
                        const int slot = cfg.se_ba_slots + t;
                        Rng pilot_rng = make_rng(cfg.seed, drop, 6, static_cast<std::uint64_t>(t));
                        Rng sym_rng = make_rng(cfg.seed, drop, 4, static_cast<std::uint64_t>(t));
                        try {
                            const auto h = estimate_effective_channel(data_ues, comb, support, arr, 0.0, slot,
                                                                      pilot_snr, cfg.link.beta, pilot_rng);
                            const auto pre = make_precoder(cfg.schemes[s].scheme, h, comb, support, arr);
                            acc.slots.push_back(sinr_terms(data_ues, pre, arr, cfg.link, slot, sym_rng));
                        } catch (const SingularityError&) {
                            acc.slots.push_back({std::vector<double>(K, 0.0), std::vector<double>(K, 0.0), 1.0});
                            ++acc.singular;
                        } catch (const DegenerateUeError&) {
                            acc.slots.push_back({std::vector<double>(K, 0.0), std::vector<double>(K, 0.0), 1.0});
                            ++acc.singular;
                        }
                    }
                }
            }
        }
    });

    ResultTable out;
    const auto snrs = cfg.snr_db.values();
    for (int a = 0; a < nA; ++a) {
        for (int s = 0; s < nS; ++s) {
            for (int b = 0; b < nB; ++b) {
                const std::string tag = "[p_blk=" + fmt(cfg.p_blk_values[b]) + "]";
                const SchemeSpec& spec = cfg.schemes[s];
                for (double snr_db : snrs) {
                    const double e0 = db_to_linear(snr_db) / (K * strength);
                    double total = 0.0;
                    for (int d = 0; d < cfg.drops; ++d) {
                        const auto& slots = per_drop[d][cell(a, s, b)].slots;
                        SinrTerms avg{std::vector<double>(K, 0.0), std::vector<double>(K, 0.0), 1.0};
                        for (const auto& st : slots)
                            for (int k = 0; k < K; ++k) {
                                avg.S[k] += st.S[k] / slots.size();
                                avg.I[k] += st.I[k] / slots.size();
                            }
                        total += rates_at(avg, e0).sum;
                    }
                    out.push_back({"se-curve", to_string(cfg.archs[a]), to_string(spec.scheme), spec.p, "snr_db",
                                   snr_db, "sum_rate" + tag, total / cfg.drops, cfg.drops, cfg.seed});
                }
                long singular = 0;
                for (int d = 0; d < cfg.drops; ++d) singular += per_drop[d][cell(a, s, b)].singular;
                out.push_back({"se-curve", to_string(cfg.archs[a]), to_string(spec.scheme), spec.p, "", 0.0,
                               "singular_slots" + tag, static_cast<double>(singular), cfg.drops, cfg.seed});
            }
        }
    }
    return out;
}

ResultTable run_power_curve(const ScenarioConfig& cfg) {
    const PAReference ref = cfg.pa_reference();
    ResultTable out;
    for (Arch arch : cfg.archs) {
        // Summing the streams before one PA (FC) raises the single-carrier PAPR.
        const double sc_papr = arch == Arch::FC ? cfg.papr_sc_sum_db : cfg.papr_sc_db;
        const std::vector<std::pair<std::string, double>> waveforms{{"SC", sc_papr}, {"OFDM", cfg.papr_ofdm_db}};
        for (const auto& [name, papr] : waveforms) {
            const double alpha = 1.0 / db_to_linear(papr);
            const std::string a = to_string(arch);
            for (double p_dbm : cfg.p_rad_dbm.values()) {
                const Option1Point o1 = eta_eff_option1(dbm_to_watt(p_dbm), alpha, ref);
                out.push_back({"power-curve", a, name, 0, "p_rad0_dBm", p_dbm, "option1.p_rad_dBm",
                               watt_to_dbm(o1.p_rad_W), 0, cfg.seed});
                out.push_back({"power-curve", a, name, 0, "p_rad0_dBm", p_dbm, "option1.eta_eff", o1.eta_eff, 0,
                               cfg.seed});
            }
            for (double p_dbm : cfg.p_rad_dbm.values())
                out.push_back({"power-curve", a, name, 0, "p_rad_dBm", p_dbm, "option2.eta_eff",
                               eta_eff_option2(dbm_to_watt(p_dbm), alpha, ref), 0, cfg.seed});
        }
    }
    return out;
}

ResultTable run_papr_estimate(const ScenarioConfig& cfg) {
    ResultTable out;
    for (int streams : cfg.papr_streams) {
        Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(streams), 7);
        const double papr = estimate_sc_sum_papr(streams, cfg.papr_symbols, cfg.papr_beta, rng, cfg.papr);
        out.push_back({"papr-estimate", "", "SC", 0, "streams", static_cast<double>(streams), "papr_dB", papr,
                       cfg.papr_symbols, cfg.seed});
    }
    return out;
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

ResultTable run_experiment(const ScenarioConfig& cfg) {
    cfg.validate();
    if (cfg.experiment == "ba-curve") return run_ba_curve(cfg);
    if (cfg.experiment == "se-curve") return run_se_curve(cfg);
    if (cfg.experiment == "power-curve") return run_power_curve(cfg);
    if (cfg.experiment == "papr-estimate") return run_papr_estimate(cfg);
    throw UsageError("unknown experiment '" + cfg.experiment + "'");
}

void write_results(const ResultTable& table, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : table) {
        out << r.experiment << ',' << r.arch << ',' << r.scheme << ',' << (r.p > 0 ? std::to_string(r.p) : "")
            << ',' << r.x_name << ',' << num(r.x_value) << ',' << r.metric << ',' << num(r.value) << ','
            << r.trials << ',' << r.seed << '\n';
    }
}

void write_results(const ResultTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("output", "cannot write '" + path + "'");
    write_results(table, out);
}

}  // namespace hda
