// SPDX-License-Identifier: Apache-2.0
// Acceptance run: one PASS/FAIL line per criterion, details after the colon.
// Always exits 0 once every criterion has been evaluated; a red line is a
// finding, not a crash. Use --drops / --ba-trials for a quick smoke run.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "hda/errors.hpp"
#include "hda/harness.hpp"
#include "hda/nnls.hpp"

using namespace hda;

namespace {

int failures = 0;
std::ofstream report_file;

void emit(const std::string& line) {
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    if (report_file) report_file << line << std::endl;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void report(const std::string& id, bool ok, const std::string& detail, double seconds) {
    emit(fmt("%s %s: ", ok ? "PASS" : "FAIL", id.c_str()) + detail + fmt(" [%.1f s]", seconds));
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1: power anchors ----------------------------------------------------

void criterion_power() {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig c;
    c.experiment = "power-curve";
    const auto rows = run_experiment(c);
    std::map<std::string, double> v;
    for (const auto& r : rows)
        if (r.x_value == 0.0) v[r.arch + "/" + r.scheme + "/" + r.metric] = r.value;
    const double fc_sc = v["FC/SC/option1.p_rad_dBm"], ofdm = v["FC/OFDM/option1.p_rad_dBm"];
    const double e_osps = v["OSPS/SC/option2.eta_eff"], e_fc = v["FC/SC/option2.eta_eff"],
                 e_ofdm = v["OSPS/OFDM/option2.eta_eff"];
    const bool ok = std::abs(fc_sc + 2.6) < 1e-3 && std::abs(ofdm + 4.2) < 1e-3 &&
                    std::abs(v["OSPS/SC/option1.p_rad_dBm"]) < 1e-3 && std::abs(e_osps - 0.1504) < 1e-3 &&
                    std::abs(e_fc - 0.1115) < 1e-3 && std::abs(e_ofdm - 0.0927) < 1e-3 &&
                    std::abs(v["FC/OFDM/option2.eta_eff"] - 0.0927) < 1e-3;
    report("1 power anchors", ok,
           fmt("P_rad(P0=0 dBm) FC-SC %.4f dBm OFDM %.4f dBm; eta2(0 dBm) OSPS-SC %.4f FC-SC %.4f OFDM %.4f",
               fc_sc, ofdm, e_osps, e_fc, e_ofdm),
           seconds_since(t0));
}

// ---- 2: PAPR ----------------------------------------------------------------

void criterion_papr() {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig c;
    c.experiment = "papr-estimate";
    const auto rows = run_experiment(c);
    double one = NAN, four = NAN;
    for (const auto& r : rows) (r.x_value == 1.0 ? one : four) = r.value;
    const bool ok = std::abs(one - 7.2) <= 0.7 && std::abs(four - 9.8) <= 0.7;
    report("2 PAPR", ok,
           fmt("99.9%% PAPR 1 stream %.2f dB (7.2 +- 0.7), 4 streams %.2f dB (9.8 +- 0.7), %ld symbols x %d",
               one, four, c.papr_symbols, c.papr.oversampling),
           seconds_since(t0));
}

// ---- 3: beam alignment ----------------------------------------------------

void criterion_ba(int trials) {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig c;
    c.experiment = "ba-curve";
    c.ba_trials = trials;
    c.threads = 0;
    const auto rows = run_experiment(c);
    std::map<std::string, std::vector<std::pair<double, double>>> curve;
    for (const auto& r : rows) curve[r.arch].push_back({r.x_value, r.value});

    auto first_reaching = [&](const std::string& arch, double level) -> double {
        for (auto [T, pd] : curve[arch])
            if (pd >= level) return T;
        return NAN;
    };
    bool monotone = true;
    std::string curves;
    for (auto& [arch, pts] : curve) {
        curves += " " + arch + ":";
        for (size_t i = 0; i < pts.size(); ++i) {
            curves += fmt(" %.0f=%.3f", pts[i].first, pts[i].second);
            if (i == 0) continue;
            const double a = pts[i - 1].second, b = pts[i].second;
            const double se = std::sqrt((a * (1 - a) + b * (1 - b)) / trials);
            if (b < a - 2.0 * se) monotone = false;
        }
    }
    const double fc90 = first_reaching("FC", 0.9);
    const double fc95 = first_reaching("FC", 0.95), osps95 = first_reaching("OSPS", 0.95);
    const double gap = osps95 - fc95;
    const bool ok = std::isfinite(fc90) && monotone && std::isfinite(gap) && gap >= 0.0 && gap <= 40.0;
    report("3 BA detection", ok,
           fmt("FC reaches 0.9 at T=%.0f; monotone=%s; T(0.95) FC=%.0f OSPS=%.0f gap=%.0f (needs [0,40]); "
               "%d trials;",
               fc90, monotone ? "yes" : "no", fc95, osps95, gap, trials) +
               curves,
           seconds_since(t0));
}

// ---- 4: spectral efficiency ----------------------------------------------

void criterion_se(int drops) {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig c;
    c.experiment = "se-curve";
    c.drops = drops;
    c.threads = 0;
    const auto rows = run_experiment(c);
    const double dt = seconds_since(t0);
    // key: arch/scheme:p/p_blk -> snr -> rate
    std::map<std::string, std::map<double, double>> R;
    for (const auto& r : rows) {
        if (r.metric.rfind("sum_rate", 0) != 0) continue;
        const std::string blk = r.metric.substr(r.metric.find('=') + 1, r.metric.size() - r.metric.find('=') - 2);
        R[r.arch + "/" + r.scheme + ":" + std::to_string(r.p) + "/" + blk][r.x_value] = r.value;
    }
    const long slots = static_cast<long>(drops) * c.link.slots;
    const double K = c.link.K;

    {
        const auto& b = R["FC/BST:1/0"];
        const double r30 = b.at(30.0), r20 = b.at(20.0);
        const bool ok = std::abs(r30 - 39.85) <= 0.15 * 39.85 && r30 - r20 < 1.0;
        report("4a FC BST saturation", ok,
               fmt("R(30)=%.2f (33.87..45.83), R(30)-R(20)=%.2f (< 1); %ld slots", r30, r30 - r20, slots), dt);
    }
    {
        bool ok = true;
        std::string d;
        for (const char* arch : {"FC", "OSPS"}) {
            const auto& z = R[std::string(arch) + "/MR-ZF:2/0"];
            const double slope = z.at(30.0) - z.at(27.0);
            ok = ok && std::abs(slope - K) <= 0.5;
            d += fmt("%s %.2f  ", arch, slope);
        }
        report("4b MR-ZF p=2 slope", ok, d + fmt("bit/s/Hz per 3 dB (K=%.0f +- 0.5)", K), dt);
    }
    {
        const auto& f = R["FC/MR-ZF:2/0"];
        const auto& o = R["OSPS/MR-ZF:2/0"];
        int bad = 0;
        double worst = 0.0, worst_snr = 0.0;
        for (auto [snr, rf] : f) {
            const double dev = std::abs(rf - o.at(snr)) / std::max(rf, o.at(snr));
            if (dev > 0.10) ++bad;
            if (dev > worst) worst = dev, worst_snr = snr;
        }
        report("4c FC vs OSPS MR-ZF p=2", bad == 0,
               fmt("%d of %zu SNR points differ by > 10%%; worst %.1f%% at %.0f dB (FC %.2f, OSPS %.2f)", bad,
                   f.size(), 100.0 * worst, worst_snr, f.at(worst_snr), o.at(worst_snr)),
               dt);
    }
    {
        int bad = 0, total = 0;
        std::string d;
        for (const char* arch : {"FC", "OSPS"}) {
            const std::string a = arch;
            double lowest_win = NAN;
            int arch_bad = 0;
            for (auto [snr, z] : R[a + "/MR-ZF:2/0.6"]) {
                ++total;
                bool best = true;
                for (const auto& s : c.schemes) {
                    const std::string key = a + "/" + to_string(s.scheme) + ":" + std::to_string(s.p) + "/0.6";
                    if (key != a + "/MR-ZF:2/0.6" && R[key].at(snr) > z) best = false;
                }
                if (!best) ++arch_bad;
                if (best && std::isnan(lowest_win)) lowest_win = snr;
            }
            bad += arch_bad;
            d += fmt("%s: not best at %d points, best from %.0f dB; ", arch, arch_bad, lowest_win);
        }
        report("4d p_blk=0.6 ordering", bad == 0, d + fmt("%d SNR points per arch", total / 2), dt);
    }
}

// ---- 5: property spot checks -----------------------------------------------

void criterion_properties() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> failed;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) failed.push_back(what);
    };
    Rng rng = make_rng(99);

    for (int n : {4, 16, 128}) {
        const CMatrix F = dft_matrix(n);
        expect((F.adjoint() * F - CMatrix::Identity(n, n)).norm() < 1e-10, "DFT unitarity");
    }

    {
        ArrayConfig c;
        CMatrix H(c.N, c.M);
        for (Eigen::Index i = 0; i < H.size(); ++i) H.data()[i] = complex_normal(rng);
        expect(std::abs(beam_domain_transform(H, c).norm() - H.norm()) < 1e-10 * H.norm(), "FC norm preservation");
    }

    {
        std::normal_distribution<double> nd;
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            RMatrix A(6, 4);
            RVector q(6);
            for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = nd(rng);
            for (auto& x : q) x = nd(rng);
            NnlsOptions opt;
            opt.max_iter = 200000;
            opt.tol = 0.0;
            opt.kkt_tol = 1e-13;
            opt.accelerated = true;
            const RVector g = nnls_solve(A, q, opt).g;
            // exhaustive active-set search
            RVector best = RVector::Zero(4);
            double best_obj = 0.5 * q.squaredNorm();
            for (int mask = 1; mask < 16; ++mask) {
                std::vector<int> cols;
                for (int j = 0; j < 4; ++j)
                    if (mask & (1 << j)) cols.push_back(j);
                RMatrix As(6, cols.size());
                for (size_t j = 0; j < cols.size(); ++j) As.col(j) = A.col(cols[j]);
                const RVector xs = As.colPivHouseholderQr().solve(q);
                if (xs.minCoeff() < 0.0) continue;
                RVector x = RVector::Zero(4);
                for (size_t j = 0; j < cols.size(); ++j) x(cols[j]) = xs(j);
                const double obj = 0.5 * (A * x - q).squaredNorm();
                if (obj < best_obj) best_obj = obj, best = x;
            }
            worst = std::max(worst, (g - best).cwiseAbs().maxCoeff());
            expect(nnls_kkt_residual(A, q, g) < 1e-8, "NNLS KKT residual");
        }
        expect(worst < 1e-8, fmt("NNLS brute-force gap %.1e", worst));
    }

    // Precoders on a random four-UE scene through the library pipeline.
    for (Arch arch : {Arch::FC, Arch::OSPS}) {
        ArrayConfig c;
        c.arch = arch;
        ChannelProfile prof;
        for (int p : {1, 2}) {
            std::vector<ChannelRealization> ues;
            std::vector<std::vector<BeamPair>> beams;
            for (int k = 0; k < 4; ++k) {
                ues.push_back(draw_ue_channel(prof, c, 1, rng));
                std::vector<BeamPair> b;
                const int aod0 = 8 + 30 * k;
                for (int j = 0; j < p; ++j) b.push_back({1 + 4 * k + j, aod0 + 7 * j});
                beams.push_back(b);
            }
            std::vector<CVector> comb;
            for (const auto& b : beams) comb.push_back(ue_combiner(b, c));
            const auto sup = angular_support(beams, c);
            const auto h = estimate_effective_channel(ues, comb, sup, c, 0.0, 0,
                                                      std::numeric_limits<double>::infinity(), 0.25, rng);
            std::vector<Scheme> schemes{Scheme::MRT, Scheme::MRZF};
            if (p == 1) schemes.push_back(Scheme::BST);
            for (Scheme s : schemes) {
                const auto ps = make_precoder(s, h, comb, sup, c);
                const CMatrix U = ps.analog();
                for (const auto& v : ps.combiners) expect(std::abs(v.norm() - 1.0) < 1e-10, "||v_k|| = 1");
                expect(std::abs(U.squaredNorm() - c.M_RF) < 1e-10, "sum ||u_i||^2 = M_RF");
                expect(std::abs(ps.W_bb.squaredNorm() - 4.0) < 1e-10, "sum ||w_k||^2 = K");
                if (arch == Arch::OSPS)
                    for (int k = 0; k < 4; ++k)
                        for (int r = 0; r < c.M; ++r)
                            if (r / c.block_size() != k && U(r, k) != cd(0.0, 0.0))
                                expect(false, "OSPS structural zeros");
                if (s == Scheme::MRZF) {
                    const CMatrix E = h.H * ps.A_rf * ps.W_bb;
                    const double diag = E.diagonal().cwiseAbs().minCoeff();
                    double off = 0.0;
                    for (int i = 0; i < 4; ++i)
                        for (int j = 0; j < 4; ++j)
                            if (i != j) off = std::max(off, std::abs(E(i, j)));
                    expect(off < 1e-8 * diag, "MR-ZF design-point nulling");
                }
            }
        }
    }

    {
        ArrayConfig c;
        c.M_RF = 1;
        LinkConfig link;
        link.K = 1;
        link.N_d = 32;
        ChannelRealization r;
        MultipathComponent p;
        p.aoa_rad = std::asin(grid_sin(c.N, 6));
        p.aod_rad = std::asin(grid_sin(c.M, 90));
        p.rice = RiceFactor::inf();
        r.paths = {p};
        r.gains = {{cd(1.0, 0.0)}};
        r.blocked = {false};
        const std::vector<std::vector<BeamPair>> beams{{{6, 90}}};
        const auto ps = bst({ue_combiner(beams[0], c)}, angular_support(beams, c), c);
        const auto t = sinr_terms({r}, ps, c, link, 0, rng);
        const double snr_bbf = 1e-3;
        const double post = rates_at(t, snr_bbf).S[0];
        expect(std::abs(post / (snr_bbf * c.M * c.N) - 1.0) < 0.01, "single-user SNR = SNR_BBF M N");
    }

    std::string d = failed.empty() ? "all spot checks hold" : "";
    for (const auto& f : failed) d += f + "; ";
    report("5 property suites", failed.empty(), d, seconds_since(t0));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    int drops = 100;
    int ba_trials = 300;
    app.add_option("--drops", drops, "SE drops (2 data slots each)");
    app.add_option("--ba-trials", ba_trials, "BA trials per architecture");
    std::string report_path;
    app.add_option("--report", report_path, "also write the PASS/FAIL lines to this file");
    CLI11_PARSE(app, argc, argv);
    if (!report_path.empty()) report_file.open(report_path);

    const std::vector<std::pair<std::string, std::function<void()>>> steps{
        {"1", criterion_power},
        {"2", criterion_papr},
        {"5", criterion_properties},
        {"4", [&] { criterion_se(drops); }},
        {"3", [&] { criterion_ba(ba_trials); }},
    };
    for (const auto& [id, run] : steps) {
        try {
            run();
        } catch (const std::exception& e) {
            report(id + " (aborted)", false, e.what(), 0.0);
        }
    }
    emit(fmt("SUMMARY: %d criterion line(s) failed", failures));
    return 0;
}
