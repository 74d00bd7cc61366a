// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "hda/array_channel.hpp"
#include "hda/beam_align.hpp"
#include "hda/hw_power.hpp"
#include "hda/link_eval.hpp"
#include "hda/precoding.hpp"

namespace hda {

struct Range {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    std::vector<double> values() const;
    bool operator==(const Range&) const = default;
};

struct SchemeSpec {
    Scheme scheme = Scheme::BST;
    int p = 1;
    bool operator==(const SchemeSpec&) const = default;
};

std::string to_string(const SchemeSpec& s);  // e.g. "MR-ZF:2"
SchemeSpec scheme_spec_from_string(const std::string& s);

struct ScenarioConfig {
    std::string experiment = "se-curve";
    std::uint64_t seed = 1;
    std::string output;  // empty: stdout
    int threads = 1;

    ArrayConfig array;
    std::vector<Arch> archs{Arch::FC, Arch::OSPS};

    ChannelProfile channel;
    int candidates = 32;

    LinkConfig link;
    std::vector<double> p_blk_values{0.0, 0.6};
    int drops = 100;
    Range snr_db{-33.0, 30.0, 1.0};
    std::vector<SchemeSpec> schemes{{Scheme::BST, 1},  {Scheme::MRT, 1},  {Scheme::MRT, 2},
                                    {Scheme::MRZF, 1}, {Scheme::MRZF, 2}};
    double pilot_snr_db = std::numeric_limits<double>::infinity();
    double power_tol_db = 3.0;

    // Beam alignment
    double ba_snr_db = -19.0;
    Range ba_T{10.0, 150.0, 10.0};
    int ba_trials = 300;
    int bs_fingers = 64;
    int ue_fingers = 8;
    BeaconTiming timing;
    int phase_hops = 3;
    int nnls_max_iter = 3000;
    double nnls_tol = 1e-7;
    double nnls_kkt_tol = 1e-3;
    int se_ba_slots = 150;  // beacon slots used before data in se-curve

    // Power
    double p_max0_dbm = 6.0;
    double eta_max0 = 0.3;
    double alpha_off0_db = -7.2;
    Range p_rad_dbm{-10.0, 6.0, 1.0};
    double papr_sc_db = 7.2;
    double papr_ofdm_db = 11.4;
    double papr_sc_sum_db = 9.8;

    // PAPR estimate
    long papr_symbols = 1L << 20;
    double papr_beta = 0.05;
    std::vector<int> papr_streams{1, 4};
    PaprOptions papr;

    PAReference pa_reference() const;
    void validate() const;  // throws ConfigError naming the offending key
    bool operator==(const ScenarioConfig& o) const;
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text);
// Applies "dotted.key=value" overrides; value is parsed as JSON, else taken as a string.
void apply_override(ScenarioConfig& cfg, const std::string& assignment);
std::string config_to_json(const ScenarioConfig& cfg);
void write_config(const ScenarioConfig& cfg, const std::string& path);

struct ResultRow {
    std::string experiment;
    std::string arch;
    std::string scheme;
    int p = 0;  // 0: not applicable
    std::string x_name;
    double x_value = 0.0;
    std::string metric;
    double value = 0.0;
    long trials = 0;
    std::uint64_t seed = 0;
};

using ResultTable = std::vector<ResultRow>;

inline const char* kCsvHeader = "experiment,arch,scheme,p,x_name,x_value,metric,value,trials,seed";

const std::vector<std::string>& experiment_names();

// Throws UsageError for an unknown experiment or zero trials.
ResultTable run_experiment(const ScenarioConfig& cfg);

void write_results(const ResultTable& table, std::ostream& out);
void write_results(const ResultTable& table, const std::string& path);

}  // namespace hda
