// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hda/errors.hpp"
#include "hda/harness.hpp"

namespace hda {

using nlohmann::json;

std::vector<double> Range::values() const {
    std::vector<double> v;
    if (!(step > 0.0)) return v;
    const long n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) v.push_back(start + i * step);
    return v;
}

std::string to_string(const SchemeSpec& s) {
    return std::string(to_string(s.scheme)) + ":" + std::to_string(s.p);
}

SchemeSpec scheme_spec_from_string(const std::string& s) {
    const auto colon = s.find(':');
    SchemeSpec spec;
    spec.scheme = scheme_from_string(s.substr(0, colon));
    spec.p = colon == std::string::npos ? 1 : std::stoi(s.substr(colon + 1));
    return spec;
}

PAReference ScenarioConfig::pa_reference() const {
    return {{dbm_to_watt(p_max0_dbm), eta_max0}, db_to_linear(alpha_off0_db)};
}

namespace {

json range_json(const Range& r) { return {{"start", r.start}, {"stop", r.stop}, {"step", r.step}}; }

Range range_from(const json& j) {
    return {j.at("start").get<double>(), j.at("stop").get<double>(), j.at("step").get<double>()};
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const ScenarioConfig& c) {
    json archs = json::array();
    for (Arch a : c.archs) archs.push_back(to_string(a));
    json paths = json::array();
    for (const auto& p : c.channel.paths)
        paths.push_back({{"gamma", p.gamma}, {"eta", p.rice.infinite ? json("inf") : json(p.rice.value)}});
    json schemes = json::array();
    for (const auto& s : c.schemes) schemes.push_back(to_string(s));

    json j;
    j["experiment"] = c.experiment;
    j["seed"] = c.seed;
    j["output"] = c.output;
    j["threads"] = c.threads;
    j["array"] = {{"M", c.array.M},
                  {"N", c.array.N},
                  {"M_RF", c.array.M_RF},
                  {"N_RF", c.array.N_RF},
                  {"Dx", c.array.Dx ? json(*c.array.Dx) : json(nullptr)},
                  {"carrier_freq_Hz", c.array.carrier_freq_Hz},
                  {"bandwidth_Hz", c.array.bandwidth_Hz},
                  {"archs", archs}};
    j["channel"] = {{"paths", paths},
                    {"ue_speed_mps", c.channel.ue_speed_mps},
                    {"tau_max_chips", c.channel.tau_max_chips},
                    {"sector_deg", c.channel.sector_deg},
                    {"candidates", c.candidates}};
    j["link"] = {{"K", c.link.K},
                 {"beta", c.link.beta},
                 {"N_d", c.link.N_d},
                 {"delta_theta_min_deg", c.link.delta_theta_min_deg},
                 {"slots", c.link.slots},
                 {"drops", c.drops},
                 {"p_blk", c.p_blk_values},
                 {"snr_db", range_json(c.snr_db)},
                 {"schemes", schemes},
                 {"pilot_snr_db", finite_or_null(c.pilot_snr_db)},
                 {"power_tol_db", c.power_tol_db}};
    j["ba"] = {{"snr_db", c.ba_snr_db},
               {"T", range_json(c.ba_T)},
               {"trials", c.ba_trials},
               {"bs_fingers", c.bs_fingers},
               {"ue_fingers", c.ue_fingers},
               {"slot_chips", c.timing.slot_chips},
               {"segment_chips", c.timing.segment_chips},
               {"phase_hops", c.phase_hops},
               {"nnls_max_iter", c.nnls_max_iter},
               {"nnls_tol", c.nnls_tol},
               {"nnls_kkt_tol", c.nnls_kkt_tol},
               {"se_slots", c.se_ba_slots}};
    j["power"] = {{"p_max0_dbm", c.p_max0_dbm},
                  {"eta_max0", c.eta_max0},
                  {"alpha_off0_db", c.alpha_off0_db},
                  {"p_rad_dbm", range_json(c.p_rad_dbm)},
                  {"papr_sc_db", c.papr_sc_db},
                  {"papr_ofdm_db", c.papr_ofdm_db},
                  {"papr_sc_sum_db", c.papr_sc_sum_db}};
    j["papr"] = {{"symbols", c.papr_symbols},
                 {"beta", c.papr_beta},
                 {"streams", c.papr_streams},
                 {"oversampling", c.papr.oversampling},
                 {"block_symbols", c.papr.block_symbols},
                 {"span_symbols", c.papr.span_symbols},
                 {"percentile", c.papr.percentile}};
    return j;
}

// Reads one key, reporting the dotted path on failure.
template <class F>
void read(const json& j, const std::string& section, const std::string& key, F&& assign) {
    const json& v = section.empty() ? j.at(key) : j.at(section).at(key);
    try {
        assign(v);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(section.empty() ? key : section + "." + key, e.what());
    }
}

ScenarioConfig from_json(const json& j) {
    ScenarioConfig c;
    read(j, "", "experiment", [&](const json& v) { c.experiment = v.get<std::string>(); });
    read(j, "", "seed", [&](const json& v) { c.seed = v.get<std::uint64_t>(); });
    read(j, "", "output", [&](const json& v) { c.output = v.get<std::string>(); });
    read(j, "", "threads", [&](const json& v) { c.threads = v.get<int>(); });

    read(j, "array", "M", [&](const json& v) { c.array.M = v.get<int>(); });
    read(j, "array", "N", [&](const json& v) { c.array.N = v.get<int>(); });
    read(j, "array", "M_RF", [&](const json& v) { c.array.M_RF = v.get<int>(); });
    read(j, "array", "N_RF", [&](const json& v) { c.array.N_RF = v.get<int>(); });
    read(j, "array", "Dx", [&](const json& v) {
        if (v.is_null())
            c.array.Dx.reset();
        else
            c.array.Dx = v.get<double>();
    });
    read(j, "array", "carrier_freq_Hz", [&](const json& v) { c.array.carrier_freq_Hz = v.get<double>(); });
    read(j, "array", "bandwidth_Hz", [&](const json& v) { c.array.bandwidth_Hz = v.get<double>(); });
    read(j, "array", "archs", [&](const json& v) {
        c.archs.clear();
        for (const auto& a : v) c.archs.push_back(arch_from_string(a.get<std::string>()));
    });

    read(j, "channel", "paths", [&](const json& v) {
        c.channel.paths.clear();
        for (const auto& p : v) {
            PathSpec ps;
            ps.gamma = p.at("gamma").get<double>();
            const json& eta = p.at("eta");
            if (eta.is_string()) {
                if (eta.get<std::string>() != "inf") throw DomainError("eta must be a number or \"inf\"");
                ps.rice = RiceFactor::inf();
            } else {
                ps.rice = RiceFactor::of(eta.get<double>());
            }
            for (const auto& [k, _] : p.items())
                if (k != "gamma" && k != "eta") throw DomainError("unknown path key '" + k + "'");
            c.channel.paths.push_back(ps);
        }
    });
    read(j, "channel", "ue_speed_mps", [&](const json& v) { c.channel.ue_speed_mps = v.get<double>(); });
    read(j, "channel", "tau_max_chips", [&](const json& v) { c.channel.tau_max_chips = v.get<double>(); });
    read(j, "channel", "sector_deg", [&](const json& v) { c.channel.sector_deg = v.get<double>(); });
    read(j, "channel", "candidates", [&](const json& v) { c.candidates = v.get<int>(); });

    read(j, "link", "K", [&](const json& v) { c.link.K = v.get<int>(); });
    read(j, "link", "beta", [&](const json& v) { c.link.beta = v.get<double>(); });
    read(j, "link", "N_d", [&](const json& v) { c.link.N_d = v.get<int>(); });
    read(j, "link", "delta_theta_min_deg", [&](const json& v) { c.link.delta_theta_min_deg = v.get<double>(); });
    read(j, "link", "slots", [&](const json& v) { c.link.slots = v.get<int>(); });
    read(j, "link", "drops", [&](const json& v) { c.drops = v.get<int>(); });
    read(j, "link", "p_blk", [&](const json& v) { c.p_blk_values = v.get<std::vector<double>>(); });
    read(j, "link", "snr_db", [&](const json& v) { c.snr_db = range_from(v); });
    read(j, "link", "schemes", [&](const json& v) {
        c.schemes.clear();
        for (const auto& s : v) c.schemes.push_back(scheme_spec_from_string(s.get<std::string>()));
    });
    read(j, "link", "pilot_snr_db", [&](const json& v) {
        c.pilot_snr_db = v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
    });
    read(j, "link", "power_tol_db", [&](const json& v) { c.power_tol_db = v.get<double>(); });

    read(j, "ba", "snr_db", [&](const json& v) { c.ba_snr_db = v.get<double>(); });
    read(j, "ba", "T", [&](const json& v) { c.ba_T = range_from(v); });
    read(j, "ba", "trials", [&](const json& v) { c.ba_trials = v.get<int>(); });
    read(j, "ba", "bs_fingers", [&](const json& v) { c.bs_fingers = v.get<int>(); });
    read(j, "ba", "ue_fingers", [&](const json& v) { c.ue_fingers = v.get<int>(); });
    read(j, "ba", "slot_chips", [&](const json& v) { c.timing.slot_chips = v.get<int>(); });
    read(j, "ba", "segment_chips", [&](const json& v) { c.timing.segment_chips = v.get<int>(); });
    read(j, "ba", "phase_hops", [&](const json& v) { c.phase_hops = v.get<int>(); });
    read(j, "ba", "nnls_max_iter", [&](const json& v) { c.nnls_max_iter = v.get<int>(); });
    read(j, "ba", "nnls_tol", [&](const json& v) { c.nnls_tol = v.get<double>(); });
    read(j, "ba", "nnls_kkt_tol", [&](const json& v) { c.nnls_kkt_tol = v.get<double>(); });
    read(j, "ba", "se_slots", [&](const json& v) { c.se_ba_slots = v.get<int>(); });

    read(j, "power", "p_max0_dbm", [&](const json& v) { c.p_max0_dbm = v.get<double>(); });
    read(j, "power", "eta_max0", [&](const json& v) { c.eta_max0 = v.get<double>(); });
    read(j, "power", "alpha_off0_db", [&](const json& v) { c.alpha_off0_db = v.get<double>(); });
    read(j, "power", "p_rad_dbm", [&](const json& v) { c.p_rad_dbm = range_from(v); });
    read(j, "power", "papr_sc_db", [&](const json& v) { c.papr_sc_db = v.get<double>(); });
    read(j, "power", "papr_ofdm_db", [&](const json& v) { c.papr_ofdm_db = v.get<double>(); });
    read(j, "power", "papr_sc_sum_db", [&](const json& v) { c.papr_sc_sum_db = v.get<double>(); });

    read(j, "papr", "symbols", [&](const json& v) { c.papr_symbols = v.get<long>(); });
    read(j, "papr", "beta", [&](const json& v) { c.papr_beta = v.get<double>(); });
    read(j, "papr", "streams", [&](const json& v) { c.papr_streams = v.get<std::vector<int>>(); });
    read(j, "papr", "oversampling", [&](const json& v) { c.papr.oversampling = v.get<int>(); });
    read(j, "papr", "block_symbols", [&](const json& v) { c.papr.block_symbols = v.get<int>(); });
    read(j, "papr", "span_symbols", [&](const json& v) { c.papr.span_symbols = v.get<int>(); });
    read(j, "papr", "percentile", [&](const json& v) { c.papr.percentile = v.get<double>(); });
    return c;
}

// Copies `user` onto `base`; every key must already exist in `base`. Leaf
// values (including arrays) replace the default wholesale.
void overlay(json& base, const json& user, const std::string& prefix) {
    if (!user.is_object()) throw ConfigError(prefix, "expected an object");
    for (const auto& [key, value] : user.items()) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (!base.contains(key)) throw ConfigError(path, "unknown key");
        if (base[key].is_object())
            overlay(base[key], value, path);
        else
            base[key] = value;
    }
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError(key, what);
}

}  // namespace

void ScenarioConfig::validate() const {
    try {
        array.validate();
    } catch (const std::exception& e) {
        const std::string msg = e.what();
        const std::string key = msg.find("divisible") != std::string::npos ? "array.M_RF"
                                : msg.find("Dx") != std::string::npos    ? "array.Dx"
                                                                         : "array";
        throw ConfigError(key, msg);
    }
    require(!archs.empty(), "array.archs", "at least one architecture");
    for (Arch a : archs) {
        ArrayConfig c = array;
        c.arch = a;
        try {
            c.validate();
        } catch (const std::exception& e) {
            throw ConfigError("array.M_RF", std::string(e.what()) + " (arch " + to_string(a) + ")");
        }
    }
    require(threads >= 0, "threads", "must be >= 0");
    require(!channel.paths.empty(), "channel.paths", "at least one path");
    for (const auto& p : channel.paths) {
        require(p.gamma > 0.0, "channel.paths", "gamma must be > 0");
        require(p.rice.infinite || p.rice.value >= 0.0, "channel.paths", "eta must be >= 0");
    }
    require(channel.ue_speed_mps >= 0.0, "channel.ue_speed_mps", "must be >= 0");
    require(channel.tau_max_chips >= 0.0, "channel.tau_max_chips", "must be >= 0");
    require(channel.sector_deg > 0.0 && channel.sector_deg < 90.0, "channel.sector_deg", "must be in (0, 90)");
    require(candidates >= link.K, "channel.candidates", "must be >= link.K");

    require(link.K == array.M_RF, "link.K", "must equal array.M_RF");
    require(link.beta >= 0.0 && link.beta <= 1.0, "link.beta", "must be in [0, 1]");
    require(link.N_d >= 1, "link.N_d", "must be >= 1");
    require(link.delta_theta_min_deg >= 0.0, "link.delta_theta_min_deg", "must be >= 0");
    require(link.slots >= 1, "link.slots", "must be >= 1");
    require(drops >= 0, "link.drops", "must be >= 0");
    for (double pb : p_blk_values) require(pb >= 0.0 && pb <= 1.0, "link.p_blk", "values must be in [0, 1]");
    require(!snr_db.values().empty(), "link.snr_db", "empty range");
    require(!schemes.empty(), "link.schemes", "at least one scheme");
    for (const auto& s : schemes) {
        require(s.p >= 1, "link.schemes", "p must be >= 1");
        require(s.scheme != Scheme::BST || s.p == 1, "link.schemes", "BST requires p = 1");
    }
    require(power_tol_db >= 0.0, "link.power_tol_db", "must be >= 0");

    require(!ba_T.values().empty() && ba_T.start >= 1.0, "ba.T", "range must be nonempty and start at >= 1");
    require(ba_trials >= 0, "ba.trials", "must be >= 0");
    require(bs_fingers >= 1 && bs_fingers <= array.M, "ba.bs_fingers", "must be in [1, M]");
    require(ue_fingers >= 1 && ue_fingers <= array.N, "ba.ue_fingers", "must be in [1, N]");
    require(timing.segment_chips >= 1, "ba.segment_chips", "must be >= 1");
    require(timing.slot_chips >= timing.segment_chips, "ba.slot_chips", "must be >= segment_chips");
    require(phase_hops >= 0, "ba.phase_hops", "must be >= 0");
    require(nnls_max_iter >= 1, "ba.nnls_max_iter", "must be >= 1");
    require(nnls_tol >= 0.0, "ba.nnls_tol", "must be >= 0");
    require(se_ba_slots >= 1, "ba.se_slots", "must be >= 1");

    require(eta_max0 > 0.0 && eta_max0 <= 1.0, "power.eta_max0", "must be in (0, 1]");
    require(alpha_off0_db <= 0.0, "power.alpha_off0_db", "must be <= 0 dB");
    require(!p_rad_dbm.values().empty(), "power.p_rad_dbm", "empty range");
    require(papr_sc_db >= 0.0, "power.papr_sc_db", "must be >= 0");
    require(papr_ofdm_db >= 0.0, "power.papr_ofdm_db", "must be >= 0");
    require(papr_sc_sum_db >= 0.0, "power.papr_sc_sum_db", "must be >= 0");

    require(papr_symbols >= papr.block_symbols, "papr.symbols", "must cover one block");
    require(papr_beta >= 0.0 && papr_beta <= 1.0, "papr.beta", "must be in [0, 1]");
    require(!papr_streams.empty(), "papr.streams", "at least one stream count");
    for (int s : papr_streams) require(s >= 1, "papr.streams", "must be >= 1");
    require(papr.oversampling >= 1, "papr.oversampling", "must be >= 1");
    require(papr.block_symbols >= 1, "papr.block_symbols", "must be >= 1");
    require(papr.span_symbols >= 1, "papr.span_symbols", "must be >= 1");
    require(papr.percentile > 0.0 && papr.percentile <= 100.0, "papr.percentile", "must be in (0, 100]");
}

bool ScenarioConfig::operator==(const ScenarioConfig& o) const { return to_json(*this) == to_json(o); }

std::string config_to_json(const ScenarioConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

ScenarioConfig parse_config(const std::string& text) {
    json base = to_json(ScenarioConfig{});
    if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
        json user;
        try {
            user = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError("", std::string("malformed config: ") + e.what());
        }
        overlay(base, user, "");
    }
    ScenarioConfig c = from_json(base);
    c.validate();
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;

    json user = json::object();
    json* node = &user;
    std::stringstream ks(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ks, part, '.')) parts.push_back(part);
    for (size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
    (*node)[parts.back()] = value;

    json base = to_json(cfg);
    overlay(base, user, "");
    ScenarioConfig c = from_json(base);
    c.validate();
    cfg = std::move(c);
}

void write_config(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("", "cannot write '" + path + "'");
    out << config_to_json(cfg);
}

}  // namespace hda
