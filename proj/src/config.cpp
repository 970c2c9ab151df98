// rislab: rate analysis and phase optimization for RIS-aided massive MIMO
// Copyright (C) 2026 The rislab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rislab/config.hpp"

#include "rislab/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace rislab
{

std::string to_string(ExperimentKind kind)
{
    switch (kind)
    {
    case ExperimentKind::validate:
        return "validate";
    case ExperimentKind::sweep_power:
        return "sweep-power";
    case ExperimentKind::sweep_dac_bits:
        return "sweep-dac-bits";
    case ExperimentKind::sweep_ris_bits:
        return "sweep-ris-bits";
    case ExperimentKind::optimize:
        return "optimize";
    }
    return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(const std::string &name)
{
    for (auto kind : {ExperimentKind::validate, ExperimentKind::sweep_power, ExperimentKind::sweep_dac_bits,
                      ExperimentKind::sweep_ris_bits, ExperimentKind::optimize})
        if (to_string(kind) == name)
            return kind;
    return std::nullopt;
}

void ExperimentSpec::validate() const
{
    auto need = [](bool ok, const char *what) {
        if (!ok)
            throw Error(ErrorKind::config_error, std::string(what) + " must not be empty");
    };
    switch (kind)
    {
    case ExperimentKind::validate:
    case ExperimentKind::sweep_power:
        need(!grid_elements.empty(), "grid_N");
        need(!grid_power_dbm.empty(), "grid_P_dbm");
        break;
    case ExperimentKind::sweep_dac_bits:
        need(!grid_dac.empty(), "grid_b");
        break;
    case ExperimentKind::sweep_ris_bits:
        need(!grid_elements.empty(), "grid_N");
        need(!grid_phase_bits.empty(), "grid_B");
        break;
    case ExperimentKind::optimize:
        break;
    }
    if (drops < 1)
        throw Error(ErrorKind::config_error, "drops must be >= 1");
}

namespace
{

std::string trim(const std::string &s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string lower(std::string s)
{
    for (char &c : s)
        if (c >= 'A' && c <= 'Z')
            c = static_cast<char>(c - 'A' + 'a');
    return s;
}

/// Parse failure with the location prepended.
struct LineError
{
    std::string source;
    int line;

    [[noreturn]] void operator()(const std::string &message) const
    {
        throw Error(ErrorKind::config_error, source + ":" + std::to_string(line) + ": " + message);
    }
};

double to_double(const std::string &text, const LineError &fail)
{
    const std::string t = lower(text);
    if (t == "inf" || t == "+inf" || t == "infinity")
        return std::numeric_limits<double>::infinity();
    double value = 0.0;
    const char *begin = text.data();
    const char *end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || std::isnan(value))
        fail("malformed number '" + text + "'");
    return value;
}

long long to_integer(const std::string &text, const LineError &fail)
{
    long long value = 0;
    const char *begin = text.data();
    const char *end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        fail("malformed integer '" + text + "'");
    return value;
}

std::uint64_t to_seed(const std::string &text, const LineError &fail)
{
    std::uint64_t value = 0;
    const char *begin = text.data();
    const char *end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        fail("malformed seed '" + text + "'");
    return value;
}

bool to_bool(const std::string &text, const LineError &fail)
{
    const std::string t = lower(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on")
        return true;
    if (t == "false" || t == "0" || t == "no" || t == "off")
        return false;
    fail("malformed boolean '" + text + "'");
}

std::vector<std::string> split_list(const std::string &text)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    if (out.size() == 1 && out.front().empty())
        out.clear();
    return out;
}

template <typename T, typename Convert>
std::vector<T> to_list(const std::string &text, Convert convert, const LineError &fail)
{
    std::vector<T> out;
    for (const auto &item : split_list(text))
    {
        if (item.empty())
            fail("empty list element in '" + text + "'");
        out.push_back(convert(item));
    }
    return out;
}

int positive_int(const std::string &text, const char *name, const LineError &fail)
{
    const long long v = to_integer(text, fail);
    if (v < 1 || v > std::numeric_limits<int>::max())
        fail(std::string(name) + " must be >= 1 (got " + text + ")");
    return static_cast<int>(v);
}

double positive_double(const std::string &text, const char *name, const LineError &fail)
{
    const double v = to_double(text, fail);
    if (!(v > 0.0) || std::isinf(v))
        fail(std::string(name) + " must be > 0 (got " + text + ")");
    return v;
}

double nonnegative_double(const std::string &text, const char *name, const LineError &fail)
{
    const double v = to_double(text, fail);
    if (!(v >= 0.0))
        fail(std::string(name) + " must be >= 0 (got " + text + ")");
    return v;
}

DacResolution to_dac(const std::string &text, const LineError &fail)
{
    const std::string t = lower(text);
    if (t == "inf" || t == "infinite")
        return DacResolution::infinite();
    return DacResolution::bits(positive_int(text, "b", fail));
}

PhaseResolution to_phase_resolution(const std::string &text, const LineError &fail)
{
    const std::string t = lower(text);
    if (t == "continuous" || t == "inf")
        return PhaseResolution::continuous();
    return PhaseResolution::bits(positive_int(text, "B", fail));
}

using Setter = std::function<void(ParsedConfig &, const std::string &, const LineError &)>;

const std::vector<std::pair<std::string, Setter>> &setters()
{
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"M", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.bs_antennas = positive_int(v, "M", f); }},
        {"N", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.ris_elements = positive_int(v, "N", f); }},
        {"K", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.users = positive_int(v, "K", f); }},
        {"P_dbm", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.power_w = dbm_to_watts(to_double(v, f)); }},
        {"sigma2_dbm", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.noise_w = dbm_to_watts(to_double(v, f)); }},
        {"K_G", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.rician_bs_ris = nonnegative_double(v, "K_G", f); }},
        {"K_k", [](ParsedConfig &c, const std::string &v, const LineError &f) {
             c.scenario.rician_users = to_list<double>(v, [&](const std::string &s) { return nonnegative_double(s, "K_k", f); }, f);
             if (c.scenario.rician_users.empty())
                 f("K_k needs at least one value");
         }},
        {"phi_r", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.aoa_ris = to_double(v, f); }},
        {"phi_t", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.aod_bs = to_double(v, f); }},
        {"phi_kt", [](ParsedConfig &c, const std::string &v, const LineError &f) {
             c.scenario.user_aods = to_list<double>(v, [&](const std::string &s) { return to_double(s, f); }, f);
         }},
        {"d_over_lambda", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.d_over_lambda = positive_double(v, "d_over_lambda", f); }},
        {"bs_x", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.bs_position.x = to_double(v, f); }},
        {"bs_y", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.bs_position.y = to_double(v, f); }},
        {"ris_x", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.ris_position.x = to_double(v, f); }},
        {"ris_y", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.ris_position.y = to_double(v, f); }},
        {"user_center_x", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.user_center.x = to_double(v, f); }},
        {"user_center_y", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.user_center.y = to_double(v, f); }},
        {"user_radius", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.user_radius = nonnegative_double(v, "user_radius", f); }},
        {"pl0_db", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.pl0_db = to_double(v, f); }},
        {"d0", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.d0 = positive_double(v, "d0", f); }},
        {"kappa_bi", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.kappa_bs_ris = to_double(v, f); }},
        {"kappa_iu", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.kappa_ris_user = to_double(v, f); }},
        {"b", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.dac = to_dac(v, f); }},
        {"B", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.ris_phase = to_phase_resolution(v, f); }},
        {"seed", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.scenario.seed = to_seed(v, f); }},

        {"experiment", [](ParsedConfig &c, const std::string &v, const LineError &f) {
             const auto kind = parse_experiment_kind(v);
             if (!kind)
                 f("unknown experiment '" + v + "'");
             c.experiment.kind = *kind;
         }},
        {"grid_N", [](ParsedConfig &c, const std::string &v, const LineError &f) {
             c.experiment.grid_elements = to_list<int>(v, [&](const std::string &s) { return positive_int(s, "grid_N", f); }, f);
         }},
        {"grid_P_dbm", [](ParsedConfig &c, const std::string &v, const LineError &f) {
             c.experiment.grid_power_dbm = to_list<double>(v, [&](const std::string &s) { return to_double(s, f); }, f);
         }},
        {"grid_b", [](ParsedConfig &c, const std::string &v, const LineError &f) {
             c.experiment.grid_dac = to_list<DacResolution>(v, [&](const std::string &s) { return to_dac(s, f); }, f);
         }},
        {"grid_B", [](ParsedConfig &c, const std::string &v, const LineError &f) {
             c.experiment.grid_phase_bits = to_list<int>(v, [&](const std::string &s) { return positive_int(s, "grid_B", f); }, f);
         }},
        {"mc_trials", [](ParsedConfig &c, const std::string &v, const LineError &f) {
             const long long n = to_integer(v, f);
             if (n < 0)
                 f("mc_trials must be >= 0 (got " + v + ")");
             c.experiment.mc_trials = static_cast<std::size_t>(n);
         }},
        {"output", [](ParsedConfig &c, const std::string &v, const LineError &) { c.experiment.output_dir = v; }},
        {"pso_budget", [](ParsedConfig &c, const std::string &v, const LineError &f) {
             const long long n = to_integer(v, f);
             if (n < 0)
                 f("pso_budget must be >= 0 (got " + v + ")");
             c.experiment.pso_budget = static_cast<std::size_t>(n);
         }},
        {"pso_swarm", [](ParsedConfig &c, const std::string &v, const LineError &f) {
             c.experiment.pso_swarm = static_cast<std::size_t>(positive_int(v, "pso_swarm", f));
         }},
        {"fast", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.experiment.fast = to_bool(v, f); }},
        {"drops", [](ParsedConfig &c, const std::string &v, const LineError &f) {
             c.experiment.drops = static_cast<std::size_t>(positive_int(v, "drops", f));
         }},
        {"dps_local_search", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.experiment.dps_local_search = to_bool(v, f); }},
        {"pso_adapt_every_iteration", [](ParsedConfig &c, const std::string &v, const LineError &f) { c.experiment.pso_adapt_every_iteration = to_bool(v, f); }},
        {"sample_quantization_noise", [](ParsedConfig &c, const std::string &v, const LineError &f) {
             c.experiment.sample_quantization_noise = to_bool(v, f);
         }},
        {"workers", [](ParsedConfig &c, const std::string &v, const LineError &f) {
             const long long n = to_integer(v, f);
             if (n < 0)
                 f("workers must be >= 0 (got " + v + ")");
             c.experiment.workers = static_cast<unsigned>(n);
         }},
    };
    return table;
}

} // namespace

const std::vector<std::string> &config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto &[name, setter] : setters())
            k.push_back(name);
        return k;
    }();
    return keys;
}

ParsedConfig parse_config(std::istream &in, const std::string &source)
{
    std::map<std::string, const Setter *> lookup;
    for (const auto &[name, setter] : setters())
        lookup.emplace(name, &setter);

    ParsedConfig cfg;
    std::map<std::string, int> seen;
    std::string raw;
    int line_no = 0;
    int k_line = 0;
    while (std::getline(in, raw))
    {
        ++line_no;
        const LineError fail{source, line_no};
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail("expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            fail("missing key before '='");
        const auto it = lookup.find(key);
        if (it == lookup.end())
            fail("unknown key '" + key + "'");
        if (value.empty())
            fail("missing value for required key '" + key + "'");
        if (const auto prev = seen.find(key); prev != seen.end())
            fail("duplicate key '" + key + "' (first set on line " + std::to_string(prev->second) + ")");
        seen.emplace(key, line_no);
        if (key == "K_k" || key == "phi_kt")
            k_line = std::max(k_line, line_no);
        (*it->second)(cfg, value, fail);
        cfg.entries.emplace_back(key, value);
    }

    // per-user vectors: a single K_k applies to every user
    auto &sc = cfg.scenario;
    if (sc.rician_users.size() == 1)
        sc.rician_users.assign(static_cast<std::size_t>(sc.users), sc.rician_users.front());
    else if (!seen.contains("K_k"))
        sc.rician_users.assign(static_cast<std::size_t>(sc.users), 10.0);
    const LineError at_vectors{source, k_line};
    if (sc.rician_users.size() != static_cast<std::size_t>(sc.users))
        at_vectors("K_k has " + std::to_string(sc.rician_users.size()) + " entries but K = " + std::to_string(sc.users));
    if (!sc.user_aods.empty() && sc.user_aods.size() != static_cast<std::size_t>(sc.users))
        at_vectors("phi_kt has " + std::to_string(sc.user_aods.size()) + " entries but K = " + std::to_string(sc.users));

    try
    {
        sc.validate();
        cfg.experiment.validate();
    }
    catch (const Error &e)
    {
        throw Error(ErrorKind::config_error, source + ": " + e.what());
    }
    return cfg;
}

ParsedConfig parse_config_file(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::io_error, "cannot open config file '" + path.string() + "'");
    return parse_config(in, path.string());
}

nlohmann::json to_json(const ScenarioConfig &c)
{
    nlohmann::json j;
    j["M"] = c.bs_antennas;
    j["N"] = c.ris_elements;
    j["K"] = c.users;
    j["P_w"] = c.power_w;
    j["P_dbm"] = watts_to_dbm(c.power_w);
    j["sigma2_w"] = c.noise_w;
    j["sigma2_dbm"] = watts_to_dbm(c.noise_w);
    j["K_G"] = c.rician_bs_ris;
    j["K_k"] = c.rician_users;
    j["phi_r"] = c.aoa_ris;
    j["phi_t"] = c.aod_bs;
    j["phi_kt"] = c.user_aods;
    j["d_over_lambda"] = c.d_over_lambda;
    j["bs_position"] = {c.bs_position.x, c.bs_position.y};
    j["ris_position"] = {c.ris_position.x, c.ris_position.y};
    j["user_center"] = {c.user_center.x, c.user_center.y};
    j["user_radius"] = c.user_radius;
    j["pl0_db"] = c.pl0_db;
    j["d0"] = c.d0;
    j["kappa_bi"] = c.kappa_bs_ris;
    j["kappa_iu"] = c.kappa_ris_user;
    j["b"] = c.dac.to_string();
    j["B"] = c.ris_phase.to_string();
    j["seed"] = c.seed;
    return j;
}

nlohmann::json to_json(const ExperimentSpec &s)
{
    nlohmann::json j;
    j["experiment"] = to_string(s.kind);
    j["grid_N"] = s.grid_elements;
    j["grid_P_dbm"] = s.grid_power_dbm;
    std::vector<std::string> dac;
    for (const auto &d : s.grid_dac)
        dac.push_back(d.to_string());
    j["grid_b"] = dac;
    j["grid_B"] = s.grid_phase_bits;
    j["mc_trials"] = s.mc_trials;
    j["output"] = s.output_dir.string();
    j["pso_budget"] = s.pso_budget ? nlohmann::json(*s.pso_budget) : nlohmann::json(nullptr);
    j["pso_swarm"] = s.pso_swarm ? nlohmann::json(*s.pso_swarm) : nlohmann::json(nullptr);
    j["fast"] = s.fast;
    j["drops"] = s.drops;
    j["dps_local_search"] = s.dps_local_search;
    j["pso_adapt_every_iteration"] = s.pso_adapt_every_iteration;
    j["sample_quantization_noise"] = s.sample_quantization_noise;
    return j;
}

} // namespace rislab
