// SPDX-License-Identifier: Apache-2.0
#include "xlsched/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "json.hpp"

#include "xlsched/errors.hpp"

namespace xlsched::cli {
namespace {

using nlohmann::json;

enum class Dimension { kPlain, kPower, kPsd, kGain, kFrequency, kLength };

struct Unit {
  std::string_view name;
  Dimension dimension;
  double (*to_si)(double);
};

constexpr Unit kUnits[] = {
    {"W", Dimension::kPower, [](double v) { return v; }},
    {"mW", Dimension::kPower, [](double v) { return v * 1e-3; }},
    {"dBm", Dimension::kPower, [](double v) { return std::pow(10.0, (v - 30.0) / 10.0); }},
    {"dBW", Dimension::kPower, [](double v) { return std::pow(10.0, v / 10.0); }},
    {"W/Hz", Dimension::kPsd, [](double v) { return v; }},
    {"dBm/Hz", Dimension::kPsd, [](double v) { return std::pow(10.0, (v - 30.0) / 10.0); }},
    {"dB", Dimension::kGain, [](double v) { return std::pow(10.0, v / 10.0); }},
    {"Hz", Dimension::kFrequency, [](double v) { return v; }},
    {"kHz", Dimension::kFrequency, [](double v) { return v * 1e3; }},
    {"MHz", Dimension::kFrequency, [](double v) { return v * 1e6; }},
    {"GHz", Dimension::kFrequency, [](double v) { return v * 1e9; }},
    {"m", Dimension::kLength, [](double v) { return v; }},
    {"cm", Dimension::kLength, [](double v) { return v * 1e-2; }},
    {"mm", Dimension::kLength, [](double v) { return v * 1e-3; }},
    {"km", Dimension::kLength, [](double v) { return v * 1e3; }},
};

double parse_quantity(const json& value, const std::string& field, Dimension dim) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string() || dim == Dimension::kPlain)
    throw ConfigInvalid(field, "expected a number");
  const std::string text = value.get<std::string>();
  const char* begin = text.c_str();
  char* end = nullptr;
  const double number = std::strtod(begin, &end);
  if (end == begin) throw ConfigInvalid(field, "cannot parse quantity '" + text + "'");
  std::string unit(end);
  unit.erase(0, unit.find_first_not_of(' '));
  unit.erase(unit.find_last_not_of(' ') + 1);
  for (const Unit& u : kUnits)
    if (u.name == unit && u.dimension == dim) return u.to_si(number);
  throw ConfigInvalid(field, "unsupported unit '" + unit + "'");
}

std::size_t parse_count(const json& value, const std::string& field) {
  if (!value.is_number_integer() || value.get<long long>() < 0)
    throw ConfigInvalid(field, "expected a non-negative integer");
  return value.get<std::size_t>();
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json config_json(const ExperimentSpec& spec) {
  const SystemConfig& c = spec.base;
  json j;
  j["num_antennas"] = c.num_antennas;
  j["antenna_spacing"] = c.antenna_spacing;
  j["carrier_freq"] = c.carrier_freq;
  j["bandwidth"] = c.bandwidth;
  j["num_users"] = c.num_users;
  j["tx_power_budget"] = c.tx_power_budget;
  j["los_probability"] = c.los_probability;
  j["epsilon"] = c.epsilon;
  j["gamma_los"] = c.gamma_los;
  j["gamma_nlos"] = c.gamma_nlos;
  j["beta0_los"] = c.beta0_los;
  j["beta0_nlos"] = c.beta0_nlos;
  j["noise_psd"] = c.noise_psd;
  j["min_rate_range"] = {c.min_rate_lo, c.min_rate_hi};
  j["common_min_rate"] = c.common_min_rate ? json(*c.common_min_rate) : json(nullptr);
  j["r_min"] = c.r_min;
  j["r_max"] = c.r_max;
  j["rng_seed"] = c.rng_seed;
  j["sweep_variable"] = to_string(spec.sweep_variable);
  j["sweep_values"] = spec.sweep_values;
  json algos = json::array();
  for (Algorithm a : spec.algorithms) algos.push_back(to_string(a));
  j["algorithms"] = algos;
  j["num_realizations"] = spec.num_realizations;
  return j;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

json channel_json(const arma::cx_vec& a) {
  std::vector<double> re(a.n_elem), im(a.n_elem);
  for (arma::uword m = 0; m < a.n_elem; ++m) {
    re[m] = a[m].real();
    im[m] = a[m].imag();
  }
  return {{"re", re}, {"im", im}};
}

}  // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

ExperimentSpec parse_config_text(std::string_view json_text, Scale scale) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigInvalid("<document>", e.what());
  }
  if (doc.is_object() && doc.contains("config") && doc.contains("version")) doc = doc["config"];
  if (!doc.is_object()) throw ConfigInvalid("<document>", "expected a JSON object");

  ExperimentSpec spec;
  SystemConfig& c = spec.base;
  if (scale == Scale::kDesk) {
    c.num_antennas = kDeskAntennas;
    c.num_users = kDeskUsers;
    spec.num_realizations = kDeskRealizations;
  }

  std::optional<std::string> sweep_name;
  const json* sweep_values = nullptr;
  for (const auto& [key, value] : doc.items()) {
    if (key == "num_antennas") c.num_antennas = parse_count(value, key);
    else if (key == "antenna_spacing") c.antenna_spacing = parse_quantity(value, key, Dimension::kLength);
    else if (key == "carrier_freq") c.carrier_freq = parse_quantity(value, key, Dimension::kFrequency);
    else if (key == "bandwidth") c.bandwidth = parse_quantity(value, key, Dimension::kFrequency);
    else if (key == "num_users") c.num_users = parse_count(value, key);
    else if (key == "tx_power_budget") c.tx_power_budget = parse_quantity(value, key, Dimension::kPower);
    else if (key == "los_probability") c.los_probability = parse_quantity(value, key, Dimension::kPlain);
    else if (key == "epsilon") c.epsilon = parse_quantity(value, key, Dimension::kPlain);
    else if (key == "gamma_los") c.gamma_los = parse_quantity(value, key, Dimension::kPlain);
    else if (key == "gamma_nlos") c.gamma_nlos = parse_quantity(value, key, Dimension::kPlain);
    else if (key == "beta0_los") c.beta0_los = parse_quantity(value, key, Dimension::kGain);
    else if (key == "beta0_nlos") c.beta0_nlos = parse_quantity(value, key, Dimension::kGain);
    else if (key == "noise_psd") c.noise_psd = parse_quantity(value, key, Dimension::kPsd);
    else if (key == "min_rate_range") {
      if (!value.is_array() || value.size() != 2)
        throw ConfigInvalid(key, "expected [low, high]");
      c.min_rate_lo = parse_quantity(value[0], key, Dimension::kPlain);
      c.min_rate_hi = parse_quantity(value[1], key, Dimension::kPlain);
    } else if (key == "common_min_rate") {
      if (value.is_null()) c.common_min_rate.reset();
      else c.common_min_rate = parse_quantity(value, key, Dimension::kPlain);
    } else if (key == "r_min") c.r_min = parse_quantity(value, key, Dimension::kLength);
    else if (key == "r_max") c.r_max = parse_quantity(value, key, Dimension::kLength);
    else if (key == "rng_seed") {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0))
        throw ConfigInvalid(key, "expected a non-negative integer");
      c.rng_seed = value.get<std::uint64_t>();
    } else if (key == "sweep_variable") {
      if (!value.is_string()) throw ConfigInvalid(key, "expected a string");
      sweep_name = value.get<std::string>();
    } else if (key == "sweep_values") {
      if (!value.is_array()) throw ConfigInvalid(key, "expected an array");
      sweep_values = &value;
    } else if (key == "algorithms") {
      if (!value.is_array()) throw ConfigInvalid(key, "expected an array of names");
      spec.algorithms.clear();
      for (const json& name : value) {
        const auto a = name.is_string() ? parse_algorithm(name.get<std::string>()) : std::nullopt;
        if (!a) throw ConfigInvalid(key, "unknown algorithm " + name.dump());
        spec.algorithms.push_back(*a);
      }
    } else if (key == "num_realizations") spec.num_realizations = parse_count(value, key);
    else throw ConfigInvalid(key, "unknown field");
  }

  // "p_max_dbm" takes plain numbers in dBm; "tx_power" takes watts.
  bool values_in_dbm = false;
  if (sweep_name) {
    if (*sweep_name == "p_max_dbm") {
      spec.sweep_variable = SweepVariable::kTxPower;
      values_in_dbm = true;
    } else if (const auto v = parse_sweep_variable(*sweep_name)) {
      spec.sweep_variable = *v;
    } else {
      throw ConfigInvalid("sweep_variable", "unknown sweep variable '" + *sweep_name + "'");
    }
  }
  if (sweep_values) {
    for (const json& v : *sweep_values) {
      if (spec.sweep_variable == SweepVariable::kTxPower) {
        spec.sweep_values.push_back(values_in_dbm && v.is_number()
                                        ? dbm_to_watts(v.get<double>())
                                        : parse_quantity(v, "sweep_values", Dimension::kPower));
      } else {
        spec.sweep_values.push_back(parse_quantity(v, "sweep_values", Dimension::kPlain));
      }
    }
  }
  validate(spec);
  return spec;
}

ExperimentSpec parse_config(const std::filesystem::path& path, Scale scale) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigInvalid("<file>", e.what());
  }
  return parse_config_text(text, scale);
}

std::string emit_config(const ExperimentSpec& spec) { return config_json(spec).dump(2) + "\n"; }

double sweep_value_for_output(SweepVariable variable, double value) {
  return variable == SweepVariable::kTxPower ? watts_to_dbm(value) : value;
}

std::string_view sweep_var_label(SweepVariable variable) noexcept {
  switch (variable) {
    case SweepVariable::kTxPower: return "p_max_dbm";
    case SweepVariable::kEpsilon: return "epsilon";
    case SweepVariable::kLosProbability: return "rho";
    case SweepVariable::kCommonMinRate: return "min_rate";
  }
  return "unknown";
}

std::string format_metrics_csv(const ExperimentSpec& spec, const ExperimentResult& result) {
  std::ostringstream out;
  out << kMetricsHeader << '\n';
  const std::string seed = std::to_string(spec.base.rng_seed);
  for (const MetricsRow& row : result.rows) {
    out << sweep_var_label(spec.sweep_variable) << ','
        << format_number(sweep_value_for_output(spec.sweep_variable, row.sweep_value)) << ','
        << to_string(row.algorithm) << ',' << format_number(row.mean_sum_rate) << ','
        << format_number(row.mean_num_scheduled) << ',' << format_number(row.mean_avg_rate) << ','
        << format_number(row.p_los) << ',' << format_number(row.p_nlos) << ','
        << row.realizations << ',' << seed << '\n';
  }
  return out.str();
}

std::string format_ccdf_csv(const ExperimentSpec& spec, const ExperimentResult& result) {
  std::ostringstream out;
  out << kCcdfHeader << '\n';
  for (const MetricsRow& row : result.rows) {
    const std::string value =
        format_number(sweep_value_for_output(spec.sweep_variable, row.sweep_value));
    for (std::size_t j = 0; j < row.ccdf.size(); ++j)
      out << value << ',' << to_string(row.algorithm) << ',' << format_number(result.ccdf_grid[j])
          << ',' << format_number(row.ccdf[j]) << '\n';
  }
  return out.str();
}

std::string emit_manifest(const RunManifest& m) {
  json j;
  j["version"] = m.version;
  j["seed"] = m.seed;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  json outputs = json::array();
  for (const auto& p : m.outputs) outputs.push_back(p.string());
  j["outputs"] = outputs;
  j["dbs_metric"] = "surrogate: r_k * (1 + sum_i |a_k^H f_i|^2 / ||a_k||^2)";
  j["config"] = config_json(m.spec);
  return j.dump(2) + "\n";
}

std::filesystem::path ccdf_path_for(const std::filesystem::path& out) {
  return std::filesystem::path(out.string() + ".ccdf.csv");
}

std::filesystem::path manifest_path_for(const std::filesystem::path& out) {
  return std::filesystem::path(out.string() + ".manifest.json");
}

RunManifest cmd_sweep(const ExperimentSpec& spec, const std::filesystem::path& out,
                      std::size_t workers) {
  RunManifest manifest;
  manifest.spec = spec;
  manifest.seed = spec.base.rng_seed;
  manifest.started_at = utc_now();
  const ExperimentResult result = run_experiment(spec, workers);
  manifest.finished_at = utc_now();
  manifest.outputs = {out, ccdf_path_for(out), manifest_path_for(out)};
  write_file(out, format_metrics_csv(spec, result));
  write_file(ccdf_path_for(out), format_ccdf_csv(spec, result));
  write_file(manifest_path_for(out), emit_manifest(manifest));
  return manifest;
}

std::string cmd_inspect(const ExperimentSpec& spec, std::uint64_t realization) {
  validate(spec);
  const SystemConfig& cfg = spec.base;
  const RealizationResult rr = run_realization(cfg, spec.algorithms, realization);
  const Population& pop = rr.population;

  json users = json::array();
  for (std::size_t k = 0; k < pop.size(); ++k) {
    const User& u = pop.users[k];
    users.push_back({{"index", k},
                     {"r", u.position.r},
                     {"theta", u.position.theta},
                     {"x", u.state == ChannelState::kLos ? 1 : 0},
                     {"min_rate", u.min_rate},
                     {"channel_power", pop.channel_power[k]}});
  }

  json algos = json::array();
  for (const ScheduleOutcome& o : rr.outcomes) {
    json channels = json::array();
    json min_rates = json::array();
    double total_power = 0.0;
    for (std::size_t i = 0; i < o.scheduled.size(); ++i) {
      channels.push_back(channel_json(pop.users[o.scheduled[i]].channel));
      min_rates.push_back(pop.users[o.scheduled[i]].min_rate);
      total_power += o.allocation.powers[i];
    }
    json entry = {{"algorithm", to_string(o.algorithm)},
                  {"scheduled", o.scheduled},
                  {"powers", o.allocation.powers},
                  {"rates", o.rates},
                  {"min_rates", min_rates},
                  {"gram_inv_diag", o.gram_inv_diag},
                  {"water_level", o.allocation.water_level},
                  {"total_power", total_power},
                  {"sum_rate", sum_rate(o)},
                  {"trace",
                   {{"candidate_count", o.candidate_count},
                    {"rank_pruned", o.rank_pruned},
                    {"removed", o.removed},
                    {"stop", o.stop ? json(to_string(*o.stop)) : json(nullptr)}}},
                  {"channels", channels}};
    if (o.algorithm == Algorithm::kDbs)
      entry["metric"] = "surrogate: r_k * (1 + sum_i |a_k^H f_i|^2 / ||a_k||^2)";
    algos.push_back(std::move(entry));
  }

  json doc = {{"version", kVersion},
              {"realization", realization},
              {"noise_power", cfg.noise_power()},
              {"tx_power_budget", cfg.tx_power_budget},
              {"num_antennas", cfg.num_antennas},
              {"users", users},
              {"algorithms", algos},
              {"config", config_json(spec)}};
  return doc.dump(2) + "\n";
}

std::size_t default_workers() {
  const char* env = std::getenv("XLSCHED_WORKERS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return 1;
  return static_cast<std::size_t>(v);
}

}  // namespace xlsched::cli
