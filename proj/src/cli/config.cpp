#include "dersamp/cli/config.hpp"

#include "dersamp/errors.hpp"
#include "dersamp/system.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <sstream>

namespace dersamp::cli {

namespace {

struct CommandInfo {
  Command command;
  const char* name;
  const char* help;
};

constexpr CommandInfo kCommands[] = {
    {Command::BoundsTable, "bounds-table", "extreme eigenvalues of S11, S22 and their bounds"},
    {Command::CondTable, "cond-table", "condition number of I - S over r"},
    {Command::EigVsN, "eig-vs-N", "largest eigenvalue of S versus the number of missing samples"},
    {Command::EigVsR, "eig-vs-r", "selected eigenvalues of S versus r"},
    {Command::EigVsM, "eig-vs-m", "selected eigenvalues of S versus the interleaving factor m"},
    {Command::Recover, "recover", "recover missing samples of the test signal g"},
    {Command::Reconstruct, "reconstruct", "reconstruct g after splicing in recovered samples"},
    {Command::Spectrum, "spectrum", "monitor max |Im lambda(S)| and eigenvalues outside (0, 1)"},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  if (trim(text).empty())
    return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(trim(item));
  return out;
}

std::vector<double> range(double first, double step, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i)
    v[i] = std::round((first + step * i) * 1e12) / 1e12;
  return v;
}

std::vector<long> iota_list(long count) {
  std::vector<long> v(count);
  for (long i = 0; i < count; ++i)
    v[i] = i;
  return v;
}

std::string noise_target_name(NoiseTarget t) {
  return t == NoiseTarget::RightHandSide ? "rhs" : "samples";
}

bool uses_explicit_r(Command c) {
  return c == Command::Recover || c == Command::Reconstruct;
}

} // namespace

std::string command_name(Command c) {
  for (const auto& info : kCommands)
    if (info.command == c)
      return info.name;
  return "unknown";
}

Command parse_command(const std::string& name) {
  for (const auto& info : kCommands)
    if (name == info.name)
      return info.command;
  throw InvalidArgument("unknown command '" + name + "'");
}

std::string channels_name(Channels c) {
  switch (c) {
  case Channels::One:
    return "1";
  case Channels::Two:
    return "2";
  case Channels::Function:
    return "function";
  case Channels::Derivative:
    return "derivative";
  }
  return "2";
}

std::vector<long> parse_index_list(const std::string& text) {
  std::vector<long> out;
  for (const auto& item : split_commas(text)) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size())
      throw InvalidArgument("not an integer list entry: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_commas(text)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size())
      throw InvalidArgument("not a real list entry: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

namespace {

// Option restricted to the keys of `names`; enum values are never accepted.
template <class T>
void choice(CLI::App* sub, const std::string& flag, const std::string& help, T& dest,
            const std::map<std::string, T>& names) {
  std::vector<std::string> keys;
  for (const auto& [k, v] : names)
    keys.push_back(k);
  sub->add_option_function<std::string>(
         flag, [&dest, names](const std::string& v) { dest = names.at(v); }, help)
      ->check(CLI::IsMember(keys));
}

} // namespace

void register_options(CLI::App& app, ExperimentConfig& cfg) {
  app.require_subcommand(1);
  // Flags are stored as text first so list syntax and validation errors are
  // reported uniformly through InvalidArgument.
  auto text = std::make_shared<std::map<std::string, std::string>>();

  for (const auto& info : kCommands) {
    CLI::App* sub = app.add_subcommand(info.name, info.help);
    const Command command = info.command;
    sub->callback([&cfg, command, text] {
      cfg.command = command;
      const auto get = [&](const std::string& key) -> std::optional<std::string> {
        const auto it = text->find(key);
        if (it == text->end())
          return std::nullopt;
        return it->second;
      };
      if (auto v = get("r"))
        cfg.r = parse_real_list(*v);
      if (auto v = get("missing"))
        cfg.missing = parse_index_list(*v);
      if (auto v = get("base"))
        cfg.base = parse_index_list(*v);
      if (auto v = get("select")) {
        cfg.select.clear();
        for (long s : parse_index_list(*v))
          cfg.select.push_back(static_cast<int>(s));
      }
      if (auto v = get("m-values")) {
        cfg.m_values.clear();
        for (long s : parse_index_list(*v))
          cfg.m_values.push_back(static_cast<int>(s));
      }
    });

    const auto list = [sub, text](const std::string& flag, const std::string& key,
                                  const std::string& help) {
      sub->add_option_function<std::string>(
          flag, [text, key](const std::string& v) { (*text)[key] = v; }, help);
    };
    list("--r", "r", "oversampling ratio(s), comma separated");
    list("--missing", "missing", "explicit missing indices, e.g. -2,-1,0,1,2,3");
    list("--base", "base", "base set I of U = m * I, e.g. 0,1,2,3");
    list("--select", "select", "1-based eigenvalue positions for the sweeps");
    list("--m-values", "m-values", "interleaving factors swept by eig-vs-m");

    sub->add_option("--omega", cfg.omega, "band edge (default pi)");
    sub->add_option("--m", cfg.m, "interleaving factor m of U = m * I");
    sub->add_option("--M", cfg.M, "truncation half-width of the sample sums");
    sub->add_option("--noise", cfg.noise, "noise magnitude (per-entry RMS)");
    sub->add_option("--seed", cfg.seed, "noise seed");
    choice(sub, "--noise-target", "where noise enters: rhs or samples", cfg.noise_target,
           {{"rhs", NoiseTarget::RightHandSide}, {"samples", NoiseTarget::Samples}});
    sub->add_flag("--regularize", cfg.regularize, "Tikhonov with the discrepancy principle");
    sub->add_option("--delta", cfg.delta, "noise level for the discrepancy principle");
    choice(sub, "--channels", "1, 2, function or derivative", cfg.channels,
           {{"1", Channels::One},
            {"2", Channels::Two},
            {"function", Channels::Function},
            {"derivative", Channels::Derivative}});
    sub->add_option("--n-max", cfg.n_max, "eig-vs-N: largest N");
    sub->add_option("--x-min", cfg.x_min, "reconstruct: grid start");
    sub->add_option("--x-max", cfg.x_max, "reconstruct: grid end");
    sub->add_option("--points", cfg.points, "reconstruct: grid points");
    sub->add_option("--out", cfg.output, "output file (default stdout)");
    choice(sub, "--format", "csv or json", cfg.format,
           {{"csv", Format::Csv}, {"json", Format::Json}});
  }
}

ExperimentConfig parse_command_line(int argc, const char* const* argv) {
  CLI::App app{kAppDescription, "dersamp"};
  ExperimentConfig cfg;
  register_options(app, cfg);
  app.parse(argc, argv);
  apply_defaults(cfg);
  validate(cfg);
  return cfg;
}

void apply_defaults(ExperimentConfig& cfg) {
  const bool has_set = cfg.missing || cfg.m || cfg.base;
  switch (cfg.command) {
  case Command::BoundsTable:
    if (cfg.r.empty())
      cfg.r = {0.55, 0.6, 0.7, 0.8, 0.9, 0.95};
    if (!has_set) {
      cfg.m = 8;
      cfg.base = std::vector<long>{0, 1, 2, 3};
    }
    break;
  case Command::CondTable:
    if (cfg.r.empty())
      cfg.r = range(0.1, 0.1, 9);
    if (!has_set)
      cfg.missing = iota_list(10);
    break;
  case Command::EigVsN:
    if (cfg.r.empty())
      cfg.r = {0.5, 0.7, 0.9, 0.95, 0.99};
    break;
  case Command::EigVsR:
    if (cfg.r.empty())
      cfg.r = range(0.02, 0.02, 49);
    if (!has_set) {
      cfg.m = 4;
      cfg.base = iota_list(10);
    }
    break;
  case Command::EigVsM:
    if (cfg.r.empty())
      cfg.r = {0.7};
    if (!cfg.base && !cfg.missing)
      cfg.base = iota_list(10);
    if (cfg.m_values.empty())
      for (int m = 1; m <= 64; ++m)
        cfg.m_values.push_back(m);
    break;
  case Command::Spectrum:
    if (cfg.r.empty())
      cfg.r = range(0.1, 0.1, 9);
    if (!has_set)
      cfg.missing = iota_list(10);
    break;
  case Command::Recover:
  case Command::Reconstruct:
    break;
  }
  if (cfg.base && !cfg.m)
    cfg.m = 1;
}

void validate(const ExperimentConfig& cfg) {
  if (!(cfg.omega > 0.0) || !std::isfinite(cfg.omega))
    throw InvalidArgument("--omega must be positive and finite");
  if (cfg.r.empty())
    throw InvalidArgument(command_name(cfg.command) + " requires --r");
  if (uses_explicit_r(cfg.command) && cfg.r.size() != 1)
    throw InvalidArgument(command_name(cfg.command) + " takes a single --r value");
  for (double r : cfg.r)
    if (!(r > 0.0 && r <= 1.0))
      throw InvalidArgument("--r values must lie in (0, 1]");
  if (cfg.missing && (cfg.m || cfg.base))
    throw InvalidArgument("give either --missing or --m/--base, not both");
  if (cfg.m && *cfg.m < 1)
    throw InvalidArgument("--m must be a positive integer");
  if (cfg.m && !cfg.base && cfg.command != Command::EigVsN)
    throw InvalidArgument("--m requires --base");

  const bool needs_set = cfg.command != Command::EigVsN;
  if (needs_set && !cfg.missing && !cfg.base)
    throw InvalidArgument(command_name(cfg.command) + " requires --missing or --m/--base");
  if (needs_set) {
    const MissingSet u = missing_set(cfg);
    const bool recovery = uses_explicit_r(cfg.command);
    if (recovery && cfg.M <= u.max_abs())
      throw InvalidArgument("--M must exceed the largest |missing index|");
    if (!recovery && u.empty())
      throw InvalidArgument(command_name(cfg.command) + " needs a non-empty missing set");
    if (cfg.command == Command::EigVsR || cfg.command == Command::EigVsM) {
      const int two_n = static_cast<int>(2 * u.size());
      for (int s : cfg.select)
        if (s < 1 || s > two_n)
          throw InvalidArgument("--select positions must lie in 1.." + std::to_string(two_n));
    }
  }
  if (cfg.command == Command::BoundsTable && !cfg.m)
    throw InvalidArgument("bounds-table requires the factored form --m/--base");
  if (cfg.command == Command::EigVsM) {
    if (cfg.missing)
      throw InvalidArgument("eig-vs-m sweeps m; give --base instead of --missing");
    for (int m : cfg.m_values)
      if (m < 1)
        throw InvalidArgument("--m-values must be positive");
  }
  if (cfg.command == Command::EigVsN && cfg.n_max < 1)
    throw InvalidArgument("--n-max must be at least 1");
  if (cfg.noise && (!(*cfg.noise >= 0.0) || !std::isfinite(*cfg.noise)))
    throw InvalidArgument("--noise must be a finite non-negative magnitude");
  if (cfg.delta && !(*cfg.delta > 0.0))
    throw InvalidArgument("--delta must be positive");
  if (cfg.command == Command::Reconstruct) {
    if (!(cfg.x_min < cfg.x_max))
      throw InvalidArgument("--x-min must be below --x-max");
    if (cfg.points < 2)
      throw InvalidArgument("--points must be at least 2");
  }
  if (cfg.M < 1)
    throw InvalidArgument("--M must be positive");
}

MissingSet missing_set(const ExperimentConfig& cfg) {
  if (cfg.missing)
    return MissingSet(*cfg.missing);
  if (cfg.base)
    return MissingSet::interleaved(cfg.m.value_or(1), *cfg.base);
  return MissingSet(std::vector<long>{});
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["command"] = command_name(cfg.command);
  j["r"] = cfg.r;
  j["omega"] = cfg.omega;
  j["missing"] = cfg.missing ? nlohmann::json(*cfg.missing) : nlohmann::json(nullptr);
  j["m"] = cfg.m ? nlohmann::json(*cfg.m) : nlohmann::json(nullptr);
  j["base"] = cfg.base ? nlohmann::json(*cfg.base) : nlohmann::json(nullptr);
  j["M"] = cfg.M;
  j["noise"] = cfg.noise ? nlohmann::json(*cfg.noise) : nlohmann::json(nullptr);
  j["seed"] = cfg.seed;
  j["noise_target"] = noise_target_name(cfg.noise_target);
  j["regularize"] = cfg.regularize;
  j["delta"] = cfg.delta ? nlohmann::json(*cfg.delta) : nlohmann::json(nullptr);
  j["channels"] = channels_name(cfg.channels);
  j["select"] = cfg.select;
  j["m_values"] = cfg.m_values;
  j["n_max"] = cfg.n_max;
  j["x_min"] = cfg.x_min;
  j["x_max"] = cfg.x_max;
  j["points"] = cfg.points;
  j["format"] = cfg.format == Format::Csv ? "csv" : "json";
  return j;
}

std::string canonical_string(const ExperimentConfig& cfg) { return config_to_json(cfg).dump(); }

} // namespace dersamp::cli
