#include "dersamp/cli/commands.hpp"

#include "dersamp/errors.hpp"
#include "dersamp/linalg.hpp"
#include "dersamp/recovery.hpp"
#include "dersamp/signals.hpp"
#include "dersamp/system.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>

namespace dersamp::cli {

namespace {

constexpr const char* kTrustFlag = "beyond binary64 trust";
constexpr const char* kIllConditionedFlag = "ill-conditioned";

std::vector<long> first_n(long n, int m) {
  std::vector<long> v(n);
  for (long i = 0; i < n; ++i)
    v[i] = m * i;
  return v;
}

SpectrumReport spectrum_of_S(const ExperimentConfig& cfg, double r, const MissingSet& u) {
  return eig_general(build_S(TwoChannelParams::from_ratio(cfg.omega, r), u));
}

void add_selected_columns(Table& t, const std::vector<int>& select) {
  for (int s : select) {
    t.columns.push_back("lambda_" + std::to_string(s) + "_re");
    t.columns.push_back("lambda_" + std::to_string(s) + "_im");
  }
}

void push_selected(std::vector<Cell>& row, const SpectrumReport& rep,
                   const std::vector<int>& select) {
  for (int s : select) {
    const auto e = rep.eigenvalues[static_cast<std::size_t>(s - 1)];
    row.emplace_back(e.real());
    row.emplace_back(e.imag());
  }
}

// Slack for the roundoff-tolerant count of eigenvalues outside (0, 1).
constexpr double kSpectrumSlack = 1e-12;

// Eigenvalues outside the open interval (0, 1), complex ones included.
long count_outside_unit(const SpectrumReport& rep, double slack) {
  return std::count_if(rep.eigenvalues.begin(), rep.eigenvalues.end(), [slack](auto e) {
    return std::abs(e.imag()) > slack || !(e.real() > -slack && e.real() < 1.0 + slack);
  });
}

// ---------------------------------------------------------------------------
// Recovery plumbing shared by recover and reconstruct.

struct RecoveryRun {
  RecoveryResult result;
  SampleSeries f, df; ///< sample streams with recovered values spliced in
  std::string delta_source = "none";
};

RecoveryOptions recovery_options(const ExperimentConfig& cfg) {
  RecoveryOptions opts;
  if (cfg.noise)
    opts.noise = NoiseSpec{*cfg.noise, cfg.seed, cfg.noise_target};
  opts.regularize = cfg.regularize;
  opts.delta = cfg.delta;
  return opts;
}

RecoveryRun run_recovery(const ExperimentConfig& cfg) {
  const BandLimitedSignal g = test_signal_g();
  const MissingSet u = missing_set(cfg);
  const double r = cfg.r.front();
  RecoveryOptions opts = recovery_options(cfg);
  RecoveryRun run;
  if (cfg.regularize)
    run.delta_source = cfg.delta ? "user" : (cfg.noise ? "noise" : "truncation-estimate");

  if (cfg.channels == Channels::One) {
    const auto p = OneChannelParams::from_ratio(cfg.omega, r);
    SampleSeries f = sample_function(g, p.t_o(), cfg.M);
    for (long l : u.indices())
      f.erase(l);
    if (cfg.regularize && !opts.delta && !opts.noise && !u.empty())
      opts.delta = truncation_delta_one_channel(p, u, g, cfg.M);
    run.result = recover_one_channel(p, u, f, cfg.M, opts);
    run.f = splice(f, u, *run.result.recovered_function);
    return run;
  }

  const auto p = TwoChannelParams::from_ratio(cfg.omega, r);
  SampleSeries f = sample_function(g, p.t_o(), cfg.M);
  SampleSeries df = sample_derivative(g, p.t_o(), cfg.M);
  const bool f_missing = cfg.channels != Channels::Derivative;
  const bool df_missing = cfg.channels != Channels::Function;
  for (long l : u.indices()) {
    if (f_missing)
      f.erase(l);
    if (df_missing)
      df.erase(l);
  }
  if (cfg.regularize && !opts.delta && !opts.noise && !u.empty())
    opts.delta = truncation_delta_two_channel(p, u, g, cfg.M);

  switch (cfg.channels) {
  case Channels::Function:
    run.result = recover_function_channel(p, u, f, df, cfg.M, opts);
    break;
  case Channels::Derivative:
    run.result = recover_derivative_channel(p, u, f, df, cfg.M, opts);
    break;
  default:
    run.result = recover_two_channel(p, u, f, df, cfg.M, opts);
    break;
  }
  run.f = run.result.recovered_function ? splice(f, u, *run.result.recovered_function) : f;
  run.df = run.result.recovered_derivative ? splice(df, u, *run.result.recovered_derivative) : df;
  return run;
}

void add_recovery_summary(Table& t, const RecoveryRun& run, std::size_t n_missing) {
  const RecoveryResult& res = run.result;
  t.summary.emplace_back("n_missing", static_cast<long>(n_missing));
  t.summary.emplace_back("lambda", res.lambda_used);
  t.summary.emplace_back("residual_norm", res.residual_norm);
  t.summary.emplace_back("condition_number", res.condition_estimate);
  t.summary.emplace_back("inverse_norm", res.inverse_norm);
  t.summary.emplace_back("delta", res.delta);
  t.summary.emplace_back("delta_source", run.delta_source);
  t.warnings.insert(t.warnings.end(), res.warnings.begin(), res.warnings.end());
}

} // namespace

Table cmd_bounds_table(const ExperimentConfig& cfg) {
  Table t;
  t.columns = {"r",       "D",       "s11_low", "s11_min", "s11_max", "s11_high",
               "s22_low", "s22_min", "s22_max", "s22_high", "case"};
  const int m = *cfg.m;
  const MissingSet u = missing_set(cfg);
  for (double r : cfg.r) {
    const auto p = TwoChannelParams::from_ratio(cfg.omega, r);
    const SBlocks b = split_blocks(build_S(p, u));
    const auto e11 = eig_symmetric(b.s11);
    const auto e22 = eig_symmetric(b.s22);
    if (is_integer_case(m, r)) {
      const double a = 2 * r - r * r, c = r * r;
      t.add_row({r, std::lround(2 * m * r), a, e11.min_real(), e11.max_real(), a, c,
                 e22.min_real(), e22.max_real(), c, std::string("triangular case")});
      continue;
    }
    const EigBounds eb = eig_bounds(m, r);
    t.add_row({r, eb.D, eb.alpha11_low, e11.min_real(), e11.max_real(), eb.alpha11_high,
               eb.beta22_low, e22.min_real(), e22.max_real(), eb.beta22_high,
               std::string("bounds")});
  }
  return t;
}

Table cmd_cond_table(const ExperimentConfig& cfg) {
  Table t;
  t.columns = {"r", "cond", "trust"};
  const MissingSet u = missing_set(cfg);
  for (double r : cfg.r) {
    DenseMatrix a;
    if (cfg.channels == Channels::One)
      a = identity_minus(build_R(OneChannelParams::from_ratio(cfg.omega, r), u));
    else
      a = identity_minus(build_S(TwoChannelParams::from_ratio(cfg.omega, r), u));
    const double cond = spectral_condition(a);
    const char* flag = cond > kConditionTrustLimit    ? kTrustFlag
                       : cond > kIllConditionedWarning ? kIllConditionedFlag
                                                       : "ok";
    t.add_row({r, cond, std::string(flag)});
    if (cond > kIllConditionedWarning)
      t.warnings.push_back("r=" + format_real(r) + ": cond=" + format_real(cond) + " " + flag);
  }
  return t;
}

Table cmd_eig_vs_n(const ExperimentConfig& cfg) {
  Table t;
  t.columns = {"N", "r", "lambda_max_re", "lambda_max_im"};
  const int m = cfg.m.value_or(1);
  for (double r : cfg.r) {
    for (long n = 1; n <= cfg.n_max; ++n) {
      const auto rep = spectrum_of_S(cfg, r, MissingSet(first_n(n, m)));
      const auto top = rep.eigenvalues.back();
      t.add_row({n, r, top.real(), top.imag()});
    }
  }
  return t;
}

Table cmd_eig_vs_r(const ExperimentConfig& cfg) {
  Table t;
  t.columns = {"r"};
  add_selected_columns(t, cfg.select);
  t.columns.push_back("r_squared");
  t.columns.push_back("two_r_minus_r_squared");
  const MissingSet u = missing_set(cfg);
  for (double r : cfg.r) {
    std::vector<Cell> row{r};
    push_selected(row, spectrum_of_S(cfg, r, u), cfg.select);
    row.emplace_back(r * r);
    row.emplace_back(2 * r - r * r);
    t.add_row(std::move(row));
  }
  return t;
}

Table cmd_eig_vs_m(const ExperimentConfig& cfg) {
  Table t;
  t.columns = {"r", "m"};
  add_selected_columns(t, cfg.select);
  t.columns.push_back("max_distance_to_limits");
  for (double r : cfg.r) {
    const double hi = 2 * r - r * r, lo = r * r;
    for (int m : cfg.m_values) {
      const auto rep = spectrum_of_S(cfg, r, MissingSet::interleaved(m, *cfg.base));
      std::vector<Cell> row{r, static_cast<long>(m)};
      push_selected(row, rep, cfg.select);
      double dist = 0.0;
      for (auto e : rep.eigenvalues)
        dist = std::max(dist, std::min(std::abs(e - hi), std::abs(e - lo)));
      row.emplace_back(dist);
      t.add_row(std::move(row));
    }
  }
  return t;
}

Table cmd_recover(const ExperimentConfig& cfg) {
  Table t;
  t.columns = {"index", "x", "channel", "truth", "recovered", "abs_error", "rel_error"};
  const BandLimitedSignal g = test_signal_g();
  const MissingSet u = missing_set(cfg);
  const RecoveryRun run = run_recovery(cfg);
  const RecoveryResult& res = run.result;

  const auto emit = [&](const char* channel, const Vector& values, bool deriv) {
    Vector truth;
    for (double x : res.positions)
      truth.push_back(deriv ? g.eval_deriv(x) : g.eval(x));
    const ErrorMetrics em = error_metrics(truth, values);
    for (std::size_t k = 0; k < values.size(); ++k)
      t.add_row({res.indices[k], res.positions[k], std::string(channel), truth[k], values[k],
                 std::abs(values[k] - truth[k]), em.per_entry_rel[k]});
    t.summary.emplace_back(std::string("max_abs_error_") + channel, em.max_abs);
  };
  if (res.recovered_function)
    emit("f", *res.recovered_function, false);
  if (res.recovered_derivative)
    emit("df", *res.recovered_derivative, true);
  add_recovery_summary(t, run, u.size());
  return t;
}

Table cmd_reconstruct(const ExperimentConfig& cfg) {
  Table t;
  const bool two = cfg.channels != Channels::One;
  t.columns = {"x", "g", "reconstructed"};
  if (two) {
    t.columns.push_back("g_prime");
    t.columns.push_back("reconstructed_prime");
  }
  const BandLimitedSignal g = test_signal_g();
  const MissingSet u = missing_set(cfg);
  const RecoveryRun run = run_recovery(cfg);
  const double r = cfg.r.front();

  double dev = 0.0, dev_prime = 0.0;
  for (double x : uniform_grid(cfg.x_min, cfg.x_max, cfg.points)) {
    if (!two) {
      const auto p = OneChannelParams::from_ratio(cfg.omega, r);
      const double y = reconstruct_one_channel(p, run.f, cfg.M, x);
      dev = std::max(dev, std::abs(y - g.eval(x)));
      t.add_row({x, g.eval(x), y});
      continue;
    }
    const auto p = TwoChannelParams::from_ratio(cfg.omega, r);
    const double y = reconstruct_two_channel(p, run.f, run.df, cfg.M, x);
    const double dy = reconstruct_two_channel_deriv(p, run.f, run.df, cfg.M, x);
    dev = std::max(dev, std::abs(y - g.eval(x)));
    dev_prime = std::max(dev_prime, std::abs(dy - g.eval_deriv(x)));
    t.add_row({x, g.eval(x), y, g.eval_deriv(x), dy});
  }
  t.summary.emplace_back("max_abs_deviation", dev);
  if (two)
    t.summary.emplace_back("max_abs_deviation_prime", dev_prime);
  add_recovery_summary(t, run, u.size());
  return t;
}

Table cmd_spectrum(const ExperimentConfig& cfg) {
  Table t;
  t.columns = {"r", "N", "m", "min_re", "max_re", "max_abs_imag", "outside_unit_interval",
               "outside_beyond_roundoff"};
  const MissingSet u = missing_set(cfg);
  const Cell m_cell = cfg.m ? Cell(static_cast<long>(*cfg.m)) : Cell();
  double worst_imag = 0.0;
  long outside = 0, outside_slack = 0;
  for (double r : cfg.r) {
    SpectrumReport rep;
    if (cfg.channels == Channels::One)
      rep = eig_symmetric(build_R(OneChannelParams::from_ratio(cfg.omega, r), u));
    else
      rep = spectrum_of_S(cfg, r, u);
    const long out = count_outside_unit(rep, 0.0);
    const long out_slack = count_outside_unit(rep, kSpectrumSlack);
    worst_imag = std::max(worst_imag, rep.max_imag_abs);
    outside += out;
    outside_slack += out_slack;
    t.add_row({r, static_cast<long>(u.size()), m_cell, rep.min_real(), rep.max_real(),
               rep.max_imag_abs, out, out_slack});
  }
  t.summary.emplace_back("max_abs_imag", worst_imag);
  t.summary.emplace_back("outside_unit_interval", outside);
  t.summary.emplace_back("outside_beyond_roundoff", outside_slack);
  return t;
}

Table run_command(const ExperimentConfig& cfg) {
  switch (cfg.command) {
  case Command::BoundsTable:
    return cmd_bounds_table(cfg);
  case Command::CondTable:
    return cmd_cond_table(cfg);
  case Command::EigVsN:
    return cmd_eig_vs_n(cfg);
  case Command::EigVsR:
    return cmd_eig_vs_r(cfg);
  case Command::EigVsM:
    return cmd_eig_vs_m(cfg);
  case Command::Recover:
    return cmd_recover(cfg);
  case Command::Reconstruct:
    return cmd_reconstruct(cfg);
  case Command::Spectrum:
    return cmd_spectrum(cfg);
  }
  throw InvalidArgument("unknown command");
}

void run_and_write(const ExperimentConfig& cfg, std::ostream& os) {
  const Table t = run_command(cfg);
  if (cfg.format == Format::Csv)
    write_csv(os, t, canonical_string(cfg));
  else
    os << table_to_json(t, config_to_json(cfg)).dump(2) << '\n';
}

} // namespace dersamp::cli
