#include "qmp/cli.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmp/bai_bound.hpp"
#include "qmp/errors.hpp"
#include "qmp/experiments.hpp"
#include "qmp/fixed_point.hpp"
#include "qmp/mp_law.hpp"
#include "qmp/sampling.hpp"

#ifndef QMP_VERSION
#define QMP_VERSION "0.1.0"
#endif

namespace qmp {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Shortest round-trip decimal, independent of the global locale.
std::string num(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <class Int>
std::string num_int(Int x) {
  return std::to_string(x);
}

class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      if (!first) text_ += ',';
      text_ += h;
      first = false;
    }
    text_ += '\n';
  }

  void row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
      if (!first) text_ += ',';
      text_ += c;
      first = false;
    }
    text_ += '\n';
  }

  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
};

class PhaseTimer {
 public:
  template <class Fn>
  auto run(const std::string& phase, Fn&& fn) {
    const auto t0 = Clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record(phase, t0);
    } else {
      auto result = fn();
      record(phase, t0);
      return result;
    }
  }

  const json& timings() const noexcept { return timings_; }

 private:
  void record(const std::string& phase, Clock::time_point t0) {
    timings_[phase] = std::chrono::duration<double>(Clock::now() - t0).count();
  }

  json timings_ = json::object();
};

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw ConfigError("failed writing '" + path + "'");
}

std::string summary_path(const std::string& explicit_path, const std::string& csv_path) {
  if (!explicit_path.empty()) return explicit_path;
  if (csv_path.empty() || csv_path == "-") return {};
  return csv_path + ".json";
}

void emit(const std::string& csv_path, const std::string& summary_arg, const std::string& command,
          const json& config, const json& results, PhaseTimer& timer, const std::string& csv,
          std::ostream& out) {
  timer.run("write", [&] { write_text(csv_path, csv, out); });
  const auto spath = summary_path(summary_arg, csv_path);
  if (spath.empty()) return;
  json s;
  s["command"] = command;
  s["version"] = version_string();
  s["config"] = config;
  s["results"] = results;
  s["wall_clock_seconds"] = timer.timings();
  write_text(spath, s.dump(2) + "\n", out);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config '" + path + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return ExperimentConfig::from_json(j);
}

double parse_v(const std::string& text, std::size_t n) {
  if (text == "auto") return default_bound_v(n);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !(v > 0.0))
    throw ConfigError("--v must be a positive number or 'auto'");
  return v;
}

struct CommonOptions {
  std::string out;
  std::string summary;
  unsigned threads = 0;
};

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--out", o.out, "CSV output path (default: stdout)");
  sub->add_option("--summary", o.summary, "JSON summary path (default: <out>.json)");
}

unsigned resolve_threads(unsigned requested, unsigned from_config) {
  if (requested > 0) return requested;
  if (from_config > 1) return from_config;
  return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace

const char* version_string() noexcept { return QMP_VERSION; }

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quaternion sample-covariance spectral experiments", "qmp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version_string()));

  CommonOptions common;
  std::string config_path;

  auto* rate = app.add_subcommand("rate-sweep", "Kolmogorov distance to the Marchenko-Pastur law over an n grid");
  rate->add_option("--config", config_path, "JSON config")->required();
  rate->add_option("--threads", common.threads, "replication workers");
  add_common(rate, common);

  double var_u = 0.0, var_v = 1.0;
  auto* var = app.add_subcommand("variance", "Variance of s_p(z) across replications");
  var->add_option("--config", config_path, "JSON config")->required();
  var->add_option("--u", var_u, "Re z");
  var->add_option("--v", var_v, "Im z (> 0)");
  var->add_option("--threads", common.threads, "replication workers");
  add_common(var, common);

  double margin = 0.3;
  auto* lmax = app.add_subcommand("lambda-max", "Largest eigenvalue against the right edge");
  lmax->add_option("--config", config_path, "JSON config")->required();
  lmax->add_option("--margin", margin, "allowed excess over (1+sqrt(y))^2");
  lmax->add_option("--threads", common.threads, "replication workers");
  add_common(lmax, common);

  std::size_t refl_p = 6, refl_n = 3, draws = 1;
  std::uint64_t seed = 0;
  std::string dist_name = "q_gaussian";
  auto* refl = app.add_subcommand("reflection", "Nonzero spectra of XX^*/n and X^*X/n for p > n");
  refl->add_option("--p", refl_p, "quaternion rows")->required();
  refl->add_option("--n", refl_n, "quaternion columns")->required();
  refl->add_option("--seed", seed, "master seed");
  refl->add_option("--draws", draws, "independent draws");
  refl->add_option("--dist", dist_name, "entry distribution");
  add_common(refl, common);

  double bai_y = 0.25;
  std::size_t bai_n = 400;
  std::string bai_v = "auto";
  auto* bai = app.add_subcommand("bai-bound", "Smoothing-inequality bound for one replication");
  bai->add_option("--y", bai_y, "target p/n")->required();
  bai->add_option("--n", bai_n, "sample size")->required();
  bai->add_option("--seed", seed, "seed");
  bai->add_option("--v", bai_v, "imaginary offset or 'auto' (n^{-2/5})");
  bai->add_option("--dist", dist_name, "entry distribution");
  add_common(bai, common);

  double mp_y = 0.25;
  std::vector<double> mp_x;
  double mp_v = 0.0;
  auto* mp = app.add_subcommand("mp-eval", "Marchenko-Pastur density, cdf and Stieltjes transform");
  mp->add_option("--y", mp_y, "ratio y")->required();
  mp->add_option("--x", mp_x, "evaluation points")->required();
  mp->add_option("--v", mp_v, "if > 0, also evaluate s(x + iv)");
  add_common(mp, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    PhaseTimer timer;
    if (rate->parsed()) {
      auto cfg = load_config(config_path);
      cfg.threads = resolve_threads(common.threads, cfg.threads);
      const std::string csv_path = common.out.empty() ? cfg.output_path : common.out;
      const auto report = timer.run("simulate", [&] { return rate_sweep(cfg); });
      Csv csv{"n", "p", "y_p", "a_n", "mean_ks", "ks_std", "pooled_ks", "bound_thm1", "bound_thm2"};
      for (const auto& r : report.rows)
        csv.row({num_int(r.n), num_int(r.p), num(r.y_p), num(r.a_n), num(r.mean_ks), num(r.ks_std),
                 num(r.pooled_ks), num(r.bound_thm1), num(r.bound_thm2)});
      for (std::size_t n : report.pooled_ordering_violations)
        err << "warning: pooled_ks exceeds mean_ks + 2/sqrt(2pR) at n=" << n << "\n";
      json res;
      res["slope_mean_ks"] = report.slope_mean_ks;
      res["slope_pooled_ks"] = report.slope_pooled_ks;
      res["pooled_ordering_violations"] = report.pooled_ordering_violations;
      emit(csv_path, common.summary, "rate-sweep", cfg.to_json(), res, timer, csv.text(), out);
    } else if (var->parsed()) {
      auto cfg = load_config(config_path);
      cfg.threads = resolve_threads(common.threads, cfg.threads);
      const std::string csv_path = common.out.empty() ? cfg.output_path : common.out;
      const UpperHalfPoint z(var_u, var_v);
      const auto report = timer.run("simulate", [&] { return variance_scaling(cfg, z); });
      Csv csv{"n", "p", "u", "v", "mean_re", "mean_im", "var_re", "var_im", "low_confidence",
              "delta_re", "delta_im", "abs_b_n", "leb_condition", "leb_bound_holds"};
      for (const auto& r : report.rows) {
        const double y_p = static_cast<double>(r.p) / static_cast<double>(r.n);
        const auto d = diagnostics(r.mean, z, y_p);
        csv.row({num_int(r.n), num_int(r.p), num(z.u()), num(z.v()), num(r.mean.real()),
                 num(r.mean.imag()), num(r.var_re), num(r.var_im), r.low_confidence ? "1" : "0",
                 num(d.delta_n.real()), num(d.delta_n.imag()), num(std::abs(d.b_n)),
                 d.leb_condition ? "1" : "0", d.leb_bound_holds ? "1" : "0"});
      }
      json res;
      res["slope_var_re"] = report.slope_re;
      res["slope_var_im"] = report.slope_im;
      json conf = cfg.to_json();
      conf["z"] = {z.u(), z.v()};
      emit(csv_path, common.summary, "variance", conf, res, timer, csv.text(), out);
    } else if (lmax->parsed()) {
      auto cfg = load_config(config_path);
      cfg.threads = resolve_threads(common.threads, cfg.threads);
      const std::string csv_path = common.out.empty() ? cfg.output_path : common.out;
      const auto rows = timer.run("simulate", [&] { return lambda_max_check(cfg, margin); });
      Csv csv{"n", "p", "y_p", "max_lambda", "threshold", "exceedances", "replications"};
      std::size_t total = 0;
      for (const auto& r : rows) {
        csv.row({num_int(r.n), num_int(r.p), num(r.y_p), num(r.max_lambda), num(r.threshold),
                 num_int(r.exceedances), num_int(r.lambda_max.size())});
        total += r.exceedances;
      }
      json res;
      res["total_exceedances"] = total;
      json conf = cfg.to_json();
      conf["margin"] = margin;
      emit(csv_path, common.summary, "lambda-max", conf, res, timer, csv.text(), out);
    } else if (refl->parsed()) {
      const auto dist = EntryDistribution::of(parse_entry_kind(dist_name));
      if (!(refl_p > refl_n) || refl_n == 0) throw ConfigError("reflection requires p > n >= 1");
      if (draws == 0) throw ConfigError("--draws must be >= 1");
      Csv csv{"draw", "p", "n", "seed", "identity_deviation", "nonzero_deviation", "zero_count",
              "expected_zero_count"};
      timer.run("simulate", [&] {
        for (std::size_t d = 0; d < draws; ++d) {
          const auto s = stream_seed(seed, {refl_p, refl_n, d});
          const auto r = reflection_check(sample_matrix(refl_p, refl_n, dist, s));
          csv.row({num_int(d), num_int(r.p), num_int(r.n), num_int(s), num(r.identity_deviation),
                   num(r.nonzero_deviation), num_int(r.zero_count), num_int(r.expected_zero_count)});
        }
      });
      json conf{{"p", refl_p}, {"n", refl_n}, {"seed", seed}, {"draws", draws}, {"distribution", dist_name}};
      emit(common.out, common.summary, "reflection", conf, json::object(), timer, csv.text(), out);
    } else if (bai->parsed()) {
      const auto dist = EntryDistribution::of(parse_entry_kind(dist_name));
      ExperimentConfig cfg;
      cfg.y_target = bai_y;
      cfg.n_grid = {bai_n};
      cfg.validate();
      const std::size_t p = cfg.p_for(bai_n);
      const double y_p = static_cast<double>(p) / static_cast<double>(bai_n);
      const double v = parse_v(bai_v, bai_n);
      const MPLaw law(y_p);
      const auto report = timer.run("evaluate", [&] {
        const auto spec = replicate_spectrum(p, bai_n, dist, seed);
        return bai_rhs(esd(spec), law, v, make_constants(law.upper_edge()));
      });
      Csv csv{"n", "p", "y_p", "v", "term_stieltjes", "term_tail", "term_smoothing", "prefactor",
              "total", "observed_ks", "holds"};
      csv.row({num_int(bai_n), num_int(p), num(y_p), num(v), num(report.term_stieltjes),
               num(report.term_tail), num(report.term_smoothing), num(report.prefactor),
               num(report.total), num(report.observed_ks), report.holds() ? "1" : "0"});
      json conf{{"y", bai_y}, {"n", bai_n}, {"seed", seed}, {"v", v}, {"distribution", dist_name}};
      json res{{"smoothing_grid", report.smoothing_grid},
               {"smoothing_closed_form", std::isnan(report.smoothing_closed_form)
                                             ? json(nullptr)
                                             : json(report.smoothing_closed_form)}};
      emit(common.out, common.summary, "bai-bound", conf, res, timer, csv.text(), out);
    } else if (mp->parsed()) {
      const MPLaw law(mp_y);
      const bool with_s = mp_v > 0.0;
      Csv csv = with_s ? Csv{"y", "x", "density", "cdf", "v", "stieltjes_re", "stieltjes_im"}
                       : Csv{"y", "x", "density", "cdf"};
      timer.run("evaluate", [&] {
        for (double x : mp_x) {
          if (with_s) {
            const Complex s = stieltjes(law, UpperHalfPoint(x, mp_v));
            csv.row({num(mp_y), num(x), num(density(law, x)), num(cdf(law, x)), num(mp_v),
                     num(s.real()), num(s.imag())});
          } else {
            csv.row({num(mp_y), num(x), num(density(law, x)), num(cdf(law, x))});
          }
        }
      });
      json conf{{"y", mp_y}, {"x", mp_x}, {"v", mp_v}};
      emit(common.out, common.summary, "mp-eval", conf, json::object(), timer, csv.text(), out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace qmp
