// pertlab: rate synthesis and inequality checks for perturbed jump forms.
//
// Exit codes: 0 success, 2 hypothesis failure, 3 precision failure,
// 4 configuration or I/O error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pertlab/curve.hpp"
#include "pertlab/errors.hpp"
#include "pertlab/lab.hpp"
#include "pertlab/scenario.hpp"

using namespace pertlab;

namespace {

constexpr int kOk = 0, kHypothesis = 2, kPrecision = 3, kConfig = 4;

struct Options {
  std::string scenario;
  std::string theorem;
  std::string r_grid;
  std::optional<long long> seed;
  std::string out;
  std::string format = "csv";
  std::optional<long long> max_samples;
  std::optional<double> tolerance;
  std::vector<std::string> positional;
};

ConfigValue value_of(const std::string& key, const std::string& text) {
  return ConfigDocument::parse(key + " = " + text, "command line").at(key);
}

ConfigDocument overrides(const Options& o) {
  ConfigDocument d;
  if (!o.theorem.empty()) d.set("theorem", value_of("theorem", "\"" + o.theorem + "\""));
  if (o.seed) d.set("seed", value_of("seed", std::to_string(*o.seed)));
  if (!o.r_grid.empty()) {
    std::string list = "[";
    for (double r : parse_r_grid(o.r_grid)) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", r);
      list += (list.size() > 1 ? ", " : "") + std::string(buf);
    }
    d.set("grid.r", value_of("grid.r", list + "]"));
  }
  if (o.max_samples) {
    d.set("region.max_samples", value_of("region.max_samples", std::to_string(*o.max_samples)));
    d.set("quad.max_samples", value_of("quad.max_samples", std::to_string(*o.max_samples)));
  }
  if (o.tolerance) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *o.tolerance);
    d.set("test.tolerance", value_of("test.tolerance", buf));
  }
  return d;
}

Scenario scenario_of(const Options& o) {
  std::string name = o.scenario;
  if (name.empty() && !o.positional.empty()) name = o.positional.front();
  if (name.empty()) throw ConfigError("--scenario is required");
  return open_scenario(name, overrides(o));
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text(o.out, text);
  }
}

std::string g17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string json_str(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

// Generic table writer for the non-curve outputs.
std::string table(const Options& o, const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  if (o.format == "json") {
    out = "[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out += std::string(i ? "," : "") + "\n  {";
      for (std::size_t j = 0; j < header.size(); ++j) {
        const std::string& v = rows[i][j];
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        const bool number = !v.empty() && *end == '\0' && std::isfinite(x);
        out += (j ? ", " : "") + json_str(header[j]) + ": " + (number ? v : json_str(v));
      }
      out += "}";
    }
    return out + (rows.empty() ? "]\n" : "\n]\n");
  }
  for (std::size_t j = 0; j < header.size(); ++j) out += (j ? "," : "") + header[j];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + row[j];
    out += "\n";
  }
  return out;
}

int cmd_lambda(const Options& o) {
  const Scenario s = scenario_of(o);
  const Context c = s.context();
  std::vector<std::string> header = {"scenario", "lambda", "closed_form"};
  double closed = std::nan("");
  if (c.kernel.kind() == KernelKind::stable_like && c.kernel.dim() == 1) {
    const double a = c.kernel.alpha();
    closed = std::exp(c.kernel.log_scale()) * (2.0 / (2.0 - a) + 2.0 / a);
  }
  emit(o, table(o, header, {{s.name, g17(c.lambda), g17(closed)}}));
  return kOk;
}

int cmd_quantities(const Options& o) {
  const Scenario s = scenario_of(o);
  const Context c = s.context();
  const Variant v = s.theorem == Theorem::weak ? Variant::weak : Variant::super;
  const auto rows = growth_table(c, s.growth_n, s.growth_k, v);
  std::vector<std::vector<std::string>> out;
  for (const GrowthRow& r : rows)
    out.push_back({g17(r.n), g17(r.k), g17(r.K), g17(r.J), g17(r.Z), g17(r.Kt), g17(r.Zt),
                   format_log_value(r.eps.value.log()), format_log_value(r.zeta.value.log()),
                   r.eps.tail_checked && r.zeta.tail_checked ? "true" : "false", g17(r.gamma.value),
                   g17(r.gamma.rel_se()), g17(r.eta.value), g17(r.eta.rel_se()), g17(r.tilde_gamma.value),
                   g17(r.tilde_eta.value)});
  emit(o, table(o,
                {"n", "k", "K", "J", "Z", "Kt", "Zt", "eps", "zeta", "tail_checked", "gamma", "gamma_rel_se", "eta",
                 "eta_rel_se", "tilde_gamma", "tilde_eta"},
                out));
  return kOk;
}

int emit_curve(const Options& o, const RateCurve& curve) {
  if (o.format == "json") emit(o, curve_json(curve));
  else emit(o, curve_csv(curve));
  if (!curve.condition.empty()) std::cerr << "condition: " << curve.condition << "\n";
  for (const RatePoint& p : curve.points)
    if (!p.note.empty()) std::cerr << "r=" << g17(p.r) << ": " << p.note << "\n";
  return kOk;
}

int cmd_defective(const Options& o, const Scenario& s, const Context& c) {
  const auto d = run_defective(s, c);
  if (!d) throw HypothesisError("no admissible n: the defective constants are not finite on this scenario");
  emit(o, table(o, {"C1", "C2", "witness_n", "witness_k", "witness_j", "witness_s", "witness_rprime", "note"},
                {{g17(d->C1), format_log_value(d->C2.log()), g17(d->witness.n), g17(d->witness.k),
                  g17(d->witness.j), std::isnan(d->witness.log_s) ? g17(d->witness.s) : format_log_value(d->witness.log_s),
                  g17(d->witness.rprime), d->note}}));
  return kOk;
}

int cmd_disproof(const Options& o, const Scenario& s, const Context& c) {
  check_hypotheses(s, c, Theorem::disproof);
  const auto saw = *c.V.sawtooth_params();
  const SweepResult sw = poincare_disproof_sweep(c, saw[0], saw[1], saw[2], s.sweep_n);
  std::vector<std::vector<std::string>> rows;
  for (const SweepPoint& p : sw.points)
    rows.push_back({g17(p.n), g17(p.log_rayleigh), g17(p.log_energy), g17(p.log_var)});
  emit(o, table(o, {"n", "log_rayleigh", "log_energy", "log_var"}, rows));
  std::cerr << "strictly_decreasing=" << (sw.strictly_decreasing ? "true" : "false") << " slope=" << g17(sw.slope)
            << "\n";
  return kOk;
}

int cmd_rate(const Options& o) {
  const Scenario s = scenario_of(o);
  const Context c = s.context();
  if (s.theorem == Theorem::defective) return cmd_defective(o, s, c);
  if (s.theorem == Theorem::disproof) return cmd_disproof(o, s, c);
  return emit_curve(o, run_rate(s, c, s.theorem));
}

int cmd_test(const Options& o) {
  const Scenario s = scenario_of(o);
  const Context c = s.context();
  if (s.theorem == Theorem::defective || s.theorem == Theorem::disproof)
    throw ConfigError("test checks rate curves; use --theorem super-finite, super-infinite, variation or weak");
  const RateCurve curve = run_rate(s, c, s.theorem);
  const bool weak = s.theorem == Theorem::weak;
  std::vector<std::vector<std::string>> rows;
  bool failed = false, unsure = false;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const RatePoint& p = curve.points[i];
    for (double n : s.test_n) {
      FamilySpec spec;
      spec.kind = s.test_family;
      spec.n = n;
      const TestFunction f = make_family(spec);
      const ResidualReport rep = weak ? weak_residual(c, f, p.r, curve.monotone[i], s.tolerance)
                                      : super_residual(c, f, p.r, curve.monotone[i], s.tolerance);
      failed |= rep.verdict == "fail";
      unsure |= rep.verdict == "indeterminate";
      rows.push_back({rep.inequality, g17(p.r), format_log_value(rep.rate_value.log()), family_name(s.test_family),
                      g17(n), g17(rep.lhs), g17(rep.rhs), g17(rep.residual), g17(rep.error_bar), rep.verdict,
                      rep.note});
    }
  }
  emit(o, table(o, {"inequality", "r", "rate", "family", "n", "lhs", "rhs", "residual", "error_bar", "verdict", "note"},
                rows));
  if (failed) return kHypothesis;
  if (unsure) return kPrecision;
  return kOk;
}

int cmd_falsify(const Options& o) {
  const Scenario s = scenario_of(o);
  const Context c = s.context();
  if (c.V.sawtooth_params()) return cmd_disproof(o, s, c);
  // Otherwise probe the synthesized curve itself as a candidate rate.
  const Theorem t = s.theorem == Theorem::disproof || s.theorem == Theorem::defective ? Theorem::super_finite
                                                                                       : s.theorem;
  const RateCurve curve = run_rate(s, c, t);
  std::vector<double> r, b;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const double v = curve.monotone[i].value();
    if (!std::isfinite(v)) continue;
    r.push_back(curve.points[i].r);
    b.push_back(v);
  }
  if (r.empty()) throw HypothesisError("the synthesized curve has no finite point to probe");
  const RateFunction candidate = RateFunction::table(r, b, true);
  std::vector<FamilySpec> family;
  for (double n : s.test_n) {
    FamilySpec spec;
    spec.kind = s.test_family;
    spec.n = n;
    family.push_back(spec);
  }
  const ProbeResult pr =
      sharpness_probe(c, candidate, family, t == Theorem::weak ? ProbeMode::weak : ProbeMode::super, r, s.tolerance);
  std::vector<std::vector<std::string>> rows;
  for (const ResidualReport& rep : pr.worst)
    rows.push_back({rep.inequality, g17(rep.r), format_log_value(rep.rate_value.log()), g17(rep.residual),
                    rep.verdict});
  emit(o, table(o, {"inequality", "r", "rate", "residual", "verdict"}, rows));
  std::cerr << "probe: " << pr.verdict;
  if (pr.n) std::cerr << " at n=" << g17(*pr.n) << " r=" << g17(pr.r);
  std::cerr << "\n";
  return kOk;
}

int cmd_fit(const Options& o) {
  if (o.positional.size() != 2) throw ConfigError("usage: pertlab fit CURVE_FILE TRANSFORM");
  const RateCurve curve = load_curve(o.positional[0]);
  const FitTransform t = fit_transform(o.positional[1]);
  const FitResult f = fit_exponent(curve, t);
  emit(o, table(o, {"transform", "slope", "intercept", "r2", "points"},
                {{fit_transform_name(t), g17(f.slope), g17(f.intercept), g17(f.r2), std::to_string(f.points)}}));
  return kOk;
}

int cmd_scenario_list(const Options& o) {
  std::vector<std::vector<std::string>> rows;
  for (const std::string& name : builtin_names()) {
    const Scenario s = open_scenario(name);
    rows.push_back({name, theorem_name(s.theorem), s.description});
  }
  if (o.format == "json") {
    emit(o, table(o, {"name", "theorem", "description"}, rows));
  } else {
    std::string out;
    for (const auto& r : rows) out += r[0] + "\t" + r[1] + "\t" + r[2] + "\n";
    emit(o, out);
  }
  return kOk;
}

int run(const std::function<int()>& body) {
  try {
    return body();
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis failure: " << e.what() << "\n";
    return kHypothesis;
  } catch (const InfiniteLambdaError& e) {
    std::cerr << "hypothesis failure: " << e.what() << "\n";
    return kHypothesis;
  } catch (const NonNormalizableError& e) {
    std::cerr << "hypothesis failure: " << e.what() << "\n";
    return kHypothesis;
  } catch (const DivergenceError& e) {
    std::cerr << "hypothesis failure: " << e.what() << "\n";
    return kHypothesis;
  } catch (const InsufficientDataError& e) {
    std::cerr << "insufficient data: " << e.what() << "\n";
    return kHypothesis;
  } catch (const PrecisionError& e) {
    std::cerr << "precision failure: " << e.what() << " (estimate " << e.estimate << ", rel se " << e.stderr_rel
              << ")\n";
    return kPrecision;
  } catch (const UndefinedRatioError& e) {
    std::cerr << "precision failure: " << e.what() << "\n";
    return kPrecision;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate synthesis and inequality checks for perturbed nonlocal Dirichlet forms"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool with_scenario) {
    if (with_scenario) {
      sub->add_option("--scenario", o.scenario, "built-in name or path to a config document");
      sub->add_option("--theorem", o.theorem, "super-finite | super-infinite | variation | weak | defective | disproof");
      sub->add_option("--r-grid", o.r_grid, "lo:hi:points (log-spaced) or a comma-separated list");
      sub->add_option("--seed", o.seed, "Monte Carlo seed");
      sub->add_option("--max-samples", o.max_samples, "Monte Carlo budget per integral");
      sub->add_option("--tolerance", o.tolerance, "absolute residual tolerance");
    }
    sub->add_option("--out", o.out, "output path (default stdout)");
    sub->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* lambda = app.add_subcommand("lambda", "lambda bound of the scenario kernel");
  auto* quantities = app.add_subcommand("quantities", "growth quantities on grid.n x grid.k");
  auto* rate = app.add_subcommand("rate", "synthesize the perturbed rate over the r-grid");
  auto* test = app.add_subcommand("test", "residuals of the synthesized inequality on the test family");
  auto* falsify = app.add_subcommand("falsify", "disproof sweep or sharpness probe");
  auto* fit = app.add_subcommand("fit", "fit an exponent to a curve file");
  auto* scenario = app.add_subcommand("scenario", "built-in scenarios");
  scenario->require_subcommand(1);
  auto* list = scenario->add_subcommand("list", "list built-in scenarios");
  auto* srun = scenario->add_subcommand("run", "run a scenario with its default theorem");

  for (CLI::App* sub : {lambda, quantities, rate, test, falsify, srun}) {
    common(sub, true);
    sub->add_option("name", o.positional, "scenario (alternative to --scenario)");
  }
  common(fit, false);
  fit->add_option("args", o.positional, "CURVE_FILE TRANSFORM (log-log | loglog-log | loglog-loglog)");
  common(list, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  if (*lambda) return run([&] { return cmd_lambda(o); });
  if (*quantities) return run([&] { return cmd_quantities(o); });
  if (*rate) return run([&] { return cmd_rate(o); });
  if (*test) return run([&] { return cmd_test(o); });
  if (*falsify) return run([&] { return cmd_falsify(o); });
  if (*fit) return run([&] { return cmd_fit(o); });
  if (*list) return run([&] { return cmd_scenario_list(o); });
  if (*srun) return run([&] { return cmd_rate(o); });
  return kConfig;
}
