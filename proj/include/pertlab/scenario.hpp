#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pertlab/config.hpp"
#include "pertlab/families.hpp"
#include "pertlab/growth.hpp"
#include "pertlab/synth.hpp"

namespace pertlab {

enum class Theorem { super_finite, super_infinite, variation, weak, defective, disproof };

Theorem theorem_from(const std::string& name);
std::string theorem_name(Theorem t);

/// Schema entry for one configuration key.
struct KeySpec {
  std::string key;
  ValueType type;
  /// Default value text; empty when the key is required or has a computed default.
  std::string fallback;
  /// Selector key and the comma-separated selector values the key applies to;
  /// empty when it always applies.
  std::string selector, kinds;
  std::string help;
};

const std::vector<KeySpec>& config_schema();

struct Scenario {
  std::string name, description;
  /// Fully resolved document (base merged, defaults filled in).
  ConfigDocument doc;
  Theorem theorem = Theorem::super_finite;
  std::uint64_t seed = 0;
  std::vector<double> r_grid;
  std::vector<double> growth_n, growth_k;
  SequencePlan plan;
  SuperFiniteSettings finite;
  WeakSettings weak;
  std::optional<double> kappa1;
  long variation_samples = 0;
  RegionSettings region;
  QuadratureSettings quad;
  FamilyKind test_family = FamilyKind::ramp;
  std::vector<double> test_n;
  double tolerance = 1e-9;
  std::vector<double> sweep_n;

  /// fnv1a of the canonical document.
  std::uint64_t hash() const;
  /// Builds model, kernel, potential and rate and computes lambda.
  Context context(Exec exec = Exec::parallel) const;
};

std::vector<std::string> builtin_names();
/// The configuration text of a built-in; ConfigError for unknown names.
const std::string& builtin_document(const std::string& name);

/// Keys of `over` replace those of `base`. Changing a selector such as
/// potential.kind drops the parameters of the old selection, and either
/// form of the r-grid replaces the other.
ConfigDocument merge_documents(const ConfigDocument& base, const ConfigDocument& over);

/// Validates against the schema. A `base` key pulls in a built-in first.
Scenario load_scenario(const ConfigDocument& doc);
Scenario load_scenario(const std::string& text, const std::string& source = "<config>");
/// A built-in name or a path to a document, with overrides applied last.
Scenario open_scenario(const std::string& name_or_path, const ConfigDocument& overrides = {});

/// Log-spaced grid from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int points);
/// "lo:hi:points" (log-spaced) or a comma-separated list.
std::vector<double> parse_r_grid(const std::string& text);

struct RateCurve {
  std::string scenario, theorem;
  std::uint64_t scenario_hash = 0;
  std::uint64_t seed = 0;
  std::vector<RatePoint> points;
  std::vector<LogReal> monotone;
  /// Hypothesis summary from the synthesizer (condition (A) for super-infinite).
  std::string condition;
};

/// Throws HypothesisError naming the missing hypothesis when the theorem does
/// not apply to the scenario.
void check_hypotheses(const Scenario& s, const Context& c, Theorem t);

/// Curve over the scenario r-grid; deterministic given the seed.
RateCurve run_rate(const Scenario& s, Theorem t, Exec exec = Exec::parallel);
RateCurve run_rate(const Scenario& s, const Context& c, Theorem t, Exec exec = Exec::parallel);

/// Defective constants for finite (first admissible n) or infinite range.
std::optional<DefectiveConstants> run_defective(const Scenario& s, const Context& c, Exec exec = Exec::parallel);

}  // namespace pertlab
