#include "pertlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "pertlab/errors.hpp"
#include "pertlab/rng.hpp"

namespace pertlab {

namespace {

const std::map<std::string, std::string>& builtins() {
  static const std::map<std::string, std::string> docs = {
      {"toy_dyadic", R"(name = "toy_dyadic"
description = "abstract model with mu(rho > t) = 2^-t, lambda = 1, unit range, beta(r) = 1/r"
theorem = "super-finite"
model.profile = "dyadic"
model.base = 2.0
kernel.kind = "abstract"
kernel.lambda = 1.0
kernel.range = 1.0
potential.kind = "zero"
rate.form = "power"
rate.c = 1.0
rate.p = 1.0
grid.r = [1]
finite.n_max = 20
)"},
      {"ex2_3", R"(name = "ex2_3"
description = "log-stable reference, eps log log(e + |x|) perturbation, infinite range"
theorem = "super-infinite"
model.profile = "log_stable"
model.alpha = 1.0
kernel.kind = "stable_like"
kernel.alpha = 1.0
potential.kind = "loglog"
potential.eps = 0.5
rate.form = "exp_power"
rate.c = 1.0
rate.p = 1.0
grid.r_min = 1e-3
grid.r_max = 1e-1
grid.r_points = 9
plan.delta = 2.0
plan.b = 4.0
)"},
      {"ex2_4", R"(name = "ex2_4"
description = "exp(-|x|^kappa) reference, truncated alpha-stable jumps, |x|^(theta-1) perturbation"
theorem = "super-finite"
model.profile = "stretched_exp"
model.kappa = 2.0
kernel.kind = "truncated"
kernel.alpha = 0.5
kernel.range = 1.0
potential.kind = "power"
potential.c = 1.0
potential.p = 0.5
rate.form = "exp_log_power"
rate.c = 1.0
rate.p = 2.0
grid.r_min = 1e-300
grid.r_max = 1e-20
grid.r_points = 15
finite.n_max = 1024
)"},
      {"prop2_5", R"(name = "prop2_5"
description = "sawtooth perturbation of the exp(-|x|^2) reference that destroys the spectral gap"
theorem = "disproof"
model.profile = "stretched_exp"
model.kappa = 2.0
kernel.kind = "truncated"
kernel.alpha = 0.5
kernel.range = 1.0
potential.kind = "sawtooth"
potential.H = 5.0
potential.kappa = 2.0
potential.L = 20.0
rate.form = "exp_log_power"
rate.c = 1.0
rate.p = 2.0
grid.r = [1e-2, 1e-1, 1]
sweep.n = [2, 3, 4, 5, 6, 7, 8]
)"},
      {"ex3_2", R"(name = "ex3_2"
description = "alpha-stable reference and kernel, eps log(1 + |x|) perturbation, weak inequality"
theorem = "weak"
model.profile = "stable"
model.alpha = 1.0
kernel.kind = "stable_like"
kernel.alpha = 1.0
potential.kind = "log1p"
potential.eps = 0.5
rate.form = "constant"
rate.c = 1.0
grid.r_min = 3e-4
grid.r_max = 1e-1
grid.r_points = 11
)"},
      {"lipschitz_var", R"(name = "lipschitz_var"
description = "bounded-variation cosine perturbation of the alpha-stable reference"
theorem = "variation"
model.profile = "stable"
model.alpha = 1.0
kernel.kind = "stable_like"
kernel.alpha = 1.0
potential.kind = "cosine"
potential.a = 0.5
potential.omega = 1.0
potential.h = 0.05
rate.form = "power"
rate.c = 1.0
rate.p = 1.0
grid.r = [1, 2, 4]
)"},
  };
  return docs;
}

using VT = ValueType;

std::vector<KeySpec> make_schema() {
  return {
      {"name", VT::string, "", "", "", "scenario name (required)"},
      {"description", VT::string, "\"\"", "", "", "free text"},
      {"theorem", VT::string, "", "", "",
       "default theorem: super-finite | super-infinite | variation | weak | defective | disproof (required)"},
      {"seed", VT::integer, "20240607", "", "", "seed for every Monte Carlo stream"},
      {"model.profile", VT::string, "", "", "", "stable | log_stable | stretched_exp | uniform | dyadic (required)"},
      {"model.dim", VT::integer, "1", "model.profile", "stable,log_stable,stretched_exp,uniform", "dimension m"},
      {"model.alpha", VT::real, "", "model.profile", "stable,log_stable", "index in (0,2) (required)"},
      {"model.kappa", VT::real, "", "model.profile", "stretched_exp", "density exp(-|x|^kappa), kappa > 0 (required)"},
      {"model.radius", VT::real, "", "model.profile", "uniform", "support radius (required)"},
      {"model.base", VT::real, "2.0", "model.profile", "dyadic", "abstract tail mu(rho > t) = base^-t"},
      {"kernel.kind", VT::string, "", "", "", "stable_like | truncated | abstract (required)"},
      {"kernel.alpha", VT::real, "", "kernel.kind", "stable_like,truncated", "index in (0,2) (required)"},
      {"kernel.log_scale", VT::real, "", "kernel.kind", "stable_like,truncated",
       "log of the jump density prefactor; defaults to the model's log normalizing constant"},
      {"kernel.range", VT::real, "", "kernel.kind", "truncated,abstract",
       "finite jump range (required for truncated, optional for abstract)"},
      {"kernel.lambda", VT::real, "", "kernel.kind", "abstract", "declared lambda (required)"},
      {"potential.kind", VT::string, "\"zero\"", "", "",
       "zero | constant | loglog | log1p | power | loglog_psi | log1p_phi | cosine | sawtooth"},
      {"potential.normalize", VT::boolean, "true", "", "", "shift by K0 so that mu(e^V) = 1"},
      {"potential.c", VT::real, "", "potential.kind", "constant,power", "constant or prefactor (required)"},
      {"potential.eps", VT::real, "", "potential.kind", "loglog,log1p,loglog_psi,log1p_phi",
       "perturbation strength, >= 0 (required)"},
      {"potential.p", VT::real, "", "potential.kind", "power", "exponent, > 0 (required)"},
      {"potential.phi_scale", VT::real, "", "potential.kind", "loglog_psi,log1p_phi", "phi scale, > 0 (required)"},
      {"potential.a", VT::real, "", "potential.kind", "cosine", "amplitude (required)"},
      {"potential.omega", VT::real, "", "potential.kind", "cosine", "frequency, > 0 (required)"},
      {"potential.h", VT::real, "", "potential.kind", "cosine", "extrema grid spacing, > 0 (required)"},
      {"potential.H", VT::real, "", "potential.kind", "sawtooth", "tooth width, > 4 (required)"},
      {"potential.kappa", VT::real, "", "potential.kind", "sawtooth", "growth index, > 1 (required)"},
      {"potential.L", VT::real, "", "potential.kind", "sawtooth",
       "slope, > kappa H^kappa / (H - 2) (required)"},
      {"rate.form", VT::string, "", "", "", "base rate: constant | power | exp_power | exp_log_power (required)"},
      {"rate.c", VT::real, "1.0", "", "", "rate constant, > 0"},
      {"rate.p", VT::real, "1.0", "rate.form", "power,exp_power,exp_log_power", "rate exponent, > 0"},
      {"grid.r", VT::list, "", "", "", "explicit r-grid, strictly increasing and positive"},
      {"grid.r_min", VT::real, "", "", "", "log-spaced r-grid lower end"},
      {"grid.r_max", VT::real, "", "", "", "log-spaced r-grid upper end"},
      {"grid.r_points", VT::integer, "", "", "", "log-spaced r-grid size"},
      {"grid.n", VT::list, "[1, 2, 4, 8, 16]", "", "", "n values for growth tables"},
      {"grid.k", VT::list, "[1]", "", "", "k values for growth tables"},
      {"plan.delta", VT::real, "2.0", "", "", "truncation base delta > 1"},
      {"plan.a", VT::real, "1.0", "", "", "n_i = ceil(a b^i)"},
      {"plan.b", VT::real, "4.0", "", "", "n_i = ceil(a b^i), b > 1"},
      {"plan.k_scale", VT::real, "1.0", "", "", "k_i = k_scale n_i"},
      {"plan.i_max", VT::real, "1e15", "", "", "largest sequence index searched"},
      {"plan.explicit_terms", VT::integer, "64", "", "", "leading indices evaluated one by one"},
      {"finite.n_max", VT::integer, "64", "", "", "largest n in the finite-range table"},
      {"finite.per_decade", VT::integer, "64", "", "", "r' grid points per decade"},
      {"finite.decades", VT::integer, "8", "", "", "r' grid decades below r"},
      {"weak.n_per_decade", VT::integer, "128", "", "", "n lattice density"},
      {"weak.n_max", VT::real, "1e11", "", "", "largest n searched"},
      {"weak.k_per_decade", VT::integer, "16", "", "", "k lattice density"},
      {"variation.kappa1", VT::real, "", "", "", "variation constant; defaults to the potential's declared value"},
      {"variation.samples", VT::integer, "100000", "", "", "random pairs checked against kappa1"},
      {"region.min_samples", VT::integer, "256", "", "", "Monte Carlo minimum per region integral"},
      {"region.max_samples", VT::integer, "1048576", "", "", "Monte Carlo budget per region integral"},
      {"region.rel_se_cap", VT::real, "0.02", "", "", "largest admissible relative standard error"},
      {"quad.max_samples", VT::integer, "1048576", "", "", "Monte Carlo budget for double integrals"},
      {"quad.inner_tol", VT::real, "1e-9", "", "", "inner quadrature tolerance"},
      {"quad.outer_tol", VT::real, "1e-8", "", "", "outer quadrature tolerance"},
      {"test.family", VT::string, "\"ramp\"", "", "", "test family: ramp | cutoff_l | cutoff_g"},
      {"test.n", VT::list, "[4, 8, 16]", "", "", "family indices used by `test`"},
      {"test.tolerance", VT::real, "1e-9", "", "", "absolute residual tolerance"},
      {"sweep.n", VT::list, "[2, 3, 4, 5, 6, 7, 8]", "", "", "family indices of the disproof sweep"},
  };
}

const KeySpec* find_spec(const std::string& key) {
  for (const KeySpec& k : config_schema())
    if (k.key == key) return &k;
  return nullptr;
}

bool listed(const std::string& csv, const std::string& v) {
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (item == v) return true;
  return false;
}

std::string located(const ConfigValue& v) { return v.line > 0 ? " (line " + std::to_string(v.line) + ")" : ""; }

struct Reader {
  const ConfigDocument& doc;
  double real(const std::string& k) const { return doc.at(k).x; }
  long long integer(const std::string& k) const { return doc.at(k).i; }
  const std::string& str(const std::string& k) const { return doc.at(k).s; }
  const std::vector<double>& list(const std::string& k) const { return doc.at(k).list; }
  std::optional<double> opt(const std::string& k) const {
    if (!doc.has(k)) return std::nullopt;
    return doc.at(k).x;
  }
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + ": " + what);
}

void validate(const ConfigDocument& doc) {
  const Reader R{doc};
  auto positive = [&](const std::string& k) {
    if (doc.has(k)) require(R.real(k) > 0.0, k, "must be positive");
  };
  for (const char* k : {"model.alpha", "kernel.alpha"})
    if (doc.has(k)) require(R.real(k) > 0.0 && R.real(k) < 2.0, k, "alpha must lie in (0,2)");
  for (const char* k : {"model.kappa", "model.radius", "kernel.range", "kernel.lambda", "potential.p",
                        "potential.phi_scale", "potential.omega", "potential.h", "rate.c", "rate.p", "plan.a",
                        "plan.k_scale", "plan.i_max", "weak.n_max", "region.rel_se_cap", "quad.inner_tol",
                        "quad.outer_tol", "test.tolerance"})
    positive(k);
  if (doc.has("model.dim")) require(R.integer("model.dim") >= 1, "model.dim", "must be a positive integer");
  if (doc.has("model.base")) require(R.real("model.base") > 1.0, "model.base", "must exceed 1");
  if (doc.has("potential.eps")) require(R.real("potential.eps") >= 0.0, "potential.eps", "must be nonnegative");
  if (doc.has("potential.H")) {
    const double H = R.real("potential.H"), kappa = R.real("potential.kappa"), L = R.real("potential.L");
    require(H > 4.0, "potential.H", "sawtooth needs H > 4");
    require(kappa > 1.0, "potential.kappa", "sawtooth needs kappa > 1");
    const double bound = kappa * std::pow(H, kappa) / (H - 2.0);
    std::ostringstream os;
    os << "sawtooth needs L > kappa H^kappa / (H - 2) = " << bound << " (got L = " << L << ")";
    require(L > bound, "potential.L", os.str());
  }
  require(R.real("plan.delta") > 1.0, "plan.delta", "must exceed 1");
  require(R.real("plan.b") > 1.0, "plan.b", "must exceed 1");
  for (const char* k : {"plan.explicit_terms", "finite.n_max", "finite.per_decade", "finite.decades",
                        "weak.n_per_decade", "weak.k_per_decade", "variation.samples", "region.min_samples",
                        "region.max_samples", "quad.max_samples"})
    require(R.integer(k) >= 1, k, "must be a positive integer");
  require(R.integer("region.max_samples") >= R.integer("region.min_samples"), "region.max_samples",
          "must be at least region.min_samples");

  const bool list = doc.has("grid.r");
  const bool spaced = doc.has("grid.r_min") || doc.has("grid.r_max") || doc.has("grid.r_points");
  require(!(list && spaced), "grid.r", "give either grid.r or grid.r_min/grid.r_max/grid.r_points, not both");
  require(list || spaced, "grid.r", "an r-grid is required (grid.r or grid.r_min/grid.r_max/grid.r_points)");
  if (spaced) {
    for (const char* k : {"grid.r_min", "grid.r_max", "grid.r_points"})
      require(doc.has(k), k, "required with a log-spaced r-grid");
    require(R.real("grid.r_min") > 0.0 && R.real("grid.r_max") >= R.real("grid.r_min"), "grid.r_max",
            "need 0 < r_min <= r_max");
    require(R.integer("grid.r_points") >= 1, "grid.r_points", "must be a positive integer");
    require(R.integer("grid.r_points") == 1 || R.real("grid.r_max") > R.real("grid.r_min"), "grid.r_points",
            "several points need r_min < r_max");
  } else {
    const auto& r = R.list("grid.r");
    for (std::size_t i = 0; i < r.size(); ++i) {
      require(r[i] > 0.0 && std::isfinite(r[i]), "grid.r", "values must be positive and finite");
      require(i == 0 || r[i] > r[i - 1], "grid.r", "must be strictly increasing");
    }
  }
  for (const char* k : {"grid.n", "grid.k", "test.n", "sweep.n"})
    for (double v : R.list(k)) require(v > 0.0 && std::isfinite(v), k, "values must be positive and finite");
  theorem_from(R.str("theorem"));
  family_kind(R.str("test.family"));
}

const std::vector<std::string> kSelectors = {"model.profile", "kernel.kind", "potential.kind", "rate.form"};
const std::vector<std::string> kGridKeys = {"grid.r", "grid.r_min", "grid.r_max", "grid.r_points"};

}  // namespace

Theorem theorem_from(const std::string& name) {
  if (name == "super-finite") return Theorem::super_finite;
  if (name == "super-infinite") return Theorem::super_infinite;
  if (name == "variation") return Theorem::variation;
  if (name == "weak") return Theorem::weak;
  if (name == "defective") return Theorem::defective;
  if (name == "disproof") return Theorem::disproof;
  throw ConfigError("unknown theorem '" + name +
                    "' (expected super-finite, super-infinite, variation, weak, defective or disproof)");
}

std::string theorem_name(Theorem t) {
  switch (t) {
    case Theorem::super_finite: return "super-finite";
    case Theorem::super_infinite: return "super-infinite";
    case Theorem::variation: return "variation";
    case Theorem::weak: return "weak";
    case Theorem::defective: return "defective";
    case Theorem::disproof: return "disproof";
  }
  return "?";
}

const std::vector<KeySpec>& config_schema() {
  static const std::vector<KeySpec> schema = make_schema();
  return schema;
}

std::vector<std::string> builtin_names() {
  return {"ex2_3", "ex2_4", "prop2_5", "ex3_2", "toy_dyadic", "lipschitz_var"};
}

const std::string& builtin_document(const std::string& name) {
  auto it = builtins().find(name);
  if (it == builtins().end()) throw ConfigError("unknown built-in scenario '" + name + "'");
  return it->second;
}

ConfigDocument merge_documents(const ConfigDocument& base, const ConfigDocument& over) {
  ConfigDocument out = base;
  for (const std::string& sel : kSelectors) {
    if (!over.has(sel)) continue;
    if (base.has(sel) && canonical_text(base.at(sel)) == canonical_text(over.at(sel))) continue;
    out.erase_group(sel.substr(0, sel.find('.')));
  }
  const bool grid_override =
      std::any_of(kGridKeys.begin(), kGridKeys.end(), [&](const std::string& k) { return over.has(k); });
  if (grid_override)
    for (const std::string& k : kGridKeys) out.erase(k);
  for (const auto& [k, v] : over.entries()) out.set(k, v);
  return out;
}

Scenario load_scenario(const ConfigDocument& input) {
  ConfigDocument doc = input;
  if (doc.has("base")) {
    const ConfigValue b = doc.at("base");
    if (b.type != ValueType::string) throw ConfigError("base: expects a string" + located(b));
    doc.erase("base");
    doc = merge_documents(ConfigDocument::parse(builtin_document(b.s), b.s), doc);
  }

  // Unknown keys, types and applicability.
  for (auto [key, v] : doc.entries()) {
    const KeySpec* spec = find_spec(key);
    if (!spec) throw ConfigError("unknown key '" + key + "'" + located(v));
    if (spec->type == ValueType::real && v.type == ValueType::integer) {
      v.type = ValueType::real;
      doc.set(key, v);
    } else if (spec->type != v.type) {
      throw ConfigError(key + ": expects a " + type_name(spec->type) + ", got " + type_name(v.type) + located(v));
    }
    if (!spec->selector.empty()) {
      if (!doc.has(spec->selector)) throw ConfigError(key + ": requires " + spec->selector);
      const std::string& sel = doc.at(spec->selector).s;
      if (!listed(spec->kinds, sel))
        throw ConfigError(key + " does not apply to " + spec->selector + " = \"" + sel + "\"" + located(v));
    }
  }
  // Selector values.
  auto one_of = [&](const std::string& key, const std::string& kinds) {
    if (!doc.has(key)) return;
    if (!listed(kinds, doc.at(key).s))
      throw ConfigError(key + ": unknown value \"" + doc.at(key).s + "\" (expected one of " + kinds + ")");
  };
  one_of("model.profile", "stable,log_stable,stretched_exp,uniform,dyadic");
  one_of("kernel.kind", "stable_like,truncated,abstract");
  one_of("potential.kind", "zero,constant,loglog,log1p,power,loglog_psi,log1p_phi,cosine,sawtooth");
  one_of("rate.form", "constant,power,exp_power,exp_log_power");

  // Defaults and required keys.
  for (const KeySpec& spec : config_schema()) {
    if (doc.has(spec.key)) continue;
    bool applies = true;
    if (!spec.selector.empty()) applies = doc.has(spec.selector) && listed(spec.kinds, doc.at(spec.selector).s);
    if (!applies) continue;
    if (!spec.fallback.empty()) {
      ConfigValue v = ConfigDocument::parse(spec.key + " = " + spec.fallback).at(spec.key);
      if (spec.type == ValueType::real) v.type = ValueType::real;
      v.line = 0;
      doc.set(spec.key, v);
    } else if (spec.help.find("(required)") != std::string::npos) {
      throw ConfigError("missing required key '" + spec.key + "'");
    }
  }
  if (doc.has("kernel.kind") && doc.at("kernel.kind").s == "truncated" && !doc.has("kernel.range"))
    throw ConfigError("missing required key 'kernel.range'");
  if (doc.has("model.profile") && doc.at("model.profile").s == "dyadic" && doc.at("kernel.kind").s != "abstract")
    throw ConfigError("model.profile = \"dyadic\" needs kernel.kind = \"abstract\"");
  validate(doc);

  const Reader R{doc};
  Scenario s;
  s.name = R.str("name");
  s.description = R.str("description");
  s.theorem = theorem_from(R.str("theorem"));
  s.seed = static_cast<std::uint64_t>(R.integer("seed"));
  s.r_grid = doc.has("grid.r") ? R.list("grid.r")
                               : log_grid(R.real("grid.r_min"), R.real("grid.r_max"),
                                          static_cast<int>(R.integer("grid.r_points")));
  s.growth_n = R.list("grid.n");
  s.growth_k = R.list("grid.k");
  s.plan.delta = R.real("plan.delta");
  s.plan.a = R.real("plan.a");
  s.plan.b = R.real("plan.b");
  s.plan.k_scale = R.real("plan.k_scale");
  s.plan.I_max = R.real("plan.i_max");
  s.plan.explicit_terms = static_cast<int>(R.integer("plan.explicit_terms"));
  s.finite.n_max = static_cast<int>(R.integer("finite.n_max"));
  s.finite.grid.per_decade = static_cast<int>(R.integer("finite.per_decade"));
  s.finite.grid.decades = static_cast<int>(R.integer("finite.decades"));
  s.weak.n_per_decade = static_cast<int>(R.integer("weak.n_per_decade"));
  s.weak.n_max = R.real("weak.n_max");
  s.weak.k_per_decade = static_cast<int>(R.integer("weak.k_per_decade"));
  s.kappa1 = R.opt("variation.kappa1");
  s.variation_samples = static_cast<long>(R.integer("variation.samples"));
  s.region.seed = s.seed;
  s.region.min_samples = static_cast<long>(R.integer("region.min_samples"));
  s.region.max_samples = static_cast<long>(R.integer("region.max_samples"));
  s.region.rel_se_cap = R.real("region.rel_se_cap");
  s.quad.seed = s.seed;
  s.quad.max_samples = static_cast<long>(R.integer("quad.max_samples"));
  s.quad.inner_tol = R.real("quad.inner_tol");
  s.quad.outer_tol = R.real("quad.outer_tol");
  s.test_family = family_kind(R.str("test.family"));
  s.test_n = R.list("test.n");
  s.tolerance = R.real("test.tolerance");
  s.sweep_n = R.list("sweep.n");
  s.doc = std::move(doc);
  return s;
}

Scenario load_scenario(const std::string& text, const std::string& source) {
  return load_scenario(ConfigDocument::parse(text, source));
}

Scenario open_scenario(const std::string& name_or_path, const ConfigDocument& overrides) {
  ConfigDocument doc;
  if (builtins().count(name_or_path)) {
    doc = ConfigDocument::parse(builtin_document(name_or_path), name_or_path);
  } else {
    std::ifstream in(name_or_path);
    if (!in) throw ConfigError("no built-in scenario or readable file named '" + name_or_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    doc = ConfigDocument::parse(ss.str(), name_or_path);
    if (doc.has("base")) {
      const std::string b = doc.at("base").s;
      doc.erase("base");
      doc = merge_documents(ConfigDocument::parse(builtin_document(b), b), doc);
    }
  }
  return load_scenario(merge_documents(doc, overrides));
}

std::uint64_t Scenario::hash() const { return fnv1a(doc.canonical().c_str()); }

Context Scenario::context(Exec exec) const {
  const Reader R{doc};
  const std::string profile = R.str("model.profile");

  RadialModel model;
  if (profile == "dyadic") {
    const double base = R.real("model.base");
    model = RadialModel::abstract([base](double t) { return t <= 0.0 ? 1.0 : std::pow(base, -t); }, "dyadic");
  } else {
    const int m = static_cast<int>(R.integer("model.dim"));
    RadialProfile p;
    if (profile == "stable") p = RadialProfile::stable(R.real("model.alpha"), m);
    else if (profile == "log_stable") p = RadialProfile::log_stable(R.real("model.alpha"), m);
    else if (profile == "stretched_exp") p = RadialProfile::stretched_exp(R.real("model.kappa"));
    else p = RadialProfile::uniform(R.real("model.radius"));
    model = RadialModel::normalize(m, p, profile);
  }

  const std::string kind = R.str("kernel.kind");
  JumpKernel kernel;
  if (kind == "abstract") {
    kernel = JumpKernel::abstract(R.real("kernel.lambda"), R.opt("kernel.range"));
  } else {
    if (model.is_abstract()) throw HypothesisError("a jump density needs a model with a density");
    const double log_scale = R.opt("kernel.log_scale").value_or(model.log_c());
    kernel = kind == "stable_like"
                 ? JumpKernel::stable_like(model.dim(), R.real("kernel.alpha"), log_scale)
                 : JumpKernel::truncated(model.dim(), R.real("kernel.alpha"), log_scale, R.real("kernel.range"));
  }

  const std::string pk = R.str("potential.kind");
  Potential V = Potential::zero();
  if (pk == "constant") V = Potential::constant(R.real("potential.c"));
  else if (pk == "loglog") V = Potential::loglog(R.real("potential.eps"));
  else if (pk == "log1p") V = Potential::log1p(R.real("potential.eps"));
  else if (pk == "power") V = Potential::power(R.real("potential.c"), R.real("potential.p"));
  else if (pk == "loglog_psi") V = Potential::loglog_psi(R.real("potential.eps"), R.real("potential.phi_scale"));
  else if (pk == "log1p_phi") V = Potential::log1p_phi(R.real("potential.eps"), R.real("potential.phi_scale"));
  else if (pk == "cosine") V = Potential::cosine(R.real("potential.a"), R.real("potential.omega"), R.real("potential.h"));
  else if (pk == "sawtooth") V = Potential::sawtooth(R.real("potential.H"), R.real("potential.kappa"), R.real("potential.L"));
  if (doc.at("potential.normalize").b && !(V.is_zero() && model.is_abstract())) V = V.normalized(model);

  const std::string form = R.str("rate.form");
  const double rc = R.real("rate.c");
  RateFunction beta = RateFunction::constant(rc);
  if (form == "power") beta = RateFunction::power(rc, R.real("rate.p"));
  else if (form == "exp_power") beta = RateFunction::exp_power(rc, R.real("rate.p"));
  else if (form == "exp_log_power") beta = RateFunction::exp_log_power(rc, R.real("rate.p"));

  const double lambda = kernel.lambda_cache() ? *kernel.lambda_cache() : lambda_bound(kernel, model, {});
  Context c;
  c.model = std::move(model);
  c.kernel = std::move(kernel);
  c.V = std::move(V);
  c.beta = std::move(beta);
  c.lambda = lambda;
  c.region = region;
  c.region.exec = exec;
  c.quad = quad;
  c.quad.exec = exec;
  return c;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (points < 1 || !(lo > 0.0) || !(hi >= lo)) throw ConfigError("log grid needs 0 < lo <= hi and points >= 1");
  if (points == 1) return {lo};
  std::vector<double> out(points);
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < points; ++i) out[i] = std::pow(10.0, a + (b - a) * i / (points - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> parse_r_grid(const std::string& text) {
  auto number = [&](const std::string& t) {
    const ConfigValue v = ConfigDocument::parse("x = " + t, "--r-grid").at("x");
    if (v.type != ValueType::real && v.type != ValueType::integer)
      throw ConfigError("--r-grid: '" + t + "' is not a number");
    return v.x;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string a, b, n;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n))
      throw ConfigError("--r-grid: expected lo:hi:points");
    const double pts = number(n);
    if (pts != std::floor(pts)) throw ConfigError("--r-grid: points must be an integer");
    out = log_grid(number(a), number(b), static_cast<int>(pts));
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(number(item));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] > 0.0) || !std::isfinite(out[i])) throw ConfigError("--r-grid: values must be positive and finite");
    if (i > 0 && !(out[i] > out[i - 1])) throw ConfigError("--r-grid: must be strictly increasing");
  }
  if (out.empty()) throw ConfigError("--r-grid: empty grid");
  return out;
}

void check_hypotheses(const Scenario& s, const Context& c, Theorem t) {
  switch (t) {
    case Theorem::super_finite:
      if (!c.kernel.finite_range())
        throw HypothesisError("super-finite requires a finite jump range; the kernel has infinite range");
      break;
    case Theorem::super_infinite:
    case Theorem::defective:
      break;
    case Theorem::variation: {
      const std::optional<double> k1 = s.kappa1 ? s.kappa1 : c.V.variation();
      if (!k1) throw HypothesisError("variation theorem needs kappa1; the potential declares none");
      const VariationCheck vc = check_variation(c, *k1, s.variation_samples, s.seed);
      if (vc.violations > 0)
        throw HypothesisError("|V(x) - V(y)| <= kappa1 (1 ^ |x - y|) fails on " + std::to_string(vc.violations) +
                              " of " + std::to_string(vc.samples) + " sampled pairs");
      log_kappa2(c);
      break;
    }
    case Theorem::weak:
      if (c.model.is_abstract()) throw HypothesisError("weak synthesis needs a model with a density");
      break;
    case Theorem::disproof: {
      const auto saw = c.V.sawtooth_params();
      if (!saw) throw HypothesisError("disproof sweep needs a sawtooth potential");
      if (c.model.is_abstract() || c.model.dim() != 1) throw HypothesisError("disproof sweep needs a model on R");
      break;
    }
  }
}

RateCurve run_rate(const Scenario& s, Theorem t, Exec exec) { return run_rate(s, s.context(exec), t, exec); }

RateCurve run_rate(const Scenario& s, const Context& c, Theorem t, Exec exec) {
  if (t == Theorem::defective || t == Theorem::disproof)
    throw ConfigError("theorem '" + theorem_name(t) + "' does not produce a rate curve");
  check_hypotheses(s, c, t);
  RateCurve out;
  out.scenario = s.name;
  out.theorem = theorem_name(t);
  out.scenario_hash = s.hash();
  out.seed = s.seed;
  const auto& rs = s.r_grid;
  switch (t) {
    case Theorem::super_finite: {
      const FiniteTable table = finite_table(c, s.finite.n_max, exec);
      out.points = map_indexed<RatePoint>(exec, rs.size(),
                                          [&](std::size_t i) { return beta_V_super_finite(c, table, rs[i], s.finite.grid); });
      break;
    }
    case Theorem::super_infinite: {
      const ConditionStatus st = check_condition_A(c, s.plan);
      out.condition = st.summary();
      out.points = map_indexed<RatePoint>(exec, rs.size(),
                                          [&](std::size_t i) { return beta_V_super_infinite(c, s.plan, st, rs[i]); });
      break;
    }
    case Theorem::variation: {
      const double k1 = s.kappa1 ? *s.kappa1 : *c.V.variation();
      const double lk2 = log_kappa2(c);
      out.points = map_indexed<RatePoint>(exec, rs.size(),
                                          [&](std::size_t i) { return beta_V_variation(c, k1, lk2, rs[i], s.finite.grid); });
      break;
    }
    case Theorem::weak: {
      // The search caches sampled integrals, so points run in order; the
      // sampling inside is parallel.
      WeakSearch ws(c, s.weak);
      for (double r : rs) out.points.push_back(ws(r));
      break;
    }
    default:
      break;
  }
  out.monotone = monotone_envelope(out.points);
  return out;
}

std::optional<DefectiveConstants> run_defective(const Scenario& s, const Context& c, Exec exec) {
  check_hypotheses(s, c, Theorem::defective);
  if (c.kernel.finite_range()) return defective_finite(c, finite_table(c, s.finite.n_max, exec));
  const ConditionStatus st = check_condition_A(c, s.plan);
  return defective_infinite(c, s.plan, st, s.r_grid);
}

}  // namespace pertlab
