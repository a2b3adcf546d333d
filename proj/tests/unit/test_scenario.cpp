#include <doctest.h>

#include <string>

#include "pertlab/config.hpp"
#include "pertlab/errors.hpp"
#include "pertlab/scenario.hpp"

using namespace pertlab;

TEST_CASE("config parsing") {
  const auto d = ConfigDocument::parse(
      "# comment\n"
      "a.flag = true\n"
      "a.count = 12\n"
      "a.x = 1.5e-3   # trailing\n"
      "a.big = inf\n"
      "a.name = \"dyadic\"\n"
      "a.list = [1, 2.5, 1e3]\n");
  CHECK(d.at("a.flag").type == ValueType::boolean);
  CHECK(d.at("a.flag").b);
  CHECK(d.at("a.count").i == 12);
  CHECK(d.at("a.x").x == 1.5e-3);
  CHECK(std::isinf(d.at("a.big").x));
  CHECK(d.at("a.name").s == "dyadic");
  CHECK(d.at("a.list").list == std::vector<double>{1, 2.5, 1e3});
  CHECK(d.at("a.count").line == 3);
}

TEST_CASE("config errors carry the line") {
  CHECK_THROWS_WITH_AS(ConfigDocument::parse("a = 1\na = 2\n", "f.cfg"), doctest::Contains("f.cfg:2:"), ConfigError);
  CHECK_THROWS_WITH_AS(ConfigDocument::parse("a = [1, x]\n", "f.cfg"), doctest::Contains("f.cfg:1:"), ConfigError);
  CHECK_THROWS_AS(ConfigDocument::parse("just words\n"), ConfigError);
  CHECK_THROWS_AS(ConfigDocument::parse("a = \"open\n"), ConfigError);
}

TEST_CASE("canonical text is order independent") {
  const auto a = ConfigDocument::parse("b = 2\na = 1.0\n");
  const auto b = ConfigDocument::parse("a = 1\nb = 2\n");
  CHECK(a.canonical() == "a = 1\nb = 2\n");
  CHECK(ConfigDocument::parse(a.canonical()).canonical() == a.canonical());
  (void)b;
}

TEST_CASE("every built-in loads and meets its hypotheses") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const Scenario s = open_scenario(name);
    CHECK(s.name == name);
    CHECK_FALSE(s.r_grid.empty());
    const Context c = s.context();
    CHECK_NOTHROW(check_hypotheses(s, c, s.theorem));
    // Built-in text round-trips through the parser.
    CHECK(load_scenario(builtin_document(name), name).hash() == s.hash());
  }
  CHECK_THROWS_AS(builtin_document("nope"), ConfigError);
}

TEST_CASE("a theorem that does not apply is rejected") {
  const Scenario s = open_scenario("ex2_3");
  CHECK_THROWS_AS(check_hypotheses(s, s.context(), Theorem::super_finite), HypothesisError);
}

TEST_CASE("validation messages") {
  CHECK_THROWS_WITH_AS(load_scenario("base = \"ex2_3\"\nfoo = 1\n"), doctest::Contains("unknown key 'foo' (line 2)"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(load_scenario("base = \"ex3_2\"\nkernel.alpha = 2.5\n"),
                       doctest::Contains("alpha must lie in (0,2)"), ConfigError);
  CHECK_THROWS_WITH_AS(load_scenario("base = \"prop2_5\"\npotential.L = 10\n"),
                       doctest::Contains("sawtooth needs L > kappa H^kappa / (H - 2)"), ConfigError);
  CHECK_THROWS_AS(load_scenario("base = \"ex2_3\"\ngrid.r = [0.1, 0.01]\n"), ConfigError);
  CHECK_THROWS_AS(load_scenario("base = \"ex2_3\"\ngrid.r = [-1, 1]\n"), ConfigError);
  // Keys of an unselected kind are errors.
  CHECK_THROWS_AS(load_scenario("base = \"ex2_3\"\npotential.omega = 1\n"), ConfigError);
  CHECK_THROWS_AS(load_scenario("base = \"ex2_3\"\nseed = \"x\"\n"), ConfigError);
}

TEST_CASE("merging replaces selector groups and r-grid forms") {
  const auto base = ConfigDocument::parse(builtin_document("ex2_3"));
  const auto over = ConfigDocument::parse("potential.kind = \"zero\"\ngrid.r = [0.5, 1]\n");
  const auto m = merge_documents(base, over);
  CHECK_FALSE(m.has("potential.eps"));
  CHECK_FALSE(m.has("grid.r_min"));
  CHECK(m.at("grid.r").list == std::vector<double>{0.5, 1});
  const Scenario s = load_scenario(m);
  CHECK(s.r_grid == std::vector<double>{0.5, 1});
}

TEST_CASE("overrides change the hash") {
  const Scenario a = open_scenario("ex2_3");
  const Scenario b = open_scenario("ex2_3", ConfigDocument::parse("seed = 8\n"));
  CHECK(a.hash() != b.hash());
  CHECK(b.seed == 8);
  CHECK(open_scenario("ex2_3").hash() == a.hash());
}

TEST_CASE("r grids") {
  const auto g = log_grid(1e-3, 1e-1, 3);
  CHECK(g == std::vector<double>{1e-3, 1e-2, 1e-1});
  CHECK(parse_r_grid("1e-3:1e-1:3") == g);
  CHECK(parse_r_grid("0.5,1,2") == std::vector<double>{0.5, 1, 2});
  CHECK_THROWS_AS(parse_r_grid("1:2"), ConfigError);
  CHECK_THROWS_AS(parse_r_grid("2,1"), ConfigError);
}

TEST_CASE("theorem names") {
  for (auto t : {Theorem::super_finite, Theorem::super_infinite, Theorem::variation, Theorem::weak, Theorem::defective,
                 Theorem::disproof})
    CHECK(theorem_from(theorem_name(t)) == t);
  CHECK_THROWS_AS(theorem_from("lemma"), ConfigError);
}
