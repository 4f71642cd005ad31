#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fuzzybso/bso.hpp"

using namespace fuzzybso;

namespace {

Evaluation sphere(std::span<const double> x) {
  double s = 0.0;
  for (const double v : x) s += v * v;
  return Evaluation{-s, {}};
}

Individual individual(Genotype g, double value) {
  Individual ind;
  ind.genotype = g;
  ind.ewma = std::move(g);
  ind.fitness = Evaluation{value, {}};
  return ind;
}

std::string trace_text(const ConvergenceTrace& t) {
  std::ostringstream out;
  t.write_csv(out, false);
  return out.str();
}

BsoParams small(BsoMode mode, std::uint64_t seed) {
  BsoParams p;
  p.q = 12;
  p.k = 3;
  p.max_iterations = 40;
  p.seed = seed;
  p.mode = mode;
  p.stagnation = 0;
  return p;
}

}  // namespace

TEST_CASE("step size schedule") {
  BsoParams p;
  p.max_iterations = 100;
  p.slope = 20;
  CHECK(logsig(0.0) == 0.5);
  CHECK(step_size(50, p, 0.8) == doctest::Approx(0.4));
  CHECK(step_size(10, p, 0.0) == 0.0);
  CHECK(step_size(0, p, 1.0) > step_size(100, p, 1.0));
  p.slope = 1e12;
  CHECK(step_size(0, p, 0.6) == doctest::Approx(0.3));
}

TEST_CASE("ewma update and blend arithmetic") {
  const std::vector<double> base{2.0};
  const std::vector<double> prev{0.0};
  CHECK(ewma_update(base, prev, 0.5) == std::vector<double>{1.0});
  CHECK(ewma_update(base, prev, 1.0) == base);
  const std::vector<double> a{1.0, 3.0};
  const std::vector<double> b{3.0, 5.0};
  CHECK(blend(a, b, 0.25) == std::vector<double>{2.5, 4.5});
}

TEST_CASE("zero-noise candidates return the base") {
  const auto spec = GenotypeSpec::box(4, -10, 10);
  const std::vector<double> base{1.0, -2.0, 3.5, 0.25};
  const std::vector<double> ewma{9.0, 9.0, 9.0, 9.0};
  Rng rng(1);
  SUBCASE("EWMA with e = 1 and theta = 0") {
    BsoParams p;
    p.mode = BsoMode::Ewma;
    p.e = 1.0;
    p.theta = 0.0;
    const auto c = generate_candidate(base, ewma, 3, p, spec, rng);
    CHECK(c.genotype == base);
    CHECK(c.ewma == base);
  }
  SUBCASE("plain with sigma = 0") {
    BsoParams p;
    p.mode = BsoMode::Plain;
    p.sigma = 0.0;
    const auto c = generate_candidate(base, ewma, 3, p, spec, rng);
    CHECK(c.genotype == base);
  }
  SUBCASE("EWMA keeps the smoothed point as state") {
    BsoParams p;
    p.mode = BsoMode::Ewma;
    p.e = 0.5;
    p.theta = 0.0;
    const auto c = generate_candidate(base, ewma, 3, p, spec, rng);
    CHECK(c.ewma == std::vector<double>{5.0, 3.5, 6.25, 4.625});
    CHECK(c.genotype == c.ewma);
  }
}

TEST_CASE("candidates are clamped into the box") {
  const auto spec = GenotypeSpec::box(3, -1, 1);
  BsoParams p;
  p.sigma = 50.0;
  p.theta = 50.0;
  Rng rng(9);
  const std::vector<double> base{0.9, -0.9, 0.0};
  for (int i = 0; i < 200; ++i) {
    p.mode = i % 2 ? BsoMode::Plain : BsoMode::Ewma;
    CHECK(spec.contains(generate_candidate(base, base, 0, p, spec, rng).genotype));
  }
}

TEST_CASE("clustering edge cases") {
  Population pop;
  for (int i = 0; i < 6; ++i) pop.push_back(individual({static_cast<double>(i), 0.0}, i == 4 ? 10.0 : -i));
  Rng rng(3);

  const auto one = cluster(pop, 1, rng);
  CHECK(one.members.size() == 1);
  CHECK(one.members[0].size() == 6);
  CHECK(one.centers[0] == 4);

  const auto each = cluster(pop, 6, rng);
  for (std::size_t j = 0; j < 6; ++j) {
    CHECK(each.members[j].size() == 1);
    CHECK(each.centers[j] == each.members[j][0]);
  }
  CHECK_THROWS_AS(cluster(pop, 7, rng), std::invalid_argument);
}

TEST_CASE("two separated blobs are recovered") {
  Rng gen(12);
  Population pop;
  std::vector<int> blob;
  for (int i = 0; i < 40; ++i) {
    const double cx = i % 2 ? 20.0 : -20.0;
    pop.push_back(individual({cx + gen.normal(0, 1), cx + gen.normal(0, 1), gen.normal(0, 1)}, gen.uniform()));
    blob.push_back(i % 2);
  }
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const auto c = cluster(pop, 2, rng);
    for (const auto& members : c.members) {
      REQUIRE_FALSE(members.empty());
      for (const auto i : members) CHECK(blob[i] == blob[members[0]]);
    }
    for (std::size_t j = 0; j < 2; ++j) {
      const auto& m = c.members[j];
      const auto best = *std::max_element(m.begin(), m.end(),
                                          [&](std::size_t a, std::size_t b) { return pop[a].value() < pop[b].value(); });
      CHECK(c.centers[j] == best);
    }
  }
}

TEST_CASE("center replacement never discards the population's best") {
  Population pop;
  for (int i = 0; i < 5; ++i) pop.push_back(individual({static_cast<double>(i)}, i == 2 ? 1.0 : 0.0));
  const auto spec = GenotypeSpec::box(1, -5, 5);
  BsoParams p;
  p.p_replace = 1.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Population copy = pop;
    Rng rng(seed);
    const auto c = cluster(copy, 5, rng);
    const auto replaced = maybe_replace_center(copy, c, p, spec, rng);
    if (replaced) {
      CHECK(*replaced != 2);
      CHECK_FALSE(copy[*replaced].fitness.has_value());
    }
    CHECK(copy[2].genotype == std::vector<double>{2.0});
  }
}

TEST_CASE("base selection with one cluster uses that cluster") {
  Population pop;
  for (int i = 0; i < 4; ++i) pop.push_back(individual({static_cast<double>(i)}, 0.0));
  Rng rng(4);
  const auto c = cluster(pop, 1, rng);
  BsoParams p;
  p.p_one_cluster = 0.0;  // ignored when k = 1
  for (int i = 0; i < 50; ++i) {
    const auto base = select_base(pop, c, p, rng);
    CHECK(base[0] == std::round(base[0]));
  }
}

TEST_CASE("zero iterations returns the initial best with a one-row trace") {
  BsoParams p = small(BsoMode::Ewma, 5);
  p.max_iterations = 0;
  const auto r = run_bso(p, sphere, GenotypeSpec::box(3, -1, 1));
  CHECK(r.trace.records.size() == 1);
  CHECK(r.trace.records[0].best == r.best.value());
  CHECK(r.trace.records[0].evaluations == p.q);
}

TEST_CASE("runs are deterministic, monotone and stay in bounds") {
  const auto spec = GenotypeSpec::box(4, -3, 2);
  for (const auto mode : {BsoMode::Plain, BsoMode::Ewma}) {
    bool inside = true;
    const FitnessFunction f = [&](std::span<const double> x) {
      inside = inside && spec.contains(x);
      return sphere(x);
    };
    const auto a = run_bso(small(mode, 77), f, spec);
    const auto b = run_bso(small(mode, 77), f, spec);
    const auto c = run_bso(small(mode, 78), f, spec);
    CHECK(inside);
    CHECK(trace_text(a.trace) == trace_text(b.trace));
    CHECK(a.best.genotype == b.best.genotype);
    CHECK(trace_text(a.trace) != trace_text(c.trace));
    CHECK(a.trace.monotone());
    CHECK(a.trace.records.size() == 41);
    for (std::size_t i = 1; i < a.trace.records.size(); ++i) {
      CHECK(a.trace.records[i].best >= a.trace.records[i - 1].best);
    }
  }
}

TEST_CASE("EWMA with e = 1 and no noise replays the zero-noise plain run gene for gene") {
  const auto spec = GenotypeSpec::box(5, -4, 4);
  std::vector<Genotype> seen_plain;
  std::vector<Genotype> seen_ewma;
  const auto recorder = [](std::vector<Genotype>& log) {
    return FitnessFunction([&log](std::span<const double> x) {
      log.emplace_back(x.begin(), x.end());
      return sphere(x);
    });
  };
  BsoParams plain = small(BsoMode::Plain, 21);
  plain.sigma = 0.0;
  BsoParams ewma = small(BsoMode::Ewma, 21);
  ewma.e = 1.0;
  ewma.theta = 0.0;
  ewma.sigma = 0.0;
  const auto a = run_bso(plain, recorder(seen_plain), spec);
  const auto b = run_bso(ewma, recorder(seen_ewma), spec);
  CHECK(seen_plain.size() == seen_ewma.size());
  CHECK(seen_plain == seen_ewma);
  CHECK(trace_text(a.trace) == trace_text(b.trace));
}

TEST_CASE("stagnation window stops a flat run") {
  BsoParams p = small(BsoMode::Ewma, 2);
  p.max_iterations = 500;
  p.stagnation = 7;
  const auto r = run_bso(p, [](std::span<const double>) { return Evaluation{1.0, {}}; }, GenotypeSpec::box(2, 0, 1));
  CHECK(r.trace.records.size() == 8);
}

TEST_CASE("objective failures name the iteration") {
  int calls = 0;
  const FitnessFunction f = [&](std::span<const double> x) {
    if (++calls == 12 * 2 + 5) throw std::runtime_error("boom");
    return sphere(x);
  };
  BsoParams p = small(BsoMode::Plain, 1);
  p.p_replace = 0.0;
  try {
    run_bso(p, f, GenotypeSpec::box(2, -1, 1));
    FAIL("expected OptimizerError");
  } catch (const OptimizerError& e) {
    CHECK(e.iteration() == 2);
    CHECK(std::string(e.what()).find("boom") != std::string::npos);
  }
}

TEST_CASE("parameter validation") {
  BsoParams p;
  CHECK_NOTHROW(p.validate());
  p.k = p.q + 1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = BsoParams{};
  p.e = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = BsoParams{};
  p.slope = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = BsoParams{};
  p.p_one_cluster = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("sphere: both modes get within 1e-2 of the optimum") {
  const auto spec = GenotypeSpec::box(5, -5, 5);
  for (const auto mode : {BsoMode::Plain, BsoMode::Ewma}) {
    std::vector<double> best;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      BsoParams p;
      p.q = 30;
      p.max_iterations = 200;
      p.stagnation = 0;
      p.seed = seed;
      p.mode = mode;
      p.theta = 0.1;
      best.push_back(run_bso(p, sphere, spec).best.value());
    }
    std::sort(best.begin(), best.end());
    CHECK(best[2] >= -1e-2);
  }
}
