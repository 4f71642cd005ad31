#include <doctest.h>

#include <array>
#include <cmath>
#include <sstream>

#include "fuzzybso/errors.hpp"
#include "fuzzybso/experiment.hpp"
#include "fuzzybso/model_io.hpp"
#include "test_support.hpp"

using namespace fuzzybso;

namespace {

RunConfig quick_config() {
  RunConfig c;
  c.data = testsupport::pid_path();
  c.bso.max_iterations = 8;
  c.ga.generations = 8;
  c.bso.q = 20;
  c.ga.population = 20;
  return c;
}

std::string strip_last_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::string out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

/// Class 1 when x1 sits near its minimum, class 2 near its maximum; x2 is noise.
Dataset separable() {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) {
    const bool high = i % 2 == 1;
    rows.push_back({high ? 8.0 + (i % 5) * 0.5 : (i % 5) * 0.5, static_cast<double>((i * 7) % 11)});
    labels.push_back(high ? 2 : 1);
  }
  return testsupport::make_dataset(rows, labels);
}

}  // namespace

TEST_CASE("mean and sample deviation") {
  CHECK(mean_std({}) == std::pair<double, double>{0.0, 0.0});
  CHECK(mean_std({5.0}) == std::pair<double, double>{5.0, 0.0});
  const auto [m, s] = mean_std({1, 2, 3, 4});
  CHECK(m == 2.5);
  CHECK(s == doctest::Approx(std::sqrt(5.0 / 3.0)));
}

TEST_CASE("positive class resolution") {
  CHECK(resolve_positive_class({"0", "1"}, "1") == 2);
  CHECK(resolve_positive_class({"0", "1"}, "0") == 1);
  CHECK(resolve_positive_class({"neg", "pos"}, "1") == 2);
}

TEST_CASE("sweep covers every cell in order and is worker-count independent") {
  RunConfig c = quick_config();
  c.ratios = {0.7, 0.8};
  c.seeds = {1, 2};
  const Dataset d = load_dataset(c);
  const auto serial = run_sweep(d, c);
  REQUIRE(serial.size() == 8);
  CHECK(serial[0].ratio == 0.7);
  CHECK(serial[0].seed == 1);
  CHECK(serial[0].optimizer == OptimizerKind::BsoEwma);
  CHECK(serial[1].optimizer == OptimizerKind::Ga);
  CHECK(serial[2].seed == 2);
  CHECK(serial[4].ratio == 0.8);
  for (const auto& cell : serial) {
    CHECK(cell.ok);
    CHECK(cell.monotone);
    CHECK(cell.test.records > 0);
  }
  c.workers = 3;
  const auto parallel = run_sweep(d, c);
  std::ostringstream a;
  std::ostringstream b;
  write_sweep_runs_csv(serial, a);
  write_sweep_runs_csv(parallel, b);
  CHECK(a.str() == b.str());

  const auto rows = summarize(serial);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].runs == 2);
  CHECK(rows[0].failed == 0);
  CHECK(rows[0].accuracy_mean == doctest::Approx((serial[0].test.accuracy + serial[2].test.accuracy) / 2));
}

TEST_CASE("single ratio and seed gives a one-row summary with zero deviation") {
  RunConfig c = quick_config();
  c.ratios = {0.8};
  c.seeds = {4};
  c.sweep_optimizers = {OptimizerKind::BsoEwma};
  const auto rows = summarize(run_sweep(load_dataset(c), c));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].accuracy_std == 0.0);
  std::ostringstream out;
  write_sweep_summary_csv(rows, out);
  CHECK(out.str().rfind("ratio,optimizer,runs,failed,accuracy_mean,accuracy_std", 0) == 0);
}

TEST_CASE("failing cells are marked and the sweep continues") {
  // Class 2 has a single record, so no split can keep it on both sides.
  const Dataset d = testsupport::make_dataset({{1}, {2}, {3}, {4}}, {1, 1, 1, 2});
  RunConfig c = quick_config();
  c.ratios = {0.5, 0.75};
  c.seeds = {1};
  const auto cells = run_sweep(d, c);
  REQUIRE(cells.size() == 4);
  for (const auto& cell : cells) {
    CHECK_FALSE(cell.ok);
    CHECK_FALSE(cell.error.empty());
  }
  const auto rows = summarize(cells);
  CHECK(rows[0].failed == rows[0].runs);
  std::ostringstream out;
  write_sweep_runs_csv(cells, out);
  CHECK(out.str().find(",failed,") != std::string::npos);
}

TEST_CASE("parameter grid has one row per (e, K)") {
  RunConfig c = quick_config();
  c.e_values = {0.2, 0.5, 1.0};
  c.k_values = {5, 20, 50};
  const auto cells = run_param_sweep(load_dataset(c), c);
  REQUIRE(cells.size() == 9);
  CHECK(cells[0].e == 0.2);
  CHECK(cells[0].slope == 5);
  CHECK(cells[8].e == 1.0);
  CHECK(cells[8].slope == 50);
  std::ostringstream out;
  write_param_sweep_csv(cells, out);
  int lines = 0;
  for (const char ch : out.str()) lines += ch == '\n';
  CHECK(lines == 10);
}

TEST_CASE("benchmark rows, DNF and immediate hits") {
  RunConfig c = quick_config();
  const Dataset d = load_dataset(c);
  SUBCASE("unreachable threshold") {
    c.threshold = 1.0;
    const auto rows = run_benchmark(d, c);
    REQUIRE(rows.size() == 9);
    for (const auto& r : rows) {
      CHECK(r.ok);
      CHECK_FALSE(r.reached);
    }
    std::ostringstream out;
    write_benchmark_csv(rows, out);
    CHECK(out.str().find(",DNF,") != std::string::npos);
    CHECK(out.str().find("GA baseline (AGFS stand-in)") != std::string::npos);
  }
  SUBCASE("threshold at or below the initial best") {
    c.threshold = 1e-6;
    const auto rows = run_benchmark(d, c);
    for (const auto& r : rows) {
      CHECK(r.reached);
      CHECK(r.iterations_to_threshold == 0);
    }
    CHECK(rows[0].train_records < rows[2 * 3].train_records);
  }
}

TEST_CASE("first record reaching a threshold") {
  ConvergenceTrace t;
  for (int i = 0; i < 3; ++i) {
    TraceRecord rec;
    rec.iteration = i;
    rec.best = std::array{0.2, 0.5, 0.7}[static_cast<std::size_t>(i)];
    t.records.push_back(rec);
  }
  CHECK(first_reaching(t, 0.5)->iteration == 1);
  CHECK(first_reaching(t, 0.1)->iteration == 0);
  CHECK_FALSE(first_reaching(t, 0.9).has_value());
}

TEST_CASE("a separable dataset is learned perfectly") {
  const Dataset d = separable();
  RunConfig c;
  c.r = 2;
  c.bso.max_iterations = 100;
  const auto t = train_once(d, c);
  CHECK(t.train_report.accuracy == 1.0);
  CHECK(t.test_report.accuracy == 1.0);
}

TEST_CASE("rule table layout") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 30; ++i) {
    rows.push_back({1.0 * (i % 3), 1.0 * (i % 5), 1.0 * (i % 7), 1.0 * i, 2.0 * (i % 4), 0.5 * (i % 6)});
    labels.push_back(1 + i % 2);
  }
  const Dataset d = testsupport::make_dataset(rows, labels);
  RunConfig c;
  c.r = 6;
  c.bso.max_iterations = 10;
  const auto t = train_once(d, c);
  std::ostringstream out;
  write_rules_csv(t.model, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "rule,x1,x2,x3,x4,x5,x6,class,weight,and_or");
  int count = 0;
  while (std::getline(in, line)) {
    ++count;
    CHECK(line.rfind("R" + std::to_string(count) + ",", 0) == 0);
    std::vector<std::string> cells;
    std::istringstream fields(line);
    for (std::string f; std::getline(fields, f, ',');) cells.push_back(f);
    REQUIRE(cells.size() == 10);
    for (int j = 1; j <= 6; ++j) CHECK((cells[j] >= "0" && cells[j] <= "3"));
    CHECK((cells[7] == "1" || cells[7] == "2"));
    CHECK(cells[8].size() == 6);  // 0.xxxx
    CHECK((cells[9] == "1" || cells[9] == "2"));
  }
  CHECK(count == 6);
}

TEST_CASE("train twice gives identical artifacts") {
  testsupport::TempDir dir("train");
  RunConfig c = quick_config();
  std::ostringstream log;
  c.output = dir / "a";
  cmd_train(c, log);
  c.output = dir / "b";
  cmd_train(c, log);
  for (const auto* name : {"model.json", "rules.csv", "metrics.json"}) {
    CHECK(testsupport::read_file(dir / (std::string("a/") + name)) ==
          testsupport::read_file(dir / (std::string("b/") + name)));
  }
  CHECK(strip_last_column(testsupport::read_file(dir / "a/trace.csv")) ==
        strip_last_column(testsupport::read_file(dir / "b/trace.csv")));
  CHECK(log.str().find("g1=") != std::string::npos);
}

TEST_CASE("evaluate reports undefined specificity without failing") {
  testsupport::TempDir dir("eval");
  RunConfig c = quick_config();
  c.output = dir.path();
  std::ostringstream log;
  cmd_train(c, log);

  // Only diabetic records: no negatives, so specificity is undefined.
  testsupport::write_file(dir / "pos.csv", "a,b,c,d,e,f,g,h,Outcome\n6,148,72,35,0,33.6,0.627,50,1\n"
                                           "8,183,64,0,0,23.3,0.672,32,1\n");
  RunConfig e = c;
  e.test_data = dir / "pos.csv";
  e.output = dir / "eval";
  std::ostringstream out;
  cmd_evaluate(e, dir / "model.json", out);
  CHECK(out.str().find("specificity=undefined") != std::string::npos);
  const auto predictions = testsupport::read_file(dir / "eval/predictions.csv");
  CHECK(predictions.rfind("record,true_label,predicted_label,score\n0,1,", 0) == 0);

  testsupport::write_file(dir / "narrow.csv", "1,2,1\n3,4,0\n");
  e.test_data = dir / "narrow.csv";
  CHECK_THROWS_AS(cmd_evaluate(e, dir / "model.json", out), DataError);
}

TEST_CASE("evaluating the training split reports both sides") {
  testsupport::TempDir dir("eval2");
  RunConfig c = quick_config();
  c.output = dir.path();
  std::ostringstream log;
  cmd_train(c, log);
  std::ostringstream out;
  RunConfig e = c;
  e.output = dir / "e";
  cmd_evaluate(e, dir / "model.json", out);
  CHECK(out.str().find("train: records=614") != std::string::npos);
  CHECK(out.str().find("test: records=154") != std::string::npos);
  // Same split as training, so the numbers agree with the training report.
  const auto train_line = log.str().substr(log.str().find("test:"));
  CHECK(out.str().find(train_line.substr(0, train_line.find('\n'))) != std::string::npos);
}
