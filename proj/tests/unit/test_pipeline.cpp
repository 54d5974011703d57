#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "setlabel/pipeline.hpp"
#include "setlabel/serialize.hpp"
#include "setlabel/types.hpp"

using namespace setlabel;

namespace {

RunConfig small_config() {
  RunConfig cfg;
  cfg.scenario = 1;
  cfg.n = 400;
  cfg.n_boot = 16;
  cfg.n_reps = 3;
  cfg.threads = 1;
  cfg.master_seed = 77;
  return cfg;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "setlabel_pipe_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string first_line(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("config validation rejects out-of-range fields") {
  RunConfig cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.scenario = 0;
  CHECK_THROWS_AS(cfg.validate(), ParseError);
  cfg = small_config();
  cfg.n = 11;
  CHECK_THROWS_AS(cfg.validate(), ParseError);
  cfg = small_config();
  cfg.n_boot = 1;
  CHECK_THROWS_AS(cfg.validate(), ParseError);
  cfg = small_config();
  cfg.n_boot = 1;
  cfg.methods = {Method::naive};  // no bootstrap method, so n_boot is unused
  CHECK_NOTHROW(cfg.validate());
  cfg = small_config();
  cfg.alpha = {0.1, 0.1};
  CHECK_THROWS_AS(cfg.validate(), ParseError);
  cfg = small_config();
  cfg.alpha = {0.1, 1.0, 0.1};
  CHECK_THROWS_AS(cfg.validate(), ParseError);
  cfg = small_config();
  cfg.ci_level = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ParseError);
  cfg = small_config();
  cfg.threads = -1;
  CHECK_THROWS_AS(cfg.validate(), ParseError);
}

TEST_CASE("method names round-trip and unknowns are rejected") {
  for (Method m : {Method::naive, Method::naive_boot, Method::weighted_boot}) {
    CHECK(parse_method(method_name(m)) == m);
  }
  CHECK(method_name(Method::weighted_boot) == "weighted_boot");
  CHECK_THROWS_AS(parse_method("weighted"), ParseError);
}

TEST_CASE("one repetition produces the full result structure") {
  const RunConfig cfg = small_config();
  const RepResult rep = run_scenario_rep(cfg, 0);
  CHECK(rep.rep == 0);
  CHECK(rep.methods.size() == 3);
  CHECK(rep.methods.count("naive") == 1);
  CHECK(rep.methods.count("naive_boot") == 1);
  CHECK(rep.methods.count("weighted_boot") == 1);
  REQUIRE(rep.thresholds.size() == 3);
  REQUIRE(rep.weighted_cover_point.size() == 3);
  REQUIRE(rep.val_class_counts.size() == 3);
  long val_n = 0;
  for (long c : rep.val_class_counts) val_n += c;
  CHECK(val_n >= 199);  // development half takes each class's odd row
  CHECK(val_n <= 200);
  for (double t : rep.thresholds) {
    CHECK(t >= 0.0);
    CHECK(t <= 1.0);
  }
  REQUIRE(rep.ambiguity.overall.size() == 4);
  long amb_total = 0;
  for (long c : rep.ambiguity.overall) amb_total += c;
  CHECK(amb_total == val_n);
  REQUIRE(rep.observed_surv.size() == 3);

  // Point cells: defined flag set, interval bounds undefined.
  const MethodRepResult& naive = rep.methods.at("naive");
  REQUIRE(naive.coverage.size() == 3);
  for (const StatCell& cell : naive.coverage) {
    CHECK(cell.defined == 1);
    CHECK(std::isnan(cell.lo));
    CHECK(std::isnan(cell.hi));
  }
  // Bootstrap cells: percentile bounds bracket the mean.
  const MethodRepResult& boot = rep.methods.at("naive_boot");
  for (const StatCell& cell : boot.coverage) {
    if (cell.defined >= 2) {
      CHECK(cell.lo <= cell.mean + 1e-12);
      CHECK(cell.mean <= cell.hi + 1e-12);
    }
  }
}

TEST_CASE("weighted artifacts appear only when weighted_boot is requested") {
  RunConfig cfg = small_config();
  cfg.methods = {Method::naive};
  const RepResult rep = run_scenario_rep(cfg, 0);
  CHECK(rep.thresholds.empty());
  CHECK(rep.calib_counts.empty());
  CHECK(rep.weighted_cover_point.empty());
  CHECK(rep.methods.size() == 1);
}

TEST_CASE("thread count does not change the report bytes") {
  RunConfig cfg = small_config();
  cfg.threads = 1;
  const RepetitionReport a = run_repetitions(cfg, cfg.n_reps);
  cfg.threads = 3;
  const RepetitionReport b = run_repetitions(cfg, cfg.n_reps);
  CHECK(report_to_json(a) == report_to_json(b));
}

TEST_CASE("report JSON round-trips to identical text") {
  const RunConfig cfg = small_config();
  const RepetitionReport report = run_repetitions(cfg, 2);
  const std::string text = report_to_json(report);
  const RepetitionReport back = report_from_json(text);
  CHECK(report_to_json(back) == text);
  CHECK(back.reps.size() == 2);
  CHECK(back.config.n == 400);
  CHECK_THROWS_AS(report_from_json("{\"kind\":\"something_else\"}"), ParseError);
  CHECK_THROWS_AS(report_from_json("not json at all"), ParseError);
}

TEST_CASE("single-repetition convenience equals the first harness repetition") {
  RunConfig cfg = small_config();
  cfg.n_reps = 1;
  const RepetitionReport one = run_scenario(cfg);
  REQUIRE(one.reps.size() == 1);
  const RepResult direct = run_scenario_rep(cfg, 0);
  CHECK(one.reps[0].thresholds == direct.thresholds);
  CHECK(one.reps[0].stream_seed == direct.stream_seed);
}

TEST_CASE("aggregate_values implements the reporting rules") {
  const AggregateStat two = aggregate_values({0.4, 0.6});
  CHECK(two.defined == 2);
  CHECK(two.mean == 0.5);
  CHECK(two.sd == doctest::Approx(std::sqrt(0.02)).epsilon(1e-14));
  CHECK(two.pr_lo == doctest::Approx(0.5 - 0.95 * std::sqrt(0.02)).epsilon(1e-12));
  CHECK(two.pr_hi == doctest::Approx(0.5 + 0.95 * std::sqrt(0.02)).epsilon(1e-12));
  CHECK(two.ci196_lo == doctest::Approx(0.5 - 1.96 * std::sqrt(0.02)).epsilon(1e-12));
  CHECK(two.ci196_hi == doctest::Approx(0.5 + 1.96 * std::sqrt(0.02)).epsilon(1e-12));

  const double nan = std::nan("");
  const AggregateStat skip = aggregate_values({0.5, nan, nan});
  CHECK(skip.defined == 1);
  CHECK(skip.mean == 0.5);
  CHECK(skip.sd == 0.0);
  CHECK(skip.pr_lo == 0.5);  // single value: degenerate interval
  CHECK(skip.pr_hi == 0.5);

  const AggregateStat none = aggregate_values({nan});
  CHECK(none.defined == 0);
  CHECK(std::isnan(none.mean));
}

TEST_CASE("aggregate_cells averages per-repetition bootstrap bounds") {
  StatCell a{0.4, 0.3, 0.5, 10};
  StatCell b{0.6, 0.5, 0.7, 10};
  StatCell dead{std::nan(""), std::nan(""), std::nan(""), 0};
  const AggregateStat agg = aggregate_cells({a, b, dead});
  CHECK(agg.defined == 2);
  CHECK(agg.mean == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(agg.boot_lo == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(agg.boot_hi == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("one-repetition aggregates collapse to the repetition values") {
  RunConfig cfg = small_config();
  cfg.n_reps = 1;
  const RepetitionReport report = run_repetitions(cfg, 1);
  const Aggregates agg = aggregate(report);
  REQUIRE(agg.thresholds.size() == 3);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(agg.thresholds[c].mean == report.reps[0].thresholds[c]);
    CHECK(agg.thresholds[c].sd == 0.0);
    CHECK(agg.thresholds[c].pr_lo == agg.thresholds[c].mean);
    CHECK(agg.thresholds[c].defined == 1);
  }
}

TEST_CASE("emission writes the documented artifacts with stable headers") {
  const auto dir = fresh_dir("full");
  RunConfig cfg = small_config();
  cfg.n_reps = 2;
  const RepetitionReport report = run_repetitions(cfg, 2);
  emit_report(report, {"csv", "json"}, dir.string());

  CHECK(std::filesystem::exists(dir / "config.txt"));
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(first_line(dir / "coverage.csv") ==
        "scenario,rep,method,class,coverage,lo,hi,defined");
  CHECK(first_line(dir / "thresholds.csv") ==
        "scenario,rep,class,threshold,alpha,calib_count");
  CHECK(first_line(dir / "ambiguity.csv") == "scenario,rep,class,cardinality,count");
  CHECK(first_line(dir / "metrics.csv") ==
        "scenario,method,class,measure,mean,sd,lo,hi,defined_reps");
  CHECK(first_line(dir / "survival.csv") ==
        "method,algorithm,class,statistic,estimate,lo,hi,defined_count");
}

TEST_CASE("an empty method set emits only the config sidecar") {
  const auto dir = fresh_dir("empty");
  RunConfig cfg = small_config();
  cfg.methods = {};
  const RepetitionReport report = run_repetitions(cfg, 1);
  emit_report(report, {"csv", "json"}, dir.string());
  CHECK(std::filesystem::exists(dir / "config.txt"));
  CHECK(!std::filesystem::exists(dir / "report.json"));
  CHECK(!std::filesystem::exists(dir / "coverage.csv"));
  CHECK(!std::filesystem::exists(dir / "metrics.csv"));
}

TEST_CASE("config sidecar lists resolved fields but not the worker count") {
  const RunConfig cfg = small_config();
  const std::string text = config_sidecar(cfg);
  CHECK(text.find("scenario = 1") != std::string::npos);
  CHECK(text.find("n = 400") != std::string::npos);
  CHECK(text.find("master_seed = 77") != std::string::npos);
  CHECK(text.find("methods = ") != std::string::npos);
  CHECK(text.find("threads") == std::string::npos);  // must not affect artifacts
}

TEST_CASE("a strict repetition failure names the repetition and seed") {
  RunConfig cfg = small_config();
  cfg.strict = true;
  cfg.opt.max_iter = 1;
  cfg.opt.tol = 1e-14;
  try {
    run_repetitions(cfg, 2);
    FAIL("expected a repetition failure");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("repetition") != std::string::npos);
    CHECK(msg.find("master_seed") != std::string::npos);
  }
}

TEST_CASE("model and threshold files round-trip") {
  const auto dir = fresh_dir("roundtrip");
  SimConfig sim;
  sim.n = 200;
  sim.rng = RngSpec{55, 0};
  const LabeledDataset ds = generate_dataset(sim);
  LabeledDataset masked = ds;
  masked.features = select_columns(ds.features, scenario_mask(2));
  const auto model = fit_multinomial(masked, LabelSpace(3), Penalty::ridge(0.01));
  const std::string mpath = (dir / "model.json").string();
  save_model(mpath, model);
  const MultinomialModel back = load_model(mpath);
  CHECK(back.k == model.k);
  CHECK(back.p == model.p);
  CHECK(back.coef == model.coef);
  CHECK(back.penalty.kind == model.penalty.kind);
  CHECK(back.fit_meta.converged == model.fit_meta.converged);

  ThresholdVector tv;
  tv.t = {0.31, 0.22, 0.104};
  tv.alpha = {0.1, 0.1, 0.1};
  tv.calib_counts = {45, 36, 18};
  const std::string tpath = (dir / "thresholds.json").string();
  save_thresholds(tpath, tv);
  const ThresholdVector tback = load_thresholds(tpath);
  CHECK(tback.t == tv.t);
  CHECK(tback.alpha == tv.alpha);
  CHECK(tback.calib_counts == tv.calib_counts);

  // Wrong kind on disk is rejected with the path in the message.
  std::ofstream bad(dir / "bad.json");
  bad << "{\"kind\": \"thresholds\", \"schema_version\": 1}";
  bad.close();
  CHECK_THROWS_AS(load_model((dir / "bad.json").string()), ParseError);
  CHECK_THROWS_AS(load_model((dir / "missing.json").string()), ParseError);
}

TEST_CASE("repetition streams and seeds are stable identifiers") {
  const RunConfig cfg = small_config();
  const RepResult r0 = run_scenario_rep(cfg, 0);
  const RepResult r1 = run_scenario_rep(cfg, 1);
  CHECK(r0.stream_seed != r1.stream_seed);
  const RepResult again = run_scenario_rep(cfg, 0);
  CHECK(r0.stream_seed == again.stream_seed);
  CHECK(r0.thresholds == again.thresholds);
}
