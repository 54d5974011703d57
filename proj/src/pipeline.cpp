#include "setlabel/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "setlabel/bootstrap.hpp"
#include "setlabel/io.hpp"
#include "setlabel/labeling.hpp"
#include "setlabel/metrics.hpp"
#include "setlabel/serialize.hpp"
#include "setlabel/survival.hpp"

namespace setlabel {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kK = 3;  // the simulation study is a three-class problem

double opt_to_nan(const std::optional<double>& v) { return v ? *v : kNaN; }

// Child-stream ids under one repetition's spec.
enum StreamId : std::uint64_t {
  kStreamCohortSplit = 4,
  kStreamDevSplit = 5,
  kStreamNaiveBoot = 6,
  kStreamWeightedBoot = 7,
};

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::naive: return "naive";
    case Method::naive_boot: return "naive_boot";
    case Method::weighted_boot: return "weighted_boot";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "naive") return Method::naive;
  if (name == "naive_boot") return Method::naive_boot;
  if (name == "weighted_boot") return Method::weighted_boot;
  throw ParseError("unknown method '" + name +
                   "' (expected naive, naive_boot or weighted_boot)");
}

const std::array<std::string, kMeasureCount>& measure_names() {
  static const std::array<std::string, kMeasureCount> names = {
      "accuracy", "sensitivity", "specificity", "ppv", "tp", "tn", "fp", "fn"};
  return names;
}

const std::array<std::string, kSurvStatCount>& surv_stat_names() {
  static const std::array<std::string, kSurvStatCount> names = {"s90", "s365", "median"};
  return names;
}

void RunConfig::validate() const {
  if (scenario < 1 || scenario > 3) throw ParseError("config: scenario must be 1..3");
  if (n < 12) throw ParseError("config: n must be >= 12");
  if (n_reps < 1) throw ParseError("config: n_reps must be >= 1");
  const bool boot = methods.contains(Method::naive_boot) ||
                    methods.contains(Method::weighted_boot);
  if (boot && n_boot < 2) throw ParseError("config: n_boot must be >= 2 for bootstrap methods");
  if (static_cast<int>(alpha.size()) != kK) throw ParseError("config: alpha needs one value per class");
  for (double a : alpha) {
    if (!(a > 0.0 && a < 1.0)) throw ParseError("config: alpha values must lie in (0,1)");
  }
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw ParseError("config: ci level must lie in (0,1)");
  if (weibull_a <= 0 || weibull_b <= 0 || censor_horizon <= 0) {
    throw ParseError("config: weibull/censoring parameters must be positive");
  }
  if (threads < 0) throw ParseError("config: threads must be >= 0");
}

namespace {

// Layout of the per-resample statistic vector (all methods share it).
struct StatLayout {
  int coverage0 = 0;                        // k coverage slots
  int measures0 = kK;                       // kMeasureCount * (k + 1)
  int surv0 = kK + kMeasureCount * (kK + 1);  // k * kSurvStatCount predicted
  int bias0 = surv0 + kK * kSurvStatCount;  // k * kSurvStatCount bias
  int total = bias0 + kK * kSurvStatCount;
};

// Evaluates every pipeline statistic for one labeled (sub)sample.
// `rows` indexes into the validation cohort; `labels` are that draw's
// assigned labels; `sets` are the full-cohort label sets (null for naive).
void eval_stats(const std::vector<std::size_t>& rows, const std::vector<int>& labels,
                const LabeledDataset& val, const LabelSets* sets,
                const std::vector<int>& argmax_labels,
                const std::vector<StratumEstimates>& observed, std::span<double> out) {
  const StatLayout lay;

  // Coverage of the label sets (argmax singletons for the naive methods).
  std::array<long, kK> denom{}, numer{};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int y = val.labels[rows[i]];
    ++denom[static_cast<std::size_t>(y - 1)];
    const bool covered = sets != nullptr ? sets->contains(rows[i], y)
                                         : argmax_labels[rows[i]] == y;
    if (covered) ++numer[static_cast<std::size_t>(y - 1)];
  }
  for (int c = 0; c < kK; ++c) {
    out[static_cast<std::size_t>(lay.coverage0 + c)] =
        denom[static_cast<std::size_t>(c)] > 0
            ? static_cast<double>(numer[static_cast<std::size_t>(c)]) /
                  static_cast<double>(denom[static_cast<std::size_t>(c)])
            : kNaN;
  }

  // Classification measures against the true labels of the drawn rows.
  std::vector<int> truth(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) truth[i] = val.labels[rows[i]];
  const ConfusionCounts cc = confusion_counts(labels, truth, kK);
  const ClassMetrics m = class_metrics(cc);
  auto put = [&](int measure, int cls, double v) {
    out[static_cast<std::size_t>(lay.measures0 + measure * (kK + 1) + cls)] = v;
  };
  for (int c = 0; c < kK; ++c) {
    const auto ci = static_cast<std::size_t>(c);
    put(0, c, m.accuracy[ci]);
    put(1, c, m.sensitivity[ci]);
    put(2, c, m.specificity[ci]);
    put(3, c, m.ppv[ci]);
    put(4, c, static_cast<double>(cc.tp[ci]));
    put(5, c, static_cast<double>(cc.tn[ci]));
    put(6, c, static_cast<double>(cc.fp[ci]));
    put(7, c, static_cast<double>(cc.fn[ci]));
  }
  put(0, kK, m.macro_accuracy);
  put(1, kK, m.macro_sensitivity);
  put(2, kK, m.macro_specificity);
  put(3, kK, m.macro_ppv);
  for (int meas = 4; meas < kMeasureCount; ++meas) put(meas, kK, kNaN);

  // Survival by assigned-label stratum, plus bias against the observed
  // strata of the full validation cohort.
  SurvivalData sd;
  sd.time.reserve(rows.size());
  sd.event.reserve(rows.size());
  for (std::size_t r : rows) {
    sd.time.push_back(val.survival->time[r]);
    sd.event.push_back(val.survival->event[r]);
  }
  const std::vector<StratumEstimates> pred = stratified_estimates(sd, labels, kK);
  const std::vector<ClassBias> bias = survival_bias(pred, observed);
  for (int c = 0; c < kK; ++c) {
    const auto ci = static_cast<std::size_t>(c);
    out[static_cast<std::size_t>(lay.surv0 + c * kSurvStatCount + 0)] = opt_to_nan(pred[ci].s90);
    out[static_cast<std::size_t>(lay.surv0 + c * kSurvStatCount + 1)] = opt_to_nan(pred[ci].s365);
    out[static_cast<std::size_t>(lay.surv0 + c * kSurvStatCount + 2)] = opt_to_nan(pred[ci].median);
    out[static_cast<std::size_t>(lay.bias0 + c * kSurvStatCount + 0)] = opt_to_nan(bias[ci].s90);
    out[static_cast<std::size_t>(lay.bias0 + c * kSurvStatCount + 1)] = opt_to_nan(bias[ci].s365);
    out[static_cast<std::size_t>(lay.bias0 + c * kSurvStatCount + 2)] = opt_to_nan(bias[ci].median);
  }
}

MethodRepResult unpack_stats(const std::vector<StatCell>& cells) {
  const StatLayout lay;
  MethodRepResult r;
  r.coverage.assign(kK, {});
  for (int c = 0; c < kK; ++c) {
    r.coverage[static_cast<std::size_t>(c)] = cells[static_cast<std::size_t>(lay.coverage0 + c)];
  }
  for (int meas = 0; meas < kMeasureCount; ++meas) {
    r.measures[static_cast<std::size_t>(meas)].assign(kK + 1, {});
    for (int c = 0; c <= kK; ++c) {
      r.measures[static_cast<std::size_t>(meas)][static_cast<std::size_t>(c)] =
          cells[static_cast<std::size_t>(lay.measures0 + meas * (kK + 1) + c)];
    }
  }
  r.surv_pred.assign(kK, {});
  r.surv_bias.assign(kK, {});
  for (int c = 0; c < kK; ++c) {
    for (int s = 0; s < kSurvStatCount; ++s) {
      r.surv_pred[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)] =
          cells[static_cast<std::size_t>(lay.surv0 + c * kSurvStatCount + s)];
      r.surv_bias[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)] =
          cells[static_cast<std::size_t>(lay.bias0 + c * kSurvStatCount + s)];
    }
  }
  return r;
}

std::vector<StatCell> point_cells(const std::vector<double>& values) {
  std::vector<StatCell> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    out[i] = StatCell{v, kNaN, kNaN, std::isnan(v) ? 0L : 1L};
  }
  return out;
}

std::vector<StatCell> summary_cells(const std::vector<BootstrapSummary>& sums) {
  std::vector<StatCell> out(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) {
    out[i] = StatCell{sums[i].mean, sums[i].lo, sums[i].hi, sums[i].defined};
  }
  return out;
}

}  // namespace

RepResult run_scenario_rep(const RunConfig& cfg, int rep) {
  cfg.validate();
  const RngSpec master{cfg.master_seed, 0};
  const RngSpec rep_spec = master.child(static_cast<std::uint64_t>(rep));

  SimConfig sim;
  sim.n = cfg.n;
  sim.scenario = cfg.scenario;
  sim.weibull_a = cfg.weibull_a;
  sim.weibull_b = cfg.weibull_b;
  sim.beta_scale = cfg.beta_scale;
  sim.censor_horizon = cfg.censor_horizon;
  sim.label_mode = cfg.label_mode;
  sim.rng = rep_spec;

  RepResult out;
  out.rep = rep;
  out.stream_seed = rep_spec.mixed();

  const LabeledDataset ds = generate_dataset(sim);
  const std::vector<int>& mask = scenario_mask(cfg.scenario);

  Rng rng_cohort(rep_spec.child(kStreamCohortSplit));
  const auto [dev_rows, val_rows] = split_cohorts(ds, kK, rng_cohort);
  const LabeledDataset dev = select_rows(ds, dev_rows);
  const LabeledDataset val = select_rows(ds, val_rows);
  const FeatureMatrix dev_X = select_columns(dev.features, mask);
  const FeatureMatrix val_X = select_columns(val.features, mask);

  out.val_class_counts.assign(kK, 0);
  for (int y : val.labels) ++out.val_class_counts[static_cast<std::size_t>(y - 1)];

  const LabelSpace space(kK);
  const std::vector<StratumEstimates> observed =
      stratified_estimates(*val.survival, val.labels, kK);
  for (const StratumEstimates& e : observed) {
    out.observed_surv.push_back(
        {opt_to_nan(e.s90), opt_to_nan(e.s365), opt_to_nan(e.median)});
  }

  const StatLayout lay;
  const bool want_naive = cfg.methods.contains(Method::naive);
  const bool want_naive_boot = cfg.methods.contains(Method::naive_boot);
  const bool want_weighted = cfg.methods.contains(Method::weighted_boot);

  // ---- naive path: fit on the full development cohort, argmax labels ----
  std::vector<int> naive_labels;
  if (want_naive || want_naive_boot) {
    LabeledDataset fit_ds{dev_X, dev.labels, std::nullopt};
    const MultinomialModel model = fit_multinomial(fit_ds, space, cfg.penalty, cfg.opt);
    out.fit_converged = out.fit_converged && model.fit_meta.converged;
    if (cfg.strict && !model.fit_meta.converged) {
      throw NonConvergence("repetition " + std::to_string(rep) +
                           ": development fit did not converge");
    }
    const ClassProbabilities probs = predict_proba(model, val_X);
    naive_labels = argmax_label(probs);

    if (want_naive) {
      const std::size_t n_val = static_cast<std::size_t>(val.n());
      std::vector<std::size_t> all(n_val);
      for (std::size_t i = 0; i < n_val; ++i) all[i] = i;
      std::vector<double> stats(static_cast<std::size_t>(lay.total), kNaN);
      eval_stats(all, naive_labels, val, nullptr, naive_labels, observed,
                 std::span<double>(stats));
      out.methods[method_name(Method::naive)] = unpack_stats(point_cells(stats));
    }
    if (want_naive_boot) {
      const LabelSets argmax_sets = singleton_sets(naive_labels, kK);
      const auto sums = run_bootstrap_vec(
          static_cast<std::size_t>(val.n()), nullptr, naive_labels,
          LabelerKind::naive_argmax, static_cast<std::size_t>(lay.total),
          [&](const BootstrapDraw& draw, std::span<double> sout) {
            eval_stats(draw.idx, draw.labels, val, &argmax_sets, naive_labels,
                       observed, sout);
          },
          cfg.n_boot, rep_spec.child(kStreamNaiveBoot), cfg.ci_level);
      out.methods[method_name(Method::naive_boot)] = unpack_stats(summary_cells(sums));
    }
  }

  // ---- weighted path: split development, fit/calibrate, label sets -------
  if (want_weighted) {
    Rng rng_dev(rep_spec.child(kStreamDevSplit));
    const SplitIndices split = split_development(dev.labels, kK, rng_dev);
    const LabeledDataset d1 = select_rows(dev, split.i1);
    const LabeledDataset d2 = select_rows(dev, split.i2);
    LabeledDataset fit_ds{select_columns(d1.features, mask), d1.labels, std::nullopt};
    const MultinomialModel model = fit_multinomial(fit_ds, space, cfg.penalty, cfg.opt);
    out.fit_converged = out.fit_converged && model.fit_meta.converged;
    if (cfg.strict && !model.fit_meta.converged) {
      throw NonConvergence("repetition " + std::to_string(rep) +
                           ": fitting-half fit did not converge");
    }
    const ClassProbabilities probs_i2 =
        predict_proba(model, select_columns(d2.features, mask));
    const ThresholdVector tv = estimate_thresholds(probs_i2, d2.labels, cfg.alpha);
    out.thresholds = tv.t;
    out.calib_counts = tv.calib_counts;

    const ClassProbabilities probs_val = predict_proba(model, val_X);
    const LabelSets sets = build_label_sets(probs_val, tv);
    out.weighted_cover_point = class_coverage(sets, val.labels);
    out.ambiguity = ambiguity_profile(sets, val.labels);

    const auto sums = run_bootstrap_vec(
        static_cast<std::size_t>(val.n()), &sets, {},
        LabelerKind::weighted_set_sampler, static_cast<std::size_t>(lay.total),
        [&](const BootstrapDraw& draw, std::span<double> sout) {
          eval_stats(draw.idx, draw.labels, val, &sets, {}, observed, sout);
        },
        cfg.n_boot, rep_spec.child(kStreamWeightedBoot), cfg.ci_level);
    out.methods[method_name(Method::weighted_boot)] = unpack_stats(summary_cells(sums));
  }

  return out;
}

RepetitionReport run_scenario(const RunConfig& cfg) { return run_repetitions(cfg, 1); }

RepetitionReport run_repetitions(const RunConfig& cfg, int n_reps) {
  cfg.validate();
  if (n_reps < 1) throw ParseError("run_repetitions: n_reps must be >= 1");

  RepetitionReport report;
  report.config = cfg;
  report.config.n_reps = n_reps;
  report.reps.resize(static_cast<std::size_t>(n_reps));

  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min(workers, static_cast<unsigned>(n_reps)));

  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_reps));
  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      const int rep = next.fetch_add(1);
      if (rep >= n_reps) return;
      try {
        report.reps[static_cast<std::size_t>(rep)] = run_scenario_rep(cfg, rep);
      } catch (...) {
        errors[static_cast<std::size_t>(rep)] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // Report the lowest failed repetition (deterministic across schedules).
  for (int rep = 0; rep < n_reps; ++rep) {
    if (errors[static_cast<std::size_t>(rep)]) {
      const std::uint64_t seed =
          RngSpec{cfg.master_seed, 0}.child(static_cast<std::uint64_t>(rep)).mixed();
      try {
        std::rethrow_exception(errors[static_cast<std::size_t>(rep)]);
      } catch (const std::exception& e) {
        throw std::runtime_error("repetition " + std::to_string(rep) +
                                 " failed (master_seed=" + std::to_string(cfg.master_seed) +
                                 ", stream_seed=" + std::to_string(seed) + "): " + e.what());
      }
    }
  }
  return report;
}

AggregateStat aggregate_values(const std::vector<double>& values) {
  std::vector<double> defined;
  defined.reserve(values.size());
  for (double v : values) {
    if (!std::isnan(v)) defined.push_back(v);
  }
  AggregateStat a;
  a.defined = static_cast<long>(defined.size());
  a.boot_lo = a.boot_hi = kNaN;
  if (defined.empty()) {
    a.mean = a.sd = a.pr_lo = a.pr_hi = a.ci196_lo = a.ci196_hi = kNaN;
    return a;
  }
  double m = 0.0;
  for (double v : defined) m += v;
  a.mean = m / static_cast<double>(defined.size());
  if (defined.size() >= 2) {
    const RepetitionInterval pr = repetition_interval(defined, 0.95);
    const RepetitionInterval ci = repetition_interval(defined, 1.96);
    a.sd = pr.sd;
    a.pr_lo = pr.lo;
    a.pr_hi = pr.hi;
    a.ci196_lo = ci.lo;
    a.ci196_hi = ci.hi;
  } else {
    a.sd = 0.0;
    a.pr_lo = a.pr_hi = a.ci196_lo = a.ci196_hi = a.mean;
  }
  return a;
}

AggregateStat aggregate_cells(const std::vector<StatCell>& cells) {
  std::vector<double> means, los, his;
  for (const StatCell& c : cells) {
    if (c.defined > 0 && !std::isnan(c.mean)) means.push_back(c.mean);
    if (!std::isnan(c.lo)) los.push_back(c.lo);
    if (!std::isnan(c.hi)) his.push_back(c.hi);
  }
  AggregateStat a = aggregate_values(means);
  auto mean_of = [](const std::vector<double>& v) {
    if (v.empty()) return kNaN;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  a.boot_lo = mean_of(los);
  a.boot_hi = mean_of(his);
  return a;
}

Aggregates aggregate(const RepetitionReport& report) {
  Aggregates agg;
  const std::vector<RepResult>& reps = report.reps;
  const std::size_t R = reps.size();

  auto collect = [&](auto&& extract) {
    std::vector<StatCell> cells;
    cells.reserve(R);
    for (const RepResult& r : reps) cells.push_back(extract(r));
    return aggregate_cells(cells);
  };
  auto collect_value = [&](auto&& extract) {
    std::vector<double> vals;
    vals.reserve(R);
    for (const RepResult& r : reps) vals.push_back(extract(r));
    return aggregate_values(vals);
  };

  const bool has_weighted = !reps.empty() && !reps.front().thresholds.empty();
  if (has_weighted) {
    for (int c = 0; c < kK; ++c) {
      agg.thresholds.push_back(collect_value([c](const RepResult& r) {
        return r.thresholds[static_cast<std::size_t>(c)];
      }));
      agg.weighted_cover_point.push_back(collect_value([c](const RepResult& r) {
        return r.weighted_cover_point[static_cast<std::size_t>(c)];
      }));
    }
    agg.singleton_share_overall = collect_value([](const RepResult& r) {
      long n = 0;
      for (long v : r.ambiguity.overall) n += v;
      return n > 0 ? static_cast<double>(r.ambiguity.overall[1]) / static_cast<double>(n)
                   : kNaN;
    });
    for (int c = 0; c < kK; ++c) {
      agg.singleton_share_by_class.push_back(collect_value([c](const RepResult& r) {
        const auto& row = r.ambiguity.by_class[static_cast<std::size_t>(c)];
        long n = 0;
        for (long v : row) n += v;
        return n > 0 ? static_cast<double>(row[1]) / static_cast<double>(n) : kNaN;
      }));
    }
    for (int card = 0; card <= kK; ++card) {
      agg.ambiguity_share_overall.push_back(collect_value([card](const RepResult& r) {
        long n = 0;
        for (long v : r.ambiguity.overall) n += v;
        return n > 0 ? static_cast<double>(r.ambiguity.overall[static_cast<std::size_t>(card)]) /
                           static_cast<double>(n)
                     : kNaN;
      }));
    }
    for (int c = 0; c < kK; ++c) {
      agg.ambiguity_share_by_class.emplace_back();
      for (int card = 0; card <= kK; ++card) {
        agg.ambiguity_share_by_class.back().push_back(
            collect_value([c, card](const RepResult& r) {
              const auto& row = r.ambiguity.by_class[static_cast<std::size_t>(c)];
              long n = 0;
              for (long v : row) n += v;
              return n > 0 ? static_cast<double>(row[static_cast<std::size_t>(card)]) /
                                 static_cast<double>(n)
                           : kNaN;
            }));
      }
    }
  }

  for (int c = 0; c < kK; ++c) {
    std::array<AggregateStat, kSurvStatCount> per_stat;
    for (int s = 0; s < kSurvStatCount; ++s) {
      per_stat[static_cast<std::size_t>(s)] = collect_value([c, s](const RepResult& r) {
        return r.observed_surv[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)];
      });
    }
    agg.observed_surv.push_back(per_stat);
  }

  if (!reps.empty()) {
    for (const auto& [name, first] : reps.front().methods) {
      (void)first;
      std::vector<AggregateStat> cov;
      for (int c = 0; c < kK; ++c) {
        cov.push_back(collect([&name, c](const RepResult& r) {
          return r.methods.at(name).coverage[static_cast<std::size_t>(c)];
        }));
      }
      agg.coverage[name] = std::move(cov);

      std::array<std::vector<AggregateStat>, kMeasureCount> meas;
      for (int m = 0; m < kMeasureCount; ++m) {
        for (int c = 0; c <= kK; ++c) {
          meas[static_cast<std::size_t>(m)].push_back(collect([&name, m, c](const RepResult& r) {
            return r.methods.at(name).measures[static_cast<std::size_t>(m)][static_cast<std::size_t>(c)];
          }));
        }
      }
      agg.measures[name] = std::move(meas);

      std::vector<std::array<AggregateStat, kSurvStatCount>> pred(kK), bias(kK);
      for (int c = 0; c < kK; ++c) {
        for (int s = 0; s < kSurvStatCount; ++s) {
          pred[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)] =
              collect([&name, c, s](const RepResult& r) {
                return r.methods.at(name).surv_pred[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)];
              });
          bias[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)] =
              collect([&name, c, s](const RepResult& r) {
                return r.methods.at(name).surv_bias[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)];
              });
        }
      }
      agg.surv_pred[name] = std::move(pred);
      agg.surv_bias[name] = std::move(bias);
    }
  }
  return agg;
}

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for write: " + path);
  out << text;
  if (!out) throw ParseError("write failed: " + path);
}

std::string fmt(double v) { return io::format_double(v); }

}  // namespace

void emit_report(const RepetitionReport& report, const std::set<std::string>& formats,
                 const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto path = [&](const std::string& name) {
    return (fs::path(out_dir) / name).string();
  };

  write_file(path("config.txt"), config_sidecar(report.config));
  if (report.config.methods.empty()) return;  // only config/dataset artifacts

  if (formats.contains("json")) {
    write_file(path("report.json"), report_to_json(report));
  }
  if (!formats.contains("csv")) return;

  const int scen = report.config.scenario;
  const bool has_weighted = report.config.methods.contains(Method::weighted_boot);

  {
    std::string s = "scenario,rep,method,class,coverage,lo,hi,defined\n";
    for (const RepResult& r : report.reps) {
      for (const auto& [name, mres] : r.methods) {
        for (int c = 0; c < kK; ++c) {
          const StatCell& cell = mres.coverage[static_cast<std::size_t>(c)];
          s += std::to_string(scen) + "," + std::to_string(r.rep) + "," + name + "," +
               std::to_string(c + 1) + "," + fmt(cell.mean) + "," + fmt(cell.lo) + "," +
               fmt(cell.hi) + "," + std::to_string(cell.defined) + "\n";
        }
      }
    }
    write_file(path("coverage.csv"), s);
  }

  if (has_weighted) {
    std::string s = "scenario,rep,class,threshold,alpha,calib_count\n";
    for (const RepResult& r : report.reps) {
      for (int c = 0; c < kK; ++c) {
        s += std::to_string(scen) + "," + std::to_string(r.rep) + "," +
             std::to_string(c + 1) + "," + fmt(r.thresholds[static_cast<std::size_t>(c)]) +
             "," + fmt(report.config.alpha[static_cast<std::size_t>(c)]) + "," +
             std::to_string(r.calib_counts[static_cast<std::size_t>(c)]) + "\n";
      }
    }
    write_file(path("thresholds.csv"), s);

    s = "scenario,rep,class,cardinality,count\n";
    for (const RepResult& r : report.reps) {
      for (int card = 0; card <= kK; ++card) {
        s += std::to_string(scen) + "," + std::to_string(r.rep) + ",all," +
             std::to_string(card) + "," +
             std::to_string(r.ambiguity.overall[static_cast<std::size_t>(card)]) + "\n";
      }
      for (int c = 0; c < kK; ++c) {
        for (int card = 0; card <= kK; ++card) {
          s += std::to_string(scen) + "," + std::to_string(r.rep) + "," +
               std::to_string(c + 1) + "," + std::to_string(card) + "," +
               std::to_string(
                   r.ambiguity.by_class[static_cast<std::size_t>(c)][static_cast<std::size_t>(card)]) +
               "\n";
        }
      }
    }
    write_file(path("ambiguity.csv"), s);
  }

  const Aggregates agg = aggregate(report);

  {
    std::string s = "scenario,method,class,measure,mean,sd,lo,hi,defined_reps\n";
    for (const auto& [name, meas] : agg.measures) {
      for (int m = 0; m < kMeasureCount; ++m) {
        for (int c = 0; c <= kK; ++c) {
          const AggregateStat& a = meas[static_cast<std::size_t>(m)][static_cast<std::size_t>(c)];
          if (c == kK && m >= 4) continue;  // counts have no macro row
          const std::string cls = c == kK ? "macro" : std::to_string(c + 1);
          s += std::to_string(scen) + "," + name + "," + cls + "," +
               measure_names()[static_cast<std::size_t>(m)] + "," + fmt(a.mean) + "," +
               fmt(a.sd) + "," + fmt(a.boot_lo) + "," + fmt(a.boot_hi) + "," +
               std::to_string(a.defined) + "\n";
        }
      }
    }
    write_file(path("metrics.csv"), s);
  }

  {
    const std::string algo = "multinomial";
    std::string s = "method,algorithm,class,statistic,estimate,lo,hi,defined_count\n";
    auto add_rows = [&](const std::string& method, int cls, const std::string& stat,
                        const AggregateStat& a) {
      s += method + "," + algo + "," + std::to_string(cls + 1) + "," + stat + "," +
           fmt(a.mean) + "," + fmt(a.pr_lo) + "," + fmt(a.pr_hi) + "," +
           std::to_string(a.defined) + "\n";
      s += method + "," + algo + "," + std::to_string(cls + 1) + "," + stat +
           "_1.96sd," + fmt(a.mean) + "," + fmt(a.ci196_lo) + "," + fmt(a.ci196_hi) +
           "," + std::to_string(a.defined) + "\n";
    };
    for (const auto& [name, pred] : agg.surv_pred) {
      for (int c = 0; c < kK; ++c) {
        for (int st = 0; st < kSurvStatCount; ++st) {
          add_rows(name, c, surv_stat_names()[static_cast<std::size_t>(st)],
                   pred[static_cast<std::size_t>(c)][static_cast<std::size_t>(st)]);
          add_rows(name, c, "bias_" + surv_stat_names()[static_cast<std::size_t>(st)],
                   agg.surv_bias.at(name)[static_cast<std::size_t>(c)][static_cast<std::size_t>(st)]);
        }
      }
    }
    for (int c = 0; c < kK; ++c) {
      for (int st = 0; st < kSurvStatCount; ++st) {
        add_rows("observed", c, surv_stat_names()[static_cast<std::size_t>(st)],
                 agg.observed_surv[static_cast<std::size_t>(c)][static_cast<std::size_t>(st)]);
      }
    }
    write_file(path("survival.csv"), s);
  }
}

}  // namespace setlabel
