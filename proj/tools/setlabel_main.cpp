// setlabel: batch CLI over the set-valued labeling library.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "setlabel/bootstrap.hpp"
#include "setlabel/conformal.hpp"
#include "setlabel/estimators.hpp"
#include "setlabel/io.hpp"
#include "setlabel/labeling.hpp"
#include "setlabel/metrics.hpp"
#include "setlabel/pipeline.hpp"
#include "setlabel/serialize.hpp"
#include "setlabel/simgen.hpp"
#include "setlabel/survival.hpp"

namespace {

using namespace setlabel;
namespace fs = std::filesystem;

std::string join_path(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for write: " + path);
  out << text;
  if (!out) throw ParseError("write failed: " + path);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_alpha(const std::string& s, int k) {
  std::vector<double> vals;
  for (const std::string& tok : split_csv(s)) vals.push_back(std::stod(tok));
  if (vals.empty()) throw ParseError("--alpha: empty list");
  if (static_cast<int>(vals.size()) == 1) vals.assign(static_cast<std::size_t>(k), vals[0]);
  if (static_cast<int>(vals.size()) != k) {
    throw ParseError("--alpha: expected 1 or " + std::to_string(k) + " values");
  }
  return vals;
}

std::set<Method> parse_methods(const std::string& s) {
  std::set<Method> out;
  if (s == "none") return out;
  if (s == "all") {
    return {Method::naive, Method::naive_boot, Method::weighted_boot};
  }
  for (const std::string& tok : split_csv(s)) out.insert(parse_method(tok));
  return out;
}

SimConfig::LabelMode parse_label_mode(const std::string& s) {
  if (s == "categorical_draw") return SimConfig::LabelMode::categorical_draw;
  if (s == "argmax") return SimConfig::LabelMode::argmax;
  throw ParseError("--label-mode: expected categorical_draw or argmax");
}

Penalty make_penalty(const std::string& kind, double lambda, double mix) {
  if (kind == "none") return Penalty::none();
  if (kind == "ridge") return Penalty::ridge(lambda);
  if (kind == "lasso") return Penalty::lasso(lambda);
  if (kind == "enet") return Penalty::elastic_net(lambda, mix);
  throw ParseError("--penalty: expected none, ridge, lasso or enet");
}

int infer_k(const std::vector<int>& labels) {
  int k = 2;
  for (int y : labels) k = std::max(k, y);
  return k;
}

// Probabilities for a command that accepts either a fitted model or an
// external probability CSV (exactly one of the two).
ClassProbabilities resolve_probs(const std::string& model_path, const std::string& probs_path,
                                 const LabeledDataset* ds, int k) {
  if (model_path.empty() == probs_path.empty()) {
    throw ParseError("provide exactly one of --model and --probs");
  }
  if (!model_path.empty()) {
    if (ds == nullptr) throw ParseError("--model needs --data for the feature matrix");
    return predict_proba(load_model(model_path), ds->features);
  }
  return ingest_probabilities(probs_path, LabelSpace(k));
}

std::string fmt_cell(double v, int digits = 3) {
  if (std::isnan(v)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// ---- subcommand bodies -----------------------------------------------------

struct SimulateArgs {
  int scenario = 1;
  int n = 2000;
  std::uint64_t seed = 33;
  std::string label_mode = "categorical_draw";
  std::string out = "out";
  bool write_probs = false;
};

int cmd_simulate(const SimulateArgs& a) {
  SimConfig cfg;
  cfg.n = a.n;
  cfg.scenario = a.scenario;
  cfg.label_mode = parse_label_mode(a.label_mode);
  // Same stream a pipeline run with this master seed gives repetition 0.
  cfg.rng = RngSpec{a.seed, 0}.child(0);
  const LabeledDataset ds = generate_dataset(cfg);
  io::write_dataset(join_path(a.out, "dataset.csv"), ds);
  if (a.write_probs) {
    io::write_probabilities(join_path(a.out, "true_probs.csv"),
                            sim_class_probabilities(ds.features));
  }
  long events = 0;
  for (std::uint8_t e : ds.survival->event) events += e;
  std::cout << "wrote " << a.out << "/dataset.csv: n=" << ds.n() << " p=" << ds.features.p()
            << " events=" << events << "\n";
  return 0;
}

struct FitArgs {
  std::string data, out = "out";
  std::string penalty = "none";
  double lambda = 0.0, mix = 0.5, tol = 1e-8;
  int max_iter = 500, k = 0;
  bool require_convergence = false;
};

int cmd_fit(const FitArgs& a) {
  const LabeledDataset ds = io::read_dataset(a.data);
  const int k = a.k > 0 ? a.k : infer_k(ds.labels);
  OptConfig opt;
  opt.tol = a.tol;
  opt.max_iter = a.max_iter;
  opt.require_convergence = a.require_convergence;
  const MultinomialModel model =
      fit_multinomial(ds, LabelSpace(k), make_penalty(a.penalty, a.lambda, a.mix), opt);
  save_model(join_path(a.out, "model.json"), model);
  std::cout << "wrote " << a.out << "/model.json: k=" << model.k << " p=" << model.p
            << " iterations=" << model.fit_meta.iterations
            << " objective=" << io::format_double(model.fit_meta.objective)
            << " converged=" << (model.fit_meta.converged ? "yes" : "no") << "\n";
  return 0;
}

struct ThresholdsArgs {
  std::string data, model, probs, out = "out";
  std::string alpha = "0.1";
};

int cmd_thresholds(const ThresholdsArgs& a) {
  const LabeledDataset ds = io::read_dataset(a.data);
  const int k = infer_k(ds.labels);
  const ClassProbabilities probs = resolve_probs(a.model, a.probs, &ds, k);
  const ThresholdVector tv = estimate_thresholds(probs, ds.labels, parse_alpha(a.alpha, k));
  save_thresholds(join_path(a.out, "thresholds.json"), tv);
  std::cout << "wrote " << a.out << "/thresholds.json:";
  for (std::size_t c = 0; c < tv.t.size(); ++c) {
    std::cout << " t" << c + 1 << "=" << io::format_double(tv.t[c]) << " (m=" << tv.calib_counts[c]
              << ")";
  }
  std::cout << "\n";
  return 0;
}

struct ClassifyArgs {
  std::string data, model, probs, thresholds, out = "out";
  int k = 3;
};

int cmd_classify(const ClassifyArgs& a) {
  std::optional<LabeledDataset> ds;
  if (!a.data.empty()) ds = io::read_dataset(a.data);
  const int k = ds ? infer_k(ds->labels) : a.k;
  const ClassProbabilities pr = resolve_probs(a.model, a.probs, ds ? &*ds : nullptr, k);
  const ThresholdVector tv = load_thresholds(a.thresholds);
  const LabelSets sets = build_label_sets(pr, tv);

  std::string csv = "row";
  for (int c = 1; c <= sets.k; ++c) csv += ",c" + std::to_string(c);
  csv += ",cardinality\n";
  std::vector<long> hist(static_cast<std::size_t>(sets.k) + 1, 0);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    csv += std::to_string(i + 1);
    for (int c = 1; c <= sets.k; ++c) csv += sets.contains(i, c) ? ",1" : ",0";
    csv += "," + std::to_string(sets.cardinality(i)) + "\n";
    ++hist[static_cast<std::size_t>(sets.cardinality(i))];
  }
  write_text(join_path(a.out, "sets.csv"), csv);
  std::cout << "wrote " << a.out << "/sets.csv: n=" << sets.size() << " cardinality histogram:";
  for (std::size_t card = 0; card < hist.size(); ++card) {
    std::cout << " " << card << ":" << hist[card];
  }
  std::cout << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string data, model, probs, thresholds, out = "out";
};

int cmd_evaluate(const EvaluateArgs& a) {
  const LabeledDataset ds = io::read_dataset(a.data);
  const int k = infer_k(ds.labels);
  const ClassProbabilities pr = resolve_probs(a.model, a.probs, &ds, k);
  const std::vector<int> pred = argmax_label(pr);
  const ConfusionCounts cc = confusion_counts(pred, ds.labels, k);
  const ClassMetrics m = class_metrics(cc);

  std::string csv = "class,measure,value\n";
  auto row = [&](const std::string& cls, const std::string& meas, double v) {
    csv += cls + "," + meas + "," + io::format_double(v) + "\n";
  };
  for (int c = 0; c < k; ++c) {
    const auto ci = static_cast<std::size_t>(c);
    const std::string cls = std::to_string(c + 1);
    row(cls, "accuracy", m.accuracy[ci]);
    row(cls, "sensitivity", m.sensitivity[ci]);
    row(cls, "specificity", m.specificity[ci]);
    row(cls, "ppv", m.ppv[ci]);
    row(cls, "tp", static_cast<double>(cc.tp[ci]));
    row(cls, "tn", static_cast<double>(cc.tn[ci]));
    row(cls, "fp", static_cast<double>(cc.fp[ci]));
    row(cls, "fn", static_cast<double>(cc.fn[ci]));
  }
  row("macro", "accuracy", m.macro_accuracy);
  row("macro", "sensitivity", m.macro_sensitivity);
  row("macro", "specificity", m.macro_specificity);
  row("macro", "ppv", m.macro_ppv);

  if (!a.thresholds.empty()) {
    const LabelSets sets = build_label_sets(pr, load_thresholds(a.thresholds));
    const std::vector<double> cov = class_coverage(sets, ds.labels);
    for (int c = 0; c < k; ++c) {
      row(std::to_string(c + 1), "coverage", cov[static_cast<std::size_t>(c)]);
    }
    const AmbiguityProfile amb = ambiguity_profile(sets, ds.labels);
    for (int card = 0; card <= k; ++card) {
      row("all", "share_card" + std::to_string(card),
          static_cast<double>(amb.overall[static_cast<std::size_t>(card)]) /
              static_cast<double>(ds.n()));
    }
  }
  write_text(join_path(a.out, "metrics.csv"), csv);
  std::cout << "wrote " << a.out << "/metrics.csv: macro accuracy "
            << io::format_double(m.macro_accuracy) << ", macro sensitivity "
            << io::format_double(m.macro_sensitivity) << "\n";
  return 0;
}

struct SurvivalArgs {
  std::string data, model, probs, out = "out";
};

int cmd_survival(const SurvivalArgs& a) {
  const LabeledDataset ds = io::read_dataset(a.data);
  if (!ds.survival) throw ParseError(a.data + ": no time/event columns");
  const int k = infer_k(ds.labels);
  const std::vector<StratumEstimates> obs = stratified_estimates(*ds.survival, ds.labels, k);

  std::string csv = "strata,class,n,statistic,estimate\n";
  auto rows = [&](const std::string& strata, const std::vector<StratumEstimates>& est) {
    for (int c = 0; c < k; ++c) {
      const StratumEstimates& e = est[static_cast<std::size_t>(c)];
      auto row = [&](const std::string& stat, const std::optional<double>& v) {
        csv += strata + "," + std::to_string(c + 1) + "," + std::to_string(e.n) + "," + stat +
               "," + (v ? io::format_double(*v) : "") + "\n";
      };
      row("s90", e.s90);
      row("s365", e.s365);
      row("median", e.median);
    }
  };
  rows("observed", obs);

  if (!a.model.empty() || !a.probs.empty()) {
    const ClassProbabilities pr = resolve_probs(a.model, a.probs, &ds, k);
    const std::vector<int> pred_labels = argmax_label(pr);
    const std::vector<StratumEstimates> pred = stratified_estimates(*ds.survival, pred_labels, k);
    rows("predicted", pred);
    const std::vector<ClassBias> bias = survival_bias(pred, obs);
    for (int c = 0; c < k; ++c) {
      const ClassBias& b = bias[static_cast<std::size_t>(c)];
      auto row = [&](const std::string& stat, const std::optional<double>& v) {
        csv += "bias," + std::to_string(c + 1) + "," +
               std::to_string(pred[static_cast<std::size_t>(c)].n) + "," + stat + "," +
               (v ? io::format_double(*v) : "") + "\n";
      };
      row("s90", b.s90);
      row("s365", b.s365);
      row("median", b.median);
    }
  }
  write_text(join_path(a.out, "survival.csv"), csv);
  std::cout << "wrote " << a.out << "/survival.csv\n";
  return 0;
}

struct PipelineArgs {
  int scenario = 1;
  int n = 2000;
  int n_boot = 200;
  int n_reps = 200;
  std::string alpha = "0.1";
  std::string methods = "all";
  std::uint64_t seed = 33;
  std::string out = "out";
  std::string label_mode = "categorical_draw";
  std::string penalty = "none";
  double lambda = 0.0, mix = 0.5;
  int threads = 0;
  bool strict = false;
  std::string formats = "csv,json";
};

RunConfig make_run_config(const PipelineArgs& a) {
  RunConfig cfg;
  cfg.scenario = a.scenario;
  cfg.n = a.n;
  cfg.n_boot = a.n_boot;
  cfg.n_reps = a.n_reps;
  cfg.alpha = parse_alpha(a.alpha, 3);
  cfg.methods = parse_methods(a.methods);
  cfg.penalty = make_penalty(a.penalty, a.lambda, a.mix);
  cfg.label_mode = parse_label_mode(a.label_mode);
  cfg.master_seed = a.seed;
  cfg.threads = a.threads;
  cfg.strict = a.strict;
  cfg.out_dir = a.out;
  cfg.validate();
  return cfg;
}

void print_pipeline_summary(const RepetitionReport& report) {
  const Aggregates agg = aggregate(report);
  if (!agg.thresholds.empty()) {
    std::cout << "thresholds:";
    for (const AggregateStat& a : agg.thresholds) std::cout << " " << fmt_cell(a.mean);
    std::cout << "  singleton share " << fmt_cell(agg.singleton_share_overall.mean) << "\n";
  }
  for (const auto& [name, cov] : agg.coverage) {
    std::cout << name << " coverage:";
    for (const AggregateStat& a : cov) std::cout << " " << fmt_cell(a.mean);
    const auto& acc = agg.measures.at(name)[0];
    std::cout << "  macro accuracy " << fmt_cell(acc.back().mean) << "\n";
  }
}

int cmd_pipeline(const PipelineArgs& a) {
  const RunConfig cfg = make_run_config(a);
  const RepetitionReport report = run_repetitions(cfg, cfg.n_reps);
  std::set<std::string> formats;
  for (const std::string& f : split_csv(a.formats)) {
    if (f != "csv" && f != "json") throw ParseError("--formats: expected csv and/or json");
    formats.insert(f);
  }
  emit_report(report, formats, a.out);
  std::cout << "scenario " << cfg.scenario << ", " << cfg.n_reps << " repetitions -> " << a.out
            << "\n";
  print_pipeline_summary(report);
  return 0;
}

struct ReproduceArgs {
  std::string out = "tables";
  std::string scale = "desk";
  std::uint64_t seed = 33;
  int threads = 0;
  int n_reps = 0;  // 0 = scale default
  int n_boot = 0;
};

std::string markdown_tables(const std::vector<RepetitionReport>& reports) {
  std::ostringstream md;
  std::vector<Aggregates> aggs;
  for (const RepetitionReport& r : reports) aggs.push_back(aggregate(r));
  const auto& cfg0 = reports.front().config;

  md << "# Simulation study tables\n\n";
  md << "Settings: n=" << cfg0.n << ", repetitions=" << cfg0.n_reps << ", resamples="
     << cfg0.n_boot << ", seed=" << cfg0.master_seed << ". Cells are means across "
     << "repetitions; intervals are mean +/- 0.95 sd across repetitions.\n\n";

  md << "## Weighted labeling thresholds\n\n";
  md << "| Scenario | Class 1 | Class 2 | Class 3 |\n|---|---|---|---|\n";
  for (std::size_t s = 0; s < aggs.size(); ++s) {
    md << "| " << reports[s].config.scenario << " |";
    for (const AggregateStat& a : aggs[s].thresholds) {
      md << " " << fmt_cell(a.mean) << " (" << fmt_cell(a.sd) << ") |";
    }
    md << "\n";
  }

  md << "\n## Bootstrap-based coverage\n\n";
  md << "| Scenario | Method | Class 1 | Class 2 | Class 3 |\n|---|---|---|---|---|\n";
  for (std::size_t s = 0; s < aggs.size(); ++s) {
    for (const auto& [name, cov] : aggs[s].coverage) {
      md << "| " << reports[s].config.scenario << " | " << name << " |";
      for (const AggregateStat& a : cov) {
        md << " " << fmt_cell(a.mean) << " (" << fmt_cell(a.pr_lo) << ", " << fmt_cell(a.pr_hi)
           << ") |";
      }
      md << "\n";
    }
  }

  md << "\n## Singleton and ambiguity shares (weighted sets)\n\n";
  md << "| Scenario | Empty | Singleton | Pair | Full |\n|---|---|---|---|---|\n";
  for (std::size_t s = 0; s < aggs.size(); ++s) {
    md << "| " << reports[s].config.scenario << " |";
    for (const AggregateStat& a : aggs[s].ambiguity_share_overall) {
      md << " " << fmt_cell(a.mean) << " |";
    }
    md << "\n";
  }

  md << "\n## Classification measures (macro across classes)\n\n";
  md << "| Scenario | Method | Accuracy | Sensitivity | Specificity | PPV |\n"
     << "|---|---|---|---|---|---|\n";
  for (std::size_t s = 0; s < aggs.size(); ++s) {
    for (const auto& [name, meas] : aggs[s].measures) {
      md << "| " << reports[s].config.scenario << " | " << name << " |";
      for (int m = 0; m < 4; ++m) {
        md << " " << fmt_cell(meas[static_cast<std::size_t>(m)].back().mean) << " |";
      }
      md << "\n";
    }
  }

  md << "\n## Survival bias by class (predicted minus observed strata)\n\n";
  md << "| Scenario | Method | Class | S(90) bias | S(365) bias | Median bias | Median defined "
     << "|\n|---|---|---|---|---|---|---|\n";
  for (std::size_t s = 0; s < aggs.size(); ++s) {
    for (const auto& [name, bias] : aggs[s].surv_bias) {
      for (std::size_t c = 0; c < bias.size(); ++c) {
        md << "| " << reports[s].config.scenario << " | " << name << " | " << c + 1 << " |";
        for (int st = 0; st < kSurvStatCount; ++st) {
          const AggregateStat& a = bias[c][static_cast<std::size_t>(st)];
          md << " " << fmt_cell(a.mean) << " (" << fmt_cell(a.pr_lo) << ", "
             << fmt_cell(a.pr_hi) << ") |";
        }
        md << " " << bias[c][2].defined << "/" << reports[s].config.n_reps << " |\n";
      }
    }
  }
  md << "\n";
  return md.str();
}

int cmd_reproduce(const ReproduceArgs& a) {
  if (a.scale != "desk" && a.scale != "full") {
    throw ParseError("--scale: expected desk or full");
  }
  PipelineArgs base;
  base.n_reps = a.n_reps > 0 ? a.n_reps : (a.scale == "full" ? 1000 : 200);
  base.n_boot = a.n_boot > 0 ? a.n_boot : (a.scale == "full" ? 500 : 200);
  base.seed = a.seed;
  base.threads = a.threads;

  std::vector<RepetitionReport> reports;
  for (int scenario = 1; scenario <= 3; ++scenario) {
    PipelineArgs pa = base;
    pa.scenario = scenario;
    pa.out = join_path(a.out, "scenario" + std::to_string(scenario));
    const RunConfig cfg = make_run_config(pa);
    std::cout << "scenario " << scenario << ": running " << cfg.n_reps << " repetitions...\n";
    RepetitionReport report = run_repetitions(cfg, cfg.n_reps);
    emit_report(report, {"csv", "json"}, pa.out);
    print_pipeline_summary(report);
    reports.push_back(std::move(report));
  }
  write_text(join_path(a.out, "tables.md"), markdown_tables(reports));
  std::cout << "wrote " << a.out << "/tables.md\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Set-valued labeling: simulation, conformal label sets, weighted bootstrap"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "Generate a synthetic study dataset");
  c_sim->add_option("--scenario", sim.scenario)->check(CLI::Range(1, 3));
  c_sim->add_option("--n", sim.n);
  c_sim->add_option("--seed", sim.seed);
  c_sim->add_option("--label-mode", sim.label_mode)
      ->check(CLI::IsMember({"categorical_draw", "argmax"}));
  c_sim->add_option("--out", sim.out);
  c_sim->add_flag("--write-probs", sim.write_probs, "Also write the true class probabilities");

  FitArgs fit;
  CLI::App* c_fit = app.add_subcommand("fit", "Fit a multinomial logistic model");
  c_fit->add_option("--data", fit.data)->required();
  c_fit->add_option("--out", fit.out);
  c_fit->add_option("--penalty", fit.penalty)->check(CLI::IsMember({"none", "ridge", "lasso", "enet"}));
  c_fit->add_option("--lambda", fit.lambda);
  c_fit->add_option("--mix", fit.mix);
  c_fit->add_option("--tol", fit.tol);
  c_fit->add_option("--max-iter", fit.max_iter);
  c_fit->add_option("--k", fit.k, "Class count (default: inferred from labels)");
  c_fit->add_flag("--require-convergence", fit.require_convergence);

  ThresholdsArgs thr;
  CLI::App* c_thr = app.add_subcommand("thresholds", "Estimate per-class label-set thresholds");
  c_thr->add_option("--data", thr.data)->required();
  c_thr->add_option("--model", thr.model);
  c_thr->add_option("--probs", thr.probs);
  c_thr->add_option("--alpha", thr.alpha);
  c_thr->add_option("--out", thr.out);

  ClassifyArgs cls;
  CLI::App* c_cls = app.add_subcommand("classify", "Build label sets from probabilities");
  c_cls->add_option("--data", cls.data);
  c_cls->add_option("--model", cls.model);
  c_cls->add_option("--probs", cls.probs);
  c_cls->add_option("--thresholds", cls.thresholds)->required();
  c_cls->add_option("--k", cls.k);
  c_cls->add_option("--out", cls.out);

  EvaluateArgs ev;
  CLI::App* c_ev = app.add_subcommand("evaluate", "Classification metrics against true labels");
  c_ev->add_option("--data", ev.data)->required();
  c_ev->add_option("--model", ev.model);
  c_ev->add_option("--probs", ev.probs);
  c_ev->add_option("--thresholds", ev.thresholds, "Also report label-set coverage");
  c_ev->add_option("--out", ev.out);

  SurvivalArgs sv;
  CLI::App* c_sv = app.add_subcommand("survival", "Kaplan-Meier estimates by class stratum");
  c_sv->add_option("--data", sv.data)->required();
  c_sv->add_option("--model", sv.model);
  c_sv->add_option("--probs", sv.probs);
  c_sv->add_option("--out", sv.out);

  PipelineArgs pl;
  CLI::App* c_pl = app.add_subcommand("pipeline", "Multi-repetition simulation pipeline");
  c_pl->add_option("--scenario", pl.scenario)->check(CLI::Range(1, 3));
  c_pl->add_option("--n", pl.n);
  c_pl->add_option("--n-boot", pl.n_boot);
  c_pl->add_option("--n-reps", pl.n_reps);
  c_pl->add_option("--alpha", pl.alpha, "One value or k comma-separated values");
  c_pl->add_option("--methods", pl.methods, "all, none, or comma list");
  c_pl->add_option("--seed", pl.seed);
  c_pl->add_option("--out", pl.out);
  c_pl->add_option("--label-mode", pl.label_mode)
      ->check(CLI::IsMember({"categorical_draw", "argmax"}));
  c_pl->add_option("--penalty", pl.penalty)->check(CLI::IsMember({"none", "ridge", "lasso", "enet"}));
  c_pl->add_option("--lambda", pl.lambda);
  c_pl->add_option("--mix", pl.mix);
  c_pl->add_option("--threads", pl.threads);
  c_pl->add_flag("--strict", pl.strict, "Abort on a non-converged fit");
  c_pl->add_option("--formats", pl.formats);

  ReproduceArgs rp;
  CLI::App* c_rp = app.add_subcommand("reproduce-tables", "Run all scenarios, write tables.md");
  c_rp->add_option("--out", rp.out);
  c_rp->add_option("--scale", rp.scale)->check(CLI::IsMember({"desk", "full"}));
  c_rp->add_option("--seed", rp.seed);
  c_rp->add_option("--threads", rp.threads);
  c_rp->add_option("--n-reps", rp.n_reps, "Override the scale default");
  c_rp->add_option("--n-boot", rp.n_boot, "Override the scale default");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_sim) return cmd_simulate(sim);
    if (*c_fit) return cmd_fit(fit);
    if (*c_thr) return cmd_thresholds(thr);
    if (*c_cls) return cmd_classify(cls);
    if (*c_ev) return cmd_evaluate(ev);
    if (*c_sv) return cmd_survival(sv);
    if (*c_pl) return cmd_pipeline(pl);
    if (*c_rp) return cmd_reproduce(rp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
