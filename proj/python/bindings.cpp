// pybind11 surface over the core library: simulation, fitting, label sets,
// survival estimation and the batch pipeline.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "setlabel/conformal.hpp"
#include "setlabel/estimators.hpp"
#include "setlabel/labeling.hpp"
#include "setlabel/metrics.hpp"
#include "setlabel/pipeline.hpp"
#include "setlabel/serialize.hpp"
#include "setlabel/simgen.hpp"
#include "setlabel/survival.hpp"

namespace py = pybind11;
using namespace setlabel;

namespace {

SimConfig::LabelMode label_mode_from(const std::string& s) {
  if (s == "categorical_draw") return SimConfig::LabelMode::categorical_draw;
  if (s == "argmax") return SimConfig::LabelMode::argmax;
  throw ParseError("label_mode: expected categorical_draw or argmax");
}

Penalty penalty_from(const std::string& kind, double lam, double mix) {
  if (kind == "none") return Penalty::none();
  if (kind == "ridge") return Penalty::ridge(lam);
  if (kind == "lasso") return Penalty::lasso(lam);
  if (kind == "enet") return Penalty::elastic_net(lam, mix);
  throw ParseError("penalty: expected none, ridge, lasso or enet");
}

LabeledDataset dataset_from(const Eigen::MatrixXd& X, const std::vector<int>& labels) {
  FeatureMatrix fm;
  fm.values = X;
  return LabeledDataset{std::move(fm), labels, std::nullopt};
}

ClassProbabilities probs_from(const Eigen::MatrixXd& p) {
  ClassProbabilities cp{p};
  validate_probabilities(cp);
  return cp;
}

Eigen::MatrixXi sets_to_indicator(const LabelSets& sets) {
  Eigen::MatrixXi ind(static_cast<Eigen::Index>(sets.size()), sets.k);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (int c = 1; c <= sets.k; ++c) {
      ind(static_cast<Eigen::Index>(i), c - 1) = sets.contains(i, c) ? 1 : 0;
    }
  }
  return ind;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Set-valued labeling core: conformal label sets, weighted bootstrap, survival";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<NonConvergence>(m, "NonConvergenceError", PyExc_RuntimeError);

  m.def(
      "simulate",
      [](int scenario, int n, std::uint64_t seed, const std::string& label_mode) {
        SimConfig cfg;
        cfg.scenario = scenario;
        cfg.n = n;
        cfg.label_mode = label_mode_from(label_mode);
        cfg.rng = RngSpec{seed, 0}.child(0);
        const LabeledDataset ds = generate_dataset(cfg);
        py::dict out;
        out["X"] = ds.features.values;
        out["labels"] = ds.labels;
        out["time"] = ds.survival->time;
        out["event"] = std::vector<int>(ds.survival->event.begin(), ds.survival->event.end());
        return out;
      },
      py::arg("scenario") = 1, py::arg("n") = 2000, py::arg("seed") = 33,
      py::arg("label_mode") = "categorical_draw",
      "Generate one synthetic study dataset (matches repetition 0 of a pipeline run).");

  m.def("scenario_mask", [](int scenario) { return scenario_mask(scenario); },
        py::arg("scenario"), "1-based covariate ids used for prediction in a scenario.");

  m.def("true_probabilities",
        [](const Eigen::MatrixXd& X) {
          FeatureMatrix fm;
          fm.values = X;
          return sim_class_probabilities(fm).p;
        },
        py::arg("X"), "Generator class probabilities for a 15-column covariate matrix.");

  py::class_<MultinomialModel>(m, "MultinomialModel")
      .def_readonly("k", &MultinomialModel::k)
      .def_readonly("p", &MultinomialModel::p)
      .def_property_readonly("coef", [](const MultinomialModel& mm) { return mm.coef; })
      .def_property_readonly("converged",
                             [](const MultinomialModel& mm) { return mm.fit_meta.converged; })
      .def_property_readonly("iterations",
                             [](const MultinomialModel& mm) { return mm.fit_meta.iterations; })
      .def_property_readonly("objective",
                             [](const MultinomialModel& mm) { return mm.fit_meta.objective; })
      .def(
          "predict_proba",
          [](const MultinomialModel& mm, const Eigen::MatrixXd& X) {
            FeatureMatrix fm;
            fm.values = X;
            return predict_proba(mm, fm).p;
          },
          py::arg("X"))
      .def("save", [](const MultinomialModel& mm, const std::string& path) {
        save_model(path, mm);
      });

  m.def(
      "fit",
      [](const Eigen::MatrixXd& X, const std::vector<int>& labels, int k,
         const std::string& penalty, double lam, double mix, double tol, int max_iter) {
        if (k == 0) {
          for (int y : labels) k = std::max(k, y);
          k = std::max(k, 2);
        }
        OptConfig opt;
        opt.tol = tol;
        opt.max_iter = max_iter;
        return fit_multinomial(dataset_from(X, labels), LabelSpace(k),
                               penalty_from(penalty, lam, mix), opt);
      },
      py::arg("X"), py::arg("labels"), py::arg("k") = 0, py::arg("penalty") = "none",
      py::arg("lam") = 0.0, py::arg("mix") = 0.5, py::arg("tol") = 1e-8,
      py::arg("max_iter") = 500, "Multinomial logistic regression (class k reference).");

  m.def("load_model", &load_model, py::arg("path"));

  py::class_<ThresholdVector>(m, "ThresholdVector")
      .def_readonly("t", &ThresholdVector::t)
      .def_readonly("alpha", &ThresholdVector::alpha)
      .def_readonly("calib_counts", &ThresholdVector::calib_counts)
      .def("save",
           [](const ThresholdVector& tv, const std::string& path) { save_thresholds(path, tv); });

  m.def(
      "estimate_thresholds",
      [](const Eigen::MatrixXd& probs, const std::vector<int>& labels,
         const std::vector<double>& alpha) {
        return estimate_thresholds(probs_from(probs), labels, alpha);
      },
      py::arg("probs"), py::arg("labels"), py::arg("alpha"),
      "Per-class conformal thresholds from calibration probabilities.");

  m.def("load_thresholds", &load_thresholds, py::arg("path"));

  m.def(
      "label_sets",
      [](const Eigen::MatrixXd& probs, const ThresholdVector& tv) {
        return sets_to_indicator(build_label_sets(probs_from(probs), tv));
      },
      py::arg("probs"), py::arg("thresholds"),
      "n x k membership indicators: class c is in row i's set iff probs[i,c] >= t_c.");

  m.def(
      "class_coverage",
      [](const Eigen::MatrixXd& probs, const ThresholdVector& tv,
         const std::vector<int>& labels) {
        return class_coverage(build_label_sets(probs_from(probs), tv), labels);
      },
      py::arg("probs"), py::arg("thresholds"), py::arg("labels"),
      "Per-class fraction of rows whose label set contains the true class.");

  m.def(
      "argmax_labels",
      [](const Eigen::MatrixXd& probs) { return argmax_label(probs); }, py::arg("probs"),
      "Highest-probability class per row, ties to the lowest class index.");

  m.def(
      "kaplan_meier",
      [](const std::vector<double>& time, const std::vector<int>& event) {
        SurvivalData sd;
        sd.time = time;
        sd.event.assign(event.begin(), event.end());
        const KMCurve curve = kaplan_meier(sd);
        py::dict out;
        out["times"] = curve.times;
        out["survival"] = curve.survival;
        out["max_follow_up"] = curve.max_follow_up;
        const auto med = median_survival(curve);
        out["median"] = med ? py::cast(*med) : py::none();
        const auto s90 = survival_at(curve, 90.0);
        out["s90"] = s90 ? py::cast(*s90) : py::none();
        const auto s365 = survival_at(curve, 365.0);
        out["s365"] = s365 ? py::cast(*s365) : py::none();
        return out;
      },
      py::arg("time"), py::arg("event"),
      "Kaplan-Meier curve with horizon and median extraction (None = undefined).");

  m.def(
      "run_pipeline",
      [](int scenario, int n, int n_boot, int n_reps, std::uint64_t seed,
         const std::vector<std::string>& methods, const std::string& out_dir, int threads,
         const std::vector<double>& alpha) {
        RunConfig cfg;
        cfg.scenario = scenario;
        cfg.n = n;
        cfg.n_boot = n_boot;
        cfg.n_reps = n_reps;
        cfg.master_seed = seed;
        cfg.threads = threads;
        if (!alpha.empty()) {
          cfg.alpha = alpha.size() == 1 ? std::vector<double>(3, alpha[0]) : alpha;
        }
        cfg.methods.clear();
        for (const std::string& name : methods) cfg.methods.insert(parse_method(name));
        cfg.out_dir = out_dir;
        cfg.validate();

        RepetitionReport report;
        {
          py::gil_scoped_release release;
          report = run_repetitions(cfg, cfg.n_reps);
        }
        if (!out_dir.empty()) emit_report(report, {"csv", "json"}, out_dir);

        const Aggregates agg = aggregate(report);
        py::dict out;
        std::vector<double> thr;
        for (const AggregateStat& a : agg.thresholds) thr.push_back(a.mean);
        out["thresholds"] = thr;
        py::dict coverage, macro_accuracy;
        for (const auto& [name, cov] : agg.coverage) {
          std::vector<double> means;
          for (const AggregateStat& a : cov) means.push_back(a.mean);
          coverage[py::str(name)] = means;
          macro_accuracy[py::str(name)] = agg.measures.at(name)[0].back().mean;
        }
        out["coverage"] = coverage;
        out["macro_accuracy"] = macro_accuracy;
        out["n_reps"] = n_reps;
        return out;
      },
      py::arg("scenario") = 1, py::arg("n") = 2000, py::arg("n_boot") = 200,
      py::arg("n_reps") = 200, py::arg("seed") = 33,
      py::arg("methods") = std::vector<std::string>{"naive", "naive_boot", "weighted_boot"},
      py::arg("out_dir") = "", py::arg("threads") = 0,
      py::arg("alpha") = std::vector<double>{},
      "Multi-repetition simulation pipeline; writes artifacts when out_dir is set.");
}
