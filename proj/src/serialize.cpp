#include "setlabel/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "setlabel/io.hpp"

namespace setlabel {
namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// nlohmann already dumps NaN as null; reading needs the inverse by hand.
double num(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
  const auto nr = static_cast<Eigen::Index>(rows.size());
  const auto nc = nr > 0 ? static_cast<Eigen::Index>(rows.at(0).size()) : 0;
  Eigen::MatrixXd m(nr, nc);
  for (Eigen::Index r = 0; r < nr; ++r) {
    if (static_cast<Eigen::Index>(rows.at(static_cast<std::size_t>(r)).size()) != nc) {
      throw ParseError("ragged coefficient matrix in JSON");
    }
    for (Eigen::Index c = 0; c < nc; ++c) {
      m(r, c) = num(rows.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)));
    }
  }
  return m;
}

std::string penalty_kind_name(PenaltyKind k) {
  switch (k) {
    case PenaltyKind::none: return "none";
    case PenaltyKind::ridge: return "ridge";
    case PenaltyKind::lasso: return "lasso";
    case PenaltyKind::elastic_net: return "elastic_net";
  }
  return "?";
}

PenaltyKind penalty_kind_from(const std::string& s) {
  if (s == "none") return PenaltyKind::none;
  if (s == "ridge") return PenaltyKind::ridge;
  if (s == "lasso") return PenaltyKind::lasso;
  if (s == "elastic_net") return PenaltyKind::elastic_net;
  throw ParseError("unknown penalty kind '" + s + "'");
}

json penalty_to_json(const Penalty& p) {
  return {{"kind", penalty_kind_name(p.kind)}, {"lambda", p.lambda}, {"mix", p.mix}};
}

Penalty penalty_from_json(const json& j) {
  Penalty p;
  p.kind = penalty_kind_from(j.at("kind").get<std::string>());
  p.lambda = num(j.at("lambda"));
  p.mix = num(j.at("mix"));
  return p;
}

json cell_to_json(const StatCell& c) {
  return {{"mean", c.mean}, {"lo", c.lo}, {"hi", c.hi}, {"defined", c.defined}};
}

StatCell cell_from_json(const json& j) {
  return StatCell{num(j.at("mean")), num(j.at("lo")), num(j.at("hi")),
                  j.at("defined").get<long>()};
}

json cells_to_json(const std::vector<StatCell>& v) {
  json out = json::array();
  for (const StatCell& c : v) out.push_back(cell_to_json(c));
  return out;
}

std::vector<StatCell> cells_from_json(const json& j) {
  std::vector<StatCell> out;
  for (const json& c : j) out.push_back(cell_from_json(c));
  return out;
}

json agg_to_json(const AggregateStat& a) {
  return {{"mean", a.mean},         {"sd", a.sd},
          {"pr_lo", a.pr_lo},       {"pr_hi", a.pr_hi},
          {"ci196_lo", a.ci196_lo}, {"ci196_hi", a.ci196_hi},
          {"boot_lo", a.boot_lo},   {"boot_hi", a.boot_hi},
          {"defined", a.defined}};
}

json config_to_json(const RunConfig& cfg) {
  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(method_name(m));
  return {{"scenario", cfg.scenario},
          {"n", cfg.n},
          {"n_boot", cfg.n_boot},
          {"n_reps", cfg.n_reps},
          {"alpha", cfg.alpha},
          {"methods", methods},
          {"penalty", penalty_to_json(cfg.penalty)},
          {"tol", cfg.opt.tol},
          {"max_iter", cfg.opt.max_iter},
          {"label_mode",
           cfg.label_mode == SimConfig::LabelMode::argmax ? "argmax" : "categorical_draw"},
          {"weibull_a", cfg.weibull_a},
          {"weibull_b", cfg.weibull_b},
          {"beta_scale", cfg.beta_scale},
          {"censor_horizon", cfg.censor_horizon},
          {"master_seed", cfg.master_seed},
          {"ci_level", cfg.ci_level},
          {"strict", cfg.strict}};
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  cfg.scenario = j.at("scenario").get<int>();
  cfg.n = j.at("n").get<int>();
  cfg.n_boot = j.at("n_boot").get<int>();
  cfg.n_reps = j.at("n_reps").get<int>();
  cfg.alpha = j.at("alpha").get<std::vector<double>>();
  cfg.methods.clear();
  for (const json& m : j.at("methods")) cfg.methods.insert(parse_method(m.get<std::string>()));
  cfg.penalty = penalty_from_json(j.at("penalty"));
  cfg.opt.tol = num(j.at("tol"));
  cfg.opt.max_iter = j.at("max_iter").get<int>();
  cfg.label_mode = j.at("label_mode").get<std::string>() == "argmax"
                       ? SimConfig::LabelMode::argmax
                       : SimConfig::LabelMode::categorical_draw;
  cfg.weibull_a = num(j.at("weibull_a"));
  cfg.weibull_b = num(j.at("weibull_b"));
  cfg.beta_scale = num(j.at("beta_scale"));
  cfg.censor_horizon = num(j.at("censor_horizon"));
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  cfg.ci_level = num(j.at("ci_level"));
  cfg.strict = j.at("strict").get<bool>();
  return cfg;
}

json rep_to_json(const RepResult& r) {
  json surv = json::array();
  for (const auto& row : r.observed_surv) {
    surv.push_back(json::array({row[0], row[1], row[2]}));
  }
  json methods = json::object();
  for (const auto& [name, mres] : r.methods) {
    json meas = json::object();
    for (int m = 0; m < kMeasureCount; ++m) {
      meas[measure_names()[static_cast<std::size_t>(m)]] =
          cells_to_json(mres.measures[static_cast<std::size_t>(m)]);
    }
    auto surv_block = [](const std::vector<std::array<StatCell, kSurvStatCount>>& v) {
      json out = json::array();
      for (const auto& row : v) {
        json jr = json::array();
        for (const StatCell& c : row) jr.push_back(cell_to_json(c));
        out.push_back(std::move(jr));
      }
      return out;
    };
    methods[name] = {{"coverage", cells_to_json(mres.coverage)},
                     {"measures", std::move(meas)},
                     {"surv_pred", surv_block(mres.surv_pred)},
                     {"surv_bias", surv_block(mres.surv_bias)}};
  }
  return {{"rep", r.rep},
          {"stream_seed", r.stream_seed},
          {"val_class_counts", r.val_class_counts},
          {"thresholds", r.thresholds},
          {"calib_counts", r.calib_counts},
          {"weighted_cover_point", r.weighted_cover_point},
          {"ambiguity",
           {{"k", r.ambiguity.k},
            {"overall", r.ambiguity.overall},
            {"by_class", r.ambiguity.by_class}}},
          {"fit_converged", r.fit_converged},
          {"observed_surv", std::move(surv)},
          {"methods", std::move(methods)}};
}

RepResult rep_from_json(const json& j) {
  RepResult r;
  r.rep = j.at("rep").get<int>();
  r.stream_seed = j.at("stream_seed").get<std::uint64_t>();
  r.val_class_counts = j.at("val_class_counts").get<std::vector<long>>();
  for (const json& v : j.at("thresholds")) r.thresholds.push_back(num(v));
  r.calib_counts = j.at("calib_counts").get<std::vector<long>>();
  for (const json& v : j.at("weighted_cover_point")) r.weighted_cover_point.push_back(num(v));
  const json& amb = j.at("ambiguity");
  r.ambiguity.k = amb.at("k").get<int>();
  r.ambiguity.overall = amb.at("overall").get<std::vector<long>>();
  r.ambiguity.by_class = amb.at("by_class").get<std::vector<std::vector<long>>>();
  r.fit_converged = j.at("fit_converged").get<bool>();
  for (const json& row : j.at("observed_surv")) {
    r.observed_surv.push_back({num(row.at(0)), num(row.at(1)), num(row.at(2))});
  }
  for (const auto& [name, mj] : j.at("methods").items()) {
    MethodRepResult mres;
    mres.coverage = cells_from_json(mj.at("coverage"));
    for (int m = 0; m < kMeasureCount; ++m) {
      mres.measures[static_cast<std::size_t>(m)] =
          cells_from_json(mj.at("measures").at(measure_names()[static_cast<std::size_t>(m)]));
    }
    auto surv_block = [](const json& arr) {
      std::vector<std::array<StatCell, kSurvStatCount>> out;
      for (const json& row : arr) {
        std::array<StatCell, kSurvStatCount> a;
        for (int s = 0; s < kSurvStatCount; ++s) {
          a[static_cast<std::size_t>(s)] = cell_from_json(row.at(static_cast<std::size_t>(s)));
        }
        out.push_back(a);
      }
      return out;
    };
    mres.surv_pred = surv_block(mj.at("surv_pred"));
    mres.surv_bias = surv_block(mj.at("surv_bias"));
    r.methods[name] = std::move(mres);
  }
  return r;
}

json aggregates_to_json(const Aggregates& agg) {
  auto agg_vec = [](const std::vector<AggregateStat>& v) {
    json out = json::array();
    for (const AggregateStat& a : v) out.push_back(agg_to_json(a));
    return out;
  };
  auto surv_block = [](const std::vector<std::array<AggregateStat, kSurvStatCount>>& v) {
    json out = json::array();
    for (const auto& row : v) {
      json jr = json::object();
      for (int s = 0; s < kSurvStatCount; ++s) {
        jr[surv_stat_names()[static_cast<std::size_t>(s)]] =
            agg_to_json(row[static_cast<std::size_t>(s)]);
      }
      out.push_back(std::move(jr));
    }
    return out;
  };

  json per_method = json::object();
  for (const auto& [name, cov] : agg.coverage) {
    json meas = json::object();
    const auto& mm = agg.measures.at(name);
    for (int m = 0; m < kMeasureCount; ++m) {
      meas[measure_names()[static_cast<std::size_t>(m)]] =
          agg_vec(mm[static_cast<std::size_t>(m)]);
    }
    per_method[name] = {{"coverage", agg_vec(cov)},
                        {"measures", std::move(meas)},
                        {"surv_pred", surv_block(agg.surv_pred.at(name))},
                        {"surv_bias", surv_block(agg.surv_bias.at(name))}};
  }

  json amb_by_class = json::array();
  for (const auto& row : agg.ambiguity_share_by_class) amb_by_class.push_back(agg_vec(row));

  return {{"thresholds", agg_vec(agg.thresholds)},
          {"weighted_cover_point", agg_vec(agg.weighted_cover_point)},
          {"singleton_share_overall", agg_to_json(agg.singleton_share_overall)},
          {"singleton_share_by_class", agg_vec(agg.singleton_share_by_class)},
          {"ambiguity_share_overall", agg_vec(agg.ambiguity_share_overall)},
          {"ambiguity_share_by_class", std::move(amb_by_class)},
          {"observed_surv", surv_block(agg.observed_surv)},
          {"methods", std::move(per_method)}};
}

json parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for write: " + path);
  out << text;
  if (!out) throw ParseError("write failed: " + path);
}

void check_version(const json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("schema_version")) {
    throw ParseError(what + ": missing schema_version");
  }
  if (j.at("schema_version").get<int>() != kSchemaVersion) {
    throw ParseError(what + ": unsupported schema_version");
  }
}

}  // namespace

void save_model(const std::string& path, const MultinomialModel& model) {
  json j = {{"schema_version", kSchemaVersion},
            {"kind", "multinomial_model"},
            {"k", model.k},
            {"p", model.p},
            {"coef", matrix_to_json(model.coef)},
            {"penalty", penalty_to_json(model.penalty)},
            {"fit_meta",
             {{"iterations", model.fit_meta.iterations},
              {"objective", model.fit_meta.objective},
              {"grad_norm", model.fit_meta.grad_norm},
              {"converged", model.fit_meta.converged}}}};
  write_text(path, j.dump(2) + "\n");
}

MultinomialModel load_model(const std::string& path) {
  const json j = parse_file(path);
  check_version(j, path);
  if (j.value("kind", "") != "multinomial_model") {
    throw ParseError(path + ": not a model file");
  }
  MultinomialModel m;
  m.k = j.at("k").get<int>();
  m.p = j.at("p").get<int>();
  m.coef = matrix_from_json(j.at("coef"));
  m.penalty = penalty_from_json(j.at("penalty"));
  const json& fm = j.at("fit_meta");
  m.fit_meta.iterations = fm.at("iterations").get<int>();
  m.fit_meta.objective = num(fm.at("objective"));
  m.fit_meta.grad_norm = num(fm.at("grad_norm"));
  m.fit_meta.converged = fm.at("converged").get<bool>();
  if (m.k < 2 || m.coef.rows() != m.k - 1 || m.coef.cols() != m.p + 1) {
    throw ParseError(path + ": coefficient shape does not match k/p");
  }
  return m;
}

void save_thresholds(const std::string& path, const ThresholdVector& tv) {
  json j = {{"schema_version", kSchemaVersion},
            {"kind", "thresholds"},
            {"t", tv.t},
            {"alpha", tv.alpha},
            {"calib_counts", tv.calib_counts}};
  write_text(path, j.dump(2) + "\n");
}

ThresholdVector load_thresholds(const std::string& path) {
  const json j = parse_file(path);
  check_version(j, path);
  if (j.value("kind", "") != "thresholds") {
    throw ParseError(path + ": not a thresholds file");
  }
  ThresholdVector tv;
  for (const json& v : j.at("t")) tv.t.push_back(num(v));
  for (const json& v : j.at("alpha")) tv.alpha.push_back(num(v));
  tv.calib_counts = j.at("calib_counts").get<std::vector<long>>();
  if (tv.t.size() != tv.alpha.size() || tv.t.size() != tv.calib_counts.size()) {
    throw ParseError(path + ": threshold vectors disagree in length");
  }
  return tv;
}

std::string report_to_json(const RepetitionReport& report) {
  json reps = json::array();
  for (const RepResult& r : report.reps) reps.push_back(rep_to_json(r));
  json j = {{"schema_version", kSchemaVersion},
            {"kind", "repetition_report"},
            {"config", config_to_json(report.config)},
            {"reps", std::move(reps)},
            {"aggregates", aggregates_to_json(aggregate(report))}};
  return j.dump(2) + "\n";
}

RepetitionReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("report JSON: ") + e.what());
  }
  check_version(j, "report JSON");
  if (j.value("kind", "") != "repetition_report") {
    throw ParseError("report JSON: not a repetition report");
  }
  RepetitionReport report;
  report.config = config_from_json(j.at("config"));
  for (const json& r : j.at("reps")) report.reps.push_back(rep_from_json(r));
  return report;  // aggregates are derived; recompute via aggregate()
}

std::string config_sidecar(const RunConfig& cfg) {
  std::ostringstream out;
  auto put = [&](const std::string& key, const std::string& value) {
    out << key << " = " << value << "\n";
  };
  auto join = [](const auto& values, auto&& fmt_one) {
    std::string s;
    for (const auto& v : values) {
      if (!s.empty()) s += ",";
      s += fmt_one(v);
    }
    return s;
  };
  put("scenario", std::to_string(cfg.scenario));
  put("n", std::to_string(cfg.n));
  put("n_boot", std::to_string(cfg.n_boot));
  put("n_reps", std::to_string(cfg.n_reps));
  put("alpha", join(cfg.alpha, [](double a) { return io::format_double(a); }));
  put("methods", join(cfg.methods, [](Method m) { return method_name(m); }));
  put("penalty", penalty_kind_name(cfg.penalty.kind));
  put("lambda", io::format_double(cfg.penalty.lambda));
  put("mix", io::format_double(cfg.penalty.mix));
  put("tol", io::format_double(cfg.opt.tol));
  put("max_iter", std::to_string(cfg.opt.max_iter));
  put("require_convergence", cfg.opt.require_convergence ? "true" : "false");
  put("label_mode",
      cfg.label_mode == SimConfig::LabelMode::argmax ? "argmax" : "categorical_draw");
  put("weibull_a", io::format_double(cfg.weibull_a));
  put("weibull_b", io::format_double(cfg.weibull_b));
  put("beta_scale", io::format_double(cfg.beta_scale));
  put("censor_horizon", io::format_double(cfg.censor_horizon));
  put("master_seed", std::to_string(cfg.master_seed));
  // Worker count is an execution knob, not part of the statistical config:
  // artifacts must be byte-identical across worker counts.
  put("ci_level", io::format_double(cfg.ci_level));
  put("strict", cfg.strict ? "true" : "false");
  return out.str();
}

}  // namespace setlabel
