#include "setlabel/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace setlabel::io {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& tok, const std::string& ctx) {
  if (tok.empty()) return std::nan("");
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(ctx + ": cannot parse number from '" + tok + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

LabeledDataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  const std::vector<std::string> header = split_csv(line);

  // Header layout: x1..xp, label, optional time+event.
  std::size_t p = 0;
  while (p < header.size() && header[p] == "x" + std::to_string(p + 1)) ++p;
  if (p == 0 || p >= header.size() || header[p] != "label") {
    throw ParseError(path + ": header must be x1..xp,label[,time,event]");
  }
  bool has_survival = false;
  if (header.size() == p + 1) {
    has_survival = false;
  } else if (header.size() == p + 3 && header[p + 1] == "time" && header[p + 2] == "event") {
    has_survival = true;
  } else {
    throw ParseError(path + ": unexpected trailing header columns");
  }

  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> toks = split_csv(line);
    if (toks.size() != header.size()) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(toks.size()));
    }
    std::vector<double> row;
    row.reserve(toks.size());
    for (const std::string& t : toks) {
      row.push_back(parse_double(t, path + ":" + std::to_string(lineno)));
    }
    rows.push_back(std::move(row));
  }

  LabeledDataset ds;
  ds.features.values.resize(static_cast<long>(rows.size()), static_cast<long>(p));
  if (has_survival) ds.survival = SurvivalData{};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      ds.features.values(static_cast<long>(i), static_cast<long>(j)) = rows[i][j];
    }
    const double lab = rows[i][p];
    if (lab != std::floor(lab)) {
      throw ParseError(path + ": non-integer label in data row " + std::to_string(i));
    }
    ds.labels.push_back(static_cast<int>(lab));
    if (has_survival) {
      ds.survival->time.push_back(rows[i][p + 1]);
      const double ev = rows[i][p + 2];
      if (ev != 0.0 && ev != 1.0) {
        throw ParseError(path + ": event must be 0/1 in data row " + std::to_string(i));
      }
      ds.survival->event.push_back(static_cast<std::uint8_t>(ev));
    }
  }
  return ds;
}

void write_dataset(const std::string& path, const LabeledDataset& ds) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for write: " + path);
  const long p = ds.features.p();
  for (long j = 0; j < p; ++j) out << "x" << (j + 1) << ",";
  out << "label";
  if (ds.survival) out << ",time,event";
  out << "\n";
  for (long i = 0; i < ds.n(); ++i) {
    for (long j = 0; j < p; ++j) out << format_double(ds.features.values(i, j)) << ",";
    out << ds.labels[static_cast<std::size_t>(i)];
    if (ds.survival) {
      out << "," << format_double(ds.survival->time[static_cast<std::size_t>(i)]) << ","
          << static_cast<int>(ds.survival->event[static_cast<std::size_t>(i)]);
    }
    out << "\n";
  }
  if (!out) throw ParseError("write failed: " + path);
}

ClassProbabilities read_probabilities(const std::string& path, int k_expected) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open probability file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  const std::vector<std::string> header = split_csv(line);
  if (static_cast<int>(header.size()) != k_expected) {
    throw ParseError(path + ": expected " + std::to_string(k_expected) +
                     " probability columns, got " + std::to_string(header.size()));
  }
  for (int c = 0; c < k_expected; ++c) {
    if (header[static_cast<std::size_t>(c)] != "p" + std::to_string(c + 1)) {
      throw ParseError(path + ": header must be p1..p" + std::to_string(k_expected));
    }
  }

  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> toks = split_csv(line);
    if (static_cast<int>(toks.size()) != k_expected) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(k_expected) + " fields");
    }
    std::vector<double> row;
    for (const std::string& t : toks) {
      row.push_back(parse_double(t, path + ":" + std::to_string(lineno)));
    }
    rows.push_back(std::move(row));
  }

  ClassProbabilities probs;
  probs.p.resize(static_cast<long>(rows.size()), k_expected);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int c = 0; c < k_expected; ++c) {
      probs.p(static_cast<long>(i), c) = rows[i][static_cast<std::size_t>(c)];
    }
  }
  return probs;
}

void write_probabilities(const std::string& path, const ClassProbabilities& probs) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for write: " + path);
  for (int c = 0; c < probs.k(); ++c) out << (c ? "," : "") << "p" << (c + 1);
  out << "\n";
  for (long i = 0; i < probs.n(); ++i) {
    for (int c = 0; c < probs.k(); ++c) {
      out << (c ? "," : "") << format_double(probs.p(i, c));
    }
    out << "\n";
  }
  if (!out) throw ParseError("write failed: " + path);
}

}  // namespace setlabel::io
