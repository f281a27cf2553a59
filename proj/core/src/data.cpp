#include "bfgsadmm/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "bfgsadmm/error.hpp"

namespace bfgsadmm {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error("libsvm line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& token, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != token.size()) fail(line, "malformed number '" + token + "'");
  if (!std::isfinite(v)) fail(line, "non-finite value '" + token + "'");
  return v;
}

int parse_index(const std::string& token, std::size_t line) {
  int idx = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), idx);
  if (ec != std::errc() || ptr != token.data() + token.size()) fail(line, "malformed index '" + token + "'");
  if (idx < 1) fail(line, "feature index must be >= 1, got " + token);
  return idx;
}

struct RawSample {
  std::vector<std::pair<int, double>> features;
  double label = 0.0;
  std::size_t line = 0;
};

}  // namespace

Eigen::VectorXd Dataset::dense(std::size_t k) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  for (const auto& [idx, val] : samples.at(k).features) v(idx) = val;
  return v;
}

LabeledSample Dataset::labeled(std::size_t k) const { return {dense(k), samples.at(k).label}; }

std::string ParseReport::describe() const {
  switch (mapping) {
    case LabelMapping::kPassthrough:
      return "labels {0,1} kept as-is";
    case LabelMapping::kPlusMinusOne:
      return "labels {-1,+1} mapped to {0,1}";
    case LabelMapping::kOneTwo:
      return "labels {1,2} mapped to {0,1}";
  }
  return "unknown";
}

ParsedDataset parse_libsvm(std::istream& in, std::optional<int> declared_dim) {
  std::vector<RawSample> raw;
  std::set<double> alphabet;
  int max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string token;
    if (!(tokens >> token)) continue;

    RawSample s;
    s.line = line_no;
    s.label = parse_number(token, line_no);
    std::set<int> seen;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) fail(line_no, "expected idx:value, got '" + token + "'");
      const int idx = parse_index(token.substr(0, colon), line_no);
      const double val = parse_number(token.substr(colon + 1), line_no);
      if (!seen.insert(idx).second) fail(line_no, "duplicate feature index " + std::to_string(idx));
      if (declared_dim && idx > *declared_dim) {
        fail(line_no, "feature index " + std::to_string(idx) + " exceeds declared dimension " +
                          std::to_string(*declared_dim));
      }
      max_index = std::max(max_index, idx);
      s.features.emplace_back(idx - 1, val);
    }
    alphabet.insert(s.label);
    if (alphabet.size() > 2) fail(line_no, "more than two distinct labels");
    raw.push_back(std::move(s));
  }

  ParsedDataset out;
  auto subset_of = [&](std::initializer_list<double> allowed) {
    return std::all_of(alphabet.begin(), alphabet.end(), [&](double v) {
      return std::find(allowed.begin(), allowed.end(), v) != allowed.end();
    });
  };
  if (subset_of({0.0, 1.0})) {
    out.report.mapping = LabelMapping::kPassthrough;
  } else if (subset_of({-1.0, 1.0})) {
    out.report.mapping = LabelMapping::kPlusMinusOne;
  } else if (subset_of({1.0, 2.0})) {
    out.report.mapping = LabelMapping::kOneTwo;
  } else {
    throw Error("libsvm: unsupported label alphabet (expected {0,1}, {-1,+1} or {1,2})");
  }

  out.dataset.dim = declared_dim.value_or(max_index);
  out.dataset.samples.reserve(raw.size());
  for (RawSample& s : raw) {
    SparseSample sample;
    sample.features = std::move(s.features);
    switch (out.report.mapping) {
      case LabelMapping::kPassthrough:
        sample.label = static_cast<int>(s.label);
        break;
      case LabelMapping::kPlusMinusOne:
        sample.label = s.label > 0.0 ? 1 : 0;
        break;
      case LabelMapping::kOneTwo:
        sample.label = s.label == 2.0 ? 1 : 0;
        break;
    }
    out.dataset.samples.push_back(std::move(sample));
  }
  out.report.lines = raw.size();
  return out;
}

void write_libsvm(std::ostream& out, const Dataset& dataset) {
  char buf[40];
  for (const SparseSample& s : dataset.samples) {
    out << s.label;
    for (const auto& [idx, val] : s.features) {
      std::snprintf(buf, sizeof buf, "%.17g", val);
      out << ' ' << (idx + 1) << ':' << buf;
    }
    out << '\n';
  }
}

std::vector<std::vector<std::size_t>> partition_indices(std::size_t dataset_size, std::size_t total, int agents,
                                                        std::uint64_t seed, bool shuffle) {
  if (agents < 1) throw Error("partition needs at least one agent");
  if (total > dataset_size) {
    throw Error("requested " + std::to_string(total) + " samples but the dataset has " +
                std::to_string(dataset_size));
  }
  std::vector<std::size_t> order(dataset_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (shuffle) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  const std::size_t m = static_cast<std::size_t>(agents);
  const std::size_t base = total / m;
  const std::size_t extra = total % m;
  std::vector<std::vector<std::size_t>> parts(m);
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t size = base + (i < extra ? 1 : 0);
    parts[i].assign(order.begin() + static_cast<std::ptrdiff_t>(cursor),
                    order.begin() + static_cast<std::ptrdiff_t>(cursor + size));
    cursor += size;
  }
  return parts;
}

std::vector<std::vector<LabeledSample>> take_and_partition(const Dataset& dataset, std::size_t total, int agents,
                                                           std::uint64_t seed, bool shuffle) {
  const auto parts = partition_indices(dataset.size(), total, agents, seed, shuffle);
  std::vector<std::vector<LabeledSample>> out(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out[i].reserve(parts[i].size());
    for (std::size_t k : parts[i]) out[i].push_back(dataset.labeled(k));
  }
  return out;
}

}  // namespace bfgsadmm
