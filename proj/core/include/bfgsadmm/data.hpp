#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "bfgsadmm/objectives.hpp"

namespace bfgsadmm {

/// One sparse sample: 0-based (index, value) pairs and a {0, 1} label.
struct SparseSample {
  std::vector<std::pair<int, double>> features;
  int label = 0;

  friend bool operator==(const SparseSample&, const SparseSample&) = default;
};

struct Dataset {
  std::vector<SparseSample> samples;
  int dim = 0;  // max 1-based index seen, or the declared dimension

  std::size_t size() const { return samples.size(); }
  Eigen::VectorXd dense(std::size_t k) const;
  LabeledSample labeled(std::size_t k) const;
};

/// How source labels were mapped onto {0, 1}.
enum class LabelMapping {
  kPassthrough,  // {0, 1}
  kPlusMinusOne, // -1 -> 0, +1 -> 1
  kOneTwo,       // 1 -> 0, 2 -> 1
};

struct ParseReport {
  LabelMapping mapping = LabelMapping::kPassthrough;
  std::size_t lines = 0;  // non-blank lines read

  std::string describe() const;
};

struct ParsedDataset {
  Dataset dataset;
  ParseReport report;
};

/// Reads "label idx:val idx:val ..." lines. Indices are 1-based in the text.
/// Blank lines and trailing "# comments" are ignored. `declared_dim` pads
/// (or bounds) the dimension; an index beyond it is an error.
/// Errors carry the offending line number.
ParsedDataset parse_libsvm(std::istream& in, std::optional<int> declared_dim = std::nullopt);

/// Writes labels as 0/1 and values with %.17g, so parse(serialize(ds)) == ds.
void write_libsvm(std::ostream& out, const Dataset& dataset);

/// Picks `total` samples (after a seeded shuffle unless `shuffle` is false)
/// and splits them into `agents` contiguous chunks; the first total % agents
/// chunks get one extra sample.
std::vector<std::vector<LabeledSample>> take_and_partition(const Dataset& dataset, std::size_t total, int agents,
                                                           std::uint64_t seed, bool shuffle = true);

/// The sample indices take_and_partition assigns to each agent.
std::vector<std::vector<std::size_t>> partition_indices(std::size_t dataset_size, std::size_t total, int agents,
                                                        std::uint64_t seed, bool shuffle = true);

}  // namespace bfgsadmm
