#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cnk/types.hpp"

namespace cnk {

struct SparseEntry {
  Index sample = 0;   // zero-based sample (line) index
  Index feature = 0;  // one-based feature index, as in the file
  double value = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Sparse labelled samples: p samples, d features.
struct Dataset {
  Index d = 0;
  Index p = 0;
  std::vector<SparseEntry> entries;  // sorted by (sample, feature)
  std::vector<double> labels;        // in {-1, +1}

  /// d x p matrix whose column i is sample i.
  DenseMatrix dense_samples() const;
  double density() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct LibsvmOptions {
  /// Feature count; must be >= the largest index seen. Inferred when unset.
  std::optional<Index> dimension;
};

/// Reads "label idx:val idx:val ..." lines. Blank lines are skipped; '#'
/// starts a comment. Indices are 1-based and strictly increasing per line.
///
/// Label normalization: labels already in {-1,+1} are kept. Otherwise the
/// distinct labels are sorted ascending and the smaller maps to -1, the larger
/// to +1 (so {0,1} -> {-1,+1} and {1,2} -> {-1,+1}). A single non-+-1 label
/// maps by sign (<= 0 -> -1). More than two distinct labels is a ParseError.
Dataset parse_libsvm(std::istream& in, const LibsvmOptions& options = {});
Dataset read_libsvm(const std::filesystem::path& path, const LibsvmOptions& options = {});

/// Writes with 17 significant digits, so parse(write(ds)) == ds.
void write_libsvm(std::ostream& out, const Dataset& dataset);

/// Min-max scaling of each feature to [-1, 1] over the stored entries. Off by
/// default in every pipeline; features with a single value map to 0.
Dataset scale_min_max(const Dataset& dataset);

}  // namespace cnk
