#pragma once

#include <string>
#include <vector>

#include "mva/types.hpp"

namespace mva {

/// Parsed CSV contents before any preprocessing. Feature columns are stored
/// as rows of `features` (one row per variable, one column per sample).
struct RawTable {
  std::vector<std::string> feature_names;
  Matrixd features;                 // n x N
  std::vector<std::string> labels;  // target cell text per sample
  std::string target_name;
};

/// CSV parsing options. The expected format is a header row, one record per
/// line, '.' decimal point and no quoting of numeric fields.
struct CsvSchema {
  char delimiter = ',';
};

/// One-hot encoding of a categorical column. Class order is lexicographic so
/// the encoding is deterministic.
struct OneHot {
  Matrixd y;  // m x N, column sums all 1
  std::vector<std::string> classes;
};

struct PreprocessingRecord {
  Vectord mean;                      // per-feature mean removed
  Vectord scale;                     // per-feature divisor (all 1 when not standardizing)
  bool standardized = false;
  std::vector<Index> zero_variance;  // rows left centered-only under standardize
};

struct Covariances {
  Matrixd cxx;  // X X^T
  Matrixd cyy;  // Y Y^T
  Matrixd cxy;  // X Y^T
};

/// Centered (optionally standardized) data. Columns are samples. Immutable
/// after construction; safe to share across concurrent fits.
struct Dataset {
  Matrixd x;  // n x N, rows mean-zero
  Matrixd y;  // m x N, centered one-hot output
  PreprocessingRecord preprocessing;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;
  Covariances cov;  // cached at construction

  Index n() const { return x.rows(); }
  Index m() const { return y.rows(); }
  Index samples() const { return x.cols(); }
};

RawTable load_csv(const std::string& path, const std::string& target,
                  const CsvSchema& schema = CsvSchema{});

OneHot one_hot(const std::vector<std::string>& labels);

Dataset center_and_standardize(const RawTable& table, bool standardize);

/// Assemble a Dataset directly from matrices (rows of `x` are assumed
/// centered). Used by tests and synthetic data paths.
Dataset dataset_from_matrices(Matrixd x, Matrixd y);

/// Sample covariance matrices without the 1/N factor. Accumulation order is
/// keyed by sample content, so permuting samples leaves the result
/// bit-identical.
const Covariances& covariances(const Dataset& d);

}  // namespace mva
