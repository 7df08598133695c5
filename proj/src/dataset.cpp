#include "mva/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mva {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, delim)) out.push_back(cell);
  if (!line.empty() && line.back() == delim) out.push_back("");
  return out;
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

double parse_numeric(const std::string& cell, std::size_t row, const std::string& column) {
  const std::string t = strip(cell);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  const bool consumed = end != nullptr && *end == '\0' && !t.empty();
  if (!consumed || errno == ERANGE || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << "row " << row << ", column '" << column << "': cannot parse '" << t
        << "' as a finite number";
    throw std::runtime_error(msg.str());
  }
  return v;
}

}  // namespace

RawTable load_csv(const std::string& path, const std::string& target, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("'" + path + "': no header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header = split_line(line, schema.delimiter);
  for (auto& h : header) h = strip(h);
  if (header.empty() || (header.size() == 1 && header[0].empty()))
    throw std::runtime_error("'" + path + "': no header row");

  std::ptrdiff_t target_idx = -1;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == target) target_idx = static_cast<std::ptrdiff_t>(j);
  if (target_idx < 0)
    throw std::runtime_error("'" + path + "': target column '" + target + "' not found");

  RawTable table;
  table.target_name = target;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (static_cast<std::ptrdiff_t>(j) != target_idx) table.feature_names.push_back(header[j]);

  std::vector<std::vector<double>> rows;  // per-sample feature values
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (strip(line).empty()) continue;
    std::vector<std::string> cells = split_line(line, schema.delimiter);
    if (cells.size() != header.size()) {
      std::ostringstream msg;
      msg << "'" << path << "': row " << lineno << " has " << cells.size()
          << " cells, expected " << header.size();
      throw std::runtime_error(msg.str());
    }
    std::vector<double> feat;
    feat.reserve(header.size() - 1);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (static_cast<std::ptrdiff_t>(j) == target_idx) {
        table.labels.push_back(strip(cells[j]));
      } else {
        feat.push_back(parse_numeric(cells[j], lineno, header[j]));
      }
    }
    rows.push_back(std::move(feat));
  }
  if (rows.empty()) throw std::runtime_error("'" + path + "': no data rows");

  const Index n = static_cast<Index>(table.feature_names.size());
  const Index big_n = static_cast<Index>(rows.size());
  table.features.resize(n, big_n);
  for (Index i = 0; i < big_n; ++i)
    for (Index j = 0; j < n; ++j) table.features(j, i) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return table;
}

OneHot one_hot(const std::vector<std::string>& labels) {
  if (labels.empty()) throw std::invalid_argument("one_hot: no labels");
  std::map<std::string, Index> index;  // ordered map -> lexicographic class order
  for (const auto& l : labels) index.emplace(l, 0);
  Index next = 0;
  for (auto& [name, idx] : index) idx = next++;

  OneHot out;
  out.classes.reserve(index.size());
  for (const auto& [name, idx] : index) out.classes.push_back(name);
  out.y = Matrixd::Zero(static_cast<Index>(index.size()), static_cast<Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i)
    out.y(index.at(labels[i]), static_cast<Index>(i)) = 1.0;
  return out;
}

namespace {

// Row centering with a second compensation pass so row sums land well below
// the 1e-9 contract even for large-scale features.
void center_rows(Matrixd& m) {
  for (int pass = 0; pass < 2; ++pass) {
    Vectord mean = m.rowwise().mean();
    m.colwise() -= mean;
  }
}

Covariances accumulate_covariances(const Matrixd& x, const Matrixd& y) {
  const Index n = x.rows();
  const Index m = y.rows();
  const Index big_n = x.cols();

  // Content-keyed accumulation order: the sums are independent of the
  // sample ordering, bit for bit.
  std::vector<Index> order(static_cast<std::size_t>(big_n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    for (Index j = 0; j < n; ++j) {
      if (x(j, a) != x(j, b)) return x(j, a) < x(j, b);
    }
    for (Index j = 0; j < m; ++j) {
      if (y(j, a) != y(j, b)) return y(j, a) < y(j, b);
    }
    return false;
  });

  Covariances cov;
  cov.cxx = Matrixd::Zero(n, n);
  cov.cyy = Matrixd::Zero(m, m);
  cov.cxy = Matrixd::Zero(n, m);
  for (Index i : order) {
    cov.cxx.noalias() += x.col(i) * x.col(i).transpose();
    cov.cyy.noalias() += y.col(i) * y.col(i).transpose();
    cov.cxy.noalias() += x.col(i) * y.col(i).transpose();
  }
  return cov;
}

}  // namespace

Dataset dataset_from_matrices(Matrixd x, Matrixd y) {
  if (x.cols() != y.cols())
    throw std::invalid_argument("dataset_from_matrices: sample count mismatch");
  if (x.cols() < 2) throw std::invalid_argument("dataset_from_matrices: need at least 2 samples");
  Dataset d;
  d.x = std::move(x);
  d.y = std::move(y);
  d.preprocessing.mean = Vectord::Zero(d.x.rows());
  d.preprocessing.scale = Vectord::Ones(d.x.rows());
  d.cov = accumulate_covariances(d.x, d.y);
  return d;
}

Dataset center_and_standardize(const RawTable& table, bool standardize) {
  const Index n = table.features.rows();
  const Index big_n = table.features.cols();
  if (big_n < 2) throw std::invalid_argument("center_and_standardize: need at least 2 samples");
  if (n < 1) throw std::invalid_argument("center_and_standardize: need at least 1 feature");

  Dataset d;
  d.feature_names = table.feature_names;
  d.x = table.features;
  d.preprocessing.mean = d.x.rowwise().mean();
  d.preprocessing.scale = Vectord::Ones(n);
  d.preprocessing.standardized = standardize;
  center_rows(d.x);

  if (standardize) {
    for (Index j = 0; j < n; ++j) {
      const double var = d.x.row(j).squaredNorm() / static_cast<double>(big_n - 1);
      const double s = std::sqrt(var);
      const double ref = std::abs(d.preprocessing.mean(j)) + 1.0;
      if (s <= 1e-12 * ref) {
        d.preprocessing.zero_variance.push_back(j);  // left centered, flagged
      } else {
        d.x.row(j) /= s;
        d.preprocessing.scale(j) = s;
      }
    }
  }

  OneHot enc = one_hot(table.labels);
  d.class_names = std::move(enc.classes);
  d.y = std::move(enc.y);
  center_rows(d.y);

  d.cov = accumulate_covariances(d.x, d.y);
  return d;
}

const Covariances& covariances(const Dataset& d) { return d.cov; }

}  // namespace mva
