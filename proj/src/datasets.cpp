#include "rbpca/datasets.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rbpca/errors.hpp"
#include "rbpca/rng.hpp"

namespace rbpca {

Eigen::Vector3d numerical_curve(double t) {
  return {t, t * t - 3.0 * t, -t * t * t + 3.0 * t * t};
}

SampleStream gen_numerical_example(int n, std::uint64_t seed, const GeneratorOptions& opts) {
  if (n < 1) throw std::invalid_argument("gen_numerical_example: n must be >= 1");
  Rng t_rng(derive_seed(seed, 1));
  Rng noise_rng(derive_seed(seed, 2));

  SampleStream stream;
  stream.samples.resize(3, n);
  for (int k = 0; k < n; ++k) {
    const double t = t_rng.uniform(opts.t_min, opts.t_max);
    Eigen::Vector3d x = numerical_curve(t);
    for (int j = 0; j < 3; ++j) x[j] += noise_rng.normal(0.0, opts.noise_std);
    stream.samples.col(k) = x;
  }
  stream.provenance = "numerical-example(n=" + std::to_string(n) +
                      ",seed=" + std::to_string(seed) + ")";
  return stream;
}

namespace {
SampleStream faulted_copy(const SampleStream& stream, int start, const char* name) {
  const int n = static_cast<int>(stream.size());
  if (start < 1 || start > n)
    throw std::invalid_argument(std::string(name) + ": start must lie in [1, n], got " +
                                std::to_string(start));
  SampleStream out = stream;
  out.labels.assign(n, 0);
  for (int k = start - 1; k < n; ++k) out.labels[k] = 1;
  out.provenance = stream.provenance + "+" + name + "@" + std::to_string(start);
  return out;
}
}  // namespace

SampleStream inject_fault1(const SampleStream& stream, int start) {
  SampleStream out = faulted_copy(stream, start, "fault1");
  for (Eigen::Index k = start - 1; k < out.size(); ++k) out.samples(0, k) -= 0.5;
  return out;
}

SampleStream inject_fault2(const SampleStream& stream, int start) {
  SampleStream out = faulted_copy(stream, start, "fault2");
  for (Eigen::Index k = start - 1; k < out.size(); ++k) {
    const double j = static_cast<double>(k + 1);  // 1-based sample number
    out.samples(1, k) += 0.01 * (j - static_cast<double>(start - 1));
  }
  return out;
}

Eigen::MatrixXd Normalizer::apply(const Eigen::Ref<const Eigen::MatrixXd>& X) const {
  if (X.rows() != mean.size())
    throw DataError("zscore_apply: data has " + std::to_string(X.rows()) +
                    " variables, normalizer expects " + std::to_string(mean.size()));
  return (X.colwise() - mean).array().colwise() / std.array();
}

Eigen::VectorXd Normalizer::apply_sample(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != mean.size())
    throw DataError("zscore_apply: sample has " + std::to_string(x.size()) +
                    " variables, normalizer expects " + std::to_string(mean.size()));
  return (x - mean).cwiseQuotient(std);
}

Normalizer zscore_fit(const Eigen::Ref<const Eigen::MatrixXd>& X) {
  const Eigen::Index n = X.cols();
  if (n < 2) throw DataError("zscore_fit: need at least two samples");
  Normalizer norm;
  norm.mean = X.rowwise().mean();
  norm.std.resize(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double ss = (X.row(i).array() - norm.mean[i]).square().sum();
    norm.std[i] = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(norm.std[i] > 0.0))
      throw DataError("zscore_fit: variable " + std::to_string(i) +
                      " has zero variance");
  }
  return norm;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw DataError("CSV: non-numeric cell at row " + std::to_string(row) + ", column " +
                    std::to_string(col) + ": '" + cell + "'");
  return value;
}

}  // namespace

SampleStream load_labeled_csv(const std::string& path,
                              const std::optional<std::string>& label_column) {
  std::ifstream in(path);
  if (!in) throw DataError("CSV: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("CSV: '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);

  int label_idx = -1;
  if (label_column) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == *label_column) label_idx = static_cast<int>(i);
    if (label_idx < 0)
      throw DataError("CSV: label column '" + *label_column + "' not found in '" + path + "'");
  }

  const std::size_t ncols = header.size();
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != ncols)
      throw DataError("CSV: row " + std::to_string(row_no) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(ncols));
    std::vector<double> features;
    features.reserve(ncols);
    for (std::size_t c = 0; c < ncols; ++c) {
      const double v = parse_cell(cells[c], row_no, c + 1);
      if (static_cast<int>(c) == label_idx) labels.push_back(static_cast<int>(v));
      else features.push_back(v);
    }
    rows.push_back(std::move(features));
  }
  if (rows.empty()) throw DataError("CSV: '" + path + "' has no data rows");

  SampleStream stream;
  stream.samples.resize(static_cast<Eigen::Index>(rows[0].size()),
                        static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (std::size_t i = 0; i < rows[k].size(); ++i)
      stream.samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[k][i];
  stream.labels = std::move(labels);
  stream.provenance = path;
  return stream;
}

void save_csv(const std::string& path, const SampleStream& stream,
              const std::vector<std::string>& variable_names) {
  std::ofstream out(path);
  if (!out) throw DataError("CSV: cannot write '" + path + "'");

  const Eigen::Index d = stream.dim();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (i) out << ',';
    if (static_cast<std::size_t>(i) < variable_names.size()) out << variable_names[i];
    else out << 'x' << (i + 1);
  }
  if (stream.has_labels()) out << ",label";
  out << '\n';

  char buf[64];
  for (Eigen::Index k = 0; k < stream.size(); ++k) {
    for (Eigen::Index i = 0; i < d; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", stream.samples(i, k));
      if (i) out << ',';
      out << buf;
    }
    if (stream.has_labels()) out << ',' << stream.labels[k];
    out << '\n';
  }
}

}  // namespace rbpca
