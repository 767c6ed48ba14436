#include "dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "error.hpp"

namespace kcl {

int Dataset::num_classes() const {
  int m = 0;
  for (int l : labels) m = std::max(m, l + 1);
  return std::max(m, 2);
}

void Dataset::validate() const {
  if (features.rows() != static_cast<Eigen::Index>(labels.size()))
    throw Error(ErrorCode::ShapeMismatch, "feature/label count mismatch");
  for (int l : labels)
    if (l < 0) throw Error(ErrorCode::InvalidTarget, "negative label");
  if (has_teacher() && teacher_logits.rows() != features.rows())
    throw Error(ErrorCode::ShapeMismatch, "teacher logit count mismatch");
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_csv(const Dataset& ds, const std::string& path) {
  ds.validate();
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  for (int j = 0; j < ds.dim(); ++j) out << "x" << (j + 1) << ",";
  out << "label\n";
  for (int i = 0; i < ds.size(); ++i) {
    for (int j = 0; j < ds.dim(); ++j)
      out << format_double(ds.features(i, j)) << ",";
    out << ds.labels[i] << "\n";
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::IoError, "empty CSV " + path);
  const int dim = static_cast<int>(std::count(line.begin(), line.end(), ','));
  if (dim < 1) throw Error(ErrorCode::IoError, "malformed CSV header in " + path);

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<int>(row.size()) != dim + 1)
      throw Error(ErrorCode::IoError, "malformed CSV row in " + path);
    labels.push_back(static_cast<int>(row.back()));
    row.pop_back();
    rows.push_back(std::move(row));
  }

  Dataset ds;
  ds.features.resize(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < dim; ++j) ds.features(i, j) = rows[i][j];
  ds.labels = std::move(labels);
  ds.validate();
  return ds;
}

}  // namespace kcl
