#include "meantest/compositional.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "meantest/errors.hpp"

namespace meantest {

Composition validate_composition(const Eigen::VectorXd& values, double tolerance) {
  const int D = static_cast<int>(values.size());
  if (D < 2) throw DimensionError("composition needs at least 2 parts");
  Eigen::VectorXd x = values;
  for (int i = 0; i < D; ++i) {
    if (!std::isfinite(x[i]))
      throw InvalidInputError("composition entry " + std::to_string(i + 1) + " is not finite");
    if (x[i] < -tolerance)
      throw InvalidInputError("composition entry " + std::to_string(i + 1) + " is negative (" +
                              std::to_string(x[i]) + ")");
    if (x[i] < 0.0) x[i] = 0.0;
  }
  const double sum = x.sum();
  if (std::abs(sum - 1.0) > tolerance)
    throw InvalidInputError("composition sum is " + std::to_string(sum) +
                            ", outside tolerance " + std::to_string(tolerance) + " of 1");
  if (sum <= 0.0) throw InvalidInputError("composition sums to zero");
  x /= sum;
  return Composition{std::move(x)};
}

CompositionalSample CompositionalSample::from_matrix(const Eigen::MatrixXd& m, double tolerance) {
  if (m.cols() < 2) throw DimensionError("compositional sample needs D >= 2 columns");
  if (m.rows() < 2) throw InvalidInputError("compositional sample needs at least 2 rows");
  CompositionalSample out;
  out.data.resize(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    Composition c;
    try {
      c = validate_composition(m.row(i).transpose(), tolerance);
    } catch (const Error& e) {
      throw InvalidInputError("row " + std::to_string(i + 1) + ": " + e.what());
    }
    out.data.row(i) = c.values.transpose();
  }
  return out;
}

Eigen::MatrixXd helmert_submatrix(int D) {
  if (D < 2) throw DimensionError("helmert_submatrix requires D >= 2");
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(D - 1, D);
  for (int k = 1; k <= D - 1; ++k) {
    const double s = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int j = 0; j < k; ++j) h(k - 1, j) = s;
    h(k - 1, k) = -k * s;
  }
  return h;
}

EuclideanSample helmert_transform(const CompositionalSample& sample) {
  if (sample.parts() < 2) throw DimensionError("helmert_transform requires D >= 2");
  const Eigen::MatrixXd h = helmert_submatrix(sample.parts());
  EuclideanSample out;
  out.data = sample.data * h.transpose();
  return out;
}

Composition alr_inverse(const Eigen::VectorXd& v) {
  const int d = static_cast<int>(v.size());
  if (d < 1) throw DimensionError("alr_inverse requires d >= 1");
  for (int i = 0; i < d; ++i)
    if (!std::isfinite(v[i])) throw InvalidInputError("alr_inverse: entry not finite");
  // Shift all exponents (including the implicit 0 of the last part) by the
  // common maximum; ratios are unchanged and nothing overflows.
  const double m = std::max(v.maxCoeff(), 0.0);
  Eigen::VectorXd x(d + 1);
  double denom = std::exp(-m);  // the implicit last part e^{0-m}
  for (int i = 0; i < d; ++i) {
    x[i] = std::exp(v[i] - m);
    denom += x[i];
  }
  x[d] = std::exp(-m);
  x /= denom;
  return Composition{std::move(x)};
}

namespace {

bool parse_double(const std::string& field, double& out) {
  const char* begin = field.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  return *end == '\0';
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

CompositionalSample read_composition_csv(std::istream& in, double tolerance) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  bool header_checked = false;
  std::size_t ncols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (t.back() == ',') fields.push_back("");

    std::vector<double> vals(fields.size());
    bool numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (!parse_double(fields[j], vals[j])) {
        numeric = false;
        bad_col = j;
        break;
      }
    }
    if (!header_checked) {
      header_checked = true;
      if (!numeric) continue;  // header row
    }
    if (!numeric)
      throw InvalidInputError("csv line " + std::to_string(line_no) + ", column " +
                              std::to_string(bad_col + 1) + ": not a number ('" +
                              fields[bad_col] + "')");
    if (ncols == 0) {
      ncols = vals.size();
    } else if (vals.size() != ncols) {
      throw InvalidInputError("csv line " + std::to_string(line_no) + ": expected " +
                              std::to_string(ncols) + " columns, got " +
                              std::to_string(vals.size()));
    }
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw InvalidInputError("csv contains no data rows");
  Eigen::MatrixXd m(static_cast<int>(rows.size()), static_cast<int>(ncols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < ncols; ++j) m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return CompositionalSample::from_matrix(m, tolerance);
}

CompositionalSample read_composition_csv_file(const std::string& path, double tolerance) {
  std::ifstream f(path);
  if (!f) throw InvalidInputError("cannot open '" + path + "'");
  try {
    return read_composition_csv(f, tolerance);
  } catch (const Error& e) {
    throw InvalidInputError(path + ": " + e.what());
  }
}

}  // namespace meantest
