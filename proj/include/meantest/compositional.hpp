#ifndef MEANTEST_COMPOSITIONAL_HPP
#define MEANTEST_COMPOSITIONAL_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace meantest {

// A point on the closed simplex: D nonnegative parts summing to one.
struct Composition {
  Eigen::VectorXd values;

  int parts() const { return static_cast<int>(values.size()); }
};

// Accepts `values` if every entry >= -tolerance and |sum - 1| <= tolerance.
// Entries within tolerance below zero are clamped to 0 and the vector is
// renormalized to unit sum. Throws InvalidInputError otherwise.
Composition validate_composition(const Eigen::VectorXd& values, double tolerance = 1e-8);

// n x D matrix of simplex points, one row per observation.
struct CompositionalSample {
  Eigen::MatrixXd data;

  int size() const { return static_cast<int>(data.rows()); }
  int parts() const { return static_cast<int>(data.cols()); }

  // Validates every row (see validate_composition). Requires D >= 2 and
  // at least 2 rows.
  static CompositionalSample from_matrix(const Eigen::MatrixXd& m, double tolerance = 1e-8);
};

// n x d matrix of Helmert-transformed observations, d = D - 1.
struct EuclideanSample {
  Eigen::MatrixXd data;

  int size() const { return static_cast<int>(data.rows()); }
  int dim() const { return static_cast<int>(data.cols()); }
};

// The (D-1) x D Helmert sub-matrix: row k has entries 1/sqrt(k(k+1)) in
// positions 1..k, -k/sqrt(k(k+1)) in position k+1, zeros after. Rows are
// orthonormal and sum to zero.
Eigen::MatrixXd helmert_submatrix(int D);

// y_i = H x_i for every row.
EuclideanSample helmert_transform(const CompositionalSample& sample);

// Inverse additive log-ratio map: x_i = e^{v_i} / (1 + sum_j e^{v_j}),
// x_D = 1 / (1 + sum_j e^{v_j}). Stabilized by joint max-subtraction, so
// arbitrarily large entries do not overflow.
Composition alr_inverse(const Eigen::VectorXd& v);

// CSV ingestion: one row per observation, D numeric columns, optional header
// row, '.' decimal separator. Ragged rows and non-numeric fields are
// rejected with the offending row/column in the message.
CompositionalSample read_composition_csv(std::istream& in, double tolerance = 1e-8);
CompositionalSample read_composition_csv_file(const std::string& path, double tolerance = 1e-8);

}  // namespace meantest

#endif
