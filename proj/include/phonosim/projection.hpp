#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "phonosim/error.hpp"

namespace phonosim {

template <typename Scalar>
struct Projection {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::vector<std::string> ids;
  Matrix coords;               // one row per id, one column per component
  Vector explained_variance;   // fraction of total variance per component
};

using Projection2D = Projection<double>;

// Principal component projection of `rows` (one observation per row).
//
// Columns are mean-centered (not scaled) and projected onto the leading right
// singular vectors of the centered matrix. Each component's sign is fixed so
// that its largest-magnitude coordinate is positive, with ties going to the
// lower row. Data without variance yields all-zero coordinates and zero
// explained variance.
template <typename Derived>
Projection<typename Derived::Scalar> pca_project(const Eigen::MatrixBase<Derived>& rows,
                                                 std::vector<std::string> ids,
                                                 Eigen::Index dims = 2) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  const Eigen::Index n = rows.rows();
  const Eigen::Index d = rows.cols();
  if (n < 2) throw Error("PCA needs at least two rows");
  if (dims < 1) throw Error("PCA needs at least one component");
  if (d < dims) throw Error("PCA input has fewer columns than requested components");
  if (static_cast<Eigen::Index>(ids.size()) != n) throw Error("PCA ids do not match row count");
  if (!rows.allFinite()) throw Error("PCA input contains non-finite values");

  Projection<Scalar> out;
  out.ids = std::move(ids);
  out.coords.setZero(n, dims);
  out.explained_variance.setZero(dims);

  const Matrix centered = rows.rowwise() - rows.colwise().mean();
  const Scalar total = centered.squaredNorm();
  const Scalar scale = rows.cwiseAbs().maxCoeff();
  const Scalar noise = Scalar(64) * std::numeric_limits<Scalar>::epsilon() * scale;
  if (!(total > noise * noise * static_cast<Scalar>(n * d))) return out;

  Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinV);
  const Eigen::Index available = std::min(dims, svd.singularValues().size());
  out.coords.leftCols(available) = centered * svd.matrixV().leftCols(available);
  for (Eigen::Index k = 0; k < available; ++k) {
    const Scalar s = svd.singularValues()[k];
    out.explained_variance[k] = std::min(Scalar(1), s * s / total);

    Eigen::Index pivot = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (std::abs(out.coords(i, k)) > std::abs(out.coords(pivot, k)) * (Scalar(1) + Scalar(1e-9))) {
        pivot = i;
      }
    }
    if (out.coords(pivot, k) < Scalar(0)) out.coords.col(k) *= Scalar(-1);
  }
  return out;
}

// `id,x,y,ev1,ev2`, plus a trailing `family` column when families are given.
void write_coordinates_csv(std::ostream& out, const Projection2D& projection,
                           const std::map<std::string, std::string>* families = nullptr);
Projection2D parse_coordinates_csv(std::istream& in, const std::string& source = "<coords>");

}  // namespace phonosim
