#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "phonosim/projection.hpp"

using namespace phonosim;

namespace {

std::vector<std::string> ids(Eigen::Index n) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back("r" + std::to_string(i));
  return out;
}

Eigen::MatrixXd random_matrix(oracle::Rng& rng, Eigen::Index n, Eigen::Index d) {
  return Eigen::MatrixXd::NullaryExpr(n, d, [&] { return rng.uniform(-1, 1); });
}

double distance(const Eigen::MatrixXd& m, Eigen::Index i, Eigen::Index j) { return (m.row(i) - m.row(j)).norm(); }

}  // namespace

TEST_CASE("2D data keeps its pairwise distances") {
  Eigen::MatrixXd pts(3, 2);
  pts << 0, 0, 1, 0, 0, 1;
  const auto p = pca_project(pts, ids(3));
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) CHECK(std::abs(distance(p.coords, i, j) - distance(pts, i, j)) < 1e-9);
  CHECK(p.explained_variance.sum() == doctest::Approx(1.0));
}

TEST_CASE("identical rows give zero coordinates") {
  Eigen::MatrixXd same = Eigen::MatrixXd::Constant(4, 3, 0.7);
  const auto p = pca_project(same, ids(4));
  CHECK(p.coords.isZero(0));
  CHECK(p.explained_variance.isZero(0));
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(pca_project(Eigen::MatrixXd::Ones(1, 3), ids(1)), Error);
  CHECK_THROWS_AS(pca_project(Eigen::MatrixXd::Ones(3, 1), ids(3)), Error);
  Eigen::MatrixXd nan = Eigen::MatrixXd::Zero(3, 3);
  nan(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(pca_project(nan, ids(3)), Error);
  CHECK_THROWS_AS(pca_project(Eigen::MatrixXd::Ones(3, 3), ids(2)), Error);
}

TEST_CASE("explained variance matches an eigendecomposition of the covariance") {
  oracle::Rng rng(42);
  for (int t = 0; t < 50; ++t) {
    const auto n = rng.integer(3, 10);
    const auto d = rng.integer(2, 8);
    const Eigen::MatrixXd m = random_matrix(rng, n, d);
    oracle::Mat rows(static_cast<std::size_t>(n), oracle::Vec(static_cast<std::size_t>(d)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    const auto expected = oracle::pca_explained_variance(rows, 2);
    const auto p = pca_project(m, ids(n));
    CHECK(std::abs(p.explained_variance[0] - expected[0]) < 1e-9);
    CHECK(std::abs(p.explained_variance[1] - expected[1]) < 1e-9);
  }
}

TEST_CASE("sign convention makes the largest coordinate positive") {
  oracle::Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    const auto p = pca_project(random_matrix(rng, 6, 4), ids(6));
    for (Eigen::Index k = 0; k < 2; ++k) {
      Eigen::Index arg;
      p.coords.col(k).cwiseAbs().maxCoeff(&arg);
      CHECK(p.coords(arg, k) > 0);
    }
  }
}

TEST_CASE("translation invariance and determinism") {
  oracle::Rng rng(9);
  for (int t = 0; t < 30; ++t) {
    const Eigen::MatrixXd m = random_matrix(rng, 7, 5);
    const Eigen::RowVectorXd shift = Eigen::RowVectorXd::NullaryExpr(5, [&] { return rng.uniform(-5, 5); });
    const Eigen::MatrixXd moved = m.rowwise() + shift;
    const auto a = pca_project(m, ids(7));
    const auto b = pca_project(moved, ids(7));
    CHECK((a.coords - b.coords).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(pca_project(m, ids(7)).coords == a.coords);
  }
}

TEST_CASE("PCA variance beats random orthonormal projections") {
  oracle::Rng rng(10);
  for (int t = 0; t < 10; ++t) {
    const Eigen::MatrixXd m = random_matrix(rng, 6, 4);
    const Eigen::MatrixXd centered = m.rowwise() - m.colwise().mean();
    const double pca_var = pca_project(m, ids(6)).coords.squaredNorm();
    for (int r = 0; r < 200; ++r) {
      const Eigen::MatrixXd g = Eigen::MatrixXd::NullaryExpr(4, 2, [&] { return rng.normal(); });
      const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() * Eigen::MatrixXd::Identity(4, 2);
      CHECK(pca_var >= (centered * q).squaredNorm() - 1e-12);
    }
  }
}

TEST_CASE("single precision works too") {
  Eigen::MatrixXf pts(3, 2);
  pts << 0, 0, 2, 0, 0, 1;
  const auto p = pca_project(pts, ids(3));
  CHECK(p.explained_variance.sum() == doctest::Approx(1.0f).epsilon(1e-5));
}

TEST_CASE("coordinates CSV round trip") {
  oracle::Rng rng(12);
  const auto p = pca_project(random_matrix(rng, 5, 3), ids(5));
  std::ostringstream out;
  std::map<std::string, std::string> fam{{"r0", "F"}, {"r1", "G"}};
  write_coordinates_csv(out, p, &fam);
  CHECK(out.str().rfind("id,x,y,ev1,ev2,family\n", 0) == 0);
  std::istringstream in(out.str());
  const auto back = parse_coordinates_csv(in);
  CHECK(back.ids == p.ids);
  CHECK(back.coords == p.coords);
  CHECK(back.explained_variance == p.explained_variance);
}
