#include <doctest.h>

#include <cmath>

#include "simspace/mapping.hpp"
#include "support.hpp"

using namespace simspace;
using namespace simspace::mapping;

TEST_CASE("fit_linear_map: identity task") {
  Rng rng(Seed{1});
  const Eigen::MatrixXd x = testing::random_points(rng, 30, 3);
  const auto m = fit_linear_map(x, x);
  CHECK((m.weights - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(m.intercept.cwiseAbs().maxCoeff() < 1e-10);
  const Eigen::MatrixXd residual = predict_rows(m, x) - x;
  CHECK(std::sqrt(residual.rowwise().squaredNorm().mean()) < 1e-8);
}

TEST_CASE("fit_linear_map: a single training point is interpolated") {
  const Eigen::MatrixXd x = (Eigen::MatrixXd(1, 3) << 1, 2, 3).finished();
  const Eigen::MatrixXd y = (Eigen::MatrixXd(1, 2) << -4, 5).finished();
  const auto m = fit_linear_map(x, y);
  CHECK((predict(m, x.row(0).transpose()) - y.row(0).transpose()).norm() < 1e-12);
}

TEST_CASE("fit_linear_map: exact affine ground truth is recovered") {
  Rng rng(Seed{2});
  const Eigen::MatrixXd x = testing::random_points(rng, 200, 20);
  const Eigen::MatrixXd a = testing::random_points(rng, 20, 4);
  const Eigen::RowVectorXd c = testing::random_points(rng, 1, 4);
  const Eigen::MatrixXd y = (x * a).rowwise() + c;
  const auto m = fit_linear_map(x, y);
  CHECK((m.weights - a).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((m.intercept - c.transpose()).cwiseAbs().maxCoeff() < 1e-6);

  SUBCASE("standardization does not change an exact fit") {
    const auto s = fit_linear_map(x, y, FitOptions{0.0, true});
    CHECK((predict_rows(s, x) - y).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((s.weights - a).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("fit_linear_map: rank-deficient design gives the minimum-norm solution") {
  Rng rng(Seed{3});
  // 5 rows, 12 features: infinitely many exact fits; the minimum-norm one is X+ Y on centred data.
  const Eigen::MatrixXd x = testing::random_points(rng, 5, 12);
  const Eigen::MatrixXd y = testing::random_points(rng, 5, 2);
  const auto m = fit_linear_map(x, y);
  CHECK((predict_rows(m, x) - y).cwiseAbs().maxCoeff() < 1e-9);
  const Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd yc = y.rowwise() - y.colwise().mean();
  const Eigen::MatrixXd pinv = xc.completeOrthogonalDecomposition().pseudoInverse();
  CHECK((m.weights - pinv * yc).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("ridge shrinkage is monotone in lambda") {
  Rng rng(Seed{4});
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd x = testing::random_points(rng, 40, 15);
    const Eigen::MatrixXd y = testing::random_points(rng, 40, 3);
    double previous = fit_linear_map(x, y).weights.norm();
    for (double lambda : {1e-4, 1e-2, 1.0, 10.0, 1e3, 1e6}) {
      const double norm = fit_linear_map(x, y, FitOptions{lambda}).weights.norm();
      CHECK(norm <= previous * (1.0 + 1e-12));
      previous = norm;
    }
  }
}

TEST_CASE("ridge matches the normal equations with an unpenalized intercept") {
  Rng rng(Seed{5});
  const Eigen::MatrixXd x = testing::random_points(rng, 25, 6);
  const Eigen::MatrixXd y = testing::random_points(rng, 25, 2);
  const double lambda = 0.7;
  const Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd yc = y.rowwise() - y.colwise().mean();
  const Eigen::MatrixXd w =
      (xc.transpose() * xc + lambda * Eigen::MatrixXd::Identity(6, 6)).ldlt().solve(xc.transpose() * yc);
  const auto m = fit_linear_map(x, y, FitOptions{lambda});
  CHECK((m.weights - w).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(m.ridge_lambda == lambda);
}

TEST_CASE("fit and predict errors") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(3, 2);
  x(0, 0) = std::nan("");
  CHECK_THROWS_AS(fit_linear_map(x, Eigen::MatrixXd::Zero(3, 1)), Error);
  CHECK_THROWS_AS(fit_linear_map(Eigen::MatrixXd::Ones(3, 2), Eigen::MatrixXd::Zero(3, 1), FitOptions{-1.0}), Error);
  const auto m = fit_linear_map(Eigen::MatrixXd::Identity(3, 2), Eigen::MatrixXd::Zero(3, 1));
  CHECK_THROWS_WITH_AS(predict(m, Eigen::VectorXd::Zero(3)), doctest::Contains("feature width mismatch"), Error);
}

TEST_CASE("predict: hand-sized matrices") {
  LinearMap m;
  m.weights = (Eigen::MatrixXd(2, 2) << 1, 0, 0, 2).finished();
  m.intercept = Eigen::Vector2d(1, 1);
  CHECK(predict(m, Eigen::Vector2d(1, 1)) == Eigen::VectorXd(Eigen::Vector2d(2, 3)));
  CHECK(predict(m, Eigen::Vector2d(0, 0)) == Eigen::VectorXd(Eigen::Vector2d(1, 1)));
  m.weights = (Eigen::MatrixXd(3, 1) << 1, -1, 2).finished();
  m.intercept = Eigen::VectorXd::Constant(1, 0.5);
  CHECK(predict(m, Eigen::Vector3d(3, 1, 2))(0) == 6.5);
}

TEST_CASE("linear map serialization round-trips") {
  const auto dir = testing::scratch("mapping_model");
  Rng rng(Seed{6});
  LinearMap m;
  m.weights = testing::random_points(rng, 4, 3);
  m.intercept = testing::random_points(rng, 3, 1).col(0);
  m.ridge_lambda = 0.25;
  save_linear_map(m, dir / "model.csv");
  const auto back = load_linear_map(dir / "model.csv");
  CHECK(back.weights == m.weights);
  CHECK(back.intercept == m.intercept);
  CHECK(back.ridge_lambda == 0.25);
  CHECK(linear_map_csv(m).rfind("#ridge_lambda=0.25\nrow,dim_0,dim_1,dim_2\nw_0,", 0) == 0);
}

TEST_CASE("baselines") {
  const Eigen::MatrixXd t = (Eigen::MatrixXd(2, 2) << 0, 0, 2, 2).finished();
  CHECK(baseline_predict(fit_baseline(BaselineKind::zero, t), Seed{1}).isZero(0.0));
  CHECK(baseline_predict(fit_baseline(BaselineKind::mean, t), Seed{1}) == Eigen::VectorXd(Eigen::Vector2d(1, 1)));

  SUBCASE("zero ignores the training data; mean is the componentwise average") {
    Rng rng(Seed{2});
    const Eigen::MatrixXd targets = testing::random_points(rng, 9, 3, 4.0);
    CHECK(baseline_predict(fit_baseline(BaselineKind::zero, targets), Seed{5}).isZero(0.0));
    const Eigen::VectorXd mean = baseline_predict(fit_baseline(BaselineKind::mean, targets), Seed{5});
    CHECK((mean - targets.colwise().sum().transpose() / 9.0).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("random-draw predictions are training targets") {
    Rng rng(Seed{3});
    const Eigen::MatrixXd targets = testing::random_points(rng, 7, 2);
    const auto model = fit_baseline(BaselineKind::random_draw, targets);
    Rng draws(Seed{10});
    for (int i = 0; i < 10; ++i) {
      const Eigen::VectorXd p = baseline_predict(model, draws);
      bool member = false;
      for (Eigen::Index r = 0; r < targets.rows(); ++r) member |= (targets.row(r).transpose() == p);
      CHECK(member);
    }
  }
  SUBCASE("distribution draws match the fitted diagonal Gaussian") {
    Rng rng(Seed{4});
    Eigen::MatrixXd targets = testing::random_points(rng, 50, 2);
    targets.col(1) = targets.col(1) * 3.0 + Eigen::VectorXd::Constant(50, 5.0);
    const auto model = fit_baseline(BaselineKind::distribution, targets);
    Rng draws(Seed{11});
    Eigen::Vector2d sum = Eigen::Vector2d::Zero(), sq = Eigen::Vector2d::Zero();
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd p = baseline_predict(model, draws);
      sum += p;
      sq += p.cwiseProduct(p);
    }
    const Eigen::Vector2d mean = sum / n;
    const Eigen::Vector2d sd = (sq / n - mean.cwiseProduct(mean)).cwiseSqrt();
    CHECK((mean - model.train_mean).cwiseAbs().maxCoeff() < 0.05);
    CHECK((sd - model.train_stddev).cwiseAbs().maxCoeff() < 0.05);
    CHECK_THROWS_AS(fit_baseline(BaselineKind::distribution, targets.topRows(1)), Error);
  }
  CHECK(parse_baseline_kind("random-draw") == BaselineKind::random_draw);
  CHECK(to_string(BaselineKind::distribution) == "distribution");
  CHECK_THROWS_AS(parse_baseline_kind("median"), Error);
}

TEST_CASE("triangulate") {
  SUBCASE("hand geometry") {
    const Eigen::MatrixXd anchors = (Eigen::MatrixXd(3, 2) << 0, 0, 3, 0, 0, 3).finished();
    const Eigen::Vector3d d(std::sqrt(2.0), std::sqrt(5.0), std::sqrt(5.0));
    CHECK((triangulate(anchors, d) - Eigen::Vector2d(1, 1)).norm() < 1e-9);
  }
  SUBCASE("random 4D point from 6 anchors") {
    Rng rng(Seed{5});
    for (int t = 0; t < 20; ++t) {
      const Eigen::MatrixXd anchors = testing::random_points(rng, 6, 4);
      const Eigen::VectorXd p = testing::random_points(rng, 4, 1).col(0);
      const Eigen::VectorXd d = (anchors.rowwise() - p.transpose()).rowwise().norm();
      CHECK((triangulate(anchors, d) - p).norm() < 1e-9);
    }
  }
  SUBCASE("errors") {
    const Eigen::MatrixXd two = (Eigen::MatrixXd(2, 2) << 0, 0, 1, 0).finished();
    CHECK_THROWS_WITH_AS(triangulate(two, Eigen::Vector2d(1, 1)), doctest::Contains("insufficient anchors"), Error);
    const Eigen::MatrixXd collinear = (Eigen::MatrixXd(3, 2) << 0, 0, 1, 0, 2, 0).finished();
    CHECK_THROWS_WITH_AS(triangulate(collinear, Eigen::Vector3d(1, 1, 1)), doctest::Contains("rank-deficient"), Error);
  }
}

TEST_CASE("conceptual_distance") {
  const DomainPartition colour_shape({{"color", {0, 1}}, {"shape", {2}}});
  CHECK(conceptual_distance(Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(3, 4, 2), colour_shape) == 7.0);

  Rng rng(Seed{6});
  const Eigen::VectorXd p = testing::random_points(rng, 5, 1).col(0);
  const Eigen::VectorXd q = testing::random_points(rng, 5, 1).col(0);
  CHECK(conceptual_distance(p, q, DomainPartition::single(5)) == doctest::Approx((p - q).norm()).epsilon(1e-15));
  CHECK(conceptual_distance(p, q, DomainPartition::separate(5)) ==
        doctest::Approx((p - q).cwiseAbs().sum()).epsilon(1e-15));

  CHECK_THROWS_AS(DomainPartition({{"a", {0, 1}}, {"b", {1, 2}}}), Error);
  CHECK_THROWS_AS(DomainPartition({{"a", {0}}, {"b", {2}}}), Error);
  CHECK_THROWS_WITH_AS(conceptual_distance(p, q, colour_shape), doctest::Contains("partition mismatch"), Error);
}

TEST_CASE("conceptual_distance is a metric on 10^4 random triples") {
  Rng rng(Seed{7});
  const DomainPartition part({{"a", {0, 3}}, {"b", {1}}, {"c", {2, 4, 5}}});
  int violations = 0;
  for (int t = 0; t < 10000; ++t) {
    const Eigen::VectorXd a = testing::random_points(rng, 6, 1).col(0);
    const Eigen::VectorXd b = testing::random_points(rng, 6, 1).col(0);
    const Eigen::VectorXd c = testing::random_points(rng, 6, 1).col(0);
    const double ab = conceptual_distance(a, b, part);
    if (ab != conceptual_distance(b, a, part)) ++violations;
    if (conceptual_distance(a, a, part) != 0.0) ++violations;
    if (conceptual_distance(a, c, part) > ab + conceptual_distance(b, c, part) + 1e-12) ++violations;
  }
  CHECK(violations == 0);
}
