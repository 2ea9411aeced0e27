#include <doctest.h>

#include <ldce/data.hpp>
#include <ldce/error.hpp>

#include "oracles.hpp"

using namespace ldce;

TEST_CASE("encode_one_hot") {
  CHECK(encode_one_hot(0, 3) == Vector::Unit(3, 0));
  CHECK(encode_one_hot(2, 3) == Vector::Unit(3, 2));
  CHECK_THROWS_AS(encode_one_hot(3, 3), RangeError);
  CHECK_THROWS_AS(encode_one_hot(-1, 3), RangeError);

  for (int c = 2; c < 8; ++c)
    for (int k = 0; k < c; ++k) {
      const Vector y = encode_one_hot(k, c);
      CHECK(y.dot(y) == 1.0);
      CHECK(y.sum() == 1.0);
    }
}

TEST_CASE("dataset invariants") {
  Matrix x(2, 2);
  x << 1, 2, 3, 4;
  CHECK_NOTHROW(Dataset(x, {0, 1}, 2));
  CHECK_THROWS_AS(Dataset(x, {0, 2}, 2), ValidationError);
  CHECK_THROWS_AS(Dataset(x, {0, 1}, 1), ValidationError);
  CHECK_THROWS_AS(Dataset(x, {0}, 2), ValidationError);
  CHECK_THROWS_AS(Dataset(Matrix(0, 2), {}, 2), ValidationError);

  Matrix bad = x;
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Dataset(bad, {0, 1}, 2), ValidationError);

  const Dataset ds(x, {1, 0}, 3);
  Matrix expected(2, 3);
  expected << 0, 1, 0, 1, 0, 0;
  CHECK(ds.one_hot_labels() == expected);
}

TEST_CASE("gaussian mixture: degenerate variance puts every row on its mean") {
  GaussianMixtureSpec spec;
  spec.class_count = 3;
  spec.dim = 2;
  spec.means.resize(2, 3);
  spec.means << 1, -2, 5, 0, 3, -1;
  spec.sigma = 1e-9;
  spec.weights = {0.2, 0.3, 0.5};
  spec.seed = 11;
  const Dataset ds = gen_gaussian_mixture(spec, 10);
  REQUIRE(ds.size() == 10);
  CHECK(ds.provenance() == Provenance::clean);
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    CHECK((ds.features().row(i).transpose() - spec.means.col(ds.label(i))).cwiseAbs().maxCoeff() <
          1e-6);
  }
}

TEST_CASE("gaussian mixture: degenerate weights") {
  auto spec = default_mixture(4, 3, 1.0, 1.0, 5);
  spec.weights = {1, 0, 0, 0};
  const Dataset ds = gen_gaussian_mixture(spec, 100);
  for (int y : ds.labels()) CHECK(y == 0);
}

TEST_CASE("gaussian mixture: class frequencies follow weights") {
  auto spec = default_mixture(4, 5, 1.0, 1.0, 7);
  spec.weights = {0.1, 0.2, 0.3, 0.4};
  spec.seed = 7;
  const Dataset ds = gen_gaussian_mixture(spec, 200000);
  std::vector<double> counts(4, 0.0);
  for (int y : ds.labels()) counts[static_cast<std::size_t>(y)] += 1.0;
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(std::abs(counts[k] / 200000.0 - spec.weights[k]) <= 0.01);
  }
}

TEST_CASE("gaussian mixture: reproducible and validated") {
  const auto spec = default_mixture(3, 4, 0.7, 2.0, 42);
  CHECK(gen_gaussian_mixture(spec, 500) == gen_gaussian_mixture(spec, 500));

  auto other = spec;
  other.seed = 43;
  CHECK_FALSE(gen_gaussian_mixture(spec, 50) == gen_gaussian_mixture(other, 50));

  auto bad = spec;
  bad.sigma = 0.0;
  CHECK_THROWS_AS(gen_gaussian_mixture(bad, 10), ValidationError);
  bad = spec;
  bad.weights = {0.5, 0.5, 0.1};
  CHECK_THROWS_AS(gen_gaussian_mixture(bad, 10), ValidationError);
  bad = spec;
  bad.weights = {1.5, -0.5, 0.0};
  CHECK_THROWS_AS(gen_gaussian_mixture(bad, 10), ValidationError);
  CHECK_THROWS_AS(gen_gaussian_mixture(spec, 0), ValidationError);
}

TEST_CASE("standardizer is fitted on one split only") {
  std::mt19937_64 rng(3);
  const Matrix train = testing::random_matrix(400, 3, rng, 5.0).array() + 2.0;
  const Standardizer z = Standardizer::fit(train);
  const Matrix t = z.apply(train);
  CHECK(t.colwise().mean().cwiseAbs().maxCoeff() < 1e-12);
  for (Eigen::Index j = 0; j < 3; ++j) {
    CHECK(std::sqrt(t.col(j).squaredNorm() / 400.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  Matrix constant = Matrix::Constant(4, 2, 3.0);
  const Standardizer zc = Standardizer::fit(constant);
  CHECK(zc.apply(constant).isZero());
}

TEST_CASE("train_test_split partitions rows") {
  std::mt19937_64 rng(9);
  const Dataset ds = testing::random_dataset(100, 2, 3, rng);
  const Split s = train_test_split(ds, 0.8, 1);
  CHECK(s.train.size() == 80);
  CHECK(s.test.size() == 20);
  // every original row appears exactly once
  std::vector<double> seen;
  for (Eigen::Index i = 0; i < 80; ++i) seen.push_back(s.train.features()(i, 0));
  for (Eigen::Index i = 0; i < 20; ++i) seen.push_back(s.test.features()(i, 0));
  std::vector<double> orig(ds.features().col(0).data(), ds.features().col(0).data() + 100);
  std::sort(seen.begin(), seen.end());
  std::sort(orig.begin(), orig.end());
  CHECK(seen == orig);
  CHECK_THROWS_AS(train_test_split(ds, 1.0, 1), ValidationError);
}
