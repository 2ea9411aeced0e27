#include <doctest.h>

#include <ldce/centroid.hpp>
#include <ldce/error.hpp>

#include "oracles.hpp"

using namespace ldce;

TEST_CASE("imputation_matrix") {
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(imputation_matrix(0, 1, 2) == swap);
  CHECK(imputation_matrix(1, 1, 3) == Matrix::Identity(3, 3));
  CHECK(imputation_matrix(0, 2, 3) * encode_one_hot(0, 3) == encode_one_hot(2, 3));
  CHECK_THROWS_AS(imputation_matrix(0, 3, 3), RangeError);
  CHECK_THROWS_AS(imputation_matrix(-1, 0, 3), RangeError);
}

TEST_CASE("property: imputation matrices are symmetric involutions mapping e_i to e_j") {
  for (int c = 2; c <= 10; ++c)
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < c; ++j) {
        const Matrix k = imputation_matrix(i, j, c);
        CHECK(k == k.transpose());
        CHECK(k * k == Matrix::Identity(c, c));
        CHECK(k * encode_one_hot(i, c) == encode_one_hot(j, c));
        CHECK(k * encode_one_hot(j, c) == encode_one_hot(i, c));
        CHECK(k == testing::swap_rows_identity(i, j, c));
      }
}

TEST_CASE("empirical_centroid") {
  Matrix one(1, 2);
  one << 1, 2;
  Matrix expected(2, 2);
  expected << 1, 0, 2, 0;
  CHECK(empirical_centroid(Dataset(one, {0}, 2)) == expected);

  Matrix two(2, 2);
  two << 1, 0, 0, 1;
  expected << 0.5, 0, 0, 0.5;
  CHECK(empirical_centroid(Dataset(two, {0, 1}, 2)) == expected);

  std::mt19937_64 rng(4);
  const Matrix x = testing::random_matrix(20, 3, rng);
  const Centroid mu = empirical_centroid(Dataset(x, std::vector<int>(20, 2), 4));
  CHECK(mu.col(0).isZero());
  CHECK(mu.col(1).isZero());
  CHECK(mu.col(3).isZero());
  CHECK_FALSE(mu.col(2).isZero());
}

TEST_CASE("empirical_centroid equals (1/n) X^T Y") {
  std::mt19937_64 rng(8);
  const Dataset ds = testing::random_dataset(50, 4, 5, rng);
  const Matrix ref = ds.features().transpose() * ds.one_hot_labels() / 50.0;
  CHECK((empirical_centroid(ds) - ref).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("pseudo_inverse") {
  CHECK(pseudo_inverse(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3), 1e-15));

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 0.5;
  CHECK((pseudo_inverse(d) - expected).cwiseAbs().maxCoeff() < 1e-15);

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a = testing::random_matrix(4, 4, rng);
    a.diagonal().array() += 3.0;
    const Matrix lu_inverse = a.partialPivLu().inverse();
    const Matrix pinv = pseudo_inverse(a);
    CHECK((pinv * a - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((pinv - lu_inverse).cwiseAbs().maxCoeff() < 1e-10);
  }

  Matrix nan = Matrix::Identity(2, 2);
  nan(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(pseudo_inverse(nan), ValidationError);
}

TEST_CASE("property: Moore-Penrose identities on rank-deficient matrices") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const int c = 2 + trial % 6;
    const Matrix a = testing::random_matrix(c, 1, rng) * testing::random_matrix(1, c, rng) +
                     testing::random_matrix(c, 1, rng) * testing::random_matrix(1, c, rng);
    const Matrix p = pseudo_inverse(a);
    CHECK((a * p * a - a).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((p * a * p - p).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(((a * p).transpose() - a * p).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(((p * a).transpose() - p * a).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("compute_M") {
  std::mt19937_64 rng(31);

  SUBCASE("identity T gives identity") {
    for (int c = 2; c <= 8; ++c) {
      const ClassPriors pi(testing::exact_simplex(c, rng));
      CHECK(compute_M(TransitionMatrix::identity(c), pi).matrix == Matrix::Identity(c, c));
    }
  }

  SUBCASE("c = 2 symmetric, uniform priors") {
    Matrix expected(2, 2);
    expected << 0.8, 0.2, 0.2, 0.8;
    const auto m = compute_M(symmetric_T(2, 0.2), ClassPriors::uniform(2));
    CHECK((m.matrix - expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((m.matrix - testing::brute_force_M(symmetric_T(2, 0.2).matrix(),
                                             ClassPriors::uniform(2).values()))
              .cwiseAbs()
              .maxCoeff() < 1e-15);
  }

  SUBCASE("c = 3 symmetric matches the explicit sum") {
    const auto t = symmetric_T(3, 0.3);
    const auto pi = ClassPriors::uniform(3);
    const Matrix oracle = testing::brute_force_M(t.matrix(), pi.values());
    CHECK((compute_M(t, pi).matrix - oracle).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("random (T, pi) match the explicit sum and pinv identities hold") {
    for (int trial = 0; trial < 100; ++trial) {
      const int c = 2 + trial % 7;
      const TransitionMatrix t(testing::random_stochastic(c, rng));
      const ClassPriors pi(testing::random_simplex(c, rng));
      const auto m = compute_M(t, pi);
      CHECK((m.matrix - testing::brute_force_M(t.matrix(), pi.values())).cwiseAbs().maxCoeff() <=
            1e-12);
      CHECK((m.matrix * m.pinv * m.matrix - m.matrix).cwiseAbs().maxCoeff() <= 1e-8);
      CHECK((m.pinv * m.matrix * m.pinv - m.pinv).cwiseAbs().maxCoeff() <= 1e-8);
      CHECK(m.mode == CorrectionMode::paper_M);
    }
  }

  CHECK_THROWS_AS(compute_M(symmetric_T(3, 0.1), ClassPriors::uniform(4)), ValidationError);
}

TEST_CASE("correct_centroid") {
  std::mt19937_64 rng(6);
  const Centroid mu = testing::random_matrix(5, 3, rng);
  const auto pi = ClassPriors::uniform(3);

  for (auto mode : {CorrectionMode::paper_M, CorrectionMode::direct_T}) {
    CHECK((correct_centroid(mu, TransitionMatrix::identity(3), pi, mode) - mu)
              .cwiseAbs()
              .maxCoeff() < 1e-14);
  }

  const Centroid mu2 = testing::random_matrix(4, 2, rng);
  const auto t2 = symmetric_T(2, 0.2);
  const auto pi2 = ClassPriors::uniform(2);
  CHECK((correct_centroid(mu2, t2, pi2, CorrectionMode::paper_M) -
         correct_centroid(mu2, t2, pi2, CorrectionMode::direct_T))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  // paper_M output is the noisy centroid times the pseudo-inverse of the explicit sum
  const auto t3 = pairflip_T(3, 0.3);
  const ClassPriors pi3(testing::random_simplex(3, rng));
  const Matrix oracle =
      mu * testing::brute_force_M(t3.matrix(), pi3.values()).partialPivLu().inverse();
  CHECK((correct_centroid(mu, t3, pi3, CorrectionMode::paper_M) - oracle).cwiseAbs().maxCoeff() <
        1e-10);

  CHECK_THROWS_AS(correct_centroid(mu, symmetric_T(4, 0.1), ClassPriors::uniform(4),
                                   CorrectionMode::direct_T),
                  ValidationError);
  CHECK(parse_correction_mode("paper-m") == CorrectionMode::paper_M);
  CHECK(parse_correction_mode("direct-t") == CorrectionMode::direct_T);
  CHECK_THROWS_AS(parse_correction_mode("x"), ValidationError);
}

TEST_CASE("direct_T recovers the clean centroid on a large mixture") {
  auto spec = default_mixture(4, 5, 1.0, 2.0, 19);
  spec.weights = {0.4, 0.3, 0.2, 0.1};
  const Dataset clean = gen_gaussian_mixture(spec, 200000);
  const auto t = symmetric_T(4, 0.3);
  const Dataset noisy = inject_noise(clean, t, 3);
  const Centroid clean_mu = empirical_centroid(clean);
  const Centroid noisy_mu = empirical_centroid(noisy);

  // population identity mu(noisy) = mu(clean) T
  CHECK((noisy_mu - clean_mu * t.matrix()).norm() / clean_mu.norm() < 0.02);

  const ClassPriors pi = estimate_priors(t, noisy_label_frequencies(noisy));
  const Centroid corrected = correct_centroid(noisy_mu, t, pi, CorrectionMode::direct_T);
  CHECK((corrected - clean_mu).norm() / clean_mu.norm() <= 0.02);
}
