#include "helpers.hpp"

#include "pane/ccd.hpp"
#include "pane/factorization.hpp"

#include <doctest.h>

#include <random>

using namespace pane;
using pane_test::max_abs_diff;

namespace {

RowMat seeded_gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RowMat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

RowMat reconstruct(const SvdResult& svd) {
  return RowMat(svd.u * svd.sigma.asDiagonal() * svd.v.transpose());
}

AffinityPair fixture_affinity(std::uint64_t seed = 31) {
  auto g = pane_test::random_fixture(seed, 80, 12);
  return apmi(random_walk_matrix(g), normalize_attributes(g),
              make_walk_params(0.5, 0.015));
}

EmbeddingSet random_embedding(Eigen::Index n, Eigen::Index d, int k,
                              std::uint64_t seed) {
  EmbeddingSet emb;
  emb.x_f = seeded_gaussian(n, k / 2, seed);
  emb.x_b = seeded_gaussian(n, k / 2, seed + 1);
  emb.y = seeded_gaussian(d, k / 2, seed + 2);
  return emb;
}

}  // namespace

TEST_CASE("rand_svd recovers the identity exactly") {
  RowMat eye = RowMat::Identity(4, 4);
  auto svd = rand_svd(eye, 4, 3, 7);
  for (int i = 0; i < 4; ++i) CHECK(svd.sigma[i] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(max_abs_diff(reconstruct(svd), eye) <= 1e-10);
}

TEST_CASE("rand_svd is exact on exact low rank") {
  auto a = seeded_gaussian(40, 1, 1), b = seeded_gaussian(25, 1, 2);
  auto c = seeded_gaussian(40, 1, 3), d = seeded_gaussian(25, 1, 4);
  RowMat m = a * b.transpose() + c * d.transpose();
  auto svd = rand_svd(m, 2, 4, 99);
  CHECK((reconstruct(svd) - m).norm() <= 1e-8);
}

TEST_CASE("rand_svd is near-optimal against a dense reference SVD") {
  RowMat m = seeded_gaussian(50, 30, 5);
  // Make the spectrum decay so rank-10 truncation is meaningful.
  Eigen::JacobiSVD<ColMat> full(ColMat(m), Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vec decayed = full.singularValues();
  for (Eigen::Index i = 0; i < decayed.size(); ++i)
    decayed[i] *= std::pow(0.7, static_cast<double>(i));
  m = full.matrixU() * decayed.asDiagonal() * full.matrixV().transpose();

  double optimal_sq = 0.0;
  for (Eigen::Index i = 10; i < decayed.size(); ++i) optimal_sq += decayed[i] * decayed[i];
  const double optimal = std::sqrt(optimal_sq);

  auto svd = rand_svd(m, 10, 6, 12);
  CHECK((reconstruct(svd) - m).norm() <= 1.05 * optimal);
}

TEST_CASE("rand_svd is deterministic per seed and validates inputs") {
  RowMat m = seeded_gaussian(20, 8, 3);
  auto a = rand_svd(m, 4, 2, 42);
  auto b = rand_svd(m, 4, 2, 42);
  CHECK(max_abs_diff(a.u, b.u) == 0.0);
  CHECK(max_abs_diff(a.v, b.v) == 0.0);
  CHECK((a.sigma - b.sigma).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(rand_svd(m, 0, 2, 1), ConfigError);
  CHECK_THROWS_AS(rand_svd(m, 9, 2, 1), ConfigError);
  CHECK_THROWS_AS(rand_svd(m, 4, 0, 1), ConfigError);
}

TEST_CASE("rand_svd factors are orthonormal and ordered") {
  RowMat m = seeded_gaussian(60, 20, 8);
  auto svd = rand_svd(m, 6, 5, 4);
  ColMat vtv = svd.v.transpose() * svd.v;
  ColMat utu = svd.u.transpose() * svd.u;
  CHECK(max_abs_diff(vtv, ColMat::Identity(6, 6)) <= 1e-6);
  CHECK(max_abs_diff(utu, ColMat::Identity(6, 6)) <= 1e-6);
  for (int i = 1; i < 6; ++i) CHECK(svd.sigma[i] <= svd.sigma[i - 1] + 1e-12);
}

TEST_CASE("greedy_init on identity affinities is an exact factorization") {
  AffinityPair aff;
  aff.f_prime = RowMat::Identity(2, 2);
  aff.b_prime = RowMat::Identity(2, 2);
  auto [emb, res] = greedy_init(aff, 4, 3, 11);
  CHECK(max_abs_diff(ColMat(emb.x_f * emb.y.transpose()), ColMat::Identity(2, 2)) <= 1e-10);
  CHECK(max_abs_diff(ColMat(emb.y.transpose() * emb.y), ColMat::Identity(2, 2)) <= 1e-10);
  CHECK(max_abs_diff(emb.x_b, emb.y) <= 1e-10);  // X_b = B' Y = Y on identity
  CHECK(res.s_f.cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((res.s_b * emb.y).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("greedy_init zeroes the forward residual at exact rank") {
  RowMat f = seeded_gaussian(50, 4, 21) * seeded_gaussian(20, 4, 22).transpose();
  AffinityPair aff;
  aff.f_prime = f;
  aff.b_prime = seeded_gaussian(50, 20, 23);
  auto [emb, res] = greedy_init(aff, 8, 50, 5);
  CHECK(res.s_f.cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("greedy_init beats random Gaussian initialization on every seed") {
  auto aff = fixture_affinity();
  auto [emb, res] = greedy_init(aff, 8, 6, 1);
  const double greedy_obj = objective(aff, emb);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto rnd = random_embedding(aff.f_prime.rows(), aff.f_prime.cols(), 8, 100 + seed);
    CHECK(greedy_obj < objective(aff, rnd));
  }
}

TEST_CASE("greedy_init validates k") {
  auto aff = fixture_affinity();
  CHECK_THROWS_AS(greedy_init(aff, 7, 3, 1), ConfigError);
  CHECK_THROWS_AS(greedy_init(aff, 0, 3, 1), ConfigError);
  CHECK_THROWS_AS(greedy_init(aff, 400, 3, 1), ConfigError);  // k/2 > min(n,d)
}

TEST_CASE("residual state is consistent after both init paths") {
  auto aff = fixture_affinity(77);
  auto [emb, res] = greedy_init(aff, 8, 6, 3);
  CHECK(max_abs_diff(RowMat(emb.x_f * emb.y.transpose() - aff.f_prime), res.s_f) <= 1e-6);
  CHECK(max_abs_diff(RowMat(emb.x_b * emb.y.transpose() - aff.b_prime), res.s_b) <= 1e-6);

  auto [emb2, res2] = sm_greedy_init(aff, contiguous_partition(80, 4), 8, 6, 3);
  CHECK(max_abs_diff(RowMat(emb2.x_f * emb2.y.transpose() - aff.f_prime), res2.s_f) <= 1e-6);
  CHECK(max_abs_diff(RowMat(emb2.x_b * emb2.y.transpose() - aff.b_prime), res2.s_b) <= 1e-6);
}

TEST_CASE("sm_greedy_init with one block matches greedy_init reconstructions") {
  auto aff = fixture_affinity(41);
  auto [g_emb, g_res] = greedy_init(aff, 8, 30, 9);
  auto [s_emb, s_res] = sm_greedy_init(aff, contiguous_partition(80, 1), 8, 30, 9);
  CHECK(max_abs_diff(ColMat(g_emb.x_f * g_emb.y.transpose()),
                     ColMat(s_emb.x_f * s_emb.y.transpose())) <= 1e-8);
}

TEST_CASE("sm_greedy_init satisfies the exact-rank split-merge guarantees") {
  RowMat f = seeded_gaussian(60, 5, 31) * seeded_gaussian(24, 5, 32).transpose();
  AffinityPair aff;
  aff.f_prime = f;
  aff.b_prime = seeded_gaussian(60, 24, 33);
  for (std::uint32_t nb : {2u, 4u}) {
    auto [emb, res] = sm_greedy_init(aff, contiguous_partition(60, nb), 10, 50, 2);
    CHECK(res.s_f.cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(max_abs_diff(ColMat(emb.y.transpose() * emb.y), ColMat::Identity(5, 5)) <= 1e-8);
    CHECK((res.s_b * emb.y).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("sm_greedy_init objective stays close to greedy_init on a fixture") {
  auto g = pane_test::cycle3();
  auto aff = apmi(random_walk_matrix(g), normalize_attributes(g),
                  make_walk_params(0.5, 0.25));
  auto [g_emb, g_res] = greedy_init(aff, 2, 50, 1);
  auto [s_emb, s_res] = sm_greedy_init(aff, contiguous_partition(3, 3), 2, 50, 1);
  const double base = objective(aff, g_emb);
  CHECK(objective(aff, s_emb) <= 1.05 * base);
}

TEST_CASE("sm_greedy_init validates partitions and block sizes") {
  auto aff = fixture_affinity(61);
  Partition bad = {{0, 1}};  // misses most node ids
  CHECK_THROWS_AS(sm_greedy_init(aff, bad, 4, 3, 1), ConfigError);
  // 80 rows in 41 blocks leaves blocks below k/2 = 2 rows.
  CHECK_THROWS_AS(sm_greedy_init(aff, contiguous_partition(80, 41), 4, 3, 1),
                  ConfigError);
}
