#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "afdm/rng.hpp"
#include "afdm/transforms.hpp"
#include "oracles.hpp"

using namespace afdm;

namespace {

CVec random_vec(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  CVec v(n);
  for (auto& x : v) x = rng.cgaussian(1.0);
  return v;
}

double unitarity_defect(const Eigen::MatrixXcd& a) {
  Eigen::MatrixXcd g = a * a.adjoint();
  g.diagonal().array() -= 1.0;
  return g.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("daft_matrix with zero chirps is the unitary DFT") {
  auto a = daft_matrix(4, {});
  auto f = oracle::daft_elementwise(4, 0.0, 0.0);
  CHECK((a - f).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(a(1, 1) - cplx{0.0, -0.5}) < 1e-14);  // e^{-j pi/2}/2
}

TEST_CASE("Fresnel case n=8 lambda=1/16 is unitary") {
  ChirpParams cp{1.0 / 16.0, 1.0 / 16.0, 0};
  CHECK(unitarity_defect(daft_matrix(8, cp)) < 1e-12);
}

TEST_CASE("daft_matrix matches the elementwise oracle") {
  ChirpParams cp{0.171875, 0.03125, 0};
  auto a = daft_matrix(16, cp);
  auto b = oracle::daft_elementwise(16, cp.lambda1, cp.lambda2);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(unitarity_defect(a) < 1e-12);
}

TEST_CASE("daft_matrix rejects n < 2") {
  CHECK_THROWS_AS(daft_matrix(1, {}), DimensionError);
}

TEST_CASE("unitarity across sizes including non-powers of two") {
  Rng rng(5);
  for (std::size_t n : {4u, 12u, 64u, 100u, 384u, 1024u}) {
    ChirpParams cp{rng.uniform() * 0.2, rng.uniform() * 0.1, 0};
    CHECK(unitarity_defect(daft_matrix(n, cp)) < 1e-11);
  }
}

TEST_CASE("fast path equals the dense matrix product") {
  Rng rng(17);
  for (std::size_t n : {8u, 32u, 96u}) {  // 96 exercises Bluestein
    ChirpParams cp{rng.uniform() * 0.3, rng.uniform() * 0.2, 0};
    TransformPlan plan(n, TransformKind::kDaft, cp);
    Eigen::MatrixXcd a = daft_matrix(n, cp);
    CVec x = random_vec(n, 100 + n);
    CVec fast = plan.forward(x);
    Eigen::Map<const Eigen::VectorXcd> xv(x.data(), n);
    Eigen::VectorXcd dense = a * xv;
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(fast[i] - dense(i)) < 1e-10);

    CVec fast_inv = plan.inverse(x);
    Eigen::VectorXcd dense_inv = a.adjoint() * xv;
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(fast_inv[i] - dense_inv(i)) < 1e-10);
  }
}

TEST_CASE("forward then inverse is the identity") {
  ChirpParams cp{7.0 / 128.0, 1.0 / 128.0, 0};
  TransformPlan plan(64, TransformKind::kDaft, cp);
  CVec x = random_vec(64, 3);
  CVec y = plan.forward(x);
  CVec z = plan.inverse(y);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(z[i] - x[i]) < 1e-10);
}

TEST_CASE("zero-chirp plan equals DFT plan output") {
  TransformPlan daft(32, TransformKind::kDaft, ChirpParams{0.0, 0.0, 0});
  TransformPlan dft(32, TransformKind::kDft);
  CVec x = random_vec(32, 4);
  CVec a = daft.forward(x);
  CVec b = dft.forward(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(a[i].real() == b[i].real());
    CHECK(a[i].imag() == b[i].imag());
  }
}

TEST_CASE("length mismatch raises") {
  TransformPlan plan(16, TransformKind::kDft);
  CVec x(8);
  CHECK_THROWS_AS(plan.forward(x), DimensionError);
}

TEST_CASE("transform preserves white-noise covariance") {
  const std::size_t n = 8;
  const std::size_t draws = 10000;
  ChirpParams cp{5.0 / 16.0, 1.0 / 16.0, 0};
  TransformPlan plan(n, TransformKind::kDaft, cp);
  Rng rng(11);
  Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t d = 0; d < draws; ++d) {
    CVec w(n);
    for (auto& v : w) v = rng.cgaussian(1.0);
    CVec aw = plan.forward(w);
    Eigen::Map<const Eigen::VectorXcd> av(aw.data(), n);
    cov += av * av.adjoint();
  }
  cov /= static_cast<double>(draws);
  Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
  CHECK((cov - eye).norm() / eye.norm() < 0.05);
}

TEST_CASE("orthogonality predicate follows the lambda1 bound") {
  ChirpParams cp{5.0 / 256.0, 0.0, 0};
  CHECK(cp.satisfies_orthogonality(2.0, 128));
  CHECK_FALSE(cp.satisfies_orthogonality(3.0, 128));
  ChirpParams guard{7.0 / 256.0, 0.0, 1};
  CHECK(guard.satisfies_orthogonality(2.0, 128));
  std::int64_t q = 0;
  CHECK(guard.integer_stride(128, &q));
  CHECK(q == 7);
}
