#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "sqcat/fock.hpp"
#include "sqcat/io.hpp"

using namespace sqcat;

namespace {

// Oracle: generalized Laguerre L_n^{(k)}(x) by the three-term recurrence.
double laguerre(int n, int k, double x) {
  if (n == 0) return 1.0;
  double lm1 = 1.0, l = 1.0 + k - x;
  for (int i = 1; i < n; ++i) {
    double lp1 = ((2 * i + 1 + k - x) * l - (i + k) * lm1) / (i + 1);
    lm1 = l;
    l = lp1;
  }
  return l;
}

double lnfact(int n) { return std::lgamma(n + 1.0); }

// Oracle: <m|D(beta)|n> in closed form (displaced-number matrix element).
cxd displacement_element(int m, int n, cxd beta) {
  double b2 = std::norm(beta);
  if (m >= n) {
    cxd pref = std::exp(0.5 * (lnfact(n) - lnfact(m))) * std::pow(beta, m - n);
    return pref * std::exp(-0.5 * b2) * laguerre(n, m - n, b2);
  }
  cxd pref = std::exp(0.5 * (lnfact(m) - lnfact(n))) *
             std::pow(-std::conj(beta), n - m);
  return pref * std::exp(-0.5 * b2) * laguerre(m, n - m, b2);
}

// Oracle: <2k|S(r)|0> for S(r) = exp(r/2 (a^2 - a^dag^2)).
double squeezed_vacuum_amp(int k, double r) {
  double lg = 0.5 * lnfact(2 * k) - k * std::log(2.0) - lnfact(k);
  double mag = std::sqrt(1.0 / std::cosh(r)) *
               std::exp(lg + k * std::log(std::tanh(std::abs(r))));
  double sign = (k % 2 == 0) ? 1.0 : -1.0;  // (-tanh r)^k for r > 0
  if (r < 0) sign = 1.0;
  return sign * mag;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("annihilation operator entries") {
  FockOp a2 = annihilation(2);
  CHECK(std::abs(a2(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(a2(0, 0)) == 0.0);
  CHECK(std::abs(a2(1, 0)) == 0.0);
  CHECK(std::abs(a2(1, 1)) == 0.0);

  FockOp a4 = annihilation(4);
  CHECK(std::abs(a4(2, 3) - std::sqrt(3.0)) < 1e-15);
  CHECK(std::abs(a4(1, 2) - std::sqrt(2.0)) < 1e-15);

  CHECK_THROWS_AS(annihilation(1), std::invalid_argument);
}

TEST_CASE("commutator [a, a^dag] = 1 below the cutoff row") {
  int dim = 30;
  FockOp a = annihilation(dim);
  FockOp comm = a * creation(dim) - creation(dim) * a;
  // Exact identity on rows/cols 0..dim-2; the corner picks up -dim+... from
  // truncation.
  FockOp block = comm.topLeftCorner(dim - 1, dim - 1);
  CHECK(max_abs(block - Eigen::MatrixXcd::Identity(dim - 1, dim - 1)) <
        1e-12);
}

TEST_CASE("displacement against the Laguerre closed form") {
  int dim = 40;
  cxd alpha(1.7, 0.3);
  FockOp D = displacement(alpha, dim);
  for (int m = 0; m < 18; ++m)
    for (int n = 0; n < 18; ++n)
      CHECK(std::abs(D(m, n) - displacement_element(m, n, alpha)) < 1e-10);
}

TEST_CASE("displacement special values") {
  CHECK(max_abs(displacement(cxd(0, 0), 12) -
                Eigen::MatrixXcd::Identity(12, 12)) < 1e-13);

  FockOp D = displacement(cxd(2, 0), 40);
  CHECK(std::abs(D(0, 0).real() - 0.13533528323661270) < 1e-9);
  CHECK(std::abs(D(0, 0).imag()) < 1e-12);
  CHECK(std::abs(D(1, 0).real() - 0.27067056647322540) < 1e-9);
}

TEST_CASE("displacement unitary on the safe block") {
  int dim = 50;
  FockOp D = displacement(cxd(2.0, 0.0), dim);
  FockOp G = D.adjoint() * D;
  int nb = safe_block(dim);
  CHECK(max_abs(G.topLeftCorner(nb, nb) -
                Eigen::MatrixXcd::Identity(nb, nb)) < 1e-9);
}

TEST_CASE("parity conjugation flips displacement") {
  int dim = 50;
  cxd alpha(1.3, -0.4);
  FockOp P = parity_op(dim);
  FockOp lhs = P * displacement(alpha, dim) * P;
  FockOp rhs = displacement(-alpha, dim);
  int nb = safe_block(dim);
  CHECK(max_abs((lhs - rhs).topLeftCorner(nb, nb)) < 1e-9);
}

TEST_CASE("squeezing special values and closed-form column") {
  CHECK(max_abs(squeezing(0.0, 10) - Eigen::MatrixXcd::Identity(10, 10)) <
        1e-13);

  int dim = 50;
  double r = 0.7;
  FockOp S = squeezing(r, dim);
  for (int k = 0; k <= 8; ++k) {
    CHECK(std::abs(S(2 * k, 0) - squeezed_vacuum_amp(k, r)) < 1e-9);
    if (2 * k + 1 < dim) CHECK(std::abs(S(2 * k + 1, 0)) < 1e-12);
  }
}

TEST_CASE("squeezed vacuum quadrature variance e^{-2r}/2") {
  int dim = 60;
  double r = 0.5;
  FockOp a = annihilation(dim);
  KetState sv = squeezing(r, dim).col(0);
  FockOp x = (a + creation(dim)) / std::sqrt(2.0);
  cxd x2 = expectation(FockOp(x * x), sv);
  cxd x1 = expectation(x, sv);
  double var = x2.real() - x1.real() * x1.real();
  CHECK(std::abs(var - 0.18393972058572117) < 1e-6);  // e^{-1}/2
}

TEST_CASE("squeezed vacuum photon number sinh^2(r)") {
  int dim = 90;
  double r = 1.32;
  KetState sv = squeezing(r, dim).col(0);
  double n = expectation(number_op(dim), sv).real();
  double want = std::sinh(r) * std::sinh(r);
  CHECK(std::abs(n - want) / want < 1e-4);
}

TEST_CASE("Bogoliubov relation S^dag a S = cosh(r) a - sinh(r) a^dag") {
  // The sandwich probes truncation for real: S spreads support by e^{2r},
  // so the clean block is dim e^{-2r} with margin (the squeezing
  // precondition), not the generic top-10% band.
  int dim = 120;
  double r = 0.5;
  FockOp a = annihilation(dim);
  FockOp S = squeezing(r, dim);
  FockOp lhs = S.adjoint() * a * S;
  FockOp rhs = std::cosh(r) * a - std::sinh(r) * creation(dim);
  int nb = 25;  // spread boundary at this (dim, r) sits near n = 29
  CHECK(max_abs((lhs - rhs).topLeftCorner(nb, nb)) < 1e-8);
}

TEST_CASE("squeezing inverse on the safe block") {
  int dim = 60;
  FockOp SS = squeezing(0.9, dim) * squeezing(-0.9, dim);
  int nb = safe_block(dim);
  CHECK(max_abs((SS - Eigen::MatrixXcd::Identity(dim, dim))
                    .topLeftCorner(nb, nb)) < 1e-9);
}

TEST_CASE("tensor product") {
  FockOp I6 = tensor(identity_op(2), identity_op(3));
  CHECK(max_abs(I6 - Eigen::MatrixXcd::Identity(6, 6)) == 0.0);

  // (a (x) I)(I (x) b) = a (x) b
  FockOp a = annihilation(3), b = annihilation(4);
  FockOp lhs = tensor(a, identity_op(4)) * tensor(identity_op(3), b);
  CHECK(max_abs(lhs - tensor(a, b)) < 1e-14);
}

TEST_CASE("matexp basics and oracle") {
  CHECK(max_abs(matexp(Eigen::MatrixXcd::Zero(5, 5)) -
                Eigen::MatrixXcd::Identity(5, 5)) == 0.0);

  // Nilpotent: exp([[0,1],[0,0]]) = [[1,1],[0,1]] exactly.
  Eigen::MatrixXcd nil = Eigen::MatrixXcd::Zero(2, 2);
  nil(0, 1) = 1.0;
  Eigen::MatrixXcd en = matexp(nil);
  CHECK(std::abs(en(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(en(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(en(1, 0)) < 1e-15);

  // Normal matrix with spectral radius ~50: compare to eigendecomposition.
  int n = 30;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Random(n, n);
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  double scale = 50.0 / std::max(std::abs(es.eigenvalues()(0)),
                                 std::abs(es.eigenvalues()(n - 1)));
  h *= scale;
  Eigen::MatrixXcd anti = cxd(0, 1) * h;  // skew-Hermitian, radius 50
  es.compute(h);
  Eigen::VectorXcd phases =
      (cxd(0, 1) * es.eigenvalues().cast<cxd>()).array().exp();
  Eigen::MatrixXcd want =
      es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  Eigen::MatrixXcd got = matexp(anti);
  CHECK(max_abs(got - want) / max_abs(want) < 1e-10);
}

TEST_CASE("expectation values") {
  int dim = 8;
  CHECK(std::abs(expectation(number_op(dim), fock_state(3, dim)) - 3.0) <
        1e-14);
  DensityOp rho = pure_density(fock_state(3, dim));
  CHECK(std::abs(expectation(number_op(dim), rho) - 3.0) < 1e-14);
}

TEST_CASE("coherent state closed form matches displacement column") {
  int dim = 45;
  cxd alpha(1.2, 0.7);
  KetState ket = coherent_state(alpha, dim);
  CHECK(std::abs(ket.norm() - 1.0) < 1e-12);
  KetState viaD = displacement(alpha, dim).col(0);
  CHECK((ket - viaD).cwiseAbs().maxCoeff() < 1e-9);
  // a|alpha> = alpha|alpha>
  KetState resid = annihilation(dim) * ket - alpha * ket;
  CHECK(resid.head(dim - 5).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("density validation catches violations") {
  DensityOp ok = pure_density(coherent_state(cxd(0.5, 0.2), 20));
  CHECK_NOTHROW(check_density(ok));

  DensityOp bad_herm = ok;
  bad_herm(0, 1) += cxd(0, 1e-3);
  CHECK_THROWS_AS(check_density(bad_herm), std::runtime_error);

  DensityOp bad_trace = 1.5 * ok;
  CHECK_THROWS_AS(check_density(bad_trace), std::runtime_error);

  DensityOp bad_pos = 1.1 * ok;
  bad_pos -= 0.1 * pure_density(fock_state(1, 20));
  bad_pos /= bad_pos.trace();
  CHECK_THROWS_AS(check_density(bad_pos), std::runtime_error);
}

TEST_CASE("recommended cutoff dominates state support") {
  // Cutoff must hold the lab-frame tail of a squeezed displaced state.
  struct Case {
    double ap, r;
  } cases[] = {{2.0, 0.0}, {3.464, 0.66}, {3.732, 1.317}, {4.47, 1.0}};
  for (auto c : cases) {
    int dim = recommended_cutoff(c.ap, c.r);
    KetState psi = squeezing(c.r, dim) * coherent_state(c.ap, dim);
    double tail = psi.tail(dim / 10).squaredNorm();
    CHECK(tail < 1e-9);
  }
}

TEST_CASE("binary and json round trips") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Random(7, 5);
  std::string path = "roundtrip_test.sqcm";
  save_matrix_binary(m, path);
  Eigen::MatrixXcd back = load_matrix_binary(path);
  CHECK(max_abs(m - back) == 0.0);
  std::remove(path.c_str());

  Eigen::MatrixXcd back2 = matrix_from_json(matrix_to_json(m));
  CHECK(max_abs(m - back2) < 1e-15);
}
