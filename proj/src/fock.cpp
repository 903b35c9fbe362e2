#include "sqcat/fock.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <stdexcept>

namespace sqcat {

namespace {
std::function<void(const std::string&)> g_warn_handler;
std::mutex g_warn_mutex;
}  // namespace

void set_warning_handler(std::function<void(const std::string&)> handler) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  g_warn_handler = std::move(handler);
}

void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  if (g_warn_handler) {
    g_warn_handler(message);
  } else {
    std::cerr << "[sqcat warning] " << message << "\n";
  }
}

FockOp annihilation(int dim) {
  if (dim < 2) throw std::invalid_argument("annihilation: dim must be >= 2");
  FockOp a = FockOp::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

FockOp creation(int dim) { return annihilation(dim).adjoint(); }

FockOp number_op(int dim) {
  FockOp n = FockOp::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = double(k);
  return n;
}

FockOp parity_op(int dim) {
  FockOp p = FockOp::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return p;
}

FockOp identity_op(int dim) { return FockOp::Identity(dim, dim); }

FockOp displacement(cxd alpha, int dim) {
  double aa = std::abs(alpha);
  if (aa * aa + 6.0 * aa >= dim)
    warn("displacement: cutoff margin violated (|alpha|^2 + 6|alpha| >= dim)");
  FockOp gen = alpha * creation(dim) - std::conj(alpha) * annihilation(dim);
  return matexp(gen);
}

FockOp squeezing(double r, int dim) {
  FockOp a = annihilation(dim);
  FockOp gen = 0.5 * r * (a * a - (a * a).adjoint().eval());
  return matexp(gen);
}

FockOp displaced_number_matrix(cxd alpha, int dim) {
  // Row recurrence from a D = D (a + alpha):
  //   sqrt(m+1) D[m+1, n] = sqrt(n) D[m, n-1] + alpha D[m, n],
  // seeded by D[0, n] = e^{-|alpha|^2/2} (-conj(alpha))^n / sqrt(n!).
  FockOp D(dim, dim);
  double la = std::log(std::max(std::abs(alpha), 1e-300));
  double ph = std::arg(-std::conj(alpha));
  for (int n = 0; n < dim; ++n) {
    double lmag = -0.5 * std::norm(alpha) + n * la - 0.5 * std::lgamma(n + 1.0);
    D(0, n) = std::polar(std::exp(lmag), n * ph);
  }
  for (int m = 0; m + 1 < dim; ++m) {
    double sm = std::sqrt(m + 1.0);
    for (int n = 0; n < dim; ++n) {
      cxd prev = (n > 0) ? std::sqrt(double(n)) * D(m, n - 1) : cxd(0);
      D(m + 1, n) = (prev + alpha * D(m, n)) / sm;
    }
  }
  return D;
}

FockOp tensor(const FockOp& A, const FockOp& B) {
  const auto ra = A.rows(), ca = A.cols(), rb = B.rows(), cb = B.cols();
  FockOp out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i)
    for (Eigen::Index j = 0; j < ca; ++j)
      out.block(i * rb, j * cb, rb, cb) = A(i, j) * B;
  return out;
}

cxd expectation(const FockOp& op, const KetState& psi) {
  if (op.rows() != psi.size())
    throw std::invalid_argument("expectation: dimension mismatch");
  return psi.dot(op * psi);  // Eigen's dot conjugates the left argument
}

cxd expectation(const FockOp& op, const DensityOp& rho) {
  if (op.rows() != rho.rows())
    throw std::invalid_argument("expectation: dimension mismatch");
  return (op * rho).trace();
}

KetState fock_state(int n, int dim) {
  if (n < 0 || n >= dim)
    throw std::invalid_argument("fock_state: level outside cutoff");
  KetState v = KetState::Zero(dim);
  v(n) = 1.0;
  return v;
}

KetState coherent_state(cxd alpha, int dim) {
  KetState v(dim);
  // log-space magnitudes to stay finite for large n
  double la = std::log(std::max(std::abs(alpha), 1e-300));
  double phase = std::arg(alpha);
  for (int n = 0; n < dim; ++n) {
    double lmag = -0.5 * std::norm(alpha) + n * la - 0.5 * std::lgamma(n + 1.0);
    v(n) = std::polar(std::exp(lmag), n * phase);
  }
  double nrm = v.norm();
  if (nrm < 1.0 - 1e-6)
    warn("coherent_state: cutoff clips the state (norm " +
         std::to_string(nrm) + ")");
  return v / nrm;
}

DensityOp pure_density(const KetState& psi) { return psi * psi.adjoint(); }

int safe_block(int dim) { return dim - dim / 10; }

int recommended_cutoff(double alpha_prime, double r, double tail_eps) {
  // Squeezed-vacuum occupations fall off like tanh^{2n} r; the displacement
  // (lab-frame amplitude alpha' e^{-r}) adds Poisson-like support on top.
  double logth = (r > 1e-12) ? std::log(1.0 / std::tanh(r)) : 0.0;
  double n_sq =
      (logth > 0) ? std::log(1.0 / tail_eps) / (2.0 * logth) : 0.0;
  double beta = alpha_prime * std::exp(-r);
  double n_disp = beta * beta + 6.0 * beta + 2.0 * beta * std::sqrt(n_sq);
  int n = static_cast<int>(std::ceil(1.3 * (n_sq + n_disp))) + 10;
  return n;
}

void check_density(const DensityOp& rho, double herm_tol, double tr_tol,
                   double eig_tol) {
  double herm = (rho - rho.adjoint().eval()).cwiseAbs().maxCoeff();
  if (herm > herm_tol)
    throw std::runtime_error("density check: not Hermitian (deviation " +
                             std::to_string(herm) + ")");
  double tr_dev = std::abs(rho.trace() - 1.0);
  if (tr_dev > tr_tol)
    throw std::runtime_error("density check: trace deviates by " +
                             std::to_string(tr_dev));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      0.5 * (rho + rho.adjoint().eval()), Eigen::EigenvaluesOnly);
  double mineig = es.eigenvalues().minCoeff();
  if (mineig < -eig_tol)
    throw std::runtime_error("density check: negative eigenvalue " +
                             std::to_string(mineig));
}

}  // namespace sqcat
