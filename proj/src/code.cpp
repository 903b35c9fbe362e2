#include "sqcat/code.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>

namespace sqcat {

namespace {

// <n> of the even codeword as a function of x = alpha'^2 at fixed squeezing.
double even_branch_nbar(double x, double r) {
  double sh = std::sinh(r);
  return sh * sh + x * (std::cosh(2 * r) * std::tanh(x) - std::sinh(2 * r));
}

// Unique root x of even_branch_nbar(x, r) = nbar with x >= x0, where
// x0 = (nbar - sinh^2 r) e^{2r} is the usual closed-form estimate. The
// estimate is always a lower bound (tanh x <= 1), so [x0, x0 + growth]
// brackets the root.
double solve_alpha_sq(double nbar, double r) {
  double sh2 = std::sinh(r) * std::sinh(r);
  double lo = (nbar - sh2) * std::exp(2 * r);
  double hi = lo + 10.0;
  int guard = 0;
  while (even_branch_nbar(hi, r) < nbar) {
    hi *= 2.0;
    if (++guard > 60) throw std::logic_error("alpha' bracketing failed");
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (even_branch_nbar(mid, r) < nbar ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Fock coefficients of S(r)|0>: <2k|S(r)|0> = sqrt(sech r) sqrt((2k)!) /
// (2^k k!) (-tanh r)^k, built in log space.
KetState squeezed_vacuum(double r, int dim) {
  KetState v = KetState::Zero(dim);
  if (r == 0.0) {
    v(0) = 1.0;
    return v;
  }
  double t = std::tanh(r);
  double log_sech = -std::log(std::cosh(r));
  for (int k = 0; 2 * k < dim; ++k) {
    double lg = 0.5 * log_sech + 0.5 * std::lgamma(2.0 * k + 1.0) -
                k * std::log(2.0) - std::lgamma(k + 1.0) +
                k * std::log(std::abs(t));
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    if (t < 0) sign = 1.0;  // (-tanh r)^k positive for r < 0
    v(2 * k) = sign * std::exp(lg);
  }
  return v;
}

// w_n = S(r)|n> from the ladder S(r) a^dag S(r)^dag = cosh r a^dag + sinh r a
// applied to the closed-form squeezed vacuum. No matrix exponential, so the
// only error is the genuine Fock tail beyond the cutoff.
std::vector<KetState> squeezed_number_states(double r, int d, int dim) {
  std::vector<KetState> w(d);
  w[0] = squeezed_vacuum(r, dim);
  double ch = std::cosh(r), sh = std::sinh(r);
  for (int n = 1; n < d; ++n) {
    KetState next = KetState::Zero(dim);
    const KetState& prev = w[n - 1];
    for (int m = 0; m < dim; ++m) {
      cxd acc = 0;
      if (m > 0) acc += ch * std::sqrt(double(m)) * prev(m - 1);
      if (m + 1 < dim) acc += sh * std::sqrt(double(m + 1)) * prev(m + 1);
      next(m) = acc;
    }
    w[n] = next / std::sqrt(double(n));
  }
  return w;
}

struct RawPair {
  KetState plus, minus;   // normalized, exact parity (-1)^0 / (-1)^1
  KetState displaced;     // D(beta) w_n, the phase reference
};

// S(r)[D(alpha') +- (-1)^n D(-alpha')]|n> = [D(beta) +- (-1)^n D(-beta)] w_n
// with beta = alpha' e^{-r}: the squeezing commutes through the displacement
// by shrinking it.
std::vector<RawPair> raw_subsystem_states(const SCParams& sc, int d, int dim) {
  double beta = sc.alpha_prime * std::exp(-sc.r);
  FockOp dp = displaced_number_matrix(beta, dim);
  FockOp dm = displaced_number_matrix(-beta, dim);
  std::vector<KetState> w = squeezed_number_states(sc.r, d, dim);
  std::vector<RawPair> raw(d);
  for (int n = 0; n < d; ++n) {
    KetState up = dp * w[n], um = dm * w[n];
    double s = (n % 2 == 0) ? 1.0 : -1.0;
    raw[n].plus = (up + s * um).normalized();
    raw[n].minus = (up - s * um).normalized();
    raw[n].displaced = up;
  }
  return raw;
}

}  // namespace

SCParams SCParams::from_nbar_r(double nbar, double r) {
  if (!(nbar > 0)) throw std::invalid_argument("nbar must be positive");
  if (!(r >= 0)) throw std::invalid_argument("squeezing must be >= 0");
  double sh2 = std::sinh(r) * std::sinh(r);
  if (!(sh2 < nbar))
    throw std::invalid_argument("sinh^2 r >= nbar: no photons left for the "
                                "displacement");
  SCParams sc;
  sc.nbar = nbar;
  sc.r = r;
  sc.alpha_prime = std::sqrt(solve_alpha_sq(nbar, r));
  sc.eta = (nbar - sh2) / nbar;
  return sc;
}

SCParams SCParams::from_nbar_eta(double nbar, double eta) {
  if (!(nbar > 0)) throw std::invalid_argument("nbar must be positive");
  if (!(eta > 0) || !(eta <= 1))
    throw std::invalid_argument("eta must lie in (0, 1]");
  double r = std::asinh(std::sqrt(nbar * (1.0 - eta)));
  return from_nbar_r(nbar, r);
}

SCParams SCParams::from_alpha_r(double alpha_prime, double r) {
  if (!(alpha_prime > 0))
    throw std::invalid_argument("alpha' must be positive");
  if (!(r >= 0)) throw std::invalid_argument("squeezing must be >= 0");
  SCParams sc;
  sc.alpha_prime = alpha_prime;
  sc.r = r;
  sc.nbar = even_branch_nbar(alpha_prime * alpha_prime, r);
  sc.eta = (sc.nbar - std::sinh(r) * std::sinh(r)) / sc.nbar;
  return sc;
}

SCParams SCParams::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("nbar")) throw std::invalid_argument("missing key nbar");
  bool has_r = j.contains("r"), has_eta = j.contains("eta");
  if (has_r == has_eta)
    throw std::invalid_argument("need exactly one of r, eta");
  double nbar = j.at("nbar").get<double>();
  return has_r ? from_nbar_r(nbar, j.at("r").get<double>())
               : from_nbar_eta(nbar, j.at("eta").get<double>());
}

std::string SCParams::to_json() const {
  nlohmann::json j;
  j["nbar"] = nbar;
  j["r"] = r;
  return j.dump();
}

double alpha_prime_max(double nbar) { return std::sqrt(nbar * nbar + nbar); }

double approx_alpha(double nbar, double eta) {
  return nbar * std::sqrt(4.0 * eta * (1.0 - eta));
}

double max_squeezing(double nbar) { return std::asinh(std::sqrt(nbar)); }

int recommended_cutoff(const SCParams& sc, double tail_eps) {
  return recommended_cutoff(sc.alpha_prime, sc.r, tail_eps);
}

int subsystem_cutoff(const SCParams& sc, int d, double tail_eps) {
  if (d < 1) throw std::invalid_argument("need d >= 1 gauge levels");
  int base = recommended_cutoff(sc, tail_eps);
  double extra = 2.0 * d;
  double t = std::tanh(sc.r);
  if (t > 0)
    extra += (d - 1) * (std::log(double(base)) + 1.0) / std::log(1.0 / t);
  return base + int(std::ceil(extra));
}

KetState cat_state(double alpha, int parity, int dim) {
  if (parity != 1 && parity != -1)
    throw std::invalid_argument("parity must be +1 or -1");
  if (parity == -1 && alpha == 0.0)
    throw std::invalid_argument("odd cat undefined at alpha = 0");
  KetState v = coherent_state(alpha, dim) +
               double(parity) * coherent_state(-alpha, dim);
  return v.normalized();
}

std::pair<KetState, KetState> codewords(const SCParams& sc, int dim) {
  std::vector<RawPair> raw = raw_subsystem_states(sc, 1, dim);
  return {raw[0].plus, raw[0].minus};
}

Eigen::MatrixXcd SubsystemBasis::projector() const {
  return vectors * vectors.adjoint();
}

SubsystemBasis build_subsystem_basis(const SCParams& sc, int d, int dim) {
  if (d < 1) throw std::invalid_argument("need d >= 1 gauge levels");
  if (dim < 2 * d) throw std::invalid_argument("cutoff below 2d");

  std::vector<RawPair> raw = raw_subsystem_states(sc, d, dim);
  Eigen::MatrixXcd v(dim, 2 * d);
  for (int n = 0; n < d; ++n) {
    v.col(n) = raw[n].plus;
    v.col(d + n) = raw[n].minus;
  }

  // At small alpha' the raw states pile up in a low-dimensional span and the
  // orthonormalization would amplify noise; refuse instead.
  Eigen::MatrixXcd gram = v.adjoint() * v;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  double lmin = es.eigenvalues().minCoeff();
  double lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > 0) || lmax / lmin > 1e8)
    throw std::runtime_error(
        "degenerate basis: raw gauge states are linearly dependent at this "
        "alpha' and d");

  // Modified Gram-Schmidt per parity branch, two passes; opposite branches
  // are orthogonal exactly (parity).
  for (int pass = 0; pass < 2; ++pass) {
    for (int block = 0; block < 2; ++block) {
      for (int k = 0; k < d; ++k) {
        int col = block * d + k;
        for (int j = 0; j < k; ++j) {
          int prev = block * d + j;
          v.col(col) -= v.col(prev).dot(v.col(col)) * v.col(prev);
        }
        v.col(col).normalize();
      }
    }
  }

  // Phase convention: positive overlap with the displaced branch D(beta) w_n.
  for (int n = 0; n < d; ++n) {
    for (int col : {n, d + n}) {
      cxd z = v.col(col).dot(raw[n].displaced);
      if (std::abs(z) > 0) v.col(col) *= z / std::abs(z);
    }
  }

  SubsystemBasis basis;
  basis.sc = sc;
  basis.d = d;
  basis.dim = dim;
  basis.vectors = std::move(v);
  return basis;
}

std::pair<Eigen::MatrixXcd, double> decompose_annihilation(
    const SubsystemBasis& basis) {
  int d = basis.d;
  FockOp a = annihilation(basis.dim);
  Eigen::MatrixXcd m = basis.vectors.adjoint() * (a * basis.vectors);

  Eigen::MatrixXcd g = gauge_lowering(d);
  Eigen::MatrixXcd ideal =
      logical_Z(d) *
      (basis.sc.alpha_prime * std::exp(-basis.sc.r) *
           Eigen::MatrixXcd::Identity(2 * d, 2 * d) +
       std::cosh(basis.sc.r) * g - std::sinh(basis.sc.r) * g.adjoint());

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m - ideal);
  return {m, svd.singularValues()(0)};
}

Eigen::MatrixXcd logical_Z(int d) {
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  z.block(0, d, d, d) = Eigen::MatrixXcd::Identity(d, d);
  z.block(d, 0, d, d) = Eigen::MatrixXcd::Identity(d, d);
  return z;
}

Eigen::MatrixXcd logical_X(int d) {
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Identity(2 * d, 2 * d);
  x.block(d, d, d, d) = -Eigen::MatrixXcd::Identity(d, d);
  return x;
}

Eigen::MatrixXcd gauge_lowering(int d) {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  for (int n = 1; n < d; ++n) {
    g(n - 1, n) = std::sqrt(double(n));
    g(d + n - 1, d + n) = std::sqrt(double(n));
  }
  return g;
}

QecMatrix qec_matrix(const SCParams& sc, const FockOp& error_op, int dim) {
  if (error_op.rows() != dim || error_op.cols() != dim)
    throw std::invalid_argument("error operator dimension mismatch");
  auto [cp, cm] = codewords(sc, dim);
  KetState ep = error_op * cp, em = error_op * cm;
  QecMatrix q;
  q.m << cp.dot(ep), cp.dot(em), cm.dot(ep), cm.dot(em);
  q.cI = 0.5 * (q.m(0, 0) + q.m(1, 1));
  q.cX = 0.5 * (q.m(0, 0) - q.m(1, 1));
  q.cZ = 0.5 * (q.m(0, 1) + q.m(1, 0));
  q.cY = (q.m(0, 1) - q.m(1, 0)) / cxd(0, 2);
  return q;
}

}  // namespace sqcat
