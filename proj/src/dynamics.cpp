#include "sqcat/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

namespace sqcat {

namespace {

double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

SparseOp to_sparse(const FockOp& m) {
  double scale = max_abs(m);
  SparseOp s = scale > 0 ? m.sparseView(scale, 1e-14) : m.sparseView();
  s.makeCompressed();
  return s;
}

double max_abs_sparse(const SparseOp& s) {
  double m = 0;
  for (int c = 0; c < s.outerSize(); ++c)
    for (SparseOp::InnerIterator it(s, c); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

// Pauli 2x2s over the codeword (X eigenbasis) ordering (+, -): X is diagonal,
// Z flips the branches. Matches the code-module expansion convention.
std::array<Eigen::Matrix2cd, 4> pauli_basis() {
  std::array<Eigen::Matrix2cd, 4> s;
  cxd i(0, 1);
  s[0] << 1, 0, 0, 1;
  s[1] << 1, 0, 0, -1;
  s[2] << 0, i, -i, 0;
  s[3] << 0, 1, 1, 0;
  return s;
}

// Solve E(|a><b|) = sum_ij chi_ij sigma_i |a><b| sigma_j for chi given the
// four measured 2x2 outputs in codeword-basis coordinates.
Eigen::Matrix4cd chi_from_blocks(const Eigen::Matrix2cd& m_pp,
                                 const Eigen::Matrix2cd& m_mm,
                                 const Eigen::Matrix2cd& m_pm,
                                 const Eigen::Matrix2cd& m_mp) {
  auto sig = pauli_basis();
  const Eigen::Matrix2cd* blocks[4] = {&m_pp, &m_mm, &m_pm, &m_mp};
  int in_a[4] = {0, 1, 0, 1};
  int in_b[4] = {0, 1, 1, 0};
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(16, 16);
  Eigen::VectorXcd m(16);
  for (int k = 0; k < 4; ++k) {
    for (int c = 0; c < 2; ++c) {
      for (int d = 0; d < 2; ++d) {
        int row = 4 * k + 2 * c + d;
        m(row) = (*blocks[k])(c, d);
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            a(row, 4 * i + j) = sig[i](c, in_a[k]) * sig[j](in_b[k], d);
      }
    }
  }
  Eigen::VectorXcd x = a.fullPivLu().solve(m);
  Eigen::Matrix4cd chi;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) chi(i, j) = x(4 * i + j);
  return (chi + chi.adjoint()) / 2.0;
}

}  // namespace

DensityOp Liouvillian::apply(const DensityOp& rho) const {
  DensityOp out = -(effective * rho);
  out.noalias() -= rho * effective_dag;
  for (const JumpTerm& j : jumps) {
    DensityOp tmp = j.op * rho;
    out.noalias() += j.rate * (tmp * j.op_dag);
  }
  return out;
}

SparseOp Liouvillian::superoperator() const {
  SparseOp id(dim, dim);
  id.setIdentity();
  SparseOp eff_conj = effective.conjugate();
  SparseOp s = SparseOp(kroneckerProduct(id, effective)) +
               SparseOp(kroneckerProduct(eff_conj, id));
  s *= cxd(-1.0, 0.0);
  for (const JumpTerm& j : jumps) {
    SparseOp lc = j.op.conjugate();
    s += SparseOp(cxd(j.rate, 0.0) * kroneckerProduct(lc, j.op));
  }
  s.makeCompressed();
  return s;
}

Liouvillian make_liouvillian(const DissipatorSet& set, int dim) {
  Liouvillian lv;
  lv.dim = dim;
  FockOp g = FockOp::Zero(dim, dim);
  if (set.hamiltonian) {
    if (set.hamiltonian->rows() != dim)
      throw std::invalid_argument("hamiltonian dimension mismatch");
    g += cxd(0, 1) * (*set.hamiltonian);
  }
  for (const auto& [op, rate] : set.jumps) {
    if (op.rows() != dim || op.cols() != dim)
      throw std::invalid_argument("jump operator dimension mismatch");
    if (!(rate >= 0) || !std::isfinite(rate))
      throw std::invalid_argument("jump rates must be finite and nonnegative");
    if (rate == 0) continue;
    JumpTerm term;
    term.op = to_sparse(op);
    term.op_dag = to_sparse(op.adjoint());
    term.rate = rate;
    lv.jumps.push_back(std::move(term));
    g += 0.5 * rate * (op.adjoint() * op);
  }
  lv.effective = to_sparse(g);
  lv.effective_dag = to_sparse(g.adjoint());
  return lv;
}

DensityOp evolve(const Liouvillian& lv, const DensityOp& rho0, double t,
                 double tol) {
  if (!(t >= 0) || !std::isfinite(t))
    throw std::invalid_argument("evolution time must be finite and >= 0");
  if (rho0.rows() != lv.dim || rho0.cols() != lv.dim)
    throw std::invalid_argument("state dimension mismatch");
  if (t == 0) return rho0;

  // Dormand-Prince 5(4) coefficients; e = b5th - b4th error weights.
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  DensityOp y = rho0;
  DensityOp k1 = lv.apply(y);
  double done = 0;
  double dt = std::min(
      t, 1e-2 * std::max(1.0, max_abs(y)) / std::max(max_abs(k1), 1e-12));
  const double dt_floor = std::max(t * 1e-12, 1e-300);

  while (done < t) {
    dt = std::min(dt, t - done);
    if (dt < dt_floor)
      throw std::runtime_error(
          "evolve: time step underflow (stiff generator); use the "
          "squeezed-frame generator or reduce the cutoff");
    DensityOp k2 = lv.apply(y + dt * a21 * k1);
    DensityOp k3 = lv.apply(y + dt * (a31 * k1 + a32 * k2));
    DensityOp k4 = lv.apply(y + dt * (a41 * k1 + a42 * k2 + a43 * k3));
    DensityOp k5 =
        lv.apply(y + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    DensityOp k6 = lv.apply(
        y + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    DensityOp ynew =
        y + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    DensityOp k7 = lv.apply(ynew);
    DensityOp err =
        dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double scale = std::max(1.0, max_abs(ynew));
    double errnorm = max_abs(err) / scale;
    if (errnorm <= tol) {
      y.swap(ynew);
      k1.swap(k7);
      done += dt;
    }
    double factor =
        errnorm > 0 ? 0.9 * std::pow(tol / errnorm, 0.2) : 5.0;
    dt *= std::clamp(factor, 0.2, 5.0);
  }
  return y;
}

namespace {

double rate_scale_of(const Liouvillian& lv) {
  double s = 0;
  for (const JumpTerm& j : lv.jumps) s = std::max(s, j.rate);
  return s > 0 ? s : 1.0;
}

DensityOp finalize_steady(DensityOp rho) {
  double fro = rho.norm();
  cxd tr = rho.trace();
  if (std::abs(tr) > 0.2 * fro) {
    rho /= tr;
    rho = ((rho + rho.adjoint()) / 2.0).eval();
  } else {
    rho /= fro;
  }
  return rho;
}

}  // namespace

DensityOp steady_state(const Liouvillian& lv, const DensityOp& seed,
                       double tol, int max_iters) {
  if (seed.rows() != lv.dim || seed.cols() != lv.dim)
    throw std::invalid_argument("seed dimension mismatch");
  const int n = lv.dim;
  const double scale = rate_scale_of(lv);
  if (n <= 120) {
    SparseOp s = lv.superoperator();
    double snorm = max_abs_sparse(s);
    SparseOp shift(n * n, n * n);
    shift.setIdentity();
    SparseOp a = s - SparseOp(cxd(1e-9 * std::max(snorm, 1.0), 0.0) * shift);
    a.makeCompressed();
    Eigen::SparseLU<SparseOp> lu(a);
    if (lu.info() == Eigen::Success) {
      Eigen::VectorXcd x =
          Eigen::Map<const Eigen::VectorXcd>(seed.data(), n * n);
      x /= x.norm();
      for (int it = 0; it < max_iters; ++it) {
        x = lu.solve(x);
        x /= x.norm();
        DensityOp rho = finalize_steady(
            Eigen::Map<const DensityOp>(x.data(), n, n));
        if (max_abs(lv.apply(rho)) <= tol * scale) return rho;
      }
      throw std::runtime_error("steady_state: inverse iteration stalled");
    }
  }
  // Long-time fallback for large dims or a failed factorization.
  DensityOp rho = finalize_steady(seed);
  double t_block = 1.0 / scale;
  for (int block = 0; block < 48; ++block) {
    rho = finalize_steady(evolve(lv, rho, t_block, 1e-9));
    if (max_abs(lv.apply(rho)) <= tol * scale) return rho;
    t_block *= 1.7;
  }
  throw std::runtime_error("steady_state: long-time integration stalled");
}

DensityOp steady_state(const Liouvillian& lv) {
  return steady_state(
      lv, DensityOp::Identity(lv.dim, lv.dim) / double(lv.dim), 1e-9, 60);
}

void PauliProcess::validate() const {
  if (max_abs(chi - chi.adjoint()) > 1e-8 * std::max(1.0, max_abs(chi)))
    throw std::runtime_error("process matrix not hermitian");
  for (int i = 0; i < 4; ++i) {
    if (chi(i, i).real() < -1e-8)
      throw std::runtime_error("process matrix has a negative diagonal");
  }
  if (!(duration >= 0)) throw std::runtime_error("negative process duration");
}

double PauliProcess::completeness_defect() const {
  auto sig = pauli_basis();
  Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) sum += chi(i, j) * sig[j] * sig[i];
  return max_abs(sum - Eigen::Matrix2cd::Identity());
}

PauliProcess channel_tomography(const Liouvillian& lv, double T,
                                const SubsystemBasis& basis, double tol) {
  if (!(T > 0)) throw std::invalid_argument("tomography duration must be > 0");
  if (basis.dim != lv.dim)
    throw std::invalid_argument("basis and generator dims differ");
  KetState plus = basis.vectors.col(0);
  KetState minus = basis.vectors.col(basis.d);
  Eigen::MatrixXcd b(lv.dim, 2);
  b.col(0) = plus;
  b.col(1) = minus;

  DensityOp e_pp = evolve(lv, plus * plus.adjoint(), T, tol);
  DensityOp e_mm = evolve(lv, minus * minus.adjoint(), T, tol);
  DensityOp e_pm = evolve(lv, plus * minus.adjoint(), T, tol);
  DensityOp e_mp = e_pm.adjoint();

  Eigen::Matrix2cd m_pp = b.adjoint() * e_pp * b;
  Eigen::Matrix2cd m_mm = b.adjoint() * e_mm * b;
  Eigen::Matrix2cd m_pm = b.adjoint() * e_pm * b;
  Eigen::Matrix2cd m_mp = b.adjoint() * e_mp * b;

  PauliProcess proc;
  proc.duration = T;
  proc.leakage = std::max(1.0 - m_pp.trace().real(),
                          1.0 - m_mm.trace().real());
  if (proc.leakage > 0.10)
    throw std::runtime_error("channel_tomography: codespace leakage " +
                             std::to_string(proc.leakage) +
                             " exceeds 10%, chi unreliable");
  proc.chi = chi_from_blocks(m_pp, m_mm, m_pm, m_mp);
  return proc;
}

std::array<double, 3> twirled_rates(const PauliProcess& process) {
  if (!(process.duration > 0))
    throw std::invalid_argument("process duration must be > 0");
  std::array<double, 3> rates{};
  for (int i = 1; i < 4; ++i) {
    double p = process.chi(i, i).real();
    if (p > 0.3)
      throw std::runtime_error(
          "twirled_rates: chi_ii = " + std::to_string(p) +
          " too large for the first-order rate conversion");
    rates[i - 1] = p / process.duration;
  }
  return rates;
}

RateFit twirled_rate_fit(const std::vector<PauliProcess>& seq) {
  const int n = int(seq.size());
  if (n < 2)
    throw std::invalid_argument("rate fit needs at least two durations");
  double tbar = 0;
  for (const auto& p : seq) tbar += p.duration;
  tbar /= n;
  double sxx = 0;
  for (const auto& p : seq) sxx += (p.duration - tbar) * (p.duration - tbar);
  if (sxx <= 0) throw std::invalid_argument("durations must differ");
  RateFit fit;
  for (int i = 1; i < 4; ++i) {
    double ybar = 0;
    for (const auto& p : seq) ybar += p.chi(i, i).real();
    ybar /= n;
    double sxy = 0;
    for (const auto& p : seq)
      sxy += (p.duration - tbar) * (p.chi(i, i).real() - ybar);
    double slope = sxy / sxx;
    double ss_res = 0;
    for (const auto& p : seq) {
      double r = p.chi(i, i).real() - ybar - slope * (p.duration - tbar);
      ss_res += r * r;
    }
    fit.rates[i - 1] = slope;
    fit.stderrs[i - 1] = n > 2 ? std::sqrt(ss_res / ((n - 2) * sxx)) : 0.0;
  }
  return fit;
}

namespace {

// Loss-channel Kraus operators conjugated into the squeezed frame:
// S+ A_k S = sqrt(gamma^k / k!) exp(-lambda S+nS) (S+aS)^k.
std::vector<FockOp> squeezed_loss_kraus(const SCParams& sc, double gamma,
                                        int dim, int kmax = 4) {
  double lam = gamma > 0 ? -std::log(1.0 - gamma) / 2.0 : 0.0;
  double ch = std::cosh(sc.r), sh = std::sinh(sc.r);
  FockOp a = annihilation(dim);
  FockOp ad = a.adjoint();
  FockOp atil = ch * a - sh * ad;
  FockOp ntil = sh * sh * identity_op(dim) +
                (ch * ch + sh * sh) * number_op(dim) -
                ch * sh * (a * a + ad * ad);
  FockOp decay =
      lam > 0 ? matexp((-lam * ntil).eval()) : identity_op(dim);
  std::vector<FockOp> kraus;
  FockOp apow = identity_op(dim);
  double logfac = 0;
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) {
      apow = (atil * apow).eval();
      logfac += std::log(double(k));
    }
    double w = k == 0 ? 1.0
                      : std::exp(0.5 * (k * std::log(gamma) - logfac));
    if (gamma == 0 && k > 0) break;
    kraus.push_back(w * (decay * apow));
  }
  return kraus;
}

}  // namespace

double loss_kraus_defect(const SCParams& sc, double gamma) {
  SCParams frame = SCParams::from_alpha_r(sc.alpha_prime, 0.0);
  int dim = recommended_cutoff(frame, 1e-14) + 10;
  auto [cp, cm] = codewords(frame, dim);
  auto kraus = squeezed_loss_kraus(sc, gamma, dim);
  FockOp sum = FockOp::Zero(dim, dim);
  for (const FockOp& a : kraus) sum += a.adjoint() * a;
  Eigen::MatrixXcd b(dim, 2);
  b.col(0) = cp;
  b.col(1) = cm;
  return max_abs(b.adjoint() * (identity_op(dim) - sum) * b);
}

double entanglement_infidelity(const SCParams& sc, double gamma,
                               Recovery recovery) {
  if (!(gamma >= 0 && gamma <= 0.2))
    throw std::invalid_argument("loss probability must lie in [0, 0.2]");
  SCParams frame = SCParams::from_alpha_r(sc.alpha_prime, 0.0);
  int dim = recommended_cutoff(frame, 1e-14) + 10;
  auto [cp, cm] = codewords(frame, dim);
  Eigen::MatrixXcd b(dim, 2);
  b.col(0) = cp;
  b.col(1) = cm;
  auto kraus = squeezed_loss_kraus(sc, gamma, dim);

  Liouvillian recover;
  double t_rec = 0;
  if (recovery == Recovery::autoqec) {
    DissipatorSet eng;
    eng.jumps.emplace_back(engineered_F(frame, dim), 1.0);
    recover = make_liouvillian(eng, dim);
    t_rec = 20.0 / (4.0 * sc.alpha_prime * sc.alpha_prime);
  }
  DensityOp proj = b * b.adjoint();

  auto channel = [&](const DensityOp& rho) -> DensityOp {
    DensityOp lossy = DensityOp::Zero(dim, dim);
    for (const FockOp& a : kraus) lossy += a * rho * a.adjoint();
    if (recovery == Recovery::autoqec)
      return evolve(recover, lossy, t_rec, 1e-9);
    return proj * lossy * proj;
  };

  DensityOp e_pp = channel(cp * cp.adjoint());
  DensityOp e_mm = channel(cm * cm.adjoint());
  DensityOp e_pm = channel(cp * cm.adjoint());
  Eigen::Matrix2cd m_pp = b.adjoint() * e_pp * b;
  Eigen::Matrix2cd m_mm = b.adjoint() * e_mm * b;
  Eigen::Matrix2cd m_pm = b.adjoint() * e_pm * b;
  Eigen::Matrix2cd m_mp = m_pm.adjoint();
  Eigen::Matrix4cd chi = chi_from_blocks(m_pp, m_mm, m_pm, m_mp);
  return 1.0 - chi(0, 0).real();
}

Eigen::MatrixXd wigner(const DensityOp& rho, const WignerGrid& grid) {
  if (grid.nx < 1 || grid.np < 1)
    throw std::invalid_argument("wigner grid must have >= 1 point per axis");
  const int n = int(rho.rows());
  DensityOp herm = (rho + rho.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<DensityOp> es(herm);
  double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
  std::vector<int> keep;
  for (int k = 0; k < n; ++k)
    if (std::abs(es.eigenvalues()(k)) > 1e-12 * std::max(lmax, 1.0))
      keep.push_back(k);
  Eigen::MatrixXcd psi(n, int(keep.size()));
  Eigen::VectorXd lam(int(keep.size()));
  for (int k = 0; k < int(keep.size()); ++k) {
    psi.col(k) = es.eigenvectors().col(keep[k]);
    lam(k) = es.eigenvalues()(keep[k]);
  }
  Eigen::VectorXd sign(n);
  for (int m = 0; m < n; ++m) sign(m) = (m % 2 == 0) ? 1.0 : -1.0;

  Eigen::MatrixXd w(grid.np, grid.nx);
  for (int ix = 0; ix < grid.nx; ++ix) {
    double x = grid.nx == 1 ? grid.xmin
                            : grid.xmin + (grid.xmax - grid.xmin) * ix /
                                              double(grid.nx - 1);
    for (int ip = 0; ip < grid.np; ++ip) {
      double p = grid.np == 1 ? grid.pmin
                              : grid.pmin + (grid.pmax - grid.pmin) * ip /
                                                double(grid.np - 1);
      FockOp d = displaced_number_matrix(cxd(-x, -p), n);
      Eigen::MatrixXcd v = d * psi;
      double val = 0;
      for (int k = 0; k < v.cols(); ++k)
        val += lam(k) * (sign.array() * v.col(k).cwiseAbs2().array()).sum();
      w(ip, ix) = 2.0 / M_PI * val;
    }
  }
  return w;
}

void write_wigner_csv(const std::string& path, const WignerGrid& grid,
                      const Eigen::MatrixXd& w) {
  if (w.rows() != grid.np || w.cols() != grid.nx)
    throw std::invalid_argument("wigner grid and matrix sizes differ");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(10);
  out << "x,p,w\n";
  for (int ix = 0; ix < grid.nx; ++ix) {
    double x = grid.nx == 1 ? grid.xmin
                            : grid.xmin + (grid.xmax - grid.xmin) * ix /
                                              double(grid.nx - 1);
    for (int ip = 0; ip < grid.np; ++ip) {
      double p = grid.np == 1 ? grid.pmin
                              : grid.pmin + (grid.pmax - grid.pmin) * ip /
                                                double(grid.np - 1);
      out << x << ',' << p << ',' << w(ip, ix) << '\n';
    }
  }
}

std::pair<Eigen::MatrixXcd, std::vector<int>> parity_sector_matrix(
    const Liouvillian& lv, const DensityOp& seed) {
  const int n = lv.dim;
  if (seed.rows() != n || seed.cols() != n)
    throw std::invalid_argument("seed dimension mismatch");
  double smax = max_abs(seed);
  int sector = -1;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (std::abs(seed(i, j)) <= 1e-12 * smax) continue;
      int s = (i + j) & 1;
      if (sector < 0) sector = s;
      if (s != sector)
        throw std::invalid_argument("seed spans both parity sectors");
    }
  }
  if (sector < 0) throw std::invalid_argument("seed is zero");

  std::vector<int> indices;
  std::vector<int> pos(n * n, -1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (((i + j) & 1) == sector) {
        pos[i + n * j] = int(indices.size());
        indices.push_back(i + n * j);
      }

  SparseOp s = lv.superoperator();
  Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Zero(int(indices.size()), int(indices.size()));
  double dropped = 0, snorm = max_abs_sparse(s);
  for (int c = 0; c < s.outerSize(); ++c) {
    for (SparseOp::InnerIterator it(s, c); it; ++it) {
      if (pos[c] >= 0 && pos[it.row()] >= 0)
        m(pos[it.row()], pos[c]) = it.value();
      else if ((pos[c] >= 0) != (pos[it.row()] >= 0))
        dropped = std::max(dropped, std::abs(it.value()));
    }
  }
  if (dropped > 1e-12 * snorm)
    throw std::runtime_error(
        "parity_sector_matrix: generator mixes parity sectors");
  return {std::move(m), std::move(indices)};
}

}  // namespace sqcat
