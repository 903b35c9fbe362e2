#include "sqcat/dissipation.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace sqcat {

void NoiseParams::validate() const {
  if (!std::isfinite(kappa1) || !std::isfinite(kappa2) ||
      !std::isfinite(kappa_phi) || !std::isfinite(n_th))
    throw std::invalid_argument("noise rates must be finite");
  if (kappa1 < 0 || kappa_phi < 0 || n_th < 0)
    throw std::invalid_argument("noise rates must be nonnegative");
  if (!(kappa2 > 0))
    throw std::invalid_argument("engineered rate kappa2 must be positive");
}

NoiseParams NoiseParams::normalized() const {
  validate();
  NoiseParams out = *this;
  out.kappa1 /= kappa2;
  out.kappa_phi /= kappa2;
  out.kappa2 = 1.0;
  return out;
}

NoiseParams NoiseParams::memory_benchmark(double kappa2) {
  return {kappa2 / 100.0, kappa2, kappa2 / 10000.0, 0.01};
}

NoiseParams NoiseParams::tomography_benchmark(double kappa2) {
  return {kappa2 / 100.0, kappa2, kappa2 / 1000.0, 0.02};
}

FockOp parity_preserving_F(const SCParams& sc, int dim) {
  if (dim < 3) throw std::invalid_argument("need dim >= 3");
  double ch = std::cosh(sc.r), sh = std::sinh(sc.r);
  double asq = sc.alpha_prime * sc.alpha_prime;
  FockOp f = FockOp::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    f(n, n) = ch * sh * (2.0 * n + 1.0) - asq;
    if (n + 2 < dim)
      f(n, n + 2) = ch * ch * std::sqrt(double(n + 1) * double(n + 2));
    if (n >= 2) f(n, n - 2) = sh * sh * std::sqrt(double(n) * double(n - 1));
  }
  return f;
}

FockOp engineered_F(const SCParams& sc, int dim, int stitch) {
  using Key = std::tuple<double, double, int, int>;
  static std::map<Key, FockOp> cache;
  static std::mutex cache_mutex;
  Key key{sc.nbar, sc.r, dim, stitch};
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  if (stitch < 1) throw std::invalid_argument("need stitch >= 1");
  SubsystemBasis basis = build_subsystem_basis(sc, stitch, dim);
  FockOp m = parity_preserving_F(sc, dim);

  // Exact branch flip |(-,n)><(+,n)| + |(+,n)><(-,n)| on the span.
  const Eigen::MatrixXcd& v = basis.vectors;
  Eigen::MatrixXcd zspan = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < stitch; ++n) {
    zspan.noalias() += v.col(stitch + n) * v.col(n).adjoint();
    zspan.noalias() += v.col(n) * v.col(stitch + n).adjoint();
  }

  // m maps the span into itself (it lowers the gauge index), so the surrogate
  // only ever sees the component of m's output outside the span.
  FockOp a = annihilation(dim);
  FockOp quad = a + a.adjoint().eval();
  double weight = std::exp(sc.r) / (2.0 * sc.alpha_prime);
  Eigen::MatrixXcd pm = v * (v.adjoint() * m);
  FockOp f = zspan * m + weight * (quad * (m - pm));

  std::lock_guard<std::mutex> lock(cache_mutex);
  auto [it, inserted] = cache.emplace(std::move(key), std::move(f));
  (void)inserted;
  return it->second;
}

DissipatorSet assemble_generator(const SCParams& sc, const NoiseParams& noise,
                                 Stabilization which, int dim) {
  noise.validate();
  DissipatorSet set;
  if (which == Stabilization::flip)
    set.jumps.emplace_back(engineered_F(sc, dim), noise.kappa2);
  else if (which == Stabilization::preserve)
    set.jumps.emplace_back(parity_preserving_F(sc, dim), noise.kappa2);
  FockOp a = annihilation(dim);
  if (noise.kappa1 > 0)
    set.jumps.emplace_back(a, noise.kappa1 * (1.0 + noise.n_th));
  if (noise.kappa1 * noise.n_th > 0)
    set.jumps.emplace_back(a.adjoint(), noise.kappa1 * noise.n_th);
  if (noise.kappa_phi > 0)
    set.jumps.emplace_back(number_op(dim), noise.kappa_phi);
  return set;
}

DissipatorSet assemble_generator_squeezed_frame(const SCParams& sc,
                                                const NoiseParams& noise,
                                                Stabilization which, int dim) {
  noise.validate();
  SCParams frame = SCParams::from_alpha_r(sc.alpha_prime, 0.0);
  DissipatorSet set;
  if (which == Stabilization::flip)
    set.jumps.emplace_back(engineered_F(frame, dim), noise.kappa2);
  else if (which == Stabilization::preserve)
    set.jumps.emplace_back(parity_preserving_F(frame, dim), noise.kappa2);
  double ch = std::cosh(sc.r), sh = std::sinh(sc.r);
  FockOp a = annihilation(dim);
  FockOp ad = a.adjoint();
  if (noise.kappa1 > 0)
    set.jumps.emplace_back(ch * a - sh * ad, noise.kappa1 * (1.0 + noise.n_th));
  if (noise.kappa1 * noise.n_th > 0)
    set.jumps.emplace_back(ch * ad - sh * a, noise.kappa1 * noise.n_th);
  if (noise.kappa_phi > 0) {
    FockOp dephase = sh * sh * identity_op(dim) +
                     (ch * ch + sh * sh) * number_op(dim) -
                     ch * sh * (a * a + ad * ad);
    set.jumps.emplace_back(std::move(dephase), noise.kappa_phi);
  }
  return set;
}

}  // namespace sqcat
