#pragma once
// Squeezed-cat codewords, the subsystem-decomposition basis, and the code
// geometry (alpha', eta, QEC matrices).

#include <string>
#include <utility>

#include "sqcat/fock.hpp"

namespace sqcat {

// Code parameters. Use the named constructors: they solve the exact
// photon-number relation nbar = <n> of the even codeword,
//   nbar = sinh^2 r + alpha'^2 (cosh 2r tanh(alpha'^2) - sinh 2r),
// so (nbar, r, alpha_prime, eta) stay mutually consistent also at small
// alpha' where the textbook approximation alpha' ~ sqrt(nbar - sinh^2 r) e^r
// drifts.
struct SCParams {
  double nbar = 0;
  double r = 0;
  double alpha_prime = 0;
  double eta = 1;  // undetectable-loss fraction (nbar - sinh^2 r)/nbar

  static SCParams from_nbar_r(double nbar, double r);
  static SCParams from_nbar_eta(double nbar, double eta);
  static SCParams from_alpha_r(double alpha_prime, double r);

  // {"nbar": .., "r": ..} or {"nbar": .., "eta": ..}; exactly one of r/eta.
  static SCParams from_json(const std::string& text);
  std::string to_json() const;
};

double alpha_prime_max(double nbar);           // sqrt(nbar^2 + nbar)
double approx_alpha(double nbar, double eta);  // sqrt(4 eta (1-eta)) nbar
double max_squeezing(double nbar);             // asinh(sqrt(nbar))

int recommended_cutoff(const SCParams& sc, double tail_eps = 1e-10);

// Cutoff with headroom for d gauge levels: S(r)|n> carries a degree-n
// polynomial enhancement on the squeezed tail, so each level extends the
// support by roughly ln(N)/ln(1/tanh r) photons.
int subsystem_cutoff(const SCParams& sc, int d, double tail_eps = 1e-10);

// Normalized cat state N(|alpha> + parity |-alpha>), parity +1 or -1.
KetState cat_state(double alpha, int parity, int dim);

// (even, odd) codewords S(r)|C+->, S(r)|C-> at the given cutoff.
std::pair<KetState, KetState> codewords(const SCParams& sc, int dim);

// Orthonormal basis of the 2d-dimensional subsystem span: per parity branch,
// Gram-Schmidt over S(r)[D(alpha') +- (-1)^n D(-alpha')]|n>, n = 0..d-1.
// Columns ordered (+,0..d-1) then (-,0..d-1); phases fixed by
// <basis_n | S(r) D(alpha') | n> > 0.
struct SubsystemBasis {
  SCParams sc;
  int d = 0;
  int dim = 0;
  Eigen::MatrixXcd vectors;  // dim x 2d, lab frame
  Eigen::MatrixXcd projector() const;
};

// Throws std::runtime_error("degenerate basis ...") when the raw Gram matrix
// condition number exceeds 1e8 (alpha' too small for the requested d).
SubsystemBasis build_subsystem_basis(const SCParams& sc, int d, int dim);

// P a P in the subsystem basis together with the operator norm of the
// deviation from the leading form Z_L (x) (e^{-r} alpha' + cosh r g -
// sinh r g^dag), g the gauge-mode lowering operator.
std::pair<Eigen::MatrixXcd, double> decompose_annihilation(
    const SubsystemBasis& basis);

// 2d x 2d subsystem operators, logical index major: (branch, gauge).
Eigen::MatrixXcd logical_Z(int d);  // flips the parity branches
Eigen::MatrixXcd logical_X(int d);  // +1 / -1 on the (+/-) branches
Eigen::MatrixXcd gauge_lowering(int d);

// Code-qubit Pauli expansion of P_code E P_code:
// m = cI I + cX X + cY Y + cZ Z in the (+,-) parity basis, where
// X = diag(1,-1), Z = offdiag(1,1), Y = i X Z.
struct QecMatrix {
  Eigen::Matrix2cd m;
  cxd cI, cX, cY, cZ;
};
QecMatrix qec_matrix(const SCParams& sc, const FockOp& error_op, int dim);

}  // namespace sqcat
