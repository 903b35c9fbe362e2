#pragma once
// Lindblad generator application, adaptive time evolution, steady states,
// process (chi) tomography with Pauli-twirled rates, entanglement infidelity
// of the loss-plus-recovery channel, and Wigner maps.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "sqcat/code.hpp"
#include "sqcat/dissipation.hpp"
#include "sqcat/fock.hpp"

namespace sqcat {

using SparseOp = Eigen::SparseMatrix<cxd>;

struct JumpTerm {
  SparseOp op;
  SparseOp op_dag;
  double rate = 0;
};

// drho/dt = -i[H,rho] + sum_k rate_k (L rho L+ - {L+L, rho}/2) held in
// matrix-free form: apply() works with O(dim^2) memory. effective collects
// iH + (1/2) sum_k rate_k L+L so the apply is
//   rho -> sum_k rate_k L rho L+ - effective rho - rho effective+.
struct Liouvillian {
  int dim = 0;
  std::vector<JumpTerm> jumps;
  SparseOp effective;
  SparseOp effective_dag;

  DensityOp apply(const DensityOp& rho) const;
  // Explicit dim^2 x dim^2 matrix in the column-major vec convention,
  // vec(A X B) = (B^T kron A) vec(X). Affordable up to dim ~ 120.
  SparseOp superoperator() const;
};

Liouvillian make_liouvillian(const DissipatorSet& set, int dim);

// Adaptive Dormand-Prince 5(4) with max-norm step control; evolves arbitrary
// (also non-hermitian) matrices since tomography propagates dyads. Throws
// std::runtime_error on step underflow, which signals a generator too stiff
// for the cutoff (try the squeezed-frame generator or a smaller dim).
DensityOp evolve(const Liouvillian& lv, const DensityOp& rho0, double t,
                 double tol = 1e-8);

// Kernel element of the generator reached from `seed`: shifted inverse
// iteration on the explicit superoperator for dim <= 120, long-time
// integration fallback above. The result is trace-normalized when its trace
// is significant, Frobenius-normalized otherwise (coherence sectors).
// Residual tolerance is relative to the largest jump rate.
DensityOp steady_state(const Liouvillian& lv, const DensityOp& seed,
                       double tol = 1e-9, int max_iters = 60);
DensityOp steady_state(const Liouvillian& lv);  // seed = I/dim

// Process matrix over {I, X, Y, Z} in the codeword (X eigenbasis)
// convention: E(rho) = sum_ij chi_ij sigma_i rho sigma_j.
struct PauliProcess {
  Eigen::Matrix4cd chi = Eigen::Matrix4cd::Zero();
  double duration = 0;
  double leakage = 0;  // worst-case trace lost from the codespace

  void validate() const;  // hermiticity and diagonal positivity
  // max-abs entry of sum_ij chi_ij sigma_j sigma_i - I; ~leakage for
  // trace-decreasing channels, <= 1e-6 for trace-preserving ones.
  double completeness_defect() const;
};

// Evolves the codeword dyads |i><j| (columns 0 and d of basis.vectors) for
// time T, projects back onto the codespace, and solves the 16x16 linear
// system for chi. Throws std::runtime_error when leakage exceeds 10%.
PauliProcess channel_tomography(const Liouvillian& lv, double T,
                                const SubsystemBasis& basis,
                                double tol = 1e-8);

// gamma_i = chi_ii / duration for i in {X, Y, Z}; first-order conversion,
// valid for small probabilities (the exact involution map would be
// -ln(1 - 2 p)/(2 T)). Throws when any chi_ii > 0.3.
std::array<double, 3> twirled_rates(const PauliProcess& process);

struct RateFit {
  std::array<double, 3> rates{};    // {X, Y, Z} slopes of chi_ii vs duration
  std::array<double, 3> stderrs{};  // least-squares standard errors
};
// Linear fit chi_ii(T) = c_i + gamma_i T over >= 2 durations; removes the
// preparation transient that a single-shot chi_ii/T conversion keeps.
RateFit twirled_rate_fit(const std::vector<PauliProcess>& seq);

enum class Recovery { autoqec, none };

// 1 - F_e of encode -> loss channel of probability gamma (Kraus series
// A_k = sqrt(gamma^k/k!) e^{-(kappa1 t/2) n} a^k truncated at k = 4)
// -> recovery. Recovery::autoqec relaxes under the engineered dissipator
// alone for t = 20/(4 kappa2 alpha'^2); Recovery::none projects onto the
// codespace. Internally evaluated in the squeezed frame. gamma in [0, 0.2].
double entanglement_infidelity(const SCParams& sc, double gamma,
                               Recovery recovery);
// Completeness defect of the truncated Kraus series on the code subspace
// (the reported tail bound for the k <= 4 truncation).
double loss_kraus_defect(const SCParams& sc, double gamma);

struct WignerGrid {
  double xmin = -4, xmax = 4;
  int nx = 81;
  double pmin = -4, pmax = 4;
  int np = 81;
};
// Displaced-parity Wigner function over alpha = x + i p, normalized so the
// grid integral approaches tr(rho); vacuum peaks at 2/pi. Row k of the
// result is p_k, column j is x_j.
Eigen::MatrixXd wigner(const DensityOp& rho, const WignerGrid& grid);
void write_wigner_csv(const std::string& path, const WignerGrid& grid,
                      const Eigen::MatrixXd& w);

// Dense submatrix of the superoperator on the photon-parity sector pair
// containing `seed` ((even,even)+(odd,odd) or (even,odd)+(odd,even); every
// jump here carries definite parity, so the two pairs never mix), plus the
// vec-index map. Used for spectral-gap checks and rate extraction.
std::pair<Eigen::MatrixXcd, std::vector<int>> parity_sector_matrix(
    const Liouvillian& lv, const DensityOp& seed);

}  // namespace sqcat
