#pragma once
// Truncated-Fock-space linear algebra: the operators, states and standard
// bosonic constructions every other part of the toolkit consumes.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>

namespace sqcat {

using cxd = std::complex<double>;

// Domain types. An operator truncated at Fock cutoff N is a dense N x N
// matrix; states are length-N amplitude vectors; density operators are
// unit-trace N x N matrices. All are treated as immutable values.
using FockOp = Eigen::MatrixXcd;
using KetState = Eigen::VectorXcd;
using DensityOp = Eigen::MatrixXcd;

// Non-fatal diagnostics (cutoff margins, regime violations) go through this
// hook; default prints to stderr.
void set_warning_handler(std::function<void(const std::string&)> handler);
void warn(const std::string& message);

// --- elementary operators -------------------------------------------------

// a[n-1, n] = sqrt(n). Throws std::invalid_argument for dim < 2.
FockOp annihilation(int dim);
FockOp creation(int dim);
FockOp number_op(int dim);
// exp(i pi n): diagonal +1/-1.
FockOp parity_op(int dim);
FockOp identity_op(int dim);

// exp(alpha a^dag - conj(alpha) a). Warns when |alpha|^2 + 6|alpha| >= dim.
FockOp displacement(cxd alpha, int dim);
// Same operator from the displaced-number closed form (column recurrence);
// free of matrix-exponential truncation error, used where codeword accuracy
// matters.
FockOp displaced_number_matrix(cxd alpha, int dim);
// S(r) = exp(r/2 (a^2 - a^dag^2)); positive r squeezes the (a+a^dag)
// quadrature.
FockOp squeezing(double r, int dim);

FockOp tensor(const FockOp& A, const FockOp& B);

// Dense matrix exponential, accurate to ~1e-10 relative for spectral
// radius <= 50 (scaling-and-squaring).
FockOp matexp(const FockOp& A);

cxd expectation(const FockOp& op, const KetState& psi);
cxd expectation(const FockOp& op, const DensityOp& rho);

// --- states ----------------------------------------------------------------

KetState fock_state(int n, int dim);
// Closed-form amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!).
KetState coherent_state(cxd alpha, int dim);
DensityOp pure_density(const KetState& psi);

// --- truncation bookkeeping -------------------------------------------------

// First Fock index of the top-10% band where truncation artifacts live;
// assertions on unitarity/commutators exclude rows and columns >= this.
int safe_block(int dim);

// Cutoff so a squeezed displaced state of amplitude alpha_prime (in the
// squeezed frame) and squeezing r keeps tail occupation below tail_eps in
// the lab frame. Accounts for the geometric tanh^{2n} r tail of squeezed
// vacuum plus the displaced-support margin.
int recommended_cutoff(double alpha_prime, double r, double tail_eps = 1e-10);

// --- validation --------------------------------------------------------------

// Hermitian within herm_tol, trace 1 within tr_tol, eigenvalues >= -eig_tol.
// Throws std::runtime_error naming the violated property.
void check_density(const DensityOp& rho, double herm_tol = 1e-10,
                   double tr_tol = 1e-8, double eig_tol = 1e-8);

}  // namespace sqcat
