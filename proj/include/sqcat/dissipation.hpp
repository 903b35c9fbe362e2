#pragma once
// Engineered two-photon stabilizers for the squeezed-cat code and the
// standard single-mode noise generator built around them.

#include <optional>
#include <utility>
#include <vector>

#include "sqcat/code.hpp"
#include "sqcat/fock.hpp"

namespace sqcat {

// Single-mode noise rates. All rates share one time unit; normalized()
// rescales so the engineered rate kappa2 is 1.
struct NoiseParams {
  double kappa1 = 0.0;     // single-photon loss
  double kappa2 = 1.0;     // engineered two-photon stabilization
  double kappa_phi = 0.0;  // pure dephasing
  double n_th = 0.0;       // thermal occupation of the loss bath

  void validate() const;  // throws std::invalid_argument on bad rates
  NoiseParams normalized() const;

  // kappa1 = kappa2/100 = 100 kappa_phi, n_th = 0.01.
  static NoiseParams memory_benchmark(double kappa2 = 1.0);
  // kappa1 = kappa2/100 = 10 kappa_phi, n_th = 0.02.
  static NoiseParams tomography_benchmark(double kappa2 = 1.0);
};

// Which engineered stabilizer a generator carries.
enum class Stabilization { flip, preserve, none };

// Jump operators with their rates, plus an optional coherent drive.
struct DissipatorSet {
  std::vector<std::pair<FockOp, double>> jumps;
  std::optional<FockOp> hamiltonian;
};

// S(r)(a^2 - alpha'^2)S(r)^dag in the lab frame. Closed banded form
// cosh^2 r a^2 + sinh^2 r a+^2 + cosh r sinh r (2n+1) - alpha'^2; preserves
// photon parity, so it stabilizes the codespace without correcting parity
// (phase) flips.
FockOp parity_preserving_F(const SCParams& sc, int dim);

// Logical flip composed with the parity-preserving stabilizer: gauge decay
// restores the parity branch instead of leaving it flipped. The flip is exact
// on the first `stitch` gauge levels of the subsystem span and falls back to
// the quadrature surrogate e^r (a + a^dag) / (2 alpha') outside it. Results
// are cached per (nbar, r, dim, stitch).
FockOp engineered_F(const SCParams& sc, int dim, int stitch = 5);

// Jump list [(F, kappa2), (a, kappa1(1+n_th)), (a^dag, kappa1 n_th),
// (a^dag a, kappa_phi)] with zero-rate entries dropped.
DissipatorSet assemble_generator(const SCParams& sc, const NoiseParams& noise,
                                 Stabilization which, int dim);

// The same generator conjugated into the squeezed frame S(r)^dag . S(r).
// The engineered stabilizer becomes its r = 0 (displaced-cat) form, loss and
// heating pick up Bogoliubov mixing cosh r a - sinh r a^dag, and dephasing
// becomes the quadratic sinh^2 r + (cosh^2 r + sinh^2 r) n - cosh r sinh r
// (a^2 + a+^2). States in this frame are plain cats of the same alpha', so
// the cutoff needed at large r drops from ~e^{2r} alpha'^2 to ~alpha'^2 and
// explicit integrators stay stable.
DissipatorSet assemble_generator_squeezed_frame(const SCParams& sc,
                                                const NoiseParams& noise,
                                                Stabilization which, int dim);

}  // namespace sqcat
