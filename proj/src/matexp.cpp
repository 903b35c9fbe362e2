// Kept in its own translation unit: MatrixFunctions is heavy to compile and
// nothing else needs it.
#include <unsupported/Eigen/MatrixFunctions>

#include "sqcat/fock.hpp"

namespace sqcat {

FockOp matexp(const FockOp& A) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("matexp: matrix must be square");
  return A.exp();
}

}  // namespace sqcat
