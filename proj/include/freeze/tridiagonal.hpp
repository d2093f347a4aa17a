#pragma once

#include <span>
#include <vector>

namespace freeze {

// Eigenvalues of the symmetric tridiagonal matrix with main diagonal `diag`
// (length n) and off-diagonal `offdiag` (length n-1), by implicit-shift QL
// iteration. Returned in decreasing order.
std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag,
                                            std::span<const double> offdiag);

}  // namespace freeze
