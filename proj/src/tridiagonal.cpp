#include "freeze/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "freeze/error.hpp"

namespace freeze {

// QL with implicit Wilkinson-type shifts (tql1 lineage), eigenvalues only.
std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag,
                                            std::span<const double> offdiag) {
  const int n = static_cast<int>(diag.size());
  require(n >= 1, "empty matrix");
  require(offdiag.size() + 1 == diag.size(),
          "off-diagonal must have length n-1");

  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(n, 0.0);
  std::copy(offdiag.begin(), offdiag.end(), e.begin());

  double anorm = 0.0;
  for (int i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]));
  const double eps = std::numeric_limits<double>::epsilon();
  const double floor = eps * anorm;

  constexpr int kMaxIter = 60;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        const double threshold = dd > 0.0 ? eps * dd : floor;
        if (std::abs(e[m]) <= threshold) break;
      }
      if (m == l) break;
      if (++iter > kMaxIter) {
        throw RuntimeAbort("tridiagonal QL iteration did not converge");
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      int i = m - 1;
      bool underflow = false;
      for (; i >= l; --i) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (true);
  }
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

}  // namespace freeze
