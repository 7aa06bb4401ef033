#pragma once

#include <utility>
#include <vector>

namespace thinfilm {

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre polynomial. Supports 1 <= n <= 64.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

}  // namespace thinfilm
