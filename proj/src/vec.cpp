#include "lrisp/vec.hpp"

namespace lrisp {

std::vector<Vec> tangent_basis(const Direction& omega) {
  const int d = omega.dim();
  std::vector<Vec> basis;
  basis.reserve(d - 1);
  // Start from the axes least aligned with omega so the projections stay well
  // conditioned.
  std::vector<int> order(d);
  for (int i = 0; i < d; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(omega[a]) < std::abs(omega[b]); });
  for (int axis : order) {
    if (static_cast<int>(basis.size()) == d - 1) break;
    Vec v = reject(Vec::unit(d, axis), omega.vec());
    for (const auto& b : basis) v = reject(v, b);
    const double n = norm(v);
    if (n < 1e-8) continue;
    basis.push_back(v * (1.0 / n));
  }
  return basis;
}

}  // namespace lrisp
