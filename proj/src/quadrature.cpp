#include "levyexit/quadrature.hpp"

#include <cmath>

namespace levyexit {

namespace {

struct Gl16 {
  std::array<double, 16> x{}, w{};
  Gl16() {
    const int n = 16;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = -z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

const Gl16& table() {
  static const Gl16 t;
  return t;
}

}  // namespace

const std::array<double, 16>& gl16_nodes() { return table().x; }
const std::array<double, 16>& gl16_weights() { return table().w; }

}  // namespace levyexit
