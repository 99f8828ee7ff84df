#pragma once

#include <cstddef>
#include <vector>

namespace sppa::detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(const std::vector<double>& v) { return dot(v, v); }

// x + s * d
inline std::vector<double> axpy(const std::vector<double>& x, double s,
                                const std::vector<double>& d) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + s * d[i];
  return out;
}

}  // namespace sppa::detail
