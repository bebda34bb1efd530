#include "rieff/sampled_flux.hpp"

#include "rieff/errors.hpp"

#include <algorithm>
#include <numeric>

namespace rieff {

SampledFlux::SampledFlux(std::vector<double> ell, std::vector<double> f, std::vector<double> fprime) {
  if (ell.empty() || ell.size() != f.size() || ell.size() != fprime.size())
    throw ParameterError("sampled flux needs equally many nodes, values and slopes");
  std::vector<std::size_t> order(ell.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return ell[a] < ell[b]; });
  for (auto i : order) {
    if (!ell_.empty() && ell[i] - ell_.back() <= 1e-12) continue;
    ell_.push_back(ell[i]);
    f_.push_back(f[i]);
    fp_.push_back(fprime[i]);
  }
}

std::size_t SampledFlux::interval(double x) const {
  if (ell_.size() < 2) return 0;
  const auto it = std::upper_bound(ell_.begin(), ell_.end(), x);
  const auto k = static_cast<std::size_t>(std::distance(ell_.begin(), it));
  if (k == 0) return 0;
  return std::min(k - 1, ell_.size() - 2);
}

double SampledFlux::value(double x) const {
  if (ell_.size() == 1) return f_[0];
  const std::size_t i = interval(x);
  const double h = ell_[i + 1] - ell_[i];
  const double t = (x - ell_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * f_[i] + h10 * h * fp_[i] + h01 * f_[i + 1] + h11 * h * fp_[i + 1];
}

double SampledFlux::derivative(double x) const {
  if (ell_.size() == 1) return fp_[0];
  const std::size_t i = interval(x);
  const double h = ell_[i + 1] - ell_[i];
  const double t = (x - ell_[i]) / h;
  const double t2 = t * t;
  const double d00 = 6 * t2 - 6 * t, d10 = 3 * t2 - 4 * t + 1;
  const double d01 = -6 * t2 + 6 * t, d11 = 3 * t2 - 2 * t;
  return (d00 * f_[i] + d01 * f_[i + 1]) / h + d10 * fp_[i] + d11 * fp_[i + 1];
}

}  // namespace rieff
