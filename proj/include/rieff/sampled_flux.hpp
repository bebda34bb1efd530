#pragma once

#include <cstddef>
#include <vector>

namespace rieff {

/// Scalar flux known at strictly increasing nodes together with its exact
/// derivative there; evaluated by piecewise cubic Hermite interpolation.
class SampledFlux {
 public:
  SampledFlux() = default;
  /// Nodes may be given in either order; nodes closer than 1e-12 are merged.
  SampledFlux(std::vector<double> ell, std::vector<double> f, std::vector<double> fprime);

  double lower() const { return ell_.front(); }
  double upper() const { return ell_.back(); }
  std::size_t size() const { return ell_.size(); }
  bool empty() const { return ell_.empty(); }

  double value(double x) const;
  double derivative(double x) const;

  const std::vector<double>& nodes() const { return ell_; }
  const std::vector<double>& values() const { return f_; }
  const std::vector<double>& slopes() const { return fp_; }

  /// Index i with nodes[i] <= x <= nodes[i+1] (clamped).
  std::size_t interval(double x) const;

 private:
  std::vector<double> ell_, f_, fp_;
};

}  // namespace rieff
