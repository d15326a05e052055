#pragma once
// Shape-preserving piecewise cubic Hermite interpolation (Fritsch-Carlson
// slopes, as in the classic PCHIP). Between two knots the curve never leaves
// the range of their values, so interpolated probabilities stay in [0,1].

#include <cstddef>
#include <vector>

namespace wmr {

class MonotoneCubic {
public:
    MonotoneCubic() = default;

    /// x must be strictly ascending and the same length as y (>= 1).
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    /// Constant extrapolation outside [x.front(), x.back()].
    double operator()(double t) const;

    const std::vector<double>& knots() const noexcept { return x_; }
    const std::vector<double>& values() const noexcept { return y_; }
    const std::vector<double>& slopes() const noexcept { return d_; }

private:
    std::vector<double> x_, y_, d_;
};

}  // namespace wmr
