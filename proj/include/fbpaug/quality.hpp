#ifndef FBPAUG_QUALITY_HPP
#define FBPAUG_QUALITY_HPP

#include "fbpaug/image.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace fbpaug {

/// Normalized radial frequency of 2-D DFT bin (ky, kx): each axis is scaled so
/// that its Nyquist bin sits at 1.
inline double radial_frequency(Eigen::Index ky, Eigen::Index kx, Eigen::Index h, Eigen::Index w) {
  auto axis = [](Eigen::Index k, Eigen::Index n) {
    return n < 2 ? 0.0 : static_cast<double>(std::min(k, n - k)) / (0.5 * static_cast<double>(n));
  };
  const double fy = axis(ky, h);
  const double fx = axis(kx, w);
  return std::sqrt(fy * fy + fx * fx);
}

/// Spectral energy above `cutoff` (normalized radial frequency), scaled by
/// 1 / (h w) so that the full-band value equals the sum of squares.
template <typename Scalar>
double high_frequency_energy(const Image2D<Scalar>& img, double cutoff = 0.5) {
  const Eigen::Index h = img.height();
  const Eigen::Index w = img.width();
  using C = std::complex<double>;
  Eigen::FFT<double> fft;
  std::vector<std::vector<C>> rows(static_cast<std::size_t>(h));
  std::vector<double> line(static_cast<std::size_t>(w));
  for (Eigen::Index i = 0; i < h; ++i) {
    for (Eigen::Index j = 0; j < w; ++j) line[static_cast<std::size_t>(j)] = static_cast<double>(img(i, j));
    fft.fwd(rows[static_cast<std::size_t>(i)], line);
  }
  double energy = 0.0;
  std::vector<C> column(static_cast<std::size_t>(h));
  std::vector<C> spectrum;
  for (Eigen::Index j = 0; j < w; ++j) {
    for (Eigen::Index i = 0; i < h; ++i) column[static_cast<std::size_t>(i)] = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    fft.fwd(spectrum, column);
    for (Eigen::Index i = 0; i < h; ++i) {
      if (radial_frequency(i, j, h, w) > cutoff) energy += std::norm(spectrum[static_cast<std::size_t>(i)]);
    }
  }
  return energy / static_cast<double>(h * w);
}

/// Sample standard deviation of the pixels selected by `inside(row, col)`.
template <typename Scalar>
double region_std(const Image2D<Scalar>& img, const std::function<bool(Eigen::Index, Eigen::Index)>& inside) {
  double sum = 0.0;
  double sum2 = 0.0;
  long n = 0;
  for (Eigen::Index i = 0; i < img.height(); ++i)
    for (Eigen::Index j = 0; j < img.width(); ++j)
      if (inside(i, j)) {
        const auto v = static_cast<double>(img(i, j));
        sum += v;
        sum2 += v * v;
        ++n;
      }
  require(n >= 2, "region_std needs at least two pixels");
  const double mean = sum / static_cast<double>(n);
  return std::sqrt(std::max(0.0, (sum2 - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1)));
}

/// Predicate for pixels within `radius` pixels of the image centre.
inline std::function<bool(Eigen::Index, Eigen::Index)> centered_disk(Eigen::Index h, Eigen::Index w, double radius) {
  const double cy = 0.5 * static_cast<double>(h - 1);
  const double cx = 0.5 * static_cast<double>(w - 1);
  return [=](Eigen::Index i, Eigen::Index j) {
    const double dy = static_cast<double>(i) - cy;
    const double dx = static_cast<double>(j) - cx;
    return dx * dx + dy * dy <= radius * radius;
  };
}

/// RMS difference over the pixels selected by `inside`.
template <typename Scalar>
double rmse(const Image2D<Scalar>& a, const Image2D<Scalar>& b,
            const std::function<bool(Eigen::Index, Eigen::Index)>& inside) {
  require(a.height() == b.height() && a.width() == b.width(), "rmse needs images of equal shape");
  double se = 0.0;
  long n = 0;
  for (Eigen::Index i = 0; i < a.height(); ++i)
    for (Eigen::Index j = 0; j < a.width(); ++j)
      if (inside(i, j)) {
        const double d = static_cast<double>(a(i, j)) - static_cast<double>(b(i, j));
        se += d * d;
        ++n;
      }
  require(n >= 1, "rmse region is empty");
  return std::sqrt(se / static_cast<double>(n));
}

}  // namespace fbpaug

#endif  // FBPAUG_QUALITY_HPP
