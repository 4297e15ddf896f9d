#ifndef FBPAUG_IMAGE_HPP
#define FBPAUG_IMAGE_HPP

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fbpaug {

template <typename Scalar>
using Grid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Physical pixel size in millimetres, (row, column) order.
struct Spacing {
  double y = 1.0;
  double x = 1.0;

  bool operator==(const Spacing&) const = default;
};

/// Attenuation map on a regular grid. Row 0 is the top of the image.
template <typename Scalar = double>
struct Image2D {
  Grid<Scalar> values;
  Spacing spacing;

  Image2D() = default;
  Image2D(Eigen::Index height, Eigen::Index width, Spacing s = {}, Scalar fill = Scalar(0))
      : values(Grid<Scalar>::Constant(height, width, fill)), spacing(s) {}
  Image2D(Grid<Scalar> v, Spacing s) : values(std::move(v)), spacing(s) {}

  Eigen::Index height() const { return values.rows(); }
  Eigen::Index width() const { return values.cols(); }
  bool is_square() const { return height() == width(); }

  Scalar& operator()(Eigen::Index r, Eigen::Index c) { return values(r, c); }
  Scalar operator()(Eigen::Index r, Eigen::Index c) const { return values(r, c); }
};

/// Parallel-beam projections. Row i holds angle i*pi/n; the detector axis is
/// centred so that t = 0 falls on bin (n_detectors - 1) / 2.
template <typename Scalar = double>
struct Sinogram {
  Grid<Scalar> values;
  double det_spacing = 1.0;

  Sinogram() = default;
  Sinogram(Eigen::Index n_angles, Eigen::Index n_detectors, double spacing)
      : values(Grid<Scalar>::Zero(n_angles, n_detectors)), det_spacing(spacing) {}

  Eigen::Index n_angles() const { return values.rows(); }
  Eigen::Index n_detectors() const { return values.cols(); }
  double angle(Eigen::Index i) const {
    return static_cast<double>(i) * std::numbers::pi / static_cast<double>(n_angles());
  }
  double angular_step() const { return std::numbers::pi / static_cast<double>(n_angles()); }
  double detector_center() const { return 0.5 * static_cast<double>(n_detectors() - 1); }
};

/// Binary segmentation slice. Values are 0 or 1.
struct Mask {
  Grid<std::uint8_t> values;
  Spacing spacing;

  Mask() = default;
  Mask(Eigen::Index height, Eigen::Index width, Spacing s = {})
      : values(Grid<std::uint8_t>::Zero(height, width)), spacing(s) {}

  Eigen::Index height() const { return values.rows(); }
  Eigen::Index width() const { return values.cols(); }
  Eigen::Index count() const { return (values != 0).count(); }
};

template <typename Derived>
bool all_finite(const Eigen::ArrayBase<Derived>& a) {
  return a.isFinite().all();
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

template <typename Scalar>
void validate(const Image2D<Scalar>& img) {
  require(img.height() >= 1 && img.width() >= 1, "image must have at least one pixel");
  require(img.spacing.y > 0 && img.spacing.x > 0, "pixel spacing must be positive");
}

}  // namespace fbpaug

#endif  // FBPAUG_IMAGE_HPP
