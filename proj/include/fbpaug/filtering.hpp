#ifndef FBPAUG_FILTERING_HPP
#define FBPAUG_FILTERING_HPP

#include "fbpaug/image.hpp"
#include "fbpaug/tomography.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace fbpaug {

enum class FilterKind { Ramp, KAB };

/// Reconstruction filter. KAB has response |w| (1 + a |w|^b), where |w| is the
/// normalized frequency in [0, 1] with 1 at the Nyquist frequency.
struct FilterSpec {
  FilterKind kind = FilterKind::Ramp;
  double a = 0.0;
  double b = 1.0;

  static FilterSpec ramp() { return {}; }
  static FilterSpec kab(double a, double b) { return {FilterKind::KAB, a, b}; }

  bool operator==(const FilterSpec&) const = default;
};

/// Real, even gains over the half spectrum k = 0 .. n_padded / 2.
struct FrequencyResponse {
  Eigen::Index n_padded = 0;
  Eigen::ArrayXd gains;

  /// Normalized frequency of half-spectrum bin k (1 at Nyquist).
  double normalized_frequency(Eigen::Index k) const {
    return static_cast<double>(k) / static_cast<double>(n_padded / 2);
  }
};

/// FBP reconstructions are backprojection (weight 1/(2n)) of projections
/// convolved with the unit-spacing band-limited ramp, times this constant over
/// the detector spacing. Calibrated against the analytic disk phantom.
inline constexpr double kAmplitudeConstant = 2.0 * std::numbers::pi;

/// Next power of two >= 2 * n_detectors.
inline Eigen::Index padded_length(Eigen::Index n_detectors) {
  Eigen::Index n = 2;
  while (n < 2 * n_detectors) n *= 2;
  return n;
}

/// Band-limited ramp kernel in units of the detector spacing, laid out
/// circularly on the padded grid: 1/4 at lag 0, -1/(pi m)^2 at odd lags.
inline Eigen::ArrayXd ramp_kernel(Eigen::Index n_padded) {
  Eigen::ArrayXd h = Eigen::ArrayXd::Zero(n_padded);
  h(0) = 0.25;
  for (Eigen::Index m = 1; m <= n_padded / 2; m += 2) {
    const double v = -1.0 / (std::numbers::pi * std::numbers::pi * static_cast<double>(m * m));
    h(m) = v;
    h(n_padded - m) = v;
  }
  return h;
}

inline FrequencyResponse ramp_response(Eigen::Index n_detectors) {
  require(n_detectors >= 1, "ramp_response needs at least one detector");
  FrequencyResponse resp;
  resp.n_padded = padded_length(n_detectors);
  const Eigen::ArrayXd h = ramp_kernel(resp.n_padded);

  std::vector<double> kernel(h.data(), h.data() + h.size());
  std::vector<std::complex<double>> spectrum;
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, kernel);

  resp.gains.resize(resp.n_padded / 2 + 1);
  for (Eigen::Index k = 0; k < resp.gains.size(); ++k) resp.gains(k) = spectrum[static_cast<std::size_t>(k)].real();
  return resp;
}

/// Ramp gains multiplied by (1 + a * w^b). a < -1 would flip the sign of the
/// highest frequencies and is rejected.
inline FrequencyResponse kab_response(Eigen::Index n_detectors, double a, double b) {
  require(std::isfinite(a) && std::isfinite(b), "k_ab parameters must be finite");
  require(b > 0.0, "k_ab exponent b must be positive");
  require(a >= -1.0, "k_ab sharpness a must be >= -1");
  FrequencyResponse resp = ramp_response(n_detectors);
  for (Eigen::Index k = 0; k < resp.gains.size(); ++k) {
    resp.gains(k) *= 1.0 + a * std::pow(resp.normalized_frequency(k), b);
  }
  return resp;
}

inline FrequencyResponse response(const FilterSpec& spec, Eigen::Index n_detectors) {
  return spec.kind == FilterKind::Ramp ? ramp_response(n_detectors)
                                       : kab_response(n_detectors, spec.a, spec.b);
}

/// Convolves every projection with the filter through a zero-padded FFT.
template <typename Scalar>
Sinogram<Scalar> filter_sinogram(const Sinogram<Scalar>& sino, const FrequencyResponse& resp) {
  const Eigen::Index n_det = sino.n_detectors();
  const Eigen::Index n = resp.n_padded;
  require(n >= 2 * n_det, "frequency response is too short for this sinogram");
  require(resp.gains.size() == n / 2 + 1, "frequency response has the wrong number of gains");

  Sinogram<Scalar> out(sino.n_angles(), n_det, sino.det_spacing);
  Eigen::FFT<Scalar> fft;
  std::vector<Scalar> row(static_cast<std::size_t>(n));
  std::vector<std::complex<Scalar>> spectrum;
  std::vector<Scalar> filtered;
  for (Eigen::Index a = 0; a < sino.n_angles(); ++a) {
    std::fill(row.begin(), row.end(), Scalar(0));
    for (Eigen::Index k = 0; k < n_det; ++k) row[static_cast<std::size_t>(k)] = sino.values(a, k);
    fft.fwd(spectrum, row);
    for (Eigen::Index k = 0; k < n; ++k) {
      spectrum[static_cast<std::size_t>(k)] *= static_cast<Scalar>(resp.gains(std::min(k, n - k)));
    }
    fft.inv(filtered, spectrum);
    for (Eigen::Index k = 0; k < n_det; ++k) out.values(a, k) = filtered[static_cast<std::size_t>(k)];
  }
  return out;
}

/// Filtered back-projection onto a height x width grid centred on the
/// rotation axis.
template <typename Scalar>
Image2D<Scalar> fbp(const Sinogram<Scalar>& sino, const FilterSpec& filter, Eigen::Index height,
                    Eigen::Index width) {
  const auto filtered = filter_sinogram(sino, response(filter, sino.n_detectors()));
  auto img = backproject(filtered, height, width);
  img.values *= static_cast<Scalar>(kAmplitudeConstant / sino.det_spacing);
  return img;
}

template <typename Scalar>
Image2D<Scalar> fbp(const Sinogram<Scalar>& sino, const FilterSpec& filter) {
  return fbp(sino, filter, sino.n_detectors(), sino.n_detectors());
}

}  // namespace fbpaug

#endif  // FBPAUG_FILTERING_HPP
