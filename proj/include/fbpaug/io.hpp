#ifndef FBPAUG_IO_HPP
#define FBPAUG_IO_HPP

#include "fbpaug/image.hpp"
#include "fbpaug/tomography.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace fbpaug {

// RIMG container:
//   "RIMG\n"
//   one-line JSON header, keys sorted:
//     {"dtype":"f32le","height":H,"kind":"image|sinogram|mask","spacing_mm":[sy,sx],"width":W,
//      ["det_spacing_mm":d,"n_angles":N,] ["pad":{...}]}
//   "\n"
//   H*W little-endian float32 values, row-major.
// Sinograms store rows = angles, columns = detector bins, and may carry the
// PadRecord of the image they were projected from under "pad".

enum class RimgErrorCode { Io = 1, BadMagic, BadHeader, UnknownKind, Truncated, TrailingBytes, KindMismatch, BadMask };

class RimgError : public std::runtime_error {
 public:
  RimgError(RimgErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  RimgErrorCode code() const { return code_; }

 private:
  RimgErrorCode code_;
};

using RimgObject = std::variant<Image2D<double>, Sinogram<double>, Mask>;

struct RimgContent {
  RimgObject object;
  std::optional<PadRecord> pad;  // sinograms only
};

RimgContent read_rimg(const std::filesystem::path& path);
void write_rimg(const RimgContent& content, const std::filesystem::path& path);

Image2D<double> read_image(const std::filesystem::path& path);
Mask read_mask(const std::filesystem::path& path);
void write_rimg(const Image2D<double>& img, const std::filesystem::path& path);
void write_rimg(const Mask& mask, const std::filesystem::path& path);
void write_rimg(const Sinogram<double>& sino, const std::filesystem::path& path,
                const std::optional<PadRecord>& pad = std::nullopt);

/// Binary 16-bit PGM (P5, maxval 65535, big-endian samples). The window
/// [center - width/2, center + width/2] maps linearly onto [0, 65535]; values
/// are rounded half up and clamped, so `center` itself maps to 32768.
void export_pgm(const Image2D<double>& img, const std::filesystem::path& path, double window_center,
                double window_width);

std::uint16_t pgm_gray(double value, double window_center, double window_width);

}  // namespace fbpaug

#endif  // FBPAUG_IO_HPP
