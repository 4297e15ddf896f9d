#include "fbpaug/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

namespace fbpaug {

namespace {

constexpr char kMagic[] = "RIMG\n";
constexpr std::size_t kMagicSize = 5;

using json = nlohmann::json;

std::uint32_t to_little(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
}

template <typename Derived>
std::string encode_payload(const Eigen::DenseBase<Derived>& values) {
  std::string bytes;
  bytes.resize(static_cast<std::size_t>(values.rows() * values.cols()) * 4);
  std::size_t offset = 0;
  for (Eigen::Index i = 0; i < values.rows(); ++i)
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const auto f = static_cast<float>(values(i, j));
      const std::uint32_t le = to_little(std::bit_cast<std::uint32_t>(f));
      std::memcpy(bytes.data() + offset, &le, 4);
      offset += 4;
    }
  return bytes;
}

Grid<double> decode_payload(const std::string& bytes, std::size_t offset, Eigen::Index h, Eigen::Index w) {
  Grid<double> g(h, w);
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < w; ++j) {
      std::uint32_t le = 0;
      std::memcpy(&le, bytes.data() + offset, 4);
      offset += 4;
      g(i, j) = static_cast<double>(std::bit_cast<float>(to_little(le)));
    }
  return g;
}

void write_file(const std::filesystem::path& path, const json& header, const std::string& payload) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw RimgError(RimgErrorCode::Io, "cannot open " + path.string() + " for writing");
  os.write(kMagic, kMagicSize);
  const std::string line = header.dump();
  os.write(line.data(), static_cast<std::streamsize>(line.size()));
  os.put('\n');
  os.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!os) throw RimgError(RimgErrorCode::Io, "failed writing " + path.string());
}

json base_header(const char* kind, Eigen::Index h, Eigen::Index w, Spacing s) {
  return json{{"kind", kind}, {"height", h}, {"width", w}, {"spacing_mm", {s.y, s.x}}, {"dtype", "f32le"}};
}

template <typename T>
T header_field(const json& header, const char* key) {
  try {
    return header.at(key).get<T>();
  } catch (const json::exception&) {
    throw RimgError(RimgErrorCode::BadHeader, std::string("header field '") + key + "' missing or malformed");
  }
}

}  // namespace

RimgContent read_rimg(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw RimgError(RimgErrorCode::Io, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());

  if (bytes.size() < kMagicSize || bytes.compare(0, kMagicSize, kMagic) != 0)
    throw RimgError(RimgErrorCode::BadMagic, path.string() + ": not a RIMG file");
  const auto eol = bytes.find('\n', kMagicSize);
  if (eol == std::string::npos) throw RimgError(RimgErrorCode::BadHeader, path.string() + ": header line not terminated");

  json header;
  try {
    header = json::parse(bytes.begin() + static_cast<std::ptrdiff_t>(kMagicSize),
                         bytes.begin() + static_cast<std::ptrdiff_t>(eol));
  } catch (const json::exception& e) {
    throw RimgError(RimgErrorCode::BadHeader, path.string() + ": malformed header: " + e.what());
  }
  if (!header.is_object()) throw RimgError(RimgErrorCode::BadHeader, path.string() + ": header is not an object");

  const auto kind = header_field<std::string>(header, "kind");
  if (kind != "image" && kind != "sinogram" && kind != "mask")
    throw RimgError(RimgErrorCode::UnknownKind, path.string() + ": unknown kind '" + kind + "'");
  if (header_field<std::string>(header, "dtype") != "f32le")
    throw RimgError(RimgErrorCode::BadHeader, path.string() + ": unsupported dtype");
  const auto h = header_field<long long>(header, "height");
  const auto w = header_field<long long>(header, "width");
  if (h < 1 || w < 1) throw RimgError(RimgErrorCode::BadHeader, path.string() + ": non-positive dimensions");
  const auto spacing = header_field<std::vector<double>>(header, "spacing_mm");
  if (spacing.size() != 2 || !(spacing[0] > 0) || !(spacing[1] > 0))
    throw RimgError(RimgErrorCode::BadHeader, path.string() + ": spacing_mm must be two positive numbers");

  const std::size_t expected = static_cast<std::size_t>(h) * static_cast<std::size_t>(w) * 4;
  const std::size_t available = bytes.size() - eol - 1;
  if (available < expected)
    throw RimgError(RimgErrorCode::Truncated, path.string() + ": payload has " + std::to_string(available) +
                                                  " bytes, expected " + std::to_string(expected));
  if (available > expected)
    throw RimgError(RimgErrorCode::TrailingBytes, path.string() + ": payload longer than header declares");

  Grid<double> values = decode_payload(bytes, eol + 1, h, w);
  if (!values.isFinite().all()) throw RimgError(RimgErrorCode::BadHeader, path.string() + ": non-finite values");
  const Spacing sp{spacing[0], spacing[1]};

  RimgContent content;
  if (kind == "image") {
    content.object = Image2D<double>(std::move(values), sp);
  } else if (kind == "mask") {
    if (!((values == 0.0) || (values == 1.0)).all())
      throw RimgError(RimgErrorCode::BadMask, path.string() + ": mask holds values other than 0 and 1");
    Mask m(h, w, sp);
    m.values = values.cast<std::uint8_t>();
    content.object = std::move(m);
  } else {
    const auto n_angles = header_field<long long>(header, "n_angles");
    const auto det = header_field<double>(header, "det_spacing_mm");
    if (n_angles != h || !(det > 0))
      throw RimgError(RimgErrorCode::BadHeader, path.string() + ": inconsistent sinogram geometry");
    Sinogram<double> sino;
    sino.values = std::move(values);
    sino.det_spacing = det;
    content.object = std::move(sino);
    if (header.contains("pad")) {
      const auto& p = header["pad"];
      PadRecord rec;
      rec.height = header_field<long long>(p, "height");
      rec.width = header_field<long long>(p, "width");
      rec.top = header_field<long long>(p, "top");
      rec.left = header_field<long long>(p, "left");
      rec.fill = header_field<double>(p, "fill");
      content.pad = rec;
    }
  }
  return content;
}

void write_rimg(const RimgContent& content, const std::filesystem::path& path) {
  std::visit(
      [&](const auto& obj) {
        using T = std::decay_t<decltype(obj)>;
        if constexpr (std::is_same_v<T, Sinogram<double>>)
          write_rimg(obj, path, content.pad);
        else
          write_rimg(obj, path);
      },
      content.object);
}

void write_rimg(const Image2D<double>& img, const std::filesystem::path& path) {
  require(all_finite(img.values), "refusing to write non-finite image values");
  write_file(path, base_header("image", img.height(), img.width(), img.spacing), encode_payload(img.values));
}

void write_rimg(const Mask& mask, const std::filesystem::path& path) {
  write_file(path, base_header("mask", mask.height(), mask.width(), mask.spacing),
             encode_payload((mask.values != 0).cast<double>()));
}

void write_rimg(const Sinogram<double>& sino, const std::filesystem::path& path, const std::optional<PadRecord>& pad) {
  require(all_finite(sino.values), "refusing to write non-finite sinogram values");
  json header = base_header("sinogram", sino.n_angles(), sino.n_detectors(), Spacing{sino.det_spacing, sino.det_spacing});
  header["n_angles"] = sino.n_angles();
  header["det_spacing_mm"] = sino.det_spacing;
  if (pad) {
    header["pad"] = json{{"height", pad->height}, {"width", pad->width}, {"top", pad->top},
                         {"left", pad->left},     {"fill", pad->fill}};
  }
  write_file(path, header, encode_payload(sino.values));
}

Image2D<double> read_image(const std::filesystem::path& path) {
  auto content = read_rimg(path);
  if (auto* img = std::get_if<Image2D<double>>(&content.object)) return std::move(*img);
  throw RimgError(RimgErrorCode::KindMismatch, path.string() + ": expected an image");
}

Mask read_mask(const std::filesystem::path& path) {
  auto content = read_rimg(path);
  if (auto* m = std::get_if<Mask>(&content.object)) return std::move(*m);
  throw RimgError(RimgErrorCode::KindMismatch, path.string() + ": expected a mask");
}

std::uint16_t pgm_gray(double value, double window_center, double window_width) {
  const double lo = window_center - 0.5 * window_width;
  const double g = std::floor((value - lo) / window_width * 65535.0 + 0.5);
  return static_cast<std::uint16_t>(std::clamp(g, 0.0, 65535.0));
}

void export_pgm(const Image2D<double>& img, const std::filesystem::path& path, double window_center,
                double window_width) {
  require(img.width() > 0 && img.height() > 0, "cannot export an empty image");
  require(window_width > 0.0, "window width must be positive");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw RimgError(RimgErrorCode::Io, "cannot open " + path.string() + " for writing");
  os << "P5\n" << img.width() << ' ' << img.height() << "\n65535\n";
  std::string data;
  data.reserve(static_cast<std::size_t>(img.width() * img.height()) * 2);
  for (Eigen::Index i = 0; i < img.height(); ++i)
    for (Eigen::Index j = 0; j < img.width(); ++j) {
      const auto g = pgm_gray(img(i, j), window_center, window_width);
      data.push_back(static_cast<char>(g >> 8));
      data.push_back(static_cast<char>(g & 0xFF));
    }
  os.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!os) throw RimgError(RimgErrorCode::Io, "failed writing " + path.string());
}

}  // namespace fbpaug
