#include "iqa/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace iqa {
namespace {

cv::Mat to_mat(const ImageBuf& img) {
  cv::Mat m(img.height(), img.width(), CV_8UC3);
  auto px = img.pixels();
  for (int y = 0; y < img.height(); ++y) {
    auto* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width(); ++x) {
      const std::size_t i = img.index(x, y, 0);
      // OpenCV stores BGR.
      for (int c = 0; c < 3; ++c) {
        const double v = std::clamp(px[i + c], 0.0, 1.0);
        row[x * 3 + (2 - c)] = static_cast<std::uint8_t>(std::lround(v * 255.0));
      }
    }
  }
  return m;
}

ImageBuf from_mat(const cv::Mat& m) {
  if (m.empty() || m.rows < 1 || m.cols < 1) throw ImageError("decoded image has zero dimension");
  if (m.type() != CV_8UC3) throw ImageError("decoded image is not 8-bit RGB");
  ImageBuf img(m.cols, m.rows);
  auto px = img.pixels();
  for (int y = 0; y < m.rows; ++y) {
    const auto* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < m.cols; ++x) {
      const std::size_t i = img.index(x, y, 0);
      for (int c = 0; c < 3; ++c) px[i + c] = row[x * 3 + (2 - c)] / 255.0;
    }
  }
  return img;
}

bool is_png(const std::vector<std::uint8_t>& b) {
  return b.size() >= 8 && b[0] == 0x89 && b[1] == 'P' && b[2] == 'N' && b[3] == 'G';
}

bool is_jpeg(const std::vector<std::uint8_t>& b) {
  return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF;
}

ImageBuf decode_any(const std::vector<std::uint8_t>& bytes) {
  cv::Mat m;
  try {
    m = cv::imdecode(bytes, cv::IMREAD_COLOR);
  } catch (const cv::Exception& e) {
    throw ImageError(std::string("decode failed: ") + e.what());
  }
  if (m.empty()) throw ImageError("decode failed: corrupt or zero-dimension image");
  return from_mat(m);
}

}  // namespace

ImageBuf decode_image(const std::vector<std::uint8_t>& bytes) {
  if (!is_png(bytes) && !is_jpeg(bytes)) throw ImageError("unsupported image format (expected PNG or JPEG)");
  return decode_any(bytes);
}

ImageBuf load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError("cannot read image file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_image(bytes);
  } catch (const ImageError& e) {
    throw ImageError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_image(const ImageBuf& img, SaveFormat format) {
  std::vector<std::uint8_t> buf;
  std::vector<int> params;
  std::string ext;
  if (format.kind == SaveFormat::Kind::Png) {
    ext = ".png";
    params = {cv::IMWRITE_PNG_COMPRESSION, 6};
  } else {
    if (format.quality < 1 || format.quality > 100) {
      throw ImageError("JPEG quality must be in [1,100], got " + std::to_string(format.quality));
    }
    ext = ".jpg";
    params = {cv::IMWRITE_JPEG_QUALITY, format.quality};
  }
  if (!cv::imencode(ext, to_mat(img), buf, params)) throw ImageError("encoding " + ext + " failed");
  return buf;
}

void save_image(const ImageBuf& img, const std::filesystem::path& path, SaveFormat format) {
  const auto bytes = encode_image(img, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ImageError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ImageError("write failed: " + path.string());
}

ImageBuf jpeg_round_trip(const ImageBuf& img, int quality) {
  return decode_any(encode_image(img, SaveFormat::jpeg(quality)));
}

bool jpeg2000_available() {
#ifdef IQA_WITH_JPEG2000
  static const bool available = cv::haveImageWriter(".jp2");
  return available;
#else
  return false;
#endif
}

ImageBuf jpeg2000_round_trip(const ImageBuf& img, double compression_ratio) {
  if (!jpeg2000_available()) throw ImageError("JPEG2000 codec unavailable in this build");
  // OpenCV exposes the OpenJPEG rate as 1000/ratio in integer steps.
  const int x1000 = std::clamp(static_cast<int>(std::lround(1000.0 / std::max(compression_ratio, 1.0))), 1, 1000);
  std::vector<std::uint8_t> buf;
  bool ok = false;
  try {
    ok = cv::imencode(".jp2", to_mat(img), buf, {cv::IMWRITE_JPEG2000_COMPRESSION_X1000, x1000});
  } catch (const cv::Exception& e) {
    throw ImageError(std::string("JPEG2000 encoding failed: ") + e.what());
  }
  if (!ok) throw ImageError("JPEG2000 encoding failed");
  return decode_any(buf);
}

ImageBuf quantize8(const ImageBuf& img) {
  ImageBuf out = img;
  for (double& v : out.pixels()) v = std::lround(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0;
  return out;
}

}  // namespace iqa
