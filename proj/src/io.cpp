#include "rpca/io.hpp"

#include "rpca/error.hpp"

#include <glob.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace rpca::io {
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const std::string& in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

MatrixFormat format_for(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return ext == ".csv" ? MatrixFormat::CSV : MatrixFormat::BMAT;
}

std::string encode_bmat(const Matrix& m) {
  std::string out(kBmatMagic, sizeof kBmatMagic);
  out.reserve(24 + 8 * m.size());
  put_u64(out, m.rows());
  put_u64(out, m.cols());
  for (double v : m.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

Matrix decode_bmat(const std::string& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kBmatMagic, 8) != 0)
    throw Error(ErrorCode::BadMagic, "missing RPCAMAT1 header");
  if (bytes.size() < 24) throw Error(ErrorCode::ShapeOverflow, "truncated BMAT header");
  const std::uint64_t rows = get_u64(bytes, 8), cols = get_u64(bytes, 16);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / 8;
  if (cols != 0 && rows > limit / cols)
    throw Error(ErrorCode::ShapeOverflow, "BMAT shape overflows");
  if (bytes.size() - 24 != rows * cols * 8)
    throw Error(ErrorCode::ShapeOverflow, "BMAT payload of " + std::to_string(bytes.size() - 24) +
                                              " bytes does not match " + std::to_string(rows) + "x" +
                                              std::to_string(cols));
  std::vector<double> data(rows * cols);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = std::bit_cast<double>(get_u64(bytes, 24 + 8 * i));
  return Matrix(rows, cols, std::move(data));
}

Matrix parse_csv(const std::string& text, const CsvOptions& options) {
  std::vector<double> data;
  std::size_t cols = 0, rows = 0, line_no = 0;
  std::size_t pos = 0;
  bool skipped = !options.skip_header;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line = trim(std::string_view(text).substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (!skipped) {
      skipped = true;
      continue;
    }
    if (line.empty()) continue;
    std::size_t count = 0;
    std::size_t start = 0;
    for (;;) {
      std::size_t comma = line.find(',', start);
      std::string_view cell = trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ", column " +
                                               std::to_string(count + 1) + ": '" + std::string(cell) +
                                               "' is not a number");
      data.push_back(v);
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) cols = count;
    else if (count != cols)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + " has " +
                                             std::to_string(count) + " fields, expected " +
                                             std::to_string(cols));
    ++rows;
  }
  return Matrix(rows, cols, std::move(data));
}

std::string format_csv(const Matrix& m) {
  std::string out;
  char buf[32];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out.push_back(',');
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, m(r, c));
      out.append(buf, ptr);
    }
    out.push_back('\n');
  }
  return out;
}

Matrix read_matrix(const fs::path& path, const CsvOptions& csv) {
  const std::string bytes = read_file(path);
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kBmatMagic, 8) == 0) return decode_bmat(bytes);
  if (format_for(path) == MatrixFormat::CSV) {
    try {
      return parse_csv(bytes, csv);
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ": " + e.what());
    }
  }
  throw Error(ErrorCode::BadMagic, path.string() + " is neither BMAT nor .csv");
}

void write_matrix(const fs::path& path, const Matrix& m) {
  write_file(path, format_for(path) == MatrixFormat::CSV ? format_csv(m) : encode_bmat(m));
}

namespace {

class PgmReader {
 public:
  PgmReader(const std::string& bytes, std::string name) : b_(bytes), name_(std::move(name)) {}

  void skip_space() {
    while (pos_ < b_.size()) {
      if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(b_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long number() {
    skip_space();
    unsigned long v = 0;
    auto [ptr, ec] = std::from_chars(b_.data() + pos_, b_.data() + b_.size(), v);
    if (ec != std::errc()) throw Error(ErrorCode::UnsupportedFormat, name_ + ": malformed PGM");
    pos_ = std::size_t(ptr - b_.data());
    return v;
  }

  std::size_t pos_ = 0;
  const std::string& b_;
  std::string name_;
};

}  // namespace

GrayImage read_pgm(const fs::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw Error(ErrorCode::UnsupportedFormat, path.string() + " is not a P2/P5 PGM");
  const bool binary = bytes[1] == '5';
  PgmReader rd(bytes, path.string());
  rd.pos_ = 2;
  GrayImage img;
  img.width = rd.number();
  img.height = rd.number();
  const unsigned long maxval = rd.number();
  if (img.width == 0 || img.height == 0 || maxval == 0 || maxval > 65535)
    throw Error(ErrorCode::UnsupportedFormat, path.string() + ": bad PGM header");
  img.maxval = unsigned(maxval);
  img.pixels = Matrix(img.height, img.width);
  const std::size_t count = img.width * img.height;
  if (binary) {
    ++rd.pos_;  // single whitespace after maxval
    const std::size_t bpp = maxval < 256 ? 1 : 2;
    if (bytes.size() < rd.pos_ + count * bpp)
      throw Error(ErrorCode::UnsupportedFormat, path.string() + ": truncated pixel data");
    for (std::size_t k = 0; k < count; ++k) {
      unsigned v = static_cast<unsigned char>(bytes[rd.pos_ + k * bpp]);
      if (bpp == 2) v = (v << 8) | static_cast<unsigned char>(bytes[rd.pos_ + k * bpp + 1]);
      img.pixels.data()[k] = double(v) / double(maxval);
    }
  } else {
    for (std::size_t k = 0; k < count; ++k) img.pixels.data()[k] = double(rd.number()) / double(maxval);
  }
  return img;
}

void write_pgm(const fs::path& path, const Matrix& pixels, unsigned maxval) {
  if (maxval == 0 || maxval > 65535) throw Error(ErrorCode::InvalidArgument, "maxval must lie in [1, 65535]");
  std::string out = "P5\n" + std::to_string(pixels.cols()) + " " + std::to_string(pixels.rows()) +
                    "\n" + std::to_string(maxval) + "\n";
  const bool wide = maxval > 255;
  for (double v : pixels.values()) {
    const double clamped = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
    const unsigned q = unsigned(std::lround(clamped * maxval));
    if (wide) out.push_back(char(q >> 8));
    out.push_back(char(q & 0xff));
  }
  write_file(path, out);
}

ImageColumnStack stack_images(const std::vector<fs::path>& paths) {
  if (paths.empty()) throw Error(ErrorCode::InvalidArgument, "no images to stack");
  ImageColumnStack stack;
  for (std::size_t f = 0; f < paths.size(); ++f) {
    GrayImage img = read_pgm(paths[f]);
    if (f == 0) {
      stack.width = img.width;
      stack.height = img.height;
      stack.maxval = img.maxval;
      stack.frames = paths.size();
      stack.matrix = Matrix(img.width * img.height, paths.size());
    } else if (img.width != stack.width || img.height != stack.height) {
      throw Error(ErrorCode::DimensionMismatch,
                  paths[f].string() + " is " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                      ", expected " + std::to_string(stack.width) + "x" + std::to_string(stack.height));
    }
    stack.matrix.set_column(f, img.pixels.values());
  }
  return stack;
}

std::vector<fs::path> unstack_to_images(const ImageColumnStack& stack, const fs::path& out_dir,
                                        const std::string& prefix) {
  if (stack.matrix.rows() != stack.width * stack.height)
    throw Error(ErrorCode::ShapeMismatch, "stack rows do not match frame size");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string());
  std::vector<fs::path> written;
  Matrix frame(stack.height, stack.width);
  for (std::size_t f = 0; f < stack.matrix.cols(); ++f) {
    for (std::size_t k = 0; k < frame.size(); ++k) frame.data()[k] = stack.matrix(k, f);
    char name[32];
    std::snprintf(name, sizeof name, "%04zu.pgm", f);
    written.push_back(out_dir / (prefix + name));
    write_pgm(written.back(), frame, stack.maxval);
  }
  return written;
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<fs::path> out;
  if (rc == 0)
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  globfree(&g);
  if (rc != 0 && rc != GLOB_NOMATCH) throw Error(ErrorCode::IoError, "glob failed for " + pattern);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rpca::io
