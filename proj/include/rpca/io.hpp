#pragma once

#include "rpca/matrix.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace rpca::io {

enum class MatrixFormat { CSV, BMAT };

/// BMAT: "RPCAMAT1", rows and cols as u64 little-endian, then rows*cols
/// IEEE-754 f64 little-endian values in row-major order.
inline constexpr char kBmatMagic[8] = {'R', 'P', 'C', 'A', 'M', 'A', 'T', '1'};

/// ".csv" selects CSV; anything else is BMAT.
MatrixFormat format_for(const std::filesystem::path& path);

struct CsvOptions {
  bool skip_header = false;
};

/// Reads BMAT when the file starts with the BMAT magic, CSV when the
/// extension is .csv, otherwise throws BadMagic.
Matrix read_matrix(const std::filesystem::path& path, const CsvOptions& csv = {});
void write_matrix(const std::filesystem::path& path, const Matrix& m);

Matrix parse_csv(const std::string& text, const CsvOptions& options = {});
/// Shortest round-trip representation of every value.
std::string format_csv(const Matrix& m);

std::string encode_bmat(const Matrix& m);
Matrix decode_bmat(const std::string& bytes);

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned maxval = 255;
  Matrix pixels;  // height x width, scaled to [0, 1]
};

/// Reads P2 or P5 (8- or 16-bit) PGM.
GrayImage read_pgm(const std::filesystem::path& path);
/// Writes binary P5. Values are clamped to [0, 1] and rounded to maxval steps.
void write_pgm(const std::filesystem::path& path, const Matrix& pixels, unsigned maxval = 255);

/// One vectorized frame per column; pixel k of a column is row k / width,
/// column k % width of the frame (row-by-row scan).
struct ImageColumnStack {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t frames = 0;
  unsigned maxval = 255;
  Matrix matrix;  // (width * height) x frames
};

ImageColumnStack stack_images(const std::vector<std::filesystem::path>& paths);

/// Writes frame_0000.pgm, frame_0001.pgm, ... into out_dir and returns the paths.
std::vector<std::filesystem::path> unstack_to_images(const ImageColumnStack& stack,
                                                     const std::filesystem::path& out_dir,
                                                     const std::string& prefix = "frame_");

/// Sorted list of paths matching a shell glob pattern.
std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

}  // namespace rpca::io
