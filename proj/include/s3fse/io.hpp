#ifndef S3FSE_IO_HPP
#define S3FSE_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "s3fse/types.hpp"

namespace s3fse {

// Cube on disk: <stem>.hdr with key=value lines (width, height, bands,
// dtype=f32le, interleave=bsq, data=<raw file>) and a raw little-endian
// float32 file, band-sequential. save_cube derives both paths from
// header_path; load_cube resolves the data file relative to the header.
void save_cube(const HyperspectralCube& cube, const std::string& header_path);
HyperspectralCube load_cube(const std::string& header_path);

// Label raster: one integer per line, raster row-major, 0 = unlabeled.
std::vector<int> load_label_raster(const std::string& path);
void save_label_raster(const std::vector<int>& codes, const std::string& path);

// View CSV: header row of column names, then one sample per line.
ViewMatrix load_view_csv(const std::string& path, const std::string& name = "");
void save_view_csv(const ViewMatrix& view, const std::string& path);

// Binary 8-bit PGM (P5), row-major gray values.
void save_pgm(const std::string& path, int width, int height,
              const std::vector<std::uint8_t>& gray);

// Shortest decimal that round-trips the double ("%.17g").
std::string format_double(double v);

}  // namespace s3fse

#endif
