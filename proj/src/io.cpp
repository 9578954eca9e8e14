#include "s3fse/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace s3fse {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = {}) {
  std::ofstream f(path, mode);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = {}) {
  std::ifstream f(path, mode);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  return f;
}

std::string raw_path_for(const std::string& header_path) {
  std::filesystem::path p(header_path);
  p.replace_extension(".raw");
  return p.string();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save_cube(const HyperspectralCube& cube, const std::string& header_path) {
  cube.validate();
  const std::string raw = raw_path_for(header_path);
  auto hdr = open_out(header_path);
  hdr << "width=" << cube.width << "\n"
      << "height=" << cube.height << "\n"
      << "bands=" << cube.bands << "\n"
      << "dtype=f32le\n"
      << "interleave=bsq\n"
      << "data=" << std::filesystem::path(raw).filename().string() << "\n";
  auto bin = open_out(raw, std::ios::binary);
  bin.write(reinterpret_cast<const char*>(cube.data.data()),
            static_cast<std::streamsize>(cube.data.size() * sizeof(float)));
  if (!bin) throw std::runtime_error("short write: " + raw);
}

HyperspectralCube load_cube(const std::string& header_path) {
  auto hdr = open_in(header_path);
  HyperspectralCube cube;
  std::string dtype = "f32le", interleave = "bsq", data_file;
  std::string line;
  while (std::getline(hdr, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("cube header: malformed line '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "width") cube.width = std::stoi(val);
    else if (key == "height") cube.height = std::stoi(val);
    else if (key == "bands") cube.bands = std::stoi(val);
    else if (key == "dtype") dtype = val;
    else if (key == "interleave") interleave = val;
    else if (key == "data") data_file = val;
  }
  if (dtype != "f32le") {
    throw std::runtime_error("cube header: unsupported dtype '" + dtype + "'");
  }
  if (interleave != "bsq") {
    throw std::runtime_error("cube header: unsupported interleave '" + interleave + "'");
  }
  std::filesystem::path raw = data_file.empty()
      ? std::filesystem::path(raw_path_for(header_path))
      : std::filesystem::path(header_path).parent_path() / data_file;
  auto bin = open_in(raw.string(), std::ios::binary);
  const std::size_t count =
      static_cast<std::size_t>(cube.width) * cube.height * cube.bands;
  cube.data.resize(count);
  bin.read(reinterpret_cast<char*>(cube.data.data()),
           static_cast<std::streamsize>(count * sizeof(float)));
  if (static_cast<std::size_t>(bin.gcount()) != count * sizeof(float)) {
    throw std::runtime_error("cube raster truncated: " + raw.string());
  }
  cube.validate();
  return cube;
}

std::vector<int> load_label_raster(const std::string& path) {
  auto f = open_in(path);
  std::vector<int> codes;
  std::string line;
  while (std::getline(f, line)) {
    line = trim(line);
    if (line.empty()) continue;
    codes.push_back(std::stoi(line));
  }
  return codes;
}

void save_label_raster(const std::vector<int>& codes, const std::string& path) {
  auto f = open_out(path);
  for (int c : codes) f << c << "\n";
}

ViewMatrix load_view_csv(const std::string& path, const std::string& name) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line)) {
    throw std::runtime_error("view csv: empty file " + path);
  }
  Eigen::Index cols = 1;
  for (char c : line) cols += (c == ',');

  std::vector<double> buffer;
  Eigen::Index rows = 0;
  while (std::getline(f, line)) {
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Eigen::Index got = 0;
    while (std::getline(ss, cell, ',')) {
      buffer.push_back(std::stod(cell));
      ++got;
    }
    if (got != cols) {
      throw std::runtime_error("view csv: ragged row in " + path);
    }
    ++rows;
  }
  ViewMatrix v;
  v.name = name.empty() ? std::filesystem::path(path).stem().string() : name;
  v.values.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      v.values(i, j) = buffer[static_cast<std::size_t>(i * cols + j)];
    }
  }
  v.validate();
  return v;
}

void save_view_csv(const ViewMatrix& view, const std::string& path) {
  auto f = open_out(path);
  for (Eigen::Index j = 0; j < view.dim(); ++j) {
    f << (j ? "," : "") << "f" << j;
  }
  f << "\n";
  for (Eigen::Index i = 0; i < view.n(); ++i) {
    for (Eigen::Index j = 0; j < view.dim(); ++j) {
      f << (j ? "," : "") << format_double(view.values(i, j));
    }
    f << "\n";
  }
}

void save_pgm(const std::string& path, int width, int height,
              const std::vector<std::uint8_t>& gray) {
  if (gray.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("pgm: pixel buffer does not match dimensions");
  }
  auto f = open_out(path, std::ios::binary);
  f << "P5\n" << width << " " << height << "\n255\n";
  f.write(reinterpret_cast<const char*>(gray.data()),
          static_cast<std::streamsize>(gray.size()));
}

}  // namespace s3fse
