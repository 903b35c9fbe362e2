#include "sqcat/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sqcat {

void save_matrix_binary(const Eigen::MatrixXcd& m, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_matrix_binary: cannot open " + path);
  f.write("SQCM", 4);
  int64_t rows = m.rows(), cols = m.cols();
  f.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  f.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
  // Eigen stores column-major doubles (re, im) contiguously already.
  f.write(reinterpret_cast<const char*>(m.data()),
          sizeof(std::complex<double>) * rows * cols);
  if (!f) throw std::runtime_error("save_matrix_binary: write failed");
}

Eigen::MatrixXcd load_matrix_binary(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_matrix_binary: cannot open " + path);
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, "SQCM", 4) != 0)
    throw std::runtime_error("load_matrix_binary: bad magic in " + path);
  int64_t rows = 0, cols = 0;
  f.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  f.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  if (!f || rows <= 0 || cols <= 0 || rows > (1 << 20) || cols > (1 << 20))
    throw std::runtime_error("load_matrix_binary: bad header in " + path);
  Eigen::MatrixXcd m(rows, cols);
  f.read(reinterpret_cast<char*>(m.data()),
         sizeof(std::complex<double>) * rows * cols);
  if (!f) throw std::runtime_error("load_matrix_binary: truncated " + path);
  return m;
}

std::string matrix_to_json(const Eigen::MatrixXcd& m) {
  nlohmann::json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  auto& data = j["data"] = nlohmann::json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      data.push_back({m(r, c).real(), m(r, c).imag()});
  return j.dump();
}

Eigen::MatrixXcd matrix_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Eigen::Index rows = j.at("rows"), cols = j.at("cols");
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw std::runtime_error("matrix_from_json: size mismatch");
  Eigen::MatrixXcd m(rows, cols);
  size_t k = 0;
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r, ++k)
      m(r, c) = cxd(data[k][0], data[k][1]);
  return m;
}

}  // namespace sqcat
