#include "nambu/matrix_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace nambu {

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) throw Error("truncated matrix dump");
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_matrix_binary(std::ostream& os, const Matrix& a) {
  if (a.rows() != a.cols()) throw Error("matrix dump needs a square matrix");
  put_le<std::uint64_t>(os, static_cast<std::uint64_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      put_le<float>(os, static_cast<float>(a(i, j).real()));
      put_le<float>(os, static_cast<float>(a(i, j).imag()));
    }
}

Matrix read_matrix_binary(std::istream& is) {
  const auto n = get_le<std::uint64_t>(is);
  if (n > (1u << 16)) throw Error("matrix dump header is implausible");
  Matrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const float re = get_le<float>(is);
      const float im = get_le<float>(is);
      a(i, j) = cplx(re, im);
    }
  return a;
}

void write_matrix_csv(std::ostream& os, const Matrix& a) {
  os << "row,col,re,im\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      os << i << ',' << j << ',' << a(i, j).real() << ',' << a(i, j).imag() << '\n';
}

void save_matrix(const std::string& path, const Matrix& a, bool csv) {
  std::ofstream os(path, csv ? std::ios::out : std::ios::out | std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  if (csv)
    write_matrix_csv(os, a);
  else
    write_matrix_binary(os, a);
}

}  // namespace nambu
