#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "sad/errors.hpp"
#include "sad/types.hpp"

namespace sad {

/// Little-endian binary archive. Doubles travel as their IEEE-754 bit
/// pattern, so a serialize/deserialize/serialize cycle is byte-stable.
class ArchiveWriter {
 public:
  void put_u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }

  void put_u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }

  void put_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }

  void put_i64(std::int64_t v) { put_u64(static_cast<std::uint64_t>(v)); }

  void put_f64(double v) { put_u64(std::bit_cast<std::uint64_t>(v)); }

  void put_str(std::string_view s) {
    put_u64(s.size());
    buf_.append(s.data(), s.size());
  }

  void put_vector(const Vector& v) {
    put_u64(static_cast<std::uint64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) put_f64(v[i]);
  }

  void put_matrix(const Matrix& m) {
    put_u64(static_cast<std::uint64_t>(m.rows()));
    put_u64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) put_f64(m(r, c));
  }

  void put_u64_vector(const std::vector<std::uint64_t>& v) {
    put_u64(v.size());
    for (auto x : v) put_u64(x);
  }

  std::string take() { return std::move(buf_); }
  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

class ArchiveReader {
 public:
  explicit ArchiveReader(std::string_view blob) : blob_(blob) {}

  std::uint8_t get_u8() { return static_cast<std::uint8_t>(next(1)[0]); }

  std::uint32_t get_u32() {
    const char* p = next(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
  }

  std::uint64_t get_u64() {
    const char* p = next(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
  }

  std::int64_t get_i64() { return static_cast<std::int64_t>(get_u64()); }

  double get_f64() { return std::bit_cast<double>(get_u64()); }

  std::string get_str() {
    const std::uint64_t n = get_u64();
    const char* p = next(n);
    return std::string(p, n);
  }

  Vector get_vector() {
    const std::uint64_t n = get_u64();
    Vector v(static_cast<Eigen::Index>(n));
    for (std::uint64_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = get_f64();
    return v;
  }

  Matrix get_matrix() {
    const std::uint64_t rows = get_u64();
    const std::uint64_t cols = get_u64();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::uint64_t c = 0; c < cols; ++c)
      for (std::uint64_t r = 0; r < rows; ++r)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = get_f64();
    return m;
  }

  std::vector<std::uint64_t> get_u64_vector() {
    const std::uint64_t n = get_u64();
    std::vector<std::uint64_t> v(n);
    for (auto& x : v) x = get_u64();
    return v;
  }

  bool exhausted() const { return pos_ == blob_.size(); }

 private:
  const char* next(std::uint64_t n) {
    if (pos_ + n > blob_.size()) {
      throw Error(ErrorKind::Serialize, "truncated state blob");
    }
    const char* p = blob_.data() + pos_;
    pos_ += n;
    return p;
  }

  std::string_view blob_;
  std::size_t pos_ = 0;
};

}  // namespace sad
