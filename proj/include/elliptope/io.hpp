#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "elliptope/matrix.hpp"

namespace elliptope {

namespace detail {

inline void put_u32_le(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int k = 0; k < 4; ++k) b[k] = char((v >> (8 * k)) & 0xff);
  out.write(b, 4);
}

inline void put_u64_le(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int k = 0; k < 8; ++k) b[k] = char((v >> (8 * k)) & 0xff);
  out.write(b, 8);
}

inline std::uint32_t get_u32_le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int k = 3; k >= 0; --k) v = (v << 8) | b[k];
  return v;
}

inline std::uint64_t get_u64_le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int k = 7; k >= 0; --k) v = (v << 8) | b[k];
  return v;
}

}  // namespace detail

inline constexpr char kCorm1Magic[6] = {'C', 'O', 'R', 'M', '1', '\0'};

// CORM1 container: magic "CORM1\0", u32 LE dimension, u64 LE matrix count,
// then count full matrices as LE 64-bit floats, row-major.
class Corm1Writer {
 public:
  Corm1Writer(std::ostream& out, int dim, std::uint64_t count) : out_(out), dim_(dim) {
    if (dim < 1) throw std::invalid_argument("Corm1Writer: dim must be >= 1");
    out_.write(kCorm1Magic, sizeof(kCorm1Magic));
    detail::put_u32_le(out_, std::uint32_t(dim));
    detail::put_u64_le(out_, count);
  }

  void write(const CorrelationMatrix& matrix) {
    if (matrix.dim() != dim_)
      throw std::invalid_argument("Corm1Writer: matrix dimension mismatch");
    for (double e : matrix.entries())
      detail::put_u64_le(out_, std::bit_cast<std::uint64_t>(e));
    ++written_;
  }

  std::uint64_t written() const noexcept { return written_; }

 private:
  std::ostream& out_;
  int dim_;
  std::uint64_t written_ = 0;
};

class Corm1Reader {
 public:
  explicit Corm1Reader(std::istream& in) : in_(in) {
    char magic[6];
    in_.read(magic, 6);
    if (!in_ || std::memcmp(magic, kCorm1Magic, 6) != 0)
      throw std::runtime_error("Corm1Reader: bad magic");
    dim_ = int(detail::get_u32_le(in_));
    count_ = detail::get_u64_le(in_);
    if (!in_ || dim_ < 1) throw std::runtime_error("Corm1Reader: bad header");
  }

  int dim() const noexcept { return dim_; }
  std::uint64_t count() const noexcept { return count_; }

  CorrelationMatrix next() {
    std::vector<double> entries(std::size_t(dim_) * dim_);
    for (double& e : entries) e = std::bit_cast<double>(detail::get_u64_le(in_));
    if (!in_) throw std::runtime_error("Corm1Reader: truncated stream");
    ++read_;
    return CorrelationMatrix::from_entries(dim_, std::move(entries));
  }

  bool done() const noexcept { return read_ >= count_; }

 private:
  std::istream& in_;
  int dim_ = 0;
  std::uint64_t count_ = 0;
  std::uint64_t read_ = 0;
};

// CSV export: one matrix per block of comma-separated rows, blocks separated
// by a blank line. Values carry full double precision.
class CsvMatrixWriter {
 public:
  explicit CsvMatrixWriter(std::ostream& out) : out_(out) {}

  void write(const CorrelationMatrix& matrix) {
    if (written_ > 0) out_ << "\n";
    const int p = matrix.dim();
    char buf[40];
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", matrix(i, j));
        out_ << buf;
        if (j + 1 < p) out_ << ",";
      }
      out_ << "\n";
    }
    ++written_;
  }

 private:
  std::ostream& out_;
  std::uint64_t written_ = 0;
};

}  // namespace elliptope
