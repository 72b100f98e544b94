#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

namespace frost {

/// 256-bit content hash used to tie artifacts (runs, bases, layouts) to the
/// grid and configuration they were produced from. Not cryptographic.
using Hash256 = std::array<std::uint8_t, 32>;

class Hasher {
public:
  Hasher() {
    static constexpr std::uint64_t seeds[4] = {
        0xcbf29ce484222325ull, 0x9e3779b97f4a7c15ull,
        0xbf58476d1ce4e5b9ull, 0x94d049bb133111ebull};
    for (int k = 0; k < 4; ++k) lanes_[k] = seeds[k];
  }

  void update(const void* data, std::size_t size) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      for (int k = 0; k < 4; ++k) {
        lanes_[k] ^= static_cast<std::uint64_t>(p[i]) + static_cast<std::uint64_t>(k) * 0x100000001b3ull;
        lanes_[k] *= 0x100000001b3ull;
      }
    }
  }

  void update_u64(std::uint64_t v) { update(&v, sizeof v); }
  void update_i64(std::int64_t v) { update(&v, sizeof v); }

  void update_f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    update_u64(bits);
  }

  void update_f64s(const std::vector<double>& v) {
    update_u64(v.size());
    for (double x : v) update_f64(x);
  }

  void update_str(const std::string& s) {
    update_u64(s.size());
    update(s.data(), s.size());
  }

  Hash256 digest() const {
    Hash256 out{};
    for (int k = 0; k < 4; ++k) {
      std::uint64_t v = lanes_[k];
      // final avalanche
      v ^= v >> 33; v *= 0xff51afd7ed558ccdull;
      v ^= v >> 33; v *= 0xc4ceb9fe1a85ec53ull;
      v ^= v >> 33;
      for (int b = 0; b < 8; ++b) out[k * 8 + b] = static_cast<std::uint8_t>(v >> (8 * b));
    }
    return out;
  }

private:
  std::uint64_t lanes_[4];
};

std::string to_hex(const Hash256& h);
Hash256 from_hex(const std::string& s);

}  // namespace frost
