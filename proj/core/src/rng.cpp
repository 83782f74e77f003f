#include "sonde/rng.hpp"

#include "sonde/stats.hpp"

namespace sonde::rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

// distinguishes this draw family from any future stream users
constexpr std::uint32_t kStreamTag = 0x736F6E64u;  // "sond"

}  // namespace

std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key) {
  std::array<std::uint32_t, 4> c = counter;
  std::uint32_t k0 = key[0];
  std::uint32_t k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const std::array<std::uint32_t, 4> next = {
        static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k0,
        static_cast<std::uint32_t>(p1),
        static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k1,
        static_cast<std::uint32_t>(p0),
    };
    c = next;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return c;
}

double uniform(std::uint64_t seed, std::uint32_t replication, std::uint32_t mode,
               std::uint32_t draw) {
  const std::array<std::uint32_t, 4> counter = {mode, replication, draw, kStreamTag};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                            static_cast<std::uint32_t>(seed >> 32)};
  const auto block = philox4x32(counter, key);
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(block[0]) << 32) | static_cast<std::uint64_t>(block[1]);
  // top 53 bits, mapped strictly inside (0, 1)
  return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

double standard_normal(std::uint64_t seed, std::uint32_t replication, std::uint32_t mode,
                       std::uint32_t draw) {
  return stats::normal_quantile(uniform(seed, replication, mode, draw));
}

}  // namespace sonde::rng
