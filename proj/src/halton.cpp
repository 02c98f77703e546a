#include "lciclv/halton.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <numeric>

#include "lciclv/dists.hpp"
#include "lciclv/errors.hpp"

namespace lciclv {

namespace {

constexpr std::uint32_t kPrimes[64] = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,
    59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131,
    137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
    227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311};

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// SplitMix64; used only to seed deterministic digit permutations.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<std::uint32_t> digit_permutation(std::uint32_t base, std::uint64_t seed) {
  std::vector<std::uint32_t> perm(base);
  std::iota(perm.begin(), perm.end(), 0u);
  std::uint64_t state = mix64(seed ^ (0x517cc1b727220a95ULL * base));
  for (std::uint32_t i = base - 1; i > 0; --i) {
    state = mix64(state);
    std::uint32_t j = static_cast<std::uint32_t>(state % (i + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

constexpr double kClampEps = 1e-12;

constexpr char kCacheMagic[8] = {'L', 'C', 'H', 'A', 'L', 'T', '0', '\n'};
constexpr std::uint32_t kCacheVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "draw cache assumes a little-endian host");

}  // namespace

std::span<const std::uint32_t> halton_primes() { return {kPrimes, 64}; }

double halton_point(std::uint64_t index, std::uint32_t base) {
  if (index < 1) throw NumericError("halton_point: index must be >= 1");
  if (!is_prime(base)) throw NumericError("halton_point: base must be prime");
  double inv = 0.0;
  double f = 1.0;
  while (index > 0) {
    f /= base;
    inv += f * static_cast<double>(index % base);
    index /= base;
  }
  return inv;
}

double scrambled_halton_point(std::uint64_t index, std::uint32_t base,
                              std::span<const std::uint32_t> perm) {
  if (index < 1) throw NumericError("halton_point: index must be >= 1");
  if (!is_prime(base)) throw NumericError("halton_point: base must be prime");
  if (perm.size() != base) throw NumericError("scramble permutation size must equal base");
  double inv = 0.0;
  double f = 1.0;
  while (index > 0) {
    f /= base;
    inv += f * static_cast<double>(perm[index % base]);
    index /= base;
  }
  // All remaining (infinitely many) digits are zero.
  inv += f * static_cast<double>(perm[0]) / (base - 1.0);
  return inv;
}

DrawSet build_draws(int n_respondents, int R, int dims, int skip,
                    std::optional<std::uint64_t> scramble_seed) {
  if (n_respondents < 0 || R < 1 || dims < 0 || skip < 0)
    throw NumericError("build_draws: invalid sizes");
  if (static_cast<std::size_t>(dims) > halton_primes().size())
    throw NumericError("build_draws: dims exceeds the prime table (max 64)");

  DrawSet set;
  set.n_respondents_ = n_respondents;
  set.R_ = R;
  set.dims_ = dims;
  set.skip_ = skip;
  set.scramble_seed_ = scramble_seed;
  set.primes_.assign(halton_primes().begin(), halton_primes().begin() + dims);
  set.values_.resize(static_cast<std::size_t>(n_respondents) * R * dims);

  std::vector<std::vector<std::uint32_t>> perms;
  if (scramble_seed) {
    perms.reserve(set.primes_.size());
    for (std::uint32_t base : set.primes_) perms.push_back(digit_permutation(base, *scramble_seed));
  }

  for (int n = 0; n < n_respondents; ++n) {
    for (int r = 0; r < R; ++r) {
      std::uint64_t index = static_cast<std::uint64_t>(skip) +
                            static_cast<std::uint64_t>(n) * R + r + 1;
      double* out = set.values_.data() + (static_cast<std::size_t>(n) * R + r) * dims;
      for (int d = 0; d < dims; ++d) {
        double u = scramble_seed
                       ? scrambled_halton_point(index, set.primes_[d], perms[d])
                       : halton_point(index, set.primes_[d]);
        u = std::clamp(u, kClampEps, 1.0 - kClampEps);
        out[d] = std_normal_inv_cdf(u);
      }
    }
  }
  return set;
}

void DrawSet::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SchemaError("cannot write draw cache: " + path);
  auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  auto put_u64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
  out.write(kCacheMagic, sizeof(kCacheMagic));
  put_u32(kCacheVersion);
  put_u32(static_cast<std::uint32_t>(n_respondents_));
  put_u32(static_cast<std::uint32_t>(R_));
  put_u32(static_cast<std::uint32_t>(dims_));
  put_u32(static_cast<std::uint32_t>(skip_));
  put_u32(scramble_seed_ ? 1u : 0u);
  put_u64(scramble_seed_.value_or(0));
  for (std::uint32_t p : primes_) put_u32(p);
  out.write(reinterpret_cast<const char*>(values_.data()),
            static_cast<std::streamsize>(values_.size() * sizeof(double)));
  if (!out) throw SchemaError("short write on draw cache: " + path);
}

DrawSet DrawSet::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open draw cache: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kCacheMagic, 8) != 0)
    throw SchemaError("not a draw cache file: " + path);
  auto get_u32 = [&]() {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
  };
  auto get_u64 = [&]() {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  std::uint32_t version = get_u32();
  if (version != kCacheVersion) throw SchemaError("unsupported draw cache version");
  DrawSet set;
  set.n_respondents_ = static_cast<int>(get_u32());
  set.R_ = static_cast<int>(get_u32());
  set.dims_ = static_cast<int>(get_u32());
  set.skip_ = static_cast<int>(get_u32());
  bool scrambled = get_u32() != 0;
  std::uint64_t seed = get_u64();
  if (scrambled) set.scramble_seed_ = seed;
  set.primes_.resize(set.dims_);
  for (auto& p : set.primes_) p = get_u32();
  set.values_.resize(static_cast<std::size_t>(set.n_respondents_) * set.R_ * set.dims_);
  in.read(reinterpret_cast<char*>(set.values_.data()),
          static_cast<std::streamsize>(set.values_.size() * sizeof(double)));
  if (!in) throw SchemaError("truncated draw cache: " + path);
  return set;
}

}  // namespace lciclv
