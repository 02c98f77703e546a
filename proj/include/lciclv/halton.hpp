#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lciclv {

// Primes available as Halton bases (dimension d uses the d-th entry).
std::span<const std::uint32_t> halton_primes();

// Radical inverse of index (>= 1) in a prime base. Throws NumericError for
// non-prime bases.
double halton_point(std::uint64_t index, std::uint32_t base);

// Same with a digit permutation (perm.size() == base). Trailing zero digits
// contribute the analytic tail perm[0]/(base-1) at the cutoff scale.
double scrambled_halton_point(std::uint64_t index, std::uint32_t base,
                              std::span<const std::uint32_t> perm);

// Standard-normal quasi-random draws, one contiguous (R x dims) block per
// respondent. Regenerating with identical settings is bit-identical.
class DrawSet {
 public:
  DrawSet() = default;

  int n_respondents() const { return n_respondents_; }
  int draws_per_respondent() const { return R_; }
  int dims() const { return dims_; }
  int skip() const { return skip_; }
  const std::vector<std::uint32_t>& primes() const { return primes_; }
  std::optional<std::uint64_t> scramble_seed() const { return scramble_seed_; }

  // Pointer to the dims values of draw r for respondent n.
  const double* block(int n, int r) const {
    return values_.data() + (static_cast<std::size_t>(n) * R_ + r) * dims_;
  }
  double value(int n, int r, int d) const { return block(n, r)[d]; }
  const std::vector<double>& raw() const { return values_; }

  void save(const std::string& path) const;
  static DrawSet load(const std::string& path);

  friend DrawSet build_draws(int, int, int, int, std::optional<std::uint64_t>);

 private:
  int n_respondents_ = 0;
  int R_ = 0;
  int dims_ = 0;
  int skip_ = 0;
  std::optional<std::uint64_t> scramble_seed_;
  std::vector<std::uint32_t> primes_;
  std::vector<double> values_;
};

// Respondent n (0-based) receives Halton indices skip + n*R + 1 .. skip + (n+1)*R,
// dimension d drawn in base primes()[d], uniform values clamped to
// [1e-12, 1-1e-12] and mapped through the standard-normal quantile.
DrawSet build_draws(int n_respondents, int R, int dims, int skip = 10,
                    std::optional<std::uint64_t> scramble_seed = std::nullopt);

}  // namespace lciclv
