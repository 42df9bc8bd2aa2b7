#pragma once

#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace mms {

// Exact C(n, k); throws std::overflow_error past 64 bits.
std::uint64_t binomial(int n, int k);

// Pascal triangle rows 0..max_n, columns 0..max_k, over an exact integer
// type. For std::uint64_t the constructor refuses tables whose entries would
// wrap.
template <typename Int>
class BinomialTable {
 public:
  BinomialTable() = default;

  BinomialTable(int max_n, int max_k) : max_n_(max_n), max_k_(max_k) {
    if (max_n < 0 || max_k < 0) throw std::invalid_argument("negative binomial table size");
    rows_.assign(static_cast<std::size_t>(max_n + 1), std::vector<Int>(static_cast<std::size_t>(max_k + 1), Int(0)));
    for (int i = 0; i <= max_n; ++i) {
      rows_[i][0] = Int(1);
      for (int j = 1; j <= max_k && j <= i; ++j) {
        const Int& a = rows_[i - 1][j - 1];
        const Int& b = rows_[i - 1][j];
        if constexpr (std::is_same_v<Int, std::uint64_t>) {
          if (a > UINT64_MAX - b) throw std::overflow_error("binomial table overflows 64 bits");
        }
        rows_[i][j] = a + b;
      }
    }
  }

  // C(n, k), zero outside 0 <= k <= n. Negative n also yields zero.
  const Int& operator()(int n, int k) const {
    static const Int zero(0);
    if (n < 0 || k < 0 || k > n) return zero;
    if (n > max_n_ || k > max_k_) throw std::out_of_range("binomial table too small");
    return rows_[n][k];
  }

  int max_n() const { return max_n_; }
  int max_k() const { return max_k_; }

 private:
  int max_n_ = -1;
  int max_k_ = -1;
  std::vector<std::vector<Int>> rows_;
};

}  // namespace mms
