#include "mms/binomial.hpp"

namespace mms {

std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (acc > UINT64_MAX) throw std::overflow_error("binomial exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace mms
