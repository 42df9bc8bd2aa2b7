#pragma once

// Brute-force reference implementations used only by tests.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "mms/kset.hpp"

namespace oracle {

inline std::vector<mms::KSet> all_ksets(int n, int k) {
  std::vector<mms::KSet> out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[i] = i + 1;
  while (true) {
    out.emplace_back(std::span<const int>(idx));
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + 1 + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;  // lexicographic order
}

inline bool left_of(const mms::KSet& s, const mms::KSet& t) {
  for (int i = 0; i < s.size(); ++i) {
    if (s[i] > t[i]) return false;
  }
  return true;
}

inline std::uint64_t count_left(const mms::KSet& s, int n) {
  std::uint64_t c = 0;
  for (const auto& t : all_ksets(n, s.size())) c += left_of(t, s);
  return c;
}

inline std::uint64_t count_right(const mms::KSet& s, int n) {
  std::uint64_t c = 0;
  for (const auto& t : all_ksets(n, s.size())) c += left_of(s, t);
  return c;
}

// Direct cover test: S \ T = {i}, T \ S = {j}, i = j - 1 (so S is left of T).
inline bool covers_left(const mms::KSet& s, const mms::KSet& t) {
  std::vector<int> only_s;
  std::vector<int> only_t;
  for (int e : s.elements()) {
    if (!t.contains(e)) only_s.push_back(e);
  }
  for (int e : t.elements()) {
    if (!s.contains(e)) only_t.push_back(e);
  }
  return only_s.size() == 1 && only_t.size() == 1 && only_s[0] == only_t[0] - 1;
}

inline std::uint64_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace oracle
