#include "mms/kset.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "mms/binomial.hpp"

namespace mms {

KSet::KSet(std::initializer_list<int> elems) : KSet(std::span<const int>(elems.begin(), elems.size())) {}

KSet::KSet(std::span<const int> elems) {
  if (elems.size() > static_cast<std::size_t>(kMaxK)) throw std::invalid_argument("k-set too large");
  k_ = static_cast<std::uint8_t>(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (elems[i] < 1 || elems[i] > kMaxN) throw std::invalid_argument("k-set element out of range");
    e_[i] = static_cast<std::uint8_t>(elems[i]);
  }
  validate();
}

void KSet::validate() const {
  if (k_ == 0) throw std::invalid_argument("k-set must be nonempty");
  if (e_[0] < 1) throw std::invalid_argument("k-set elements are 1-based");
  for (int i = 1; i < k_; ++i) {
    if (e_[i] <= e_[i - 1]) throw std::invalid_argument("k-set elements must be strictly increasing");
  }
}

bool KSet::contains(int elem) const {
  return std::binary_search(e_.begin(), e_.begin() + k_, static_cast<std::uint8_t>(elem));
}

std::vector<int> KSet::elements() const { return {e_.begin(), e_.begin() + k_}; }

std::string KSet::to_string() const {
  std::string out = "{";
  for (int i = 0; i < k_; ++i) {
    if (i) out += ',';
    out += std::to_string(e_[i]);
  }
  out += '}';
  return out;
}

KSet KSet::parse(std::string_view text) {
  std::vector<int> elems;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  skip_ws();
  if (pos >= text.size() || text[pos] != '{') throw std::invalid_argument("k-set must start with '{'");
  ++pos;
  while (true) {
    skip_ws();
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
    if (ec != std::errc()) throw std::invalid_argument("bad k-set element in " + std::string(text));
    elems.push_back(value);
    pos = static_cast<std::size_t>(ptr - text.data());
    skip_ws();
    if (pos >= text.size()) throw std::invalid_argument("unterminated k-set");
    if (text[pos] == '}') {
      ++pos;
      break;
    }
    if (text[pos] != ',') throw std::invalid_argument("expected ',' in k-set");
    ++pos;
  }
  skip_ws();
  if (pos != text.size()) throw std::invalid_argument("trailing characters after k-set");
  return KSet(std::span<const int>(elems));
}

bool operator==(const KSet& a, const KSet& b) {
  return a.k_ == b.k_ && std::equal(a.e_.begin(), a.e_.begin() + a.k_, b.e_.begin());
}

std::strong_ordering operator<=>(const KSet& a, const KSet& b) {
  if (a.k_ != b.k_) return a.k_ <=> b.k_;
  for (int i = a.k_ - 1; i >= 0; --i) {
    if (a.e_[i] != b.e_[i]) return a.e_[i] <=> b.e_[i];
  }
  return std::strong_ordering::equal;
}

KSetBuilder::KSetBuilder(int k) {
  if (k < 1 || k > kMaxK) throw std::invalid_argument("k out of range");
  s_.k_ = static_cast<std::uint8_t>(k);
}

KSet KSetBuilder::finish() const {
  s_.validate();
  return s_;
}

void require_within(const KSet& s, int n) {
  if (s.empty() || s.back() > n) throw std::invalid_argument("k-set " + s.to_string() + " not within [1," + std::to_string(n) + "]");
}

namespace {

void require_same_k(const KSet& a, const KSet& b) {
  if (a.size() != b.size()) throw std::invalid_argument("k-sets of different cardinality");
}

}  // namespace

bool shift_leq(const KSet& s, const KSet& t) {
  require_same_k(s, t);
  for (int i = 0; i < s.size(); ++i) {
    if (s[i] > t[i]) return false;
  }
  return true;
}

KSet join(const KSet& a, const KSet& b) {
  require_same_k(a, b);
  KSetBuilder out(a.size());
  for (int i = 0; i < a.size(); ++i) out.set(i, std::min(a[i], b[i]));
  return out.finish_unchecked();
}

KSet meet(const KSet& a, const KSet& b) {
  require_same_k(a, b);
  KSetBuilder out(a.size());
  for (int i = 0; i < a.size(); ++i) out.set(i, std::max(a[i], b[i]));
  return out.finish_unchecked();
}

KSet join(std::span<const KSet> family) {
  if (family.empty()) throw std::invalid_argument("join of an empty family");
  KSet acc = family.front();
  for (const KSet& s : family.subspan(1)) acc = join(acc, s);
  return acc;
}

KSet meet(std::span<const KSet> family) {
  if (family.empty()) throw std::invalid_argument("meet of an empty family");
  KSet acc = family.front();
  for (const KSet& s : family.subspan(1)) acc = meet(acc, s);
  return acc;
}

KSet reflect(const KSet& s, int n) {
  require_within(s, n);
  const int k = s.size();
  KSetBuilder out(k);
  for (int i = 0; i < k; ++i) out.set(i, n + 1 - s[k - 1 - i]);
  return out.finish_unchecked();
}

std::uint64_t colex_rank(const KSet& s) {
  std::uint64_t r = 0;
  for (int l = 1; l <= s.size(); ++l) r += binomial(s[l - 1] - 1, l);
  return r;
}

std::uint64_t lex_rank(const KSet& s, int n) {
  require_within(s, n);
  const int k = s.size();
  std::uint64_t r = 0;
  int prev = 0;
  for (int l = 1; l <= k; ++l) {
    for (int j = prev + 1; j <= s[l - 1] - 1; ++j) r += binomial(n - j, k - l);
    prev = s[l - 1];
  }
  return r;
}

KSet first_kset(int k) {
  KSetBuilder out(k);
  for (int i = 0; i < k; ++i) out.set(i, i + 1);
  return out.finish_unchecked();
}

KSet last_kset(int n, int k) {
  if (k > n) throw std::invalid_argument("k exceeds n");
  KSetBuilder out(k);
  for (int i = 0; i < k; ++i) out.set(i, n - k + 1 + i);
  return out.finish_unchecked();
}

KSet colex_unrank(std::uint64_t rank, int n, int k) {
  if (k < 1 || k > n || n > kMaxN) throw std::invalid_argument("bad (n,k) for unrank");
  if (rank >= binomial(n, k)) throw std::out_of_range("colex rank out of range");
  KSetBuilder out(k);
  int c = n - 1;
  for (int l = k; l >= 1; --l) {
    while (binomial(c, l) > rank) --c;
    out.set(l - 1, c + 1);
    rank -= binomial(c, l);
    --c;
  }
  return out.finish_unchecked();
}

KSet lex_unrank(std::uint64_t rank, int n, int k) {
  if (k < 1 || k > n || n > kMaxN) throw std::invalid_argument("bad (n,k) for unrank");
  if (rank >= binomial(n, k)) throw std::out_of_range("lex rank out of range");
  KSetBuilder out(k);
  int j = 1;
  for (int l = 1; l <= k; ++l) {
    while (true) {
      const std::uint64_t block = binomial(n - j, k - l);
      if (rank < block) break;
      rank -= block;
      ++j;
    }
    out.set(l - 1, j);
    ++j;
  }
  return out.finish_unchecked();
}

std::optional<KSet> lex_successor(const KSet& s, int n) {
  require_within(s, n);
  const int k = s.size();
  int i = k - 1;
  while (i >= 0 && s[i] == n - k + 1 + i) --i;
  if (i < 0) return std::nullopt;
  KSetBuilder out(k);
  for (int p = 0; p < i; ++p) out.set(p, s[p]);
  for (int p = i; p < k; ++p) out.set(p, s[i] + 1 + (p - i));
  return out.finish_unchecked();
}

std::optional<KSet> colex_successor(const KSet& s, int n) {
  require_within(s, n);
  const int k = s.size();
  int i = 0;
  while (i < k) {
    const int limit = (i + 1 < k) ? s[i + 1] : n + 1;
    if (s[i] + 1 < limit) break;
    ++i;
  }
  if (i == k) return std::nullopt;
  KSetBuilder out(k);
  for (int p = 0; p < i; ++p) out.set(p, p + 1);
  out.set(i, s[i] + 1);
  for (int p = i + 1; p < k; ++p) out.set(p, s[p]);
  return out.finish_unchecked();
}

Composition to_composition(const KSet& s, int n) {
  require_within(s, n);
  Composition c;
  c.parts.reserve(static_cast<std::size_t>(s.size()) + 1);
  int prev = 0;
  for (int i = 0; i < s.size(); ++i) {
    c.parts.push_back(s[i] - prev);
    prev = s[i];
  }
  c.parts.push_back(n + 1 - prev);
  return c;
}

KSet from_composition(const Composition& c) {
  if (c.parts.size() < 2) throw std::invalid_argument("composition needs at least two parts");
  std::vector<int> elems;
  int acc = 0;
  for (std::size_t i = 0; i + 1 < c.parts.size(); ++i) {
    if (c.parts[i] < 1) throw std::invalid_argument("composition parts must be positive");
    acc += c.parts[i];
    elems.push_back(acc);
  }
  if (c.parts.back() < 1) throw std::invalid_argument("composition parts must be positive");
  return KSet(std::span<const int>(elems));
}

bool dominated(const Composition& a, const Composition& b) {
  if (a.parts.size() != b.parts.size()) throw std::invalid_argument("compositions of different length");
  int sa = 0;
  int sb = 0;
  for (std::size_t t = 0; t + 1 < a.parts.size(); ++t) {
    sa += a.parts[t];
    sb += b.parts[t];
    if (sa > sb) return false;
  }
  return true;
}

std::vector<KSet> cover_neighbors(const KSet& s, int n, Direction dir) {
  require_within(s, n);
  const int k = s.size();
  std::vector<KSet> out;
  for (int i = 0; i < k; ++i) {
    int moved = 0;
    if (dir == Direction::kLeft) {
      const int floor = i > 0 ? s[i - 1] : 0;
      if (s[i] - 1 > floor) moved = s[i] - 1;
    } else {
      const int ceil = i + 1 < k ? s[i + 1] : n + 1;
      if (s[i] + 1 < ceil) moved = s[i] + 1;
    }
    if (moved == 0) continue;
    KSetBuilder b(k);
    for (int p = 0; p < k; ++p) b.set(p, p == i ? moved : s[p]);
    out.push_back(b.finish_unchecked());
  }
  return out;
}

}  // namespace mms
