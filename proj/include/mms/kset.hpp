#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mms {

inline constexpr int kMaxK = 32;
inline constexpr int kMaxN = 255;

// A k-subset {i_1 < ... < i_k} of [n], elements 1-based. n is not stored.
class KSet {
 public:
  KSet() = default;
  KSet(std::initializer_list<int> elems);
  explicit KSet(std::span<const int> elems);

  int size() const { return k_; }
  bool empty() const { return k_ == 0; }
  // 0-based position: s[0] is i_1.
  int operator[](int pos) const { return e_[static_cast<std::size_t>(pos)]; }
  int front() const { return e_[0]; }
  int back() const { return e_[static_cast<std::size_t>(k_ - 1)]; }
  bool contains(int elem) const;
  std::vector<int> elements() const;

  std::string to_string() const;
  // Accepts "{1,6,11}" with optional spaces.
  static KSet parse(std::string_view text);

  friend bool operator==(const KSet& a, const KSet& b);
  // Colex order: compare from the largest element down.
  friend std::strong_ordering operator<=>(const KSet& a, const KSet& b);

 private:
  friend class KSetBuilder;
  void validate() const;

  std::array<std::uint8_t, kMaxK> e_{};
  std::uint8_t k_ = 0;
};

// Unchecked in-place construction for hot loops; call finish() to validate.
class KSetBuilder {
 public:
  explicit KSetBuilder(int k);
  void set(int pos, int elem) { s_.e_[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(elem); }
  KSet finish() const;
  KSet finish_unchecked() const { return s_; }

 private:
  KSet s_;
};

// Throws std::invalid_argument unless every element lies in [1, n].
void require_within(const KSet& s, int n);

// S ⪰ T: S is to the left of T, i.e. i_l <= j_l for every position.
bool shift_leq(const KSet& s, const KSet& t);

// Positionwise minimum (the ⪰-least common left bound) and maximum.
KSet join(const KSet& a, const KSet& b);
KSet meet(const KSet& a, const KSet& b);
KSet join(std::span<const KSet> family);
KSet meet(std::span<const KSet> family);

// {n+1-i : i in S}; swaps left and right shifts.
KSet reflect(const KSet& s, int n);

std::uint64_t colex_rank(const KSet& s);
std::uint64_t lex_rank(const KSet& s, int n);
KSet colex_unrank(std::uint64_t rank, int n, int k);
KSet lex_unrank(std::uint64_t rank, int n, int k);
KSet first_kset(int k);  // {1,...,k}
KSet last_kset(int n, int k);  // {n-k+1,...,n}
std::optional<KSet> lex_successor(const KSet& s, int n);
std::optional<KSet> colex_successor(const KSet& s, int n);

struct Composition {
  std::vector<int> parts;
  friend bool operator==(const Composition&, const Composition&) = default;
};

// A_S = (i_1, i_2 - i_1, ..., i_k - i_{k-1}, n + 1 - i_k).
Composition to_composition(const KSet& s, int n);
KSet from_composition(const Composition& c);
// Prefix-sum dominance A ⊴ B over the first k parts.
bool dominated(const Composition& a, const Composition& b);

enum class Direction { kLeft, kRight };

// Hasse neighbours: kLeft gives the sets covering S from the left (one element
// decremented into a free slot), kRight the sets S covers.
std::vector<KSet> cover_neighbors(const KSet& s, int n, Direction dir);

}  // namespace mms
