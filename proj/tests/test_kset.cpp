#include <set>

#include "doctest.h"
#include "mms/binomial.hpp"
#include "mms/kset.hpp"
#include "oracles.hpp"

using mms::KSet;

TEST_CASE("binomial matches the Pascal table") {
  mms::BinomialTable<std::uint64_t> table(60, 30);
  for (int n = 0; n <= 60; ++n) {
    for (int k = 0; k <= 30; ++k) CHECK(mms::binomial(n, k) == table(n, k));
  }
  CHECK(mms::binomial(5, 7) == 0);
  CHECK(mms::binomial(-1, 0) == 0);
  CHECK_THROWS_AS(mms::binomial(200, 100), std::overflow_error);
  CHECK_THROWS(mms::BinomialTable<std::uint64_t>(80, 40));
}

TEST_CASE("k-set construction and parsing") {
  KSet s{1, 6, 11};
  CHECK(s.size() == 3);
  CHECK(s.to_string() == "{1,6,11}");
  CHECK(KSet::parse(" { 1, 6 ,11 }") == s);
  CHECK_THROWS(KSet{3, 2});
  CHECK_THROWS(KSet{0, 2});
  CHECK_THROWS(KSet::parse("{}"));
  CHECK_THROWS(KSet::parse("{1,2"));
  CHECK_THROWS(KSet::parse("{1,2}x"));
  CHECK_THROWS(mms::require_within(s, 10));
}

TEST_CASE("shift order basics") {
  CHECK(mms::shift_leq(KSet{2, 5, 7}, KSet{2, 5, 7}));
  CHECK(mms::shift_leq(KSet{1, 2}, KSet{2, 3}));
  CHECK_FALSE(mms::shift_leq(KSet{1, 4}, KSet{2, 3}));
  CHECK_FALSE(mms::shift_leq(KSet{2, 3}, KSet{1, 4}));
  CHECK_THROWS(mms::shift_leq(KSet{1, 2}, KSet{1, 2, 3}));
}

TEST_CASE("join and meet") {
  CHECK(mms::join(KSet{1, 4}, KSet{2, 3}) == KSet{1, 3});
  CHECK(mms::meet(KSet{1, 4}, KSet{2, 3}) == KSet{2, 4});
  std::vector<KSet> one{KSet{2, 5}};
  CHECK(mms::join(one) == KSet{2, 5});
  CHECK(mms::meet(one) == KSet{2, 5});
  CHECK_THROWS(mms::join(std::span<const KSet>{}));
  CHECK_THROWS(mms::join(KSet{1, 2}, KSet{1, 2, 3}));

  // {1,3} is the unique minimal common left bound of {1,4},{2,3} in C([4],2).
  std::vector<KSet> bounds;
  for (const auto& t : oracle::all_ksets(4, 2)) {
    if (oracle::left_of(t, KSet{1, 4}) && oracle::left_of(t, KSet{2, 3})) bounds.push_back(t);
  }
  std::vector<KSet> minimal;
  for (const auto& b : bounds) {
    bool is_min = true;
    for (const auto& c : bounds) {
      if (!(c == b) && oracle::left_of(b, c)) is_min = false;
    }
    if (is_min) minimal.push_back(b);
  }
  REQUIRE(minimal.size() == 1);
  CHECK(minimal[0] == KSet{1, 3});
}

TEST_CASE("closure intersection equals closure of join and meet") {
  const int n = 6;
  const auto all = oracle::all_ksets(n, 3);
  for (const auto& a : all) {
    for (const auto& b : all) {
      const KSet j = mms::join(a, b);
      const KSet m = mms::meet(a, b);
      for (const auto& t : all) {
        const bool in_both_left = oracle::left_of(t, a) && oracle::left_of(t, b);
        REQUIRE(in_both_left == oracle::left_of(t, j));
        const bool in_both_right = oracle::left_of(a, t) && oracle::left_of(b, t);
        REQUIRE(in_both_right == oracle::left_of(m, t));
      }
    }
  }
}

TEST_CASE("partial order and lattice laws, exhaustive for n <= 8, k <= 4") {
  for (int n = 1; n <= 8; ++n) {
    for (int k = 1; k <= std::min(4, n); ++k) {
      const auto all = oracle::all_ksets(n, k);
      for (const auto& a : all) {
        REQUIRE(mms::shift_leq(a, a));
        REQUIRE(mms::join(a, a) == a);
        REQUIRE(mms::meet(a, a) == a);
        for (const auto& b : all) {
          const bool ab = mms::shift_leq(a, b);
          REQUIRE(ab == oracle::left_of(a, b));
          if (ab && mms::shift_leq(b, a)) REQUIRE(a == b);
          REQUIRE(mms::join(a, b) == mms::join(b, a));
          REQUIRE(mms::meet(a, b) == mms::meet(b, a));
          REQUIRE(mms::join(a, mms::meet(a, b)) == a);
          REQUIRE(mms::meet(a, mms::join(a, b)) == a);
          if (ab) {
            REQUIRE(mms::lex_rank(a, n) <= mms::lex_rank(b, n));
            REQUIRE(mms::colex_rank(a) <= mms::colex_rank(b));
          }
          if (k <= 3 || n <= 6) {
            for (const auto& c : all) {
              if (ab && mms::shift_leq(b, c)) REQUIRE(mms::shift_leq(a, c));
              REQUIRE(mms::join(mms::join(a, b), c) == mms::join(a, mms::join(b, c)));
              REQUIRE(mms::meet(mms::meet(a, b), c) == mms::meet(a, mms::meet(b, c)));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("ranks") {
  CHECK(mms::colex_rank(KSet{1, 2, 3, 4}) == 0);
  CHECK(mms::lex_rank(KSet{1, 2, 3, 4}, 9) == 0);
  CHECK(mms::colex_rank(KSet{2, 3, 5}) == 6);
  // Position 6 in an explicit colex sort of C([5],3).
  auto all = oracle::all_ksets(5, 3);
  std::sort(all.begin(), all.end());
  CHECK(all[6] == KSet{2, 3, 5});

  for (int n = 1; n <= 10; ++n) {
    for (int k = 1; k <= std::min(4, n); ++k) {
      const auto lex = oracle::all_ksets(n, k);
      std::set<std::uint64_t> colex_seen;
      for (std::size_t i = 0; i < lex.size(); ++i) {
        REQUIRE(mms::lex_rank(lex[i], n) == i);
        REQUIRE(mms::lex_unrank(i, n, k) == lex[i]);
        colex_seen.insert(mms::colex_rank(lex[i]));
      }
      REQUIRE(colex_seen.size() == lex.size());
      REQUIRE(*colex_seen.rbegin() == lex.size() - 1);

      std::uint64_t visited = 1;
      auto cur = mms::first_kset(k);
      while (auto next = mms::lex_successor(cur, n)) {
        REQUIRE(mms::lex_rank(*next, n) == mms::lex_rank(cur, n) + 1);
        cur = *next;
        ++visited;
      }
      REQUIRE(visited == oracle::choose(n, k));
      REQUIRE(cur == mms::last_kset(n, k));

      visited = 1;
      cur = mms::first_kset(k);
      while (auto next = mms::colex_successor(cur, n)) {
        REQUIRE(mms::colex_rank(*next) == mms::colex_rank(cur) + 1);
        cur = *next;
        ++visited;
      }
      REQUIRE(visited == oracle::choose(n, k));
    }
  }
  for (const auto& s : oracle::all_ksets(9, 3)) CHECK(mms::colex_unrank(mms::colex_rank(s), 9, 3) == s);
  CHECK(mms::colex_unrank(0, 7, 3) == KSet{1, 2, 3});
  CHECK_THROWS_AS(mms::colex_unrank(oracle::choose(7, 3), 7, 3), std::out_of_range);
  CHECK_FALSE(mms::lex_successor(KSet{5, 6, 7}, 7).has_value());
}

TEST_CASE("composition encoding") {
  CHECK(mms::to_composition(KSet{1, 2, 3}, 9).parts == std::vector<int>{1, 1, 1, 7});
  CHECK(mms::to_composition(KSet{2, 5}, 6).parts == std::vector<int>{2, 3, 2});
  const int n = 7;
  const auto all = oracle::all_ksets(n, 3);
  std::set<std::vector<int>> images;
  for (const auto& s : all) {
    const auto c = mms::to_composition(s, n);
    int sum = 0;
    for (int p : c.parts) {
      REQUIRE(p >= 1);
      sum += p;
    }
    REQUIRE(sum == n + 1);
    REQUIRE(mms::from_composition(c) == s);
    images.insert(c.parts);
    for (const auto& t : all) {
      REQUIRE(mms::shift_leq(s, t) == mms::dominated(c, mms::to_composition(t, n)));
    }
  }
  CHECK(images.size() == all.size());
}

TEST_CASE("cover neighbours") {
  CHECK(mms::cover_neighbors(KSet{1, 2, 3}, 8, mms::Direction::kLeft).empty());
  auto left = mms::cover_neighbors(KSet{2, 4}, 5, mms::Direction::kLeft);
  auto right = mms::cover_neighbors(KSet{2, 4}, 5, mms::Direction::kRight);
  CHECK(std::set<KSet>(left.begin(), left.end()) == std::set<KSet>{KSet{1, 4}, KSet{2, 3}});
  CHECK(std::set<KSet>(right.begin(), right.end()) == std::set<KSet>{KSet{3, 4}, KSet{2, 5}});

  for (int n = 1; n <= 8; ++n) {
    for (int k = 1; k <= std::min(3, n); ++k) {
      const auto all = oracle::all_ksets(n, k);
      for (const auto& s : all) {
        const auto ln = mms::cover_neighbors(s, n, mms::Direction::kLeft);
        std::set<KSet> lset(ln.begin(), ln.end());
        for (const auto& t : all) {
          bool strict_cover = oracle::left_of(t, s) && !(t == s);
          for (const auto& m : all) {
            if (!(m == s) && !(m == t) && oracle::left_of(t, m) && oracle::left_of(m, s)) strict_cover = false;
          }
          REQUIRE(strict_cover == (lset.count(t) == 1));
          REQUIRE(oracle::covers_left(t, s) == (lset.count(t) == 1));
        }
      }
    }
  }
}
