#include <random>

#include "doctest.h"
#include "mms/binomial.hpp"
#include "mms/exact_lp.hpp"
#include "oracles.hpp"

using mms::KSet;
using mms::Rational;
using mms::RationalVector;

namespace {

RationalVector ints(std::initializer_list<long> v) {
  RationalVector out;
  for (long e : v) out.emplace_back(e);
  return out;
}

std::uint64_t brute_count(const RationalVector& x, int k) {
  std::uint64_t c = 0;
  for (const auto& s : oracle::all_ksets(static_cast<int>(x.size()), k)) c += mms::ksum(s, x) >= 0;
  return c;
}

}  // namespace

TEST_CASE("instance shape") {
  auto lp = mms::build_lp(9, 3, {}, {});
  CHECK(lp.rows.size() == 9);
  lp = mms::build_lp(9, 3, {KSet{1, 2, 9}, KSet{1, 2, 9}}, {KSet{3, 5, 7}, KSet{2, 5, 9}});
  CHECK(lp.rows.size() == 1 + 8 + 1 + 2);
  for (const auto& row : lp.rows) {
    for (int c : row.coefs) CHECK((c == 1 || c == -1));
    CHECK((row.rhs == 0 || row.rhs == 1));
    if (row.kind == mms::RowKind::kMinus) CHECK(row.vars.size() == 3);
  }
  CHECK(mms::lp_text(lp).find("neg2: x2 + x5 + x9 <= -1") != std::string::npos);
}

TEST_CASE("empty families: optimum is the zero vector") {
  for (int n = 2; n <= 12; ++n) {
    auto lp = mms::build_lp(n, 2, {}, {});
    auto res = mms::solve(lp);
    REQUIRE(res.feasible());
    CHECK(res.objective == 0);
    for (const auto& v : res.x) CHECK(v == 0);
    CHECK(mms::verify_certificate(lp, res));
  }
}

TEST_CASE("the sharp vector makes this program feasible") {
  for (int n = 5; n <= 14; ++n) {
    for (int k = 2; k <= 4 && k < n; ++k) {
      std::vector<int> t{1};
      for (int i = n - k + 2; i <= n; ++i) t.push_back(i);
      std::vector<int> u;
      for (int i = 2; i <= k + 1; ++i) u.push_back(i);
      const KSet tset{std::span<const int>(t)};
      const KSet uset{std::span<const int>(u)};
      auto lp = mms::build_lp(n, k, {tset}, {uset});
      RationalVector x(static_cast<std::size_t>(n), Rational(-1));
      x[0] = n - 1;
      for (const auto& row : lp.rows) REQUIRE(mms::row_value(row, x) >= row.rhs);
      auto res = mms::solve(lp);
      REQUIRE(res.feasible());
      CHECK(mms::verify_certificate(lp, res));
    }
  }
}

TEST_CASE("terminal system of the g(3,13) argument is infeasible") {
  std::vector<KSet> neg{KSet{1, 5, 13}, KSet{1, 6, 12}, KSet{1, 7, 11}, KSet{3, 5, 12},
                        KSet{3, 6, 10}, KSet{4, 5, 11}, KSet{4, 7, 9}};
  auto lp = mms::build_lp(13, 3, {}, neg);
  auto res = mms::solve(lp);
  CHECK(res.verdict == mms::LPVerdict::kInfeasible);
  CHECK(mms::verify_certificate(lp, res));

  auto bad = res;
  for (auto& y : bad.certificate) {
    if (y != 0) {
      y *= 2;
      break;
    }
  }
  CHECK_FALSE(mms::verify_certificate(lp, bad));
  // Dropping one row makes it feasible again.
  neg.pop_back();
  auto lp2 = mms::build_lp(13, 3, {}, neg);
  CHECK(mms::solve(lp2).feasible());
}

TEST_CASE("a set in both families is detectably infeasible") {
  auto lp = mms::build_lp(7, 3, {KSet{2, 4, 6}}, {KSet{2, 4, 6}});
  auto res = mms::solve(lp);
  CHECK(res.verdict == mms::LPVerdict::kInfeasible);
  CHECK(mms::verify_certificate(lp, res));
}

TEST_CASE("random instances: certificates, determinism, scaling, monotone infeasibility") {
  std::mt19937_64 rng(99);
  int infeasible = 0;
  int feasible = 0;
  for (int iter = 0; iter < 300; ++iter) {
    const int n = 6 + static_cast<int>(rng() % 7);
    const int k = 2 + static_cast<int>(rng() % 3);
    const auto all = oracle::all_ksets(n, k);
    std::vector<KSet> plus;
    std::vector<KSet> minus;
    const int np = static_cast<int>(rng() % 4);
    const int nm = static_cast<int>(rng() % 8);
    for (int i = 0; i < np; ++i) plus.push_back(all[rng() % all.size()]);
    for (int i = 0; i < nm; ++i) minus.push_back(all[rng() % all.size()]);
    auto lp = mms::build_lp(n, k, plus, minus);
    auto res = mms::solve(lp);
    REQUIRE(mms::verify_certificate(lp, res));
    auto again = mms::solve(mms::build_lp(n, k, plus, minus));
    REQUIRE(again.verdict == res.verdict);
    REQUIRE(again.x == res.x);
    REQUIRE(again.certificate == res.certificate);
    if (res.feasible()) {
      ++feasible;
      RationalVector twice = res.x;
      for (auto& v : twice) v *= 2;
      for (const auto& row : lp.rows) REQUIRE(mms::row_value(row, twice) >= row.rhs);
      // Perturb: flip one RHS so the optimum no longer certifies.
      if (!minus.empty()) {
        auto flipped = lp;
        for (auto& row : flipped.rows) {
          if (row.kind == mms::RowKind::kMinus) {
            row.rhs = 0;
            for (auto& c : row.coefs) c = 1;
          }
        }
        bool any_violated = false;
        for (const auto& row : flipped.rows) any_violated = any_violated || mms::row_value(row, res.x) < row.rhs;
        if (any_violated) REQUIRE_FALSE(mms::verify_certificate(flipped, res));
      }
    } else {
      ++infeasible;
      minus.push_back(all[rng() % all.size()]);
      auto bigger = mms::build_lp(n, k, plus, minus);
      auto res2 = mms::solve(bigger);
      REQUIRE(res2.verdict == mms::LPVerdict::kInfeasible);
      REQUIRE(mms::verify_certificate(bigger, res2));
    }
  }
  CHECK(feasible > 20);
  CHECK(infeasible > 20);
}

TEST_CASE("counting nonnegative k-sums") {
  for (int n = 4; n <= 12; ++n) {
    for (int k = 1; k < n; ++k) {
      RationalVector x(static_cast<std::size_t>(n), Rational(-1));
      x[0] = n - 1;
      CHECK(mms::count_nonneg_ksums(x, k) == mms::binomial(n - 1, k - 1));
      CHECK(mms::count_nonneg_ksums(RationalVector(static_cast<std::size_t>(n), Rational(0)), k) == mms::binomial(n, k));
    }
  }
  CHECK(mms::count_nonneg_ksums(ints({2, 2, 2, 2, 2, 2, 2, -7, -7}), 4) == 35);

  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 400; ++iter) {
    const int n = 3 + static_cast<int>(rng() % 9);
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    RationalVector x;
    for (int i = 0; i < n; ++i) x.emplace_back(static_cast<long>(rng() % 21) - 10, 1 + static_cast<long>(rng() % 3));
    for (auto& v : x) v.canonicalize();
    REQUIRE(mms::count_nonneg_ksums(x, k) == brute_count(x, k));
  }
}
