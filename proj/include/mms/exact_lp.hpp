#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "mms/kset.hpp"

namespace mms {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

enum class RowKind { kSum, kOrder, kPlus, kMinus };

// One constraint sum_j coef_j x_{var_j} >= rhs; variables are 0-based here.
struct LPRow {
  RowKind kind;
  std::vector<int> vars;
  std::vector<int> coefs;
  int rhs = 0;
  KSet set;  // for kPlus / kMinus
};

// P(n,k,A+,A-): minimize x_1 subject to sum x >= 0, x_i - x_{i+1} >= 0,
// sigma_S >= 0 for S in A+, and sigma_T <= -1 (stored as -sigma_T >= 1) for T in A-.
struct LPInstance {
  int n = 0;
  int k = 0;
  std::vector<KSet> aplus;
  std::vector<KSet> aminus;
  std::vector<LPRow> rows;
};

LPInstance build_lp(int n, int k, const std::vector<KSet>& aplus, const std::vector<KSet>& aminus);

enum class LPVerdict { kOptimal, kInfeasible };

struct LPResult {
  LPVerdict verdict = LPVerdict::kInfeasible;
  RationalVector x;  // optimal point
  Rational objective;
  // INFEASIBLE: Farkas multipliers y >= 0 with A^T y = 0 and b^T y > 0.
  // OPTIMAL: dual multipliers y >= 0 with A^T y = e_1 and b^T y = x_1.
  RationalVector certificate;
  std::size_t pivots = 0;

  bool feasible() const { return verdict == LPVerdict::kOptimal; }
};

// Exact revised simplex on the dual program with Bland's rule.
LPResult solve(const LPInstance& instance);
// Recomputes everything in rational arithmetic from the instance alone.
bool verify_certificate(const LPInstance& instance, const LPResult& result);

// Short hex digest of the certificate entries.
std::string certificate_digest(const LPResult& result);
// Rational in lowest terms as "p" or "p/q".
std::string rational_string(const Rational& q);

// Value of row `row` at x, i.e. sum_j coef_j x_{var_j}.
Rational row_value(const LPRow& row, const RationalVector& x);
// sigma_S(x) with 1-based S.
Rational ksum(const KSet& s, const RationalVector& x);

// s_k(x): number of k-subsets with nonnegative sum. Coordinates need not be
// sorted; the count prunes on the sorted copy.
std::uint64_t count_nonneg_ksums(const RationalVector& x, int k);

// CPLEX-style LP text for cross-checking with external solvers.
std::string lp_text(const LPInstance& instance);

}  // namespace mms
