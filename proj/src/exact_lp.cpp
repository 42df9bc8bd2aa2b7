#include "mms/exact_lp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include "mms/binomial.hpp"

namespace mms {

LPInstance build_lp(int n, int k, const std::vector<KSet>& aplus, const std::vector<KSet>& aminus) {
  if (n < 1 || k < 1 || k > n) throw std::invalid_argument("build_lp: bad (n,k)");
  LPInstance lp;
  lp.n = n;
  lp.k = k;
  std::set<KSet> seen;
  for (const KSet& s : aplus) {
    if (s.size() != k) throw std::invalid_argument("build_lp: wrong cardinality");
    require_within(s, n);
    if (seen.insert(s).second) lp.aplus.push_back(s);
  }
  seen.clear();
  for (const KSet& s : aminus) {
    if (s.size() != k) throw std::invalid_argument("build_lp: wrong cardinality");
    require_within(s, n);
    if (seen.insert(s).second) lp.aminus.push_back(s);
  }

  LPRow sum{RowKind::kSum, {}, {}, 0, {}};
  for (int i = 0; i < n; ++i) {
    sum.vars.push_back(i);
    sum.coefs.push_back(1);
  }
  lp.rows.push_back(sum);
  for (int i = 0; i + 1 < n; ++i) lp.rows.push_back({RowKind::kOrder, {i, i + 1}, {1, -1}, 0, {}});
  for (const KSet& s : lp.aplus) {
    LPRow r{RowKind::kPlus, {}, {}, 0, s};
    for (int e : s.elements()) {
      r.vars.push_back(e - 1);
      r.coefs.push_back(1);
    }
    lp.rows.push_back(std::move(r));
  }
  for (const KSet& s : lp.aminus) {
    LPRow r{RowKind::kMinus, {}, {}, 1, s};
    for (int e : s.elements()) {
      r.vars.push_back(e - 1);
      r.coefs.push_back(-1);
    }
    lp.rows.push_back(std::move(r));
  }
  return lp;
}

Rational row_value(const LPRow& row, const RationalVector& x) {
  Rational v = 0;
  for (std::size_t i = 0; i < row.vars.size(); ++i) {
    if (row.coefs[i] == 1) {
      v += x[static_cast<std::size_t>(row.vars[i])];
    } else if (row.coefs[i] == -1) {
      v -= x[static_cast<std::size_t>(row.vars[i])];
    } else {
      v += row.coefs[i] * x[static_cast<std::size_t>(row.vars[i])];
    }
  }
  return v;
}

Rational ksum(const KSet& s, const RationalVector& x) {
  Rational v = 0;
  for (int e : s.elements()) v += x.at(static_cast<std::size_t>(e - 1));
  return v;
}

namespace {

using Matrix = std::vector<RationalVector>;

bool is_zero(const Rational& v) { return v == 0; }
bool is_zero(double v) { return std::abs(v) < 1e-12; }

// Gauss-Jordan inverse; nullopt when singular.
template <class T>
std::optional<std::vector<std::vector<T>>> invert(std::vector<std::vector<T>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<T>> inv(n, std::vector<T>(n, T(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = n;
    if constexpr (std::is_same_v<T, double>) {
      double best = 1e-9;
      for (std::size_t r = c; r < n; ++r) {
        if (std::abs(a[r][c]) > best) {
          best = std::abs(a[r][c]);
          p = r;
        }
      }
    } else {
      for (std::size_t r = c; r < n && p == n; ++r) {
        if (a[r][c] != 0) p = r;
      }
    }
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const T piv = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= piv;
      inv[c][j] /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || is_zero(a[r][c])) continue;
      const T f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

template <class T>
std::vector<std::vector<T>> basis_matrix(const LPInstance& lp, const std::vector<std::size_t>& basis) {
  const std::size_t n = basis.size();
  std::vector<std::vector<T>> b(n, std::vector<T>(n, T(0)));
  for (std::size_t c = 0; c < n; ++c) {
    const LPRow& row = lp.rows[basis[c]];
    for (std::size_t t = 0; t < row.vars.size(); ++t) b[static_cast<std::size_t>(row.vars[t])][c] = row.coefs[t];
  }
  return b;
}

struct StartBasis {
  std::vector<std::size_t> basis;
  std::optional<std::size_t> ray;  // entering column of an unbounded direction
};

// The same dual simplex in double precision with largest-coefficient pricing.
// Only used to pick a starting basis for the exact phase, which re-checks
// everything.
std::optional<StartBasis> float_phase(const LPInstance& lp) {
  constexpr double eps = 1e-9;
  const std::size_t n = static_cast<std::size_t>(lp.n);
  const std::size_t m = lp.rows.size();
  std::vector<std::size_t> basis(n);
  std::vector<char> in_basis(m, 0);
  for (std::size_t c = 0; c < n; ++c) {
    basis[c] = c;
    in_basis[c] = 1;
  }
  std::vector<std::vector<double>> binv;
  std::vector<double> yb(n), pi(n), w(n);
  std::size_t degenerate = 0;
  for (std::size_t iter = 0; iter < 50 * m + 100; ++iter) {
    if (iter % 32 == 0) {
      auto inv = invert(basis_matrix<double>(lp, basis));
      if (!inv) return std::nullopt;
      binv = std::move(*inv);
      for (std::size_t r = 0; r < n; ++r) yb[r] = binv[r][0];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double v = 0;
      for (std::size_t r = 0; r < n; ++r) v += lp.rows[basis[r]].rhs * binv[r][i];
      pi[i] = v;
    }
    const bool bland = degenerate > 20;
    std::size_t entering = m;
    double best_d = eps;
    for (std::size_t j = 0; j < m; ++j) {
      if (in_basis[j]) continue;
      const LPRow& row = lp.rows[j];
      double d = row.rhs;
      for (std::size_t t = 0; t < row.vars.size(); ++t) d -= row.coefs[t] * pi[static_cast<std::size_t>(row.vars[t])];
      if (d > best_d) {
        entering = j;
        best_d = d;
        if (bland) break;
      }
    }
    if (entering == m) return StartBasis{basis, std::nullopt};
    const LPRow& col = lp.rows[entering];
    for (std::size_t r = 0; r < n; ++r) {
      double v = 0;
      for (std::size_t t = 0; t < col.vars.size(); ++t) v += col.coefs[t] * binv[r][static_cast<std::size_t>(col.vars[t])];
      w[r] = v;
    }
    std::size_t leave = n;
    double best = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (w[r] <= eps) continue;
      const double ratio = std::max(yb[r], 0.0) / w[r];
      if (leave == n || ratio < best - 1e-12 || (ratio <= best + 1e-12 && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == n) return StartBasis{basis, entering};
    degenerate = best < 1e-12 ? degenerate + 1 : 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (r != leave) yb[r] -= best * w[r];
    }
    yb[leave] = best;
    const double piv = w[leave];
    for (std::size_t j = 0; j < n; ++j) binv[leave][j] /= piv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == leave || w[r] == 0) continue;
      const double f = w[r];
      for (std::size_t j = 0; j < n; ++j) binv[r][j] -= f * binv[leave][j];
    }
    in_basis[basis[leave]] = 0;
    basis[leave] = entering;
    in_basis[entering] = 1;
  }
  return std::nullopt;
}

}  // namespace

// The dual program is: maximize b^T y subject to A^T y = e_1, y >= 0, with one
// variable per row of P. The sum row and the ordering rows form a feasible
// starting basis; a basis found by float_phase replaces it when it is exactly
// feasible. Bland's rule from there. The simplex multipliers of an optimal dual
// basis are an optimal x; an unbounded dual ray is a Farkas certificate for P.
LPResult solve(const LPInstance& lp) {
  const std::size_t n = static_cast<std::size_t>(lp.n);
  const std::size_t m = lp.rows.size();
  if (m < n) throw std::invalid_argument("solve: instance lacks the sum/ordering rows");

  std::vector<std::size_t> basis(n);
  for (std::size_t c = 0; c < n; ++c) basis[c] = c;
  std::size_t hint = m;
  std::optional<Matrix> binv_opt;
  RationalVector yb(n);
  if (auto start = float_phase(lp)) {
    binv_opt = invert(basis_matrix<Rational>(lp, start->basis));
    if (binv_opt) {
      for (std::size_t r = 0; r < n; ++r) yb[r] = (*binv_opt)[r][0];
      if (std::all_of(yb.begin(), yb.end(), [](const Rational& v) { return v >= 0; })) {
        basis = start->basis;
        hint = start->ray.value_or(m);
      } else {
        binv_opt.reset();
      }
    }
  }
  if (!binv_opt) {
    for (std::size_t c = 0; c < n; ++c) basis[c] = c;
    binv_opt = invert(basis_matrix<Rational>(lp, basis));
    if (!binv_opt) throw std::logic_error("exact simplex: singular starting basis");
    for (std::size_t r = 0; r < n; ++r) yb[r] = (*binv_opt)[r][0];
  }
  Matrix& binv = *binv_opt;
  std::vector<char> in_basis(m, 0);
  for (std::size_t r : basis) in_basis[r] = 1;

  LPResult res;
  RationalVector pi(n);
  RationalVector w(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) {
      Rational v = 0;
      for (std::size_t r = 0; r < n; ++r) {
        const int rhs = lp.rows[basis[r]].rhs;
        if (rhs != 0 && binv[r][i] != 0) v += rhs * binv[r][i];
      }
      pi[i] = v;
    }
    std::size_t entering = m;
    if (hint < m && lp.rows[hint].rhs - row_value(lp.rows[hint], pi) > 0) entering = hint;
    hint = m;
    for (std::size_t j = 0; j < m && entering == m; ++j) {
      if (in_basis[j]) continue;
      if (lp.rows[j].rhs - row_value(lp.rows[j], pi) > 0) entering = j;
    }
    if (entering == m) {
      res.verdict = LPVerdict::kOptimal;
      res.x = pi;
      res.objective = pi[0];
      res.certificate.assign(m, 0);
      for (std::size_t r = 0; r < n; ++r) res.certificate[basis[r]] = yb[r];
      return res;
    }

    const LPRow& col = lp.rows[entering];
    for (std::size_t r = 0; r < n; ++r) {
      Rational v = 0;
      for (std::size_t t = 0; t < col.vars.size(); ++t) {
        const Rational& e = binv[r][static_cast<std::size_t>(col.vars[t])];
        if (e == 0) continue;
        if (col.coefs[t] == 1) {
          v += e;
        } else {
          v -= e;
        }
      }
      w[r] = v;
    }
    std::size_t leave = n;
    Rational best;
    for (std::size_t r = 0; r < n; ++r) {
      if (w[r] <= 0) continue;
      Rational ratio = yb[r] / w[r];
      if (leave == n || ratio < best || (ratio == best && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == n) {
      res.verdict = LPVerdict::kInfeasible;
      res.certificate.assign(m, 0);
      res.certificate[entering] = 1;
      for (std::size_t r = 0; r < n; ++r) res.certificate[basis[r]] = -w[r];
      return res;
    }

    ++res.pivots;
    const Rational theta = best;
    for (std::size_t r = 0; r < n; ++r) {
      if (r != leave && w[r] != 0) yb[r] -= theta * w[r];
    }
    yb[leave] = theta;
    const Rational piv = w[leave];
    for (std::size_t j = 0; j < n; ++j) binv[leave][j] /= piv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == leave || w[r] == 0) continue;
      const Rational f = w[r];
      for (std::size_t j = 0; j < n; ++j) {
        if (binv[leave][j] != 0) binv[r][j] -= f * binv[leave][j];
      }
    }
    in_basis[basis[leave]] = 0;
    basis[leave] = entering;
    in_basis[entering] = 1;
  }
}

bool verify_certificate(const LPInstance& lp, const LPResult& res) {
  const std::size_t n = static_cast<std::size_t>(lp.n);
  const std::size_t m = lp.rows.size();
  auto combine = [&](RationalVector& aty, Rational& bty) {
    aty.assign(n, 0);
    bty = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const Rational& y = res.certificate[j];
      if (y == 0) continue;
      const LPRow& row = lp.rows[j];
      for (std::size_t t = 0; t < row.vars.size(); ++t) aty[static_cast<std::size_t>(row.vars[t])] += row.coefs[t] * y;
      bty += row.rhs * y;
    }
  };
  if (res.certificate.size() != m) return false;
  for (const Rational& y : res.certificate) {
    if (y < 0) return false;
  }
  RationalVector aty;
  Rational bty;
  combine(aty, bty);
  if (res.verdict == LPVerdict::kInfeasible) {
    for (const Rational& v : aty) {
      if (v != 0) return false;
    }
    return bty > 0;
  }
  if (res.x.size() != n) return false;
  for (const LPRow& row : lp.rows) {
    if (row_value(row, res.x) < row.rhs) return false;
  }
  if (res.objective != res.x[0]) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (aty[i] != (i == 0 ? 1 : 0)) return false;
  }
  return bty == res.objective;
}

std::string rational_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

std::string certificate_digest(const LPResult& res) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
  };
  mix(res.verdict == LPVerdict::kInfeasible ? "I" : "O");
  for (std::size_t j = 0; j < res.certificate.size(); ++j) {
    if (res.certificate[j] == 0) continue;
    mix(std::to_string(j) + ":" + rational_string(res.certificate[j]) + ";");
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

std::uint64_t count_nonneg_ksums(const RationalVector& x, int k) {
  const int n = static_cast<int>(x.size());
  if (k < 1 || k > n) throw std::invalid_argument("count_nonneg_ksums: bad k");
  mpz_class den = 1;
  for (const Rational& v : x) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
  std::vector<mpz_class> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = x[i].get_num() * (den / x[i].get_den());
  std::sort(v.begin(), v.end(), std::greater<>());

  // prefix[i] = v[0] + ... + v[i-1]
  std::vector<mpz_class> prefix(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + v[i];
  auto range_sum = [&](int from, int len) -> mpz_class { return prefix[from + len] - prefix[from]; };

  std::uint64_t count = 0;
  std::function<void(int, int, const mpz_class&)> rec = [&](int pos, int left, const mpz_class& partial) {
    if (left == 0) {
      count += partial >= 0;
      return;
    }
    if (n - pos < left) return;
    if (partial + range_sum(pos, left) < 0) return;
    if (partial + range_sum(n - left, left) >= 0) {
      count += binomial(n - pos, left);
      return;
    }
    for (int i = pos; i <= n - left; ++i) {
      const mpz_class next = partial + v[i];
      if (next + range_sum(i + 1, left - 1) < 0) break;
      rec(i + 1, left - 1, next);
    }
  };
  rec(0, k, mpz_class(0));
  return count;
}

std::string lp_text(const LPInstance& lp) {
  std::ostringstream os;
  auto var = [](int i) { return "x" + std::to_string(i + 1); };
  auto terms = [&](const LPRow& row, bool negate) {
    std::string s;
    for (std::size_t t = 0; t < row.vars.size(); ++t) {
      const int c = negate ? -row.coefs[t] : row.coefs[t];
      if (t == 0) {
        s += (c < 0 ? "- " : "");
      } else {
        s += (c < 0 ? " - " : " + ");
      }
      s += var(row.vars[t]);
    }
    return s;
  };
  os << "\\ n=" << lp.n << " k=" << lp.k << " |A+|=" << lp.aplus.size() << " |A-|=" << lp.aminus.size() << "\n";
  os << "Minimize\n obj: x1\nSubject To\n";
  int plus = 0;
  int minus = 0;
  for (std::size_t j = 0; j < lp.rows.size(); ++j) {
    const LPRow& row = lp.rows[j];
    switch (row.kind) {
      case RowKind::kSum: os << " sum: " << terms(row, false) << " >= 0\n"; break;
      case RowKind::kOrder: os << " ord" << row.vars[0] + 1 << ": " << terms(row, false) << " >= 0\n"; break;
      case RowKind::kPlus: os << " pos" << ++plus << ": " << terms(row, false) << " >= 0\n"; break;
      case RowKind::kMinus: os << " neg" << ++minus << ": " << terms(row, true) << " <= -1\n"; break;
    }
  }
  os << "Bounds\n";
  for (int i = 0; i < lp.n; ++i) os << " " << var(i) << " free\n";
  os << "End\n";
  return os.str();
}

}  // namespace mms
