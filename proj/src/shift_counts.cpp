#include "mms/shift_counts.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "mms/binomial.hpp"

namespace mms {

std::uint64_t left_count(const KSet& s, int n) {
  require_within(s, n);
  const int k = s.size();
  if (k == 1) return static_cast<std::uint64_t>(s[0]);
  // prefix[l] = L_l({i_1..i_l}); only l <= k-2 is needed.
  std::array<std::uint64_t, kMaxK + 1> prefix{};
  prefix[1] = static_cast<std::uint64_t>(s[0]);
  for (int l = 2; l <= k - 2; ++l) {
    const int top = s[l - 1];
    std::uint64_t v = binomial(top, l) - binomial(top - s[0], l);
    for (int j = 1; j <= l - 2; ++j) v -= prefix[j] * binomial(top - s[j], l - j);
    prefix[l] = v;
  }
  const int top = s[k - 1];
  std::uint64_t v = binomial(top, k) - binomial(top - s[0], k);
  for (int l = 1; l <= k - 2; ++l) v -= prefix[l] * binomial(top - s[l], k - l);
  return v;
}

std::uint64_t right_count(const KSet& s, int n) { return left_count(reflect(s, n), n); }

ShiftUniverse::ShiftUniverse(int n, int k, std::size_t hasse_budget) : n_(n), k_(k) {
  if (k < 1 || k > n || n > kMaxN || k > kMaxK) throw std::invalid_argument("unsupported (n,k)");
  const std::uint64_t total = binomial(n, k);
  if (total > UINT32_MAX) throw std::invalid_argument("C(n,k) too large for a dense family");
  sets_.reserve(total);
  std::optional<KSet> cur = first_kset(k);
  while (cur) {
    sets_.push_back(*cur);
    cur = colex_successor(*cur, n);
  }
  left_.resize(total);
  right_.resize(total);
  for (Rank r = 0; r < total; ++r) {
    left_[r] = left_count(sets_[r], n);
    right_[r] = right_count(sets_[r], n);
  }
  lex_order_.reserve(total);
  cur = first_kset(k);
  while (cur) {
    lex_order_.push_back(rank(*cur));
    cur = lex_successor(*cur, n);
  }
  if (total * static_cast<std::uint64_t>(k) <= hasse_budget) {
    auto build = [&](Direction dir, std::vector<std::uint32_t>& off, std::vector<Rank>& adj) {
      off.assign(total + 1, 0);
      for (Rank r = 0; r < total; ++r) {
        for (const KSet& t : cover_neighbors(sets_[r], n, dir)) adj.push_back(static_cast<Rank>(colex_rank(t)));
        off[r + 1] = static_cast<std::uint32_t>(adj.size());
      }
    };
    build(Direction::kLeft, left_off_, left_adj_);
    build(Direction::kRight, right_off_, right_adj_);
  }
}

Rank ShiftUniverse::rank(const KSet& s) const {
  if (s.size() != k_ || s.back() > n_) throw std::invalid_argument("k-set " + s.to_string() + " outside this family");
  return static_cast<Rank>(colex_rank(s));
}

std::vector<Rank> ShiftUniverse::covers(Rank r, Direction dir) const {
  if (has_hasse()) {
    auto sp = dir == Direction::kLeft ? left_covers(r) : right_covers(r);
    return {sp.begin(), sp.end()};
  }
  std::vector<Rank> out;
  for (const KSet& t : cover_neighbors(sets_[r], n_, dir)) out.push_back(static_cast<Rank>(colex_rank(t)));
  return out;
}

std::span<const Rank> ShiftUniverse::left_covers(Rank r) const {
  if (!has_hasse()) throw std::logic_error("Hasse digraph not materialized");
  return {left_adj_.data() + left_off_[r], left_adj_.data() + left_off_[r + 1]};
}

std::span<const Rank> ShiftUniverse::right_covers(Rank r) const {
  if (!has_hasse()) throw std::logic_error("Hasse digraph not materialized");
  return {right_adj_.data() + right_off_[r], right_adj_.data() + right_off_[r + 1]};
}

Rank ShiftUniverse::join_rank(Rank a, Rank b) const { return static_cast<Rank>(colex_rank(join(sets_[a], sets_[b]))); }
Rank ShiftUniverse::meet_rank(Rank a, Rank b) const { return static_cast<Rank>(colex_rank(meet(sets_[a], sets_[b]))); }

const char* label_name(Label l) {
  switch (l) {
    case Label::kPos: return "POS";
    case Label::kNeg: return "NEG";
    default: return "UNDECIDED";
  }
}

CountStrategy parse_strategy(const std::string& name) {
  if (name == "auto") return CountStrategy::kAuto;
  if (name == "bfs") return CountStrategy::kBfs;
  if (name == "incexc") return CountStrategy::kIncExc;
  throw std::invalid_argument("unknown strategy: " + name);
}

const char* strategy_name(CountStrategy s) {
  switch (s) {
    case CountStrategy::kBfs: return "bfs";
    case CountStrategy::kIncExc: return "incexc";
    default: return "auto";
  }
}

FamilyState::FamilyState(std::shared_ptr<const ShiftUniverse> universe, CountStrategy strategy)
    : u_(std::move(universe)), label_(u_->size(), static_cast<std::uint8_t>(Label::kUndecided)) {
  if (strategy == CountStrategy::kAuto) strategy = (u_->k() <= 4 && u_->has_hasse()) ? CountStrategy::kBfs : CountStrategy::kIncExc;
  if (strategy == CountStrategy::kBfs && !u_->has_hasse()) strategy = CountStrategy::kIncExc;
  strategy_ = strategy;
}

std::vector<Rank> FamilyState::closure(Rank start, Direction dir, Label stop, Label forbidden, bool& conflict) const {
  conflict = false;
  std::vector<Rank> out;
  if (label(start) == stop) return out;
  if (label(start) == forbidden) {
    conflict = true;
    return out;
  }
  std::vector<bool> seen(u_->size(), false);
  out.push_back(start);
  seen[start] = true;
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (Rank nb : u_->covers(out[head], dir)) {
      if (seen[nb]) continue;
      seen[nb] = true;
      const Label l = label(nb);
      if (l == stop) continue;
      if (l == forbidden) {
        conflict = true;
        return {};
      }
      out.push_back(nb);
    }
  }
  return out;
}

MarkResult FamilyState::mark_negative(const KSet& s) {
  const Rank r = u_->rank(s);
  if (label(r) == Label::kNeg) return MarkResult::kAlready;
  bool conflict = false;
  const auto members = closure(r, Direction::kRight, Label::kNeg, Label::kPos, conflict);
  if (conflict) return MarkResult::kConflict;
  for (Rank m : members) label_[m] = static_cast<std::uint8_t>(Label::kNeg);
  neg_count_ += members.size();
  aminus_.push_back(s);
  rstar_valid_ = false;
  return MarkResult::kOk;
}

MarkResult FamilyState::mark_positive(const KSet& s) {
  const Rank r = u_->rank(s);
  if (label(r) == Label::kPos) return MarkResult::kAlready;
  bool conflict = false;
  const auto members = closure(r, Direction::kLeft, Label::kPos, Label::kNeg, conflict);
  if (conflict) return MarkResult::kConflict;
  for (Rank m : members) label_[m] = static_cast<std::uint8_t>(Label::kPos);
  pos_count_ += members.size();
  aplus_.push_back(s);
  lstar_valid_ = false;
  return MarkResult::kOk;
}

void FamilyState::lstar_apply_positive(const KSet& s) {
  const Rank r = u_->rank(s);
  if (label(r) != Label::kUndecided) throw std::invalid_argument("lstar_apply_positive: " + s.to_string() + " already decided");
  refresh_lstar();
  for (Rank t = static_cast<Rank>(u_->size()); t-- > 0;) {
    if (label(t) != Label::kUndecided) continue;
    lstar_[t] -= lstar_[u_->join_rank(t, r)];
  }
  const bool rvalid = rstar_valid_;
  auto saved = std::move(lstar_);
  if (mark_positive(s) != MarkResult::kOk) throw std::logic_error("lstar_apply_positive: conflict on undecided set");
  lstar_ = std::move(saved);
  lstar_valid_ = true;
  rstar_valid_ = rvalid;
}

std::uint64_t FamilyState::lstar_bfs(Rank r) const {
  bool conflict = false;
  return closure(r, Direction::kLeft, Label::kPos, Label::kPos, conflict).size();
}

std::uint64_t FamilyState::rstar_bfs(Rank r) const {
  bool conflict = false;
  return closure(r, Direction::kRight, Label::kNeg, Label::kNeg, conflict).size();
}

namespace {

// Signed sum over nonempty subsets A of `nbrs` of (-1)^{|A|+1} value(fold(A)).
template <typename Fold, typename Value>
std::int64_t incexc_sum(const std::vector<Rank>& nbrs, Fold fold, Value value) {
  const std::size_t m = nbrs.size();
  std::int64_t total = 0;
  // Subsets enumerated by bitmask with the fold of each built from a smaller one.
  std::vector<Rank> acc(std::size_t{1} << m);
  for (std::size_t mask = 1; mask < acc.size(); ++mask) {
    const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(mask));
    const std::size_t rest = mask & (mask - 1);
    acc[mask] = rest == 0 ? nbrs[low] : fold(acc[rest], nbrs[low]);
    const auto v = static_cast<std::int64_t>(value(acc[mask]));
    total += (__builtin_popcountll(mask) % 2 == 1) ? v : -v;
  }
  return total;
}

}  // namespace

std::vector<std::uint64_t> FamilyState::lstar_incexc() const {
  std::vector<std::uint64_t> out(u_->size(), 0);
  std::size_t terms = 0;
  for (Rank r = 0; r < u_->size(); ++r) {
    if (label(r) == Label::kPos) continue;
    const auto nbrs = u_->covers(r, Direction::kLeft);
    terms = std::max(terms, (std::size_t{1} << nbrs.size()) - 1);
    const std::int64_t sum = incexc_sum(
        nbrs, [&](Rank a, Rank b) { return u_->join_rank(a, b); }, [&](Rank a) { return out[a]; });
    out[r] = static_cast<std::uint64_t>(1 + sum);
  }
  last_terms_ = terms;
  return out;
}

std::vector<std::uint64_t> FamilyState::rstar_incexc() const {
  std::vector<std::uint64_t> out(u_->size(), 0);
  std::size_t terms = 0;
  for (Rank r = static_cast<Rank>(u_->size()); r-- > 0;) {
    if (label(r) == Label::kNeg) continue;
    const auto nbrs = u_->covers(r, Direction::kRight);
    terms = std::max(terms, (std::size_t{1} << nbrs.size()) - 1);
    const std::int64_t sum = incexc_sum(
        nbrs, [&](Rank a, Rank b) { return u_->meet_rank(a, b); }, [&](Rank a) { return out[a]; });
    out[r] = static_cast<std::uint64_t>(1 + sum);
  }
  last_terms_ = terms;
  return out;
}

void FamilyState::refresh_lstar() const {
  if (lstar_valid_) return;
  if (strategy_ == CountStrategy::kBfs) {
    lstar_.assign(u_->size(), 0);
    for (Rank r = 0; r < u_->size(); ++r) {
      if (label(r) == Label::kUndecided) lstar_[r] = lstar_bfs(r);
    }
  } else {
    lstar_ = lstar_incexc();
  }
  lstar_valid_ = true;
}

void FamilyState::refresh_rstar() const {
  if (rstar_valid_) return;
  if (strategy_ == CountStrategy::kBfs) {
    rstar_.assign(u_->size(), 0);
    for (Rank r = 0; r < u_->size(); ++r) {
      if (label(r) == Label::kUndecided) rstar_[r] = rstar_bfs(r);
    }
  } else {
    rstar_ = rstar_incexc();
  }
  rstar_valid_ = true;
}

std::uint64_t FamilyState::lstar(Rank r) const {
  if (label(r) == Label::kPos) return 0;
  if (label(r) != Label::kUndecided) return lstar_bfs(r);
  refresh_lstar();
  return lstar_[r];
}

std::uint64_t FamilyState::rstar(Rank r) const {
  if (label(r) == Label::kNeg) return 0;
  if (label(r) != Label::kUndecided) return rstar_bfs(r);
  refresh_rstar();
  return rstar_[r];
}

std::vector<Rank> FamilyState::undecided() const {
  std::vector<Rank> out;
  out.reserve(undecided_count());
  for (Rank r = 0; r < u_->size(); ++r) {
    if (label(r) == Label::kUndecided) out.push_back(r);
  }
  return out;
}

std::string FamilyState::dump() const {
  std::ostringstream os;
  for (Rank r = 0; r < u_->size(); ++r) os << r << ' ' << label_name(label(r)) << ' ' << u_->set(r).to_string() << '\n';
  return os.str();
}

void FamilyState::audit() const {
  const int n = u_->n();
  std::size_t pos = 0;
  std::size_t neg = 0;
  for (Rank r = 0; r < u_->size(); ++r) {
    const KSet& s = u_->set(r);
    const bool in_pos = std::any_of(aplus_.begin(), aplus_.end(), [&](const KSet& a) { return shift_leq(s, a); });
    const bool in_neg = std::any_of(aminus_.begin(), aminus_.end(), [&](const KSet& a) { return shift_leq(a, s); });
    if (in_pos && in_neg) throw std::logic_error("audit: " + s.to_string() + " is both POS and NEG");
    const Label want = in_pos ? Label::kPos : in_neg ? Label::kNeg : Label::kUndecided;
    if (label(r) != want) throw std::logic_error("audit: wrong label on " + s.to_string());
    pos += in_pos;
    neg += in_neg;
    for (const KSet& t : cover_neighbors(s, n, Direction::kLeft)) {
      if (label(r) == Label::kPos && label(t) != Label::kPos) throw std::logic_error("audit: POS not left-closed");
    }
    for (const KSet& t : cover_neighbors(s, n, Direction::kRight)) {
      if (label(r) == Label::kNeg && label(t) != Label::kNeg) throw std::logic_error("audit: NEG not right-closed");
    }
  }
  if (pos != pos_count_ || neg != neg_count_) throw std::logic_error("audit: label counts out of sync");
  if (lstar_valid_) {
    for (Rank r = 0; r < u_->size(); ++r) {
      if (label(r) == Label::kUndecided && lstar_[r] != lstar_bfs(r)) throw std::logic_error("audit: stale L* cache");
    }
  }
  if (rstar_valid_) {
    for (Rank r = 0; r < u_->size(); ++r) {
      if (label(r) == Label::kUndecided && rstar_[r] != rstar_bfs(r)) throw std::logic_error("audit: stale R* cache");
    }
  }
}

}  // namespace mms
