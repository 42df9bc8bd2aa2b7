#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mms/kset.hpp"

namespace mms {

using Rank = std::uint32_t;

// L_k(S): number of k-sets T over [n] with T ⪰ S, by the prefix recursion.
std::uint64_t left_count(const KSet& s, int n);
// R_k(S) = L_k(reflect(S)).
std::uint64_t right_count(const KSet& s, int n);

// Immutable tables for one (n, k): all k-sets indexed by colex rank, the lex
// order, L_k/R_k per set and (within the memory budget) the Hasse digraph.
class ShiftUniverse {
 public:
  static constexpr std::size_t kDefaultHasseBudget = std::size_t{1} << 24;

  ShiftUniverse(int n, int k, std::size_t hasse_budget = kDefaultHasseBudget);

  int n() const { return n_; }
  int k() const { return k_; }
  std::size_t size() const { return sets_.size(); }

  const KSet& set(Rank r) const { return sets_[r]; }
  Rank rank(const KSet& s) const;
  // Colex ranks listed in lex order.
  const std::vector<Rank>& lex_order() const { return lex_order_; }

  std::uint64_t left(Rank r) const { return left_[r]; }
  std::uint64_t right(Rank r) const { return right_[r]; }

  bool has_hasse() const { return !left_off_.empty(); }
  // Cover neighbours as ranks; computed on the fly when the digraph is absent.
  std::vector<Rank> covers(Rank r, Direction dir) const;
  std::span<const Rank> left_covers(Rank r) const;
  std::span<const Rank> right_covers(Rank r) const;

  Rank join_rank(Rank a, Rank b) const;
  Rank meet_rank(Rank a, Rank b) const;

 private:
  int n_;
  int k_;
  std::vector<KSet> sets_;
  std::vector<Rank> lex_order_;
  std::vector<std::uint64_t> left_;
  std::vector<std::uint64_t> right_;
  std::vector<std::uint32_t> left_off_, right_off_;
  std::vector<Rank> left_adj_, right_adj_;
};

enum class Label : std::uint8_t { kUndecided, kPos, kNeg };
const char* label_name(Label l);

enum class CountStrategy { kAuto, kBfs, kIncExc };
CountStrategy parse_strategy(const std::string& name);
const char* strategy_name(CountStrategy s);

enum class MarkResult { kOk, kAlready, kConflict };

// Tri-partition of C([n],k) into L_k(A+) (POS), R_k(A-) (NEG) and the
// undecided sets C*, with L*/R* caches.
class FamilyState {
 public:
  FamilyState(std::shared_ptr<const ShiftUniverse> universe, CountStrategy strategy = CountStrategy::kAuto);

  int n() const { return u_->n(); }
  int k() const { return u_->k(); }
  const ShiftUniverse& universe() const { return *u_; }
  const std::shared_ptr<const ShiftUniverse>& universe_ptr() const { return u_; }
  // kAuto resolved: BFS for k <= 4 with a digraph, inclusion-exclusion otherwise.
  CountStrategy strategy() const { return strategy_; }

  Label label(Rank r) const { return static_cast<Label>(label_[r]); }
  Label label(const KSet& s) const { return label(u_->rank(s)); }
  std::size_t pos_count() const { return pos_count_; }
  std::size_t neg_count() const { return neg_count_; }
  std::size_t undecided_count() const { return u_->size() - pos_count_ - neg_count_; }

  const std::vector<KSet>& aplus() const { return aplus_; }
  const std::vector<KSet>& aminus() const { return aminus_; }

  // Labels R_k(S) NEG and records S in A-. kAlready when S was already NEG
  // (nothing changes), kConflict when R_k(S) meets the POS class (nothing
  // changes either). Invalidates the R* cache.
  MarkResult mark_negative(const KSet& s);
  // Mirror image for L_k(S) and A+; invalidates the L* cache.
  MarkResult mark_positive(const KSet& s);
  // Marks S positive and updates the L* cache by T <- T - L*(T ∨ S).
  // S must be undecided and the cache valid.
  void lstar_apply_positive(const KSet& s);

  // |L_k(S) \ L_k(A+)| and |R_k(S) \ R_k(A-)| by breadth-first search.
  std::uint64_t lstar_bfs(Rank r) const;
  std::uint64_t rstar_bfs(Rank r) const;
  std::uint64_t lstar_bfs(const KSet& s) const { return lstar_bfs(u_->rank(s)); }
  std::uint64_t rstar_bfs(const KSet& s) const { return rstar_bfs(u_->rank(s)); }

  // Whole arrays by inclusion-exclusion over covers; POS sets get L* = 0 and
  // NEG sets R* = 0.
  std::vector<std::uint64_t> lstar_incexc() const;
  std::vector<std::uint64_t> rstar_incexc() const;
  // Largest number of inclusion-exclusion terms used for a single set by the
  // last lstar_incexc/rstar_incexc call.
  std::size_t last_incexc_terms() const { return last_terms_; }

  // Cached values, recomputed on demand with the active strategy.
  std::uint64_t lstar(Rank r) const;
  std::uint64_t rstar(Rank r) const;
  std::uint64_t lstar(const KSet& s) const { return lstar(u_->rank(s)); }
  std::uint64_t rstar(const KSet& s) const { return rstar(u_->rank(s)); }
  bool lstar_valid() const { return lstar_valid_; }
  bool rstar_valid() const { return rstar_valid_; }
  void invalidate_caches() { lstar_valid_ = rstar_valid_ = false; }

  std::vector<Rank> undecided() const;

  // Lines "<colex-rank> <POS|NEG|UNDECIDED> <kset>".
  std::string dump() const;
  // Recomputes labels from A+/A- and checks closure and counts; throws
  // std::logic_error on the first violation.
  void audit() const;

 private:
  void refresh_lstar() const;
  void refresh_rstar() const;
  std::vector<Rank> closure(Rank start, Direction dir, Label stop, Label forbidden, bool& conflict) const;

  std::shared_ptr<const ShiftUniverse> u_;
  CountStrategy strategy_;
  std::vector<std::uint8_t> label_;
  std::size_t pos_count_ = 0;
  std::size_t neg_count_ = 0;
  std::vector<KSet> aplus_;
  std::vector<KSet> aminus_;
  mutable std::vector<std::uint64_t> lstar_;
  mutable std::vector<std::uint64_t> rstar_;
  mutable bool lstar_valid_ = false;
  mutable bool rstar_valid_ = false;
  mutable std::size_t last_terms_ = 0;
};

}  // namespace mms
