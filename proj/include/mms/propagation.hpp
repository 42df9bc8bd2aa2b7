#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mms/exact_lp.hpp"
#include "mms/shift_counts.hpp"

namespace mms {

enum class GSource { kComputed, kBaranyai };

struct GEntry {
  std::uint64_t value = 0;
  GSource source = GSource::kComputed;
};

// Known values of g(n,k).
class GTable {
 public:
  // Throws if the new entry breaks monotonicity in n against stored values.
  void set(int n, int k, std::uint64_t value, GSource source);
  std::optional<GEntry> get(int n, int k) const;
  // Largest stored g(m',k) with m' <= m: a lower bound for g(m,k) since g is
  // nondecreasing in n.
  std::optional<std::uint64_t> lower_bound(int m, int k) const;
  // g(q,k) = C(q-1,k-1) for every multiple q of k up to max_n.
  void seed_baranyai(int k, int max_n);
  const std::map<std::pair<int, int>, GEntry>& entries() const { return entries_; }

 private:
  std::map<std::pair<int, int>, GEntry> entries_;  // key (k, n)
};

struct PropagationConfig {
  std::uint64_t sample_limit = 200;
  double time_limit_seconds = 60.0;
  std::uint64_t rng_seed = 0;
  int enable_after_branch_depth = 4;
};

enum class Rule { kObs22, kLemma23, kLemma35, kLpNegProbe, kLpPosProbe };
const char* rule_name(Rule r);

struct PropagationEvent {
  enum class Kind { kNeg, kPos, kCount, kInfeasible };
  Kind kind = Kind::kNeg;
  int round = 0;
  KSet set;
  Rule rule = Rule::kObs22;
  std::string cert;  // certificate digest for LP rules and kInfeasible
  std::uint64_t count = 0;  // |L(A+)| for kCount
};

using EventSink = std::function<void(const PropagationEvent&)>;

enum class PropagationOutcome {
  kOpen,        // nothing more deduced; |L(A+)| < t and the program is not known infeasible
  kCount,       // |L(A+)| >= t
  kInfeasible,  // the program (or the labelling) is contradictory
};

// Exact LP feasibility probes against the families of a FamilyState. Keeps a
// pool of points feasible for the current program: a pool point with
// sigma_S < 0 (resp. >= 0) shows P(A+, A- + S) (resp. P(A+ + S, A-)) feasible
// after scaling, so only infeasible verdicts need a simplex run.
class ProbeOracle {
 public:
  explicit ProbeOracle(std::size_t pool_cap = 64) : cap_(pool_cap) {}

  // Drops pool points that no longer satisfy the families of `state`.
  void sync(const FamilyState& state);
  // Infeasibility certificate of P(A+, A-), or nullopt when feasible.
  std::optional<LPResult> base_infeasible(const FamilyState& state);
  std::optional<LPResult> negative_probe(const FamilyState& state, const KSet& s);
  std::optional<LPResult> positive_probe(const FamilyState& state, const KSet& s);

  std::uint64_t lp_solves() const { return solves_; }
  std::uint64_t pool_hits() const { return hits_; }

 private:
  std::optional<LPResult> run(const FamilyState& state, const std::vector<KSet>& plus, const std::vector<KSet>& minus);
  void remember(RationalVector x);

  std::size_t cap_;
  std::vector<RationalVector> pool_;
  std::uint64_t solves_ = 0;
  std::uint64_t hits_ = 0;
};

// Solves and checks the certificate; an unverifiable result throws.
LPResult certified_solve(const LPInstance& lp);

// The rule showing sigma_S < 0 for every (n,k,t)-bad vector from L_k(S)
// alone: kObs22 when L_k(S) >= t, kLemma23 when 1 in S and L_k(S) plus the
// table's lower bound for g(n-k,k) reaches t (only if `lemma23_applies`).
std::optional<Rule> forced_negative(const KSet& s, int n, int k, std::uint64_t t, const GTable& gtable, bool lemma23_applies = true);

// Whether the g(n-k,k) term may be used: t <= C(n-1,k-1), or the set
// {1,n-k+2,...,n} is already labelled negative.
bool lemma23_applies(const FamilyState& state, std::uint64_t t);

// One lex-order sweep over C*: adds every set passing forced_negative or
// L*(S) + |L(A+)| >= t to A-. Returns the added sets.
std::vector<KSet> propagate_negative(std::uint64_t t, FamilyState& state, const GTable& gtable, const EventSink& sink, int round);

// Rounds of propagate_negative followed by one reverse-lex pass adding each
// S with P(A+, A- + S) infeasible to A+, until a pass adds nothing, the count
// reaches t, or the program becomes infeasible.
PropagationOutcome propagate_positive(std::uint64_t t, FamilyState& state, const GTable& gtable, ProbeOracle& oracle,
                                      const EventSink& sink, int first_round = 1);

// Random probing of C* with both LP tests; `stream` seeds the generator.
PropagationOutcome stochastic_propagation(std::uint64_t t, FamilyState& state, const GTable& gtable, ProbeOracle& oracle,
                                          const PropagationConfig& config, std::uint64_t stream, const EventSink& sink,
                                          int first_round = 1);

// std::mt19937_64 (fully specified by the standard) with a bounded draw that
// does not depend on the library's distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  // Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 eng_;
};

// Substream seed for a search node identified by its branch path.
std::uint64_t stream_seed(std::uint64_t seed, const std::string& path);

}  // namespace mms
