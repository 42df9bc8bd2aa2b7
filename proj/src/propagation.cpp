#include "mms/propagation.hpp"

#include <stdexcept>

#include "mms/binomial.hpp"

namespace mms {

void GTable::set(int n, int k, std::uint64_t value, GSource source) {
  for (const auto& [key, e] : entries_) {
    if (key.first != k || key.second == n) continue;
    if ((key.second < n && e.value > value) || (key.second > n && e.value < value)) {
      throw std::invalid_argument("g(" + std::to_string(n) + "," + std::to_string(k) + ") = " + std::to_string(value) +
                                  " breaks monotonicity against g(" + std::to_string(key.second) + "," +
                                  std::to_string(k) + ") = " + std::to_string(e.value));
    }
  }
  entries_[{k, n}] = GEntry{value, source};
}

std::optional<GEntry> GTable::get(int n, int k) const {
  auto it = entries_.find({k, n});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint64_t> GTable::lower_bound(int m, int k) const {
  std::optional<std::uint64_t> best;
  for (auto it = entries_.lower_bound({k, 0}); it != entries_.end() && it->first.first == k; ++it) {
    if (it->first.second > m) break;
    if (!best || it->second.value > *best) best = it->second.value;
  }
  return best;
}

void GTable::seed_baranyai(int k, int max_n) {
  for (int q = k; q <= max_n; q += k) {
    if (!get(q, k)) set(q, k, binomial(q - 1, k - 1), GSource::kBaranyai);
  }
}

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::kObs22: return "OBS-2.2";
    case Rule::kLemma23: return "LEMMA-2.3";
    case Rule::kLemma35: return "LEMMA-3.5";
    case Rule::kLpNegProbe: return "LP-NEG-PROBE";
    case Rule::kLpPosProbe: return "LP-POS-PROBE";
  }
  return "?";
}

LPResult certified_solve(const LPInstance& lp) {
  LPResult res = solve(lp);
  if (!verify_certificate(lp, res)) throw std::logic_error("exact LP produced an unverifiable result");
  return res;
}

namespace {

bool satisfies(const FamilyState& state, const RationalVector& x) {
  for (const KSet& s : state.aplus()) {
    if (ksum(s, x) < 0) return false;
  }
  for (const KSet& s : state.aminus()) {
    if (ksum(s, x) >= 0) return false;
  }
  return true;
}

}  // namespace

void ProbeOracle::sync(const FamilyState& state) {
  std::vector<RationalVector> kept;
  for (auto& x : pool_) {
    if (static_cast<int>(x.size()) == state.n() && satisfies(state, x)) kept.push_back(std::move(x));
  }
  pool_ = std::move(kept);
}

void ProbeOracle::remember(RationalVector x) {
  if (pool_.size() >= cap_) pool_.erase(pool_.begin());
  pool_.push_back(std::move(x));
}

std::optional<LPResult> ProbeOracle::run(const FamilyState& state, const std::vector<KSet>& plus,
                                         const std::vector<KSet>& minus) {
  ++solves_;
  LPResult res = certified_solve(build_lp(state.n(), state.k(), plus, minus));
  if (!res.feasible()) return res;
  remember(std::move(res.x));
  return std::nullopt;
}

std::optional<LPResult> ProbeOracle::base_infeasible(const FamilyState& state) {
  sync(state);
  if (!pool_.empty()) {
    ++hits_;
    return std::nullopt;
  }
  return run(state, state.aplus(), state.aminus());
}

std::optional<LPResult> ProbeOracle::negative_probe(const FamilyState& state, const KSet& s) {
  for (const auto& x : pool_) {
    if (ksum(s, x) < 0) {
      ++hits_;
      return std::nullopt;
    }
  }
  auto minus = state.aminus();
  minus.push_back(s);
  return run(state, state.aplus(), minus);
}

std::optional<LPResult> ProbeOracle::positive_probe(const FamilyState& state, const KSet& s) {
  for (const auto& x : pool_) {
    if (ksum(s, x) >= 0) {
      ++hits_;
      return std::nullopt;
    }
  }
  auto plus = state.aplus();
  plus.push_back(s);
  return run(state, plus, state.aminus());
}

std::optional<Rule> forced_negative(const KSet& s, int n, int k, std::uint64_t t, const GTable& gtable,
                                    bool lemma23) {
  const std::uint64_t l = left_count(s, n);
  if (l >= t) return Rule::kObs22;
  if (lemma23 && s.front() == 1) {
    if (auto g = gtable.lower_bound(n - k, k); g && l + *g >= t) return Rule::kLemma23;
  }
  return std::nullopt;
}

bool lemma23_applies(const FamilyState& state, std::uint64_t t) {
  const int n = state.n();
  const int k = state.k();
  if (t <= binomial(n - 1, k - 1)) return true;
  std::vector<int> elems{1};
  for (int i = n - k + 2; i <= n; ++i) elems.push_back(i);
  return state.label(KSet(std::span<const int>(elems))) == Label::kNeg;
}

std::vector<KSet> propagate_negative(std::uint64_t t, FamilyState& state, const GTable& gtable, const EventSink& sink,
                                     int round) {
  const ShiftUniverse& u = state.universe();
  const bool lemma23 = lemma23_applies(state, t);
  std::vector<KSet> added;
  for (Rank r : u.lex_order()) {
    if (state.label(r) != Label::kUndecided) continue;
    const KSet& s = u.set(r);
    std::optional<Rule> rule = forced_negative(s, u.n(), u.k(), t, gtable, lemma23);
    if (!rule && state.lstar(r) + state.pos_count() >= t) rule = Rule::kLemma35;
    if (!rule) continue;
    if (state.mark_negative(s) != MarkResult::kOk) throw std::logic_error("negative propagation hit a positive set");
    added.push_back(s);
    if (sink) sink({PropagationEvent::Kind::kNeg, round, s, *rule, {}, 0});
  }
  return added;
}

namespace {

PropagationOutcome report_count(const FamilyState& state, const EventSink& sink, int round) {
  if (sink) sink({PropagationEvent::Kind::kCount, round, {}, Rule::kObs22, {}, state.pos_count()});
  return PropagationOutcome::kCount;
}

PropagationOutcome report_infeasible(const LPResult& res, const EventSink& sink, int round) {
  if (sink) sink({PropagationEvent::Kind::kInfeasible, round, {}, Rule::kObs22, certificate_digest(res), 0});
  return PropagationOutcome::kInfeasible;
}

}  // namespace

PropagationOutcome propagate_positive(std::uint64_t t, FamilyState& state, const GTable& gtable, ProbeOracle& oracle,
                                      const EventSink& sink, int first_round) {
  if (state.pos_count() >= t) return PropagationOutcome::kCount;
  if (state.undecided_count() == 0) return PropagationOutcome::kOpen;
  const ShiftUniverse& u = state.universe();
  for (int round = first_round;; ++round) {
    propagate_negative(t, state, gtable, sink, round);
    if (state.pos_count() >= t) return report_count(state, sink, round);
    if (auto cert = oracle.base_infeasible(state)) return report_infeasible(*cert, sink, round);
    bool added = false;
    const auto& lex = u.lex_order();
    for (auto it = lex.rbegin(); it != lex.rend(); ++it) {
      if (state.label(*it) != Label::kUndecided) continue;
      const KSet& s = u.set(*it);
      auto cert = oracle.negative_probe(state, s);
      if (!cert) continue;
      if (state.mark_positive(s) != MarkResult::kOk) throw std::logic_error("positive propagation hit a negative set");
      added = true;
      if (sink) sink({PropagationEvent::Kind::kPos, round, s, Rule::kLpNegProbe, certificate_digest(*cert), 0});
      if (state.pos_count() >= t) break;
    }
    if (state.pos_count() >= t) return report_count(state, sink, round);
    if (!added) return PropagationOutcome::kOpen;
  }
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  while (true) {
    const std::uint64_t v = eng_();
    if (v < limit) return v % bound;
  }
}

std::uint64_t stream_seed(std::uint64_t seed, const std::string& path) {
  // FNV-1a over the path, folded into the seed with the splitmix64 finalizer.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : path) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PropagationOutcome stochastic_propagation(std::uint64_t t, FamilyState& state, const GTable& gtable, ProbeOracle& oracle,
                                          const PropagationConfig& config, std::uint64_t stream, const EventSink& sink,
                                          int first_round) {
  if (config.sample_limit < 1) throw std::invalid_argument("sample_limit must be at least 1");
  using Clock = std::chrono::steady_clock;
  const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(config.time_limit_seconds));
  Rng rng(stream);
  const ShiftUniverse& u = state.universe();
  for (int round = first_round;; ++round) {
    propagate_negative(t, state, gtable, sink, round);
    if (state.pos_count() >= t) return report_count(state, sink, round);
    if (state.undecided_count() == 0) return PropagationOutcome::kOpen;
    if (auto cert = oracle.base_infeasible(state)) return report_infeasible(*cert, sink, round);
    std::uint64_t fails = 0;
    bool updated = false;
    while (!updated) {
      if (fails >= config.sample_limit || Clock::now() >= deadline) return PropagationOutcome::kOpen;
      const auto und = state.undecided();
      if (und.empty()) return PropagationOutcome::kOpen;
      const KSet& s = u.set(und[rng.below(und.size())]);
      if (auto cert = oracle.negative_probe(state, s)) {
        if (state.mark_positive(s) != MarkResult::kOk) throw std::logic_error("stochastic propagation hit a negative set");
        if (sink) sink({PropagationEvent::Kind::kPos, round, s, Rule::kLpNegProbe, certificate_digest(*cert), 0});
        if (state.pos_count() >= t) return report_count(state, sink, round);
        updated = true;
      } else if (auto cert2 = oracle.positive_probe(state, s)) {
        if (state.mark_negative(s) != MarkResult::kOk) throw std::logic_error("stochastic propagation hit a positive set");
        if (sink) sink({PropagationEvent::Kind::kNeg, round, s, Rule::kLpPosProbe, certificate_digest(*cert2), 0});
        updated = true;
      } else {
        ++fails;
      }
    }
  }
}

}  // namespace mms
