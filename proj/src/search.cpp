#include "mms/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <variant>

namespace mms {

PropagationMode parse_mode(const std::string& name) {
  if (name == "negative") return PropagationMode::kNegative;
  if (name == "positive") return PropagationMode::kPositive;
  if (name == "stochastic") return PropagationMode::kStochastic;
  throw std::invalid_argument("unknown propagation mode: " + name);
}

const char* mode_name(PropagationMode m) {
  switch (m) {
    case PropagationMode::kPositive: return "positive";
    case PropagationMode::kStochastic: return "stochastic";
    default: return "negative";
  }
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "HOLDS";
    case Verdict::kWitness: return "WITNESS";
    default: return "INDETERMINATE";
  }
}

void ProofLog::add(std::string line, nlohmann::json event) {
  lines_.push_back(std::move(line));
  events_.push_back(std::move(event));
}

void ProofLog::header(int n, int k, std::uint64_t t, const std::string& fields) {
  add("HEADER n=" + std::to_string(n) + " k=" + std::to_string(k) + " t=" + std::to_string(t) + " " + fields,
      {{"type", "HEADER"}, {"n", n}, {"k", k}, {"t", std::to_string(t)}, {"fields", fields}});
}

void ProofLog::node_open(const std::string& path, int depth) {
  const std::string p = path.empty() ? "-" : path;
  add("NODE OPEN PATH=" + p + " DEPTH=" + std::to_string(depth), {{"type", "NODE_OPEN"}, {"path", p}, {"depth", depth}});
}

void ProofLog::node_close(const std::string& path, const std::string& reason) {
  const std::string p = path.empty() ? "-" : path;
  add("NODE CLOSE PATH=" + p + " BY=" + reason, {{"type", "NODE_CLOSE"}, {"path", p}, {"by", reason}});
}

void ProofLog::propagation(const PropagationEvent& e) {
  using K = PropagationEvent::Kind;
  const std::string r = std::to_string(e.round);
  switch (e.kind) {
    case K::kNeg:
    case K::kPos: {
      const char* dir = e.kind == K::kNeg ? "NEG" : "POS";
      std::string line = "ROUND " + r + " " + dir + " " + e.set.to_string() + " RULE=" + rule_name(e.rule);
      nlohmann::json ev{{"type", dir}, {"round", e.round}, {"set", e.set.to_string()}, {"rule", rule_name(e.rule)}};
      if (!e.cert.empty()) {
        line += " CERT=" + e.cert;
        ev["cert"] = e.cert;
      }
      add(std::move(line), std::move(ev));
      break;
    }
    case K::kCount:
      add("ROUND " + r + " COUNT " + std::to_string(e.count),
          {{"type", "COUNT"}, {"round", e.round}, {"count", std::to_string(e.count)}});
      break;
    case K::kInfeasible:
      add("ROUND " + r + " LP VERDICT=INFEASIBLE CERT=" + e.cert,
          {{"type", "LP"}, {"round", e.round}, {"verdict", "INFEASIBLE"}, {"cert", e.cert}});
      break;
  }
}

void ProofLog::lp(const LPResult& res, std::optional<std::uint64_t> sk) {
  if (!res.feasible()) {
    const std::string d = certificate_digest(res);
    add("LP VERDICT=INFEASIBLE CERT=" + d, {{"type", "LP"}, {"verdict", "INFEASIBLE"}, {"cert", d}});
    return;
  }
  const std::string obj = rational_string(res.objective);
  std::string line = "LP VERDICT=OPT OBJ=" + obj;
  nlohmann::json ev{{"type", "LP"}, {"verdict", "OPT"}, {"obj", obj}};
  if (sk) {
    line += " SK=" + std::to_string(*sk);
    ev["sk"] = std::to_string(*sk);
  }
  add(std::move(line), std::move(ev));
}

void ProofLog::branch(const KSet& s, bool negative) {
  const char* dir = negative ? "NEG" : "POS";
  add("BRANCH " + s.to_string() + " DIR=" + dir, {{"type", "BRANCH"}, {"set", s.to_string()}, {"dir", dir}});
}

void ProofLog::witness(const RationalVector& x, std::uint64_t s) {
  std::string v;
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) v += ',';
    v += rational_string(x[i]);
    arr.push_back(rational_string(x[i]));
  }
  add("WITNESS S=" + std::to_string(s) + " X=(" + v + ")", {{"type", "WITNESS"}, {"s", std::to_string(s)}, {"x", arr}});
}

void ProofLog::result(const std::string& verdict, std::uint64_t nodes) {
  add("RESULT " + verdict + " NODES=" + std::to_string(nodes),
      {{"type", "RESULT"}, {"verdict", verdict}, {"nodes", std::to_string(nodes)}});
}

void ProofLog::append(const ProofLog& other) {
  lines_.insert(lines_.end(), other.lines_.begin(), other.lines_.end());
  for (const auto& e : other.events_) events_.push_back(e);
}

std::string ProofLog::text() const {
  std::string out;
  for (const auto& l : lines_) {
    out += l;
    out += '\n';
  }
  return out;
}

nlohmann::json ProofLog::json() const {
  return {{"schema", "mms-prooflog/1"}, {"events", events_}, {"footer", footer_}};
}

FrontierNode freeze(const OpenNode& node) {
  FrontierNode f;
  f.path = node.path;
  for (const auto& s : node.bplus) f.bplus.push_back(colex_rank(s));
  for (const auto& s : node.bminus) f.bminus.push_back(colex_rank(s));
  for (const auto& s : node.state.aplus()) f.aplus.push_back(colex_rank(s));
  for (const auto& s : node.state.aminus()) f.aminus.push_back(colex_rank(s));
  return f;
}

OpenNode thaw(const FrontierNode& f, std::shared_ptr<const ShiftUniverse> universe, CountStrategy strategy) {
  const int n = universe->n();
  const int k = universe->k();
  OpenNode node{FamilyState(universe, strategy), {}, {}, f.path};
  for (auto r : f.bplus) node.bplus.push_back(colex_unrank(r, n, k));
  for (auto r : f.bminus) node.bminus.push_back(colex_unrank(r, n, k));
  for (auto r : f.aplus) {
    if (node.state.mark_positive(colex_unrank(r, n, k)) != MarkResult::kOk) throw std::invalid_argument("checkpoint: inconsistent A+");
  }
  for (auto r : f.aminus) {
    if (node.state.mark_negative(colex_unrank(r, n, k)) != MarkResult::kOk) throw std::invalid_argument("checkpoint: inconsistent A-");
  }
  return node;
}

nlohmann::json to_json(const SearchCheckpoint& c) {
  nlohmann::json frontier = nlohmann::json::array();
  auto ranks = [](const std::vector<std::uint64_t>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (auto r : v) a.push_back(std::to_string(r));
    return a;
  };
  for (const auto& f : c.frontier) {
    frontier.push_back({{"path", f.path},
                        {"bplus", ranks(f.bplus)},
                        {"bminus", ranks(f.bminus)},
                        {"aplus", ranks(f.aplus)},
                        {"aminus", ranks(f.aminus)}});
  }
  return {{"nodes", std::to_string(c.nodes)}, {"frontier", frontier}};
}

SearchCheckpoint checkpoint_from_json(const nlohmann::json& j) {
  SearchCheckpoint c;
  c.nodes = std::stoull(j.at("nodes").get<std::string>());
  auto ranks = [](const nlohmann::json& a) {
    std::vector<std::uint64_t> v;
    for (const auto& e : a) v.push_back(std::stoull(e.get<std::string>()));
    return v;
  };
  for (const auto& f : j.at("frontier")) {
    c.frontier.push_back({f.at("path").get<std::string>(), ranks(f.at("bplus")), ranks(f.at("bminus")),
                          ranks(f.at("aplus")), ranks(f.at("aminus"))});
  }
  return c;
}

KSet select_branch_set(const FamilyState& state) {
  std::optional<Rank> best;
  std::uint64_t best_score = 0;
  for (Rank r = 0; r < state.universe().size(); ++r) {
    if (state.label(r) != Label::kUndecided) continue;
    const std::uint64_t score = std::min(state.lstar(r), state.rstar(r));
    if (!best || score > best_score) {
      best = r;
      best_score = score;
    }
  }
  if (!best) throw std::invalid_argument("select_branch_set: no undecided set");
  return state.universe().set(*best);
}

namespace {

using Clock = std::chrono::steady_clock;

struct Shared {
  std::uint64_t t;
  const GTable& gtable;
  const SearchConfig& config;
  Clock::time_point start;
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<std::uint64_t> lp_solves{0};
  std::atomic<std::size_t> winner{std::numeric_limits<std::size_t>::max()};

  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
  bool out_of_budget() const {
    if (config.node_budget && nodes.load() >= config.node_budget) return true;
    return config.time_budget_seconds > 0 && elapsed() >= config.time_budget_seconds;
  }
};

struct Step {
  enum class Kind { kClosed, kWitness, kBranch } kind = Kind::kClosed;
  Witness witness;
  std::optional<OpenNode> neg;
  std::optional<OpenNode> pos;
};

Step process(OpenNode& node, Shared& sh, ProbeOracle& oracle, ProofLog* log) {
  const int depth = static_cast<int>(node.path.size());
  if (log && depth > 0) {
    const bool neg = node.path.back() == '0';
    log->branch(neg ? node.bminus.back() : node.bplus.back(), neg);
  }
  if (log) log->node_open(node.path, depth);
  FamilyState& st = node.state;
  auto close = [&](const char* why) {
    if (log) log->node_close(node.path, why);
    return Step{};
  };
  if (st.pos_count() >= sh.t) return close("COUNT");

  EventSink sink;
  if (log) sink = [log](const PropagationEvent& e) { log->propagation(e); };
  const std::uint64_t before = oracle.lp_solves();
  PropagationOutcome outcome = PropagationOutcome::kOpen;
  switch (sh.config.mode) {
    case PropagationMode::kNegative:
      propagate_negative(sh.t, st, sh.gtable, sink, 1);
      break;
    case PropagationMode::kPositive:
      outcome = propagate_positive(sh.t, st, sh.gtable, oracle, sink);
      break;
    case PropagationMode::kStochastic: {
      const int branched = static_cast<int>(node.bplus.size() + node.bminus.size());
      if (branched >= sh.config.propagation.enable_after_branch_depth) {
        outcome = stochastic_propagation(sh.t, st, sh.gtable, oracle, sh.config.propagation,
                                         stream_seed(sh.config.propagation.rng_seed, node.path), sink);
      } else {
        propagate_negative(sh.t, st, sh.gtable, sink, 1);
      }
      break;
    }
  }
  sh.lp_solves += oracle.lp_solves() - before;
  if (outcome == PropagationOutcome::kCount || st.pos_count() >= sh.t) return close("COUNT");
  if (outcome == PropagationOutcome::kInfeasible) return close("INFEASIBLE");

  LPResult res = certified_solve(build_lp(st.n(), st.k(), st.aplus(), st.aminus()));
  ++sh.lp_solves;
  if (!res.feasible()) {
    if (log) log->lp(res, std::nullopt);
    return close("INFEASIBLE");
  }
  const std::uint64_t s = count_nonneg_ksums(res.x, st.k());
  if (log) log->lp(res, s);
  if (s < sh.t) {
    if (log) {
      log->witness(res.x, s);
      log->node_close(node.path, "WITNESS");
    }
    Step step;
    step.kind = Step::Kind::kWitness;
    step.witness = Witness{res.x, s};
    return step;
  }
  if (st.undecided_count() == 0) {
    throw std::logic_error("fully decided node with a feasible program has s_k(x) = " + std::to_string(s) +
                           " but only " + std::to_string(st.pos_count()) + " positive sets");
  }
  const KSet pick = select_branch_set(st);
  Step step;
  step.kind = Step::Kind::kBranch;
  OpenNode pos{st, node.bplus, node.bminus, node.path + "1"};
  pos.state.lstar_apply_positive(pick);
  pos.bplus.push_back(pick);
  OpenNode neg{std::move(st), std::move(node.bplus), std::move(node.bminus), node.path + "0"};
  if (neg.state.mark_negative(pick) != MarkResult::kOk) throw std::logic_error("branching on a decided set");
  neg.bminus.push_back(pick);
  step.neg = std::move(neg);
  step.pos = std::move(pos);
  return step;
}

struct RunOut {
  Verdict verdict = Verdict::kHolds;
  std::optional<Witness> witness;
  std::vector<OpenNode> remaining;  // stack order, bottom first
  std::uint64_t nodes = 0;
  bool cancelled = false;
};

// Depth-first search over an explicit stack (negative child explored first).
RunOut run_stack(std::vector<OpenNode> stack, Shared& sh, ProofLog* log, std::size_t task_index, bool checkpoints,
                 std::uint64_t node_offset) {
  RunOut out;
  ProbeOracle oracle;
  std::uint64_t last_ckpt_nodes = sh.nodes.load();
  auto last_ckpt_time = Clock::now();
  while (!stack.empty()) {
    if (sh.winner.load() < task_index) {
      out.cancelled = true;
      return out;
    }
    if (sh.out_of_budget()) {
      out.verdict = Verdict::kIndeterminate;
      out.remaining = std::move(stack);
      return out;
    }
    OpenNode node = std::move(stack.back());
    stack.pop_back();
    ++sh.nodes;
    ++out.nodes;
    Step step = process(node, sh, oracle, log);
    if (step.kind == Step::Kind::kWitness) {
      out.verdict = Verdict::kWitness;
      out.witness = std::move(step.witness);
      std::size_t cur = sh.winner.load();
      while (task_index < cur && !sh.winner.compare_exchange_weak(cur, task_index)) {
      }
      return out;
    }
    if (step.kind == Step::Kind::kBranch) {
      stack.push_back(std::move(*step.pos));
      stack.push_back(std::move(*step.neg));
    }
    if (checkpoints && sh.config.on_checkpoint) {
      const bool by_nodes = sh.config.checkpoint_every_nodes && sh.nodes.load() - last_ckpt_nodes >= sh.config.checkpoint_every_nodes;
      const bool by_time = sh.config.checkpoint_every_seconds > 0 &&
                           std::chrono::duration<double>(Clock::now() - last_ckpt_time).count() >= sh.config.checkpoint_every_seconds;
      if ((by_nodes || by_time) && !stack.empty()) {
        SearchCheckpoint c;
        c.nodes = node_offset + sh.nodes.load();
        for (const auto& n : stack) c.frontier.push_back(freeze(n));
        sh.config.on_checkpoint(c);
        last_ckpt_nodes = sh.nodes.load();
        last_ckpt_time = Clock::now();
      }
    }
  }
  return out;
}

struct Chunk {
  ProofLog log;
  std::optional<Witness> witness;
};

struct Task {
  OpenNode node;
  ProofLog log;
  RunOut out;
  bool started = false;
};

using Item = std::variant<Chunk, std::size_t>;  // one processed node or a task index

// Expands the top of the tree depth-first so that concatenating items in
// order reproduces the sequential log. Returns true once a witness is found.
bool expand(OpenNode node, int depth_left, Shared& sh, ProbeOracle& oracle, bool logging, std::vector<Item>& items,
            std::vector<Task>& tasks) {
  if (depth_left == 0) {
    tasks.push_back(Task{std::move(node), {}, {}, false});
    items.emplace_back(tasks.size() - 1);
    return false;
  }
  Chunk chunk;
  ++sh.nodes;
  Step step = process(node, sh, oracle, logging ? &chunk.log : nullptr);
  if (step.kind == Step::Kind::kWitness) chunk.witness = std::move(step.witness);
  items.emplace_back(std::move(chunk));
  if (step.kind == Step::Kind::kWitness) return true;
  if (step.kind == Step::Kind::kClosed) return false;
  if (expand(std::move(*step.neg), depth_left - 1, sh, oracle, logging, items, tasks)) return true;
  return expand(std::move(*step.pos), depth_left - 1, sh, oracle, logging, items, tasks);
}

SearchResult finish(RunOut out, Shared& sh, ProofLog* log, std::uint64_t node_offset) {
  SearchResult res;
  res.verdict = out.verdict;
  res.witness = std::move(out.witness);
  res.nodes = node_offset + out.nodes;
  res.seconds = sh.elapsed();
  res.lp_solves = sh.lp_solves.load();
  res.checkpoint.nodes = res.nodes;
  for (const auto& n : out.remaining) res.checkpoint.frontier.push_back(freeze(n));
  if (log) {
    log->result(verdict_name(res.verdict), res.nodes);
    log->set_footer({{"verdict", verdict_name(res.verdict)},
                     {"nodes", std::to_string(res.nodes)},
                     {"seconds", res.seconds},
                     {"lp_solves", std::to_string(res.lp_solves)}});
  }
  return res;
}

SearchResult run_parallel(std::vector<OpenNode> roots, Shared& sh, ProofLog* log, std::uint64_t node_offset) {
  int depth = 0;
  while ((1 << depth) < 4 * sh.config.parallel) ++depth;
  std::vector<Item> items;
  std::vector<Task> tasks;
  ProbeOracle oracle;
  // Roots come from a stack (bottom first); DFS order is top first.
  for (auto it = roots.rbegin(); it != roots.rend(); ++it) {
    if (expand(std::move(*it), depth, sh, oracle, log != nullptr, items, tasks)) break;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next++;
      if (i >= tasks.size()) return;
      if (sh.winner.load() < i) continue;
      tasks[i].started = true;
      std::vector<OpenNode> stack;
      stack.push_back(std::move(tasks[i].node));
      tasks[i].out = run_stack(std::move(stack), sh, log ? &tasks[i].log : nullptr, i, false, node_offset);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < sh.config.parallel; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  // Reassemble in DFS order; later work sits lower in the remaining stack.
  RunOut total;
  for (Item& item : items) {
    if (Chunk* c = std::get_if<Chunk>(&item)) {
      if (total.verdict == Verdict::kIndeterminate) continue;
      if (log) log->append(c->log);
      ++total.nodes;
      if (c->witness) {
        total.verdict = Verdict::kWitness;
        total.witness = std::move(c->witness);
        break;
      }
      continue;
    }
    Task& task = tasks[std::get<std::size_t>(item)];
    if (total.verdict == Verdict::kIndeterminate) {
      if (!task.started) {
        total.remaining.insert(total.remaining.begin(), std::move(task.node));
      } else if (task.out.verdict == Verdict::kIndeterminate) {
        auto& r = task.out.remaining;
        total.remaining.insert(total.remaining.begin(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
      }
      continue;
    }
    if (log) log->append(task.log);
    total.nodes += task.out.nodes;
    if (task.out.verdict == Verdict::kWitness) {
      total.verdict = Verdict::kWitness;
      total.witness = task.out.witness;
      break;
    }
    if (task.out.verdict == Verdict::kIndeterminate) {
      total.verdict = Verdict::kIndeterminate;
      total.remaining = std::move(task.out.remaining);
    }
  }
  return finish(std::move(total), sh, log, node_offset);
}

SearchResult run(std::vector<OpenNode> stack, std::uint64_t t, const GTable& gtable, const SearchConfig& config,
                 ProofLog* log, std::uint64_t node_offset) {
  Shared sh{t, gtable, config, Clock::now()};
  if (config.parallel > 1) return run_parallel(std::move(stack), sh, log, node_offset);
  RunOut out = run_stack(std::move(stack), sh, log, 0, true, node_offset);
  return finish(std::move(out), sh, log, node_offset);
}

std::string glb_field(int n, int k, const GTable& gtable) {
  auto g = gtable.lower_bound(n - k, k);
  return g ? std::to_string(*g) : "none";
}

}  // namespace

std::string header_fields(PropagationMode mode, const SearchConfig& config, const std::vector<KSet>& forced_negative) {
  std::ostringstream os;
  os << "mode=" << mode_name(mode) << " strategy=" << strategy_name(config.strategy)
     << " seed=" << config.propagation.rng_seed << " sample_limit=" << config.propagation.sample_limit
     << " enable_after=" << config.propagation.enable_after_branch_depth
     << " time_limit=" << config.propagation.time_limit_seconds << " node_budget=" << config.node_budget << " forced=";
  if (forced_negative.empty()) os << "-";
  for (std::size_t i = 0; i < forced_negative.size(); ++i) os << (i ? ";" : "") << forced_negative[i].to_string();
  return os.str();
}

SearchResult branch_and_cut(std::uint64_t t, OpenNode root, const GTable& gtable, const SearchConfig& config,
                            ProofLog* log) {
  std::vector<OpenNode> stack;
  stack.push_back(std::move(root));
  return run(std::move(stack), t, gtable, config, log, 0);
}

SearchResult verify_g(int n, int k, std::uint64_t t, const GTable& gtable, const SearchConfig& config, ProofLog* log,
                      const std::vector<KSet>& forced_negative) {
  auto universe = std::make_shared<ShiftUniverse>(n, k);
  OpenNode root{FamilyState(universe, config.strategy), {}, {}, ""};
  for (const KSet& s : forced_negative) {
    if (root.state.mark_negative(s) == MarkResult::kConflict) throw std::invalid_argument("conflicting forced sets");
    root.bminus.push_back(s);
  }
  if (log) log->header(n, k, t, header_fields(config.mode, config, forced_negative) + " glb=" + glb_field(n, k, gtable));
  return branch_and_cut(t, std::move(root), gtable, config, log);
}

SearchResult resume_search(int n, int k, std::uint64_t t, const GTable& gtable, const SearchConfig& config,
                           const SearchCheckpoint& checkpoint, ProofLog* log) {
  auto universe = std::make_shared<ShiftUniverse>(n, k);
  std::vector<OpenNode> stack;
  for (const auto& f : checkpoint.frontier) stack.push_back(thaw(f, universe, config.strategy));
  if (log) log->header(n, k, t, header_fields(config.mode, config, {}) + " glb=" + glb_field(n, k, gtable) + " resumed=" + std::to_string(checkpoint.nodes));
  return run(std::move(stack), t, gtable, config, log, checkpoint.nodes);
}

}  // namespace mms
