#include "mms/driver.hpp"

#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mms/binomial.hpp"

namespace mms {

std::uint64_t two_value_s(int a, int b, int k) {
  if (a < 1 || b < 1 || a + b < k) throw std::invalid_argument("two_value_s: need a, b >= 1 and a + b >= k");
  // j entries equal to a and k - j equal to -b: sum j*a - (k-j)*b.
  std::uint64_t s = 0;
  for (int j = 0; j <= k; ++j) {
    if (j > b || k - j > a) continue;
    if (static_cast<long>(j) * a >= static_cast<long>(k - j) * b) s += binomial(b, j) * binomial(a, k - j);
  }
  return s;
}

TwoValueScan scan_two_value(int n, int k) {
  if (n <= k || k < 1) throw std::invalid_argument("scan_two_value: need n > k >= 1");
  TwoValueScan best;
  for (int a = 1; a < n; ++a) {
    const std::uint64_t s = two_value_s(a, n - a, k);
    if (best.a == 0 || s < best.t_min) best = {s, a, n - a};
  }
  return best;
}

RationalVector two_value_vector(int a, int b) {
  RationalVector x;
  for (int i = 0; i < b; ++i) x.emplace_back(a);
  for (int i = 0; i < a; ++i) x.emplace_back(-b);
  return x;
}

std::string describe_vector(const RationalVector& x) {
  mpz_class den = 1;
  for (const auto& v : x) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
  std::vector<mpz_class> ints;
  mpz_class g = 0;
  for (const auto& v : x) {
    ints.push_back(v.get_num() * (den / v.get_den()));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints.back().get_mpz_t());
  }
  if (g != 0) {
    for (auto& v : ints) v /= g;
  }
  std::string out;
  for (std::size_t i = 0; i < ints.size();) {
    std::size_t j = i;
    while (j < ints.size() && ints[j] == ints[i]) ++j;
    if (!out.empty()) out += ' ';
    const std::string v = ints[i].get_str();
    out += (ints[i] < 0 ? "(" + v + ")" : v) + "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

mpz_class compute_Nk(int k) {
  if (k < 1) throw std::invalid_argument("compute_Nk: k >= 1");
  for (unsigned long n = static_cast<unsigned long>(k) + 3;; ++n) {
    mpz_class lhs;
    mpz_class rhs;
    mpz_bin_uiui(lhs.get_mpz_t(), n - 3, static_cast<unsigned long>(k));
    mpz_bin_uiui(rhs.get_mpz_t(), n - 1, static_cast<unsigned long>(k) - 1);
    if (lhs >= rhs) return mpz_class(n);
  }
}

KSet sharp_complement(int n, int k) {
  std::vector<int> e{1};
  for (int i = n - k + 2; i <= n; ++i) e.push_back(i);
  return KSet(std::span<const int>(e));
}

namespace {

std::string two_value_name(int a, int b) { return std::to_string(a) + "^" + std::to_string(b) + " (-" + std::to_string(b) + ")^" + std::to_string(a); }

nlohmann::json row_json(const GRow& r) {
  nlohmann::json j{{"n", r.n},
                   {"k", r.k},
                   {"verdict", verdict_name(r.verdict)},
                   {"source", r.source},
                   {"t", std::to_string(r.t)},
                   {"nodes", std::to_string(r.nodes)},
                   {"lp_solves", std::to_string(r.lp_solves)},
                   {"seconds", r.seconds},
                   {"example", r.example}};
  if (r.verdict != Verdict::kIndeterminate) {
    j["value"] = std::to_string(r.value);
    j["deficiency"] = std::to_string(r.deficiency);
  }
  return j;
}

GRow row_from_json(const nlohmann::json& j) {
  GRow r;
  r.n = j.at("n");
  r.k = j.at("k");
  const std::string v = j.at("verdict");
  r.verdict = v == "HOLDS" ? Verdict::kHolds : v == "WITNESS" ? Verdict::kWitness : Verdict::kIndeterminate;
  r.source = j.at("source");
  r.t = std::stoull(j.at("t").get<std::string>());
  r.nodes = std::stoull(j.at("nodes").get<std::string>());
  r.lp_solves = std::stoull(j.value("lp_solves", std::string("0")));
  r.seconds = j.at("seconds");
  r.example = j.at("example");
  if (j.contains("value")) {
    r.value = std::stoull(j.at("value").get<std::string>());
    r.deficiency = std::stoull(j.at("deficiency").get<std::string>());
  }
  return r;
}

}  // namespace

nlohmann::json gtable_json(const GTable& g) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& [key, e] : g.entries()) {
    a.push_back({{"k", key.first},
                 {"n", key.second},
                 {"value", std::to_string(e.value)},
                 {"source", e.source == GSource::kBaranyai ? "baranyai" : "computed"}});
  }
  return a;
}

GTable gtable_from_json(const nlohmann::json& j) {
  GTable g;
  for (const auto& e : j) {
    g.set(e.at("n"), e.at("k"), std::stoull(e.at("value").get<std::string>()),
          e.at("source") == "baranyai" ? GSource::kBaranyai : GSource::kComputed);
  }
  return g;
}

nlohmann::json config_json(const SearchConfig& c) {
  return {{"mode", mode_name(c.mode)},
          {"strategy", strategy_name(c.strategy)},
          {"seed", std::to_string(c.propagation.rng_seed)},
          {"sample_limit", std::to_string(c.propagation.sample_limit)},
          {"time_limit", c.propagation.time_limit_seconds},
          {"enable_after", c.propagation.enable_after_branch_depth},
          {"node_budget", std::to_string(c.node_budget)},
          {"time_budget", c.time_budget_seconds}};
}

SearchConfig config_from_json(const nlohmann::json& j) {
  SearchConfig c;
  c.mode = parse_mode(j.at("mode"));
  c.strategy = parse_strategy(j.at("strategy"));
  c.propagation.rng_seed = std::stoull(j.at("seed").get<std::string>());
  c.propagation.sample_limit = std::stoull(j.at("sample_limit").get<std::string>());
  c.propagation.time_limit_seconds = j.at("time_limit");
  c.propagation.enable_after_branch_depth = j.at("enable_after");
  c.node_budget = std::stoull(j.at("node_budget").get<std::string>());
  c.time_budget_seconds = j.at("time_budget");
  return c;
}

nlohmann::json to_json(const RunResult& r) {
  nlohmann::json j{{"schema", "mms-result/1"},
                   {"kind", r.kind},
                   {"n", r.n},
                   {"k", r.k},
                   {"verdict", verdict_name(r.verdict)},
                   {"value", r.value},
                   {"nodes", std::to_string(r.nodes)},
                   {"seconds", r.seconds},
                   {"seed", std::to_string(r.seed)},
                   {"log", r.log_path}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) rows.push_back(row_json(row));
  j["rows"] = rows;
  if (r.rows.size() == 1) {
    j["example"] = r.rows[0].example;
    if (r.verdict != Verdict::kIndeterminate) j["deficiency"] = std::to_string(r.rows[0].deficiency);
  }
  for (const auto& [key, v] : r.extra.items()) j[key] = v;
  return j;
}

std::string csv_header() { return "k,n,g,ghat,nodes,time,example\n"; }

std::string csv_rows(const RunResult& r) {
  std::ostringstream os;
  for (const auto& row : r.rows) {
    os << row.k << ',' << row.n << ',';
    if (row.verdict != Verdict::kIndeterminate) os << row.value << ',' << row.deficiency;
    else os << ',';
    os << ',' << row.nodes << ',' << row.seconds << ',' << '"' << row.example << '"' << '\n';
  }
  return os.str();
}

RunResult make_result(const std::string& kind, const GRow& row, const DriverOptions& opt) {
  RunResult r;
  r.kind = kind;
  r.n = row.n;
  r.k = row.k;
  r.verdict = row.verdict == Verdict::kIndeterminate ? Verdict::kIndeterminate : Verdict::kHolds;
  if (row.verdict != Verdict::kIndeterminate) r.value = std::to_string(row.value);
  r.rows = {row};
  r.nodes = row.nodes;
  r.seconds = row.seconds;
  r.seed = opt.search.propagation.rng_seed;
  return r;
}

void Driver::record(const GRow& row) {
  if (row.verdict != Verdict::kIndeterminate && !gtable_.get(row.n, row.k)) {
    gtable_.set(row.n, row.k, row.value, row.source == "baranyai" ? GSource::kBaranyai : GSource::kComputed);
  }
}

GRow Driver::compute_g(int n, int k) {
  if (k < 2 || n <= k) throw std::invalid_argument("compute_g: need n > k >= 2");
  if (opt_.baranyai && n % k == 0) {
    GRow row;
    row.n = n;
    row.k = k;
    row.verdict = Verdict::kHolds;
    row.value = binomial(n - 1, k - 1);
    row.source = "baranyai";
    row.example = two_value_name(n - 1, 1);
    row.t = row.value;
    record(row);
    return row;
  }
  if (opt_.baranyai) gtable_.seed_baranyai(k, n);
  const TwoValueScan scan = scan_two_value(n, k);
  const std::uint64_t cap = binomial(n - 1, k - 1);
  const bool capped = scan.t_min > cap;
  GRow row = descend(n, k, capped ? cap : scan.t_min, capped ? two_value_name(n - 1, 1) : two_value_name(scan.a, scan.b),
                     false, std::nullopt);
  record(row);
  return row;
}

GRow Driver::compute_g_strong(int n, int k) {
  if (k < 2 || n <= k) throw std::invalid_argument("compute_g_strong: need n > k >= 2");
  const KSet t_set = sharp_complement(n, k);
  std::uint64_t best = binomial(n, k) + 1;
  std::string example;
  for (int a = 1; a < n; ++a) {
    const RationalVector x = two_value_vector(a, n - a);
    if (ksum(t_set, x) >= 0) continue;
    const std::uint64_t s = two_value_s(a, n - a, k);
    if (s < best) {
      best = s;
      example = two_value_name(a, n - a);
    }
  }
  return descend(n, k, best, example, true, std::nullopt);
}

GRow Driver::descend(int n, int k, std::uint64_t t, std::string example, bool strong,
                     const std::optional<SearchCheckpoint>& start) {
  GRow row;
  row.n = n;
  row.k = k;
  row.source = "search";
  std::optional<SearchCheckpoint> pending = start;
  const std::vector<KSet> forced = strong ? std::vector<KSet>{sharp_complement(n, k)} : std::vector<KSet>{};
  const std::string kind = strong ? "compute-gs" : kind_;
  while (true) {
    SearchConfig cfg = opt_.search;
    if (opt_.on_checkpoint) {
      cfg.on_checkpoint = [&, t](const SearchCheckpoint& c) {
        opt_.on_checkpoint(checkpoint_json(kind, n, k, t, example, c, done_));
      };
    }
    ProofLog log;
    ProofLog* log_ptr = opt_.on_log ? &log : nullptr;
    SearchResult res = pending ? resume_search(n, k, t, gtable_, cfg, *pending, log_ptr)
                               : verify_g(n, k, t, gtable_, cfg, log_ptr, forced);
    if (pending) {
      row.nodes -= pending->nodes;
      pending.reset();
    }
    if (opt_.on_log) opt_.on_log(log);
    row.nodes += res.nodes;
    row.lp_solves += res.lp_solves;
    row.seconds += res.seconds;
    row.t = t;
    if (res.verdict == Verdict::kIndeterminate) {
      row.verdict = Verdict::kIndeterminate;
      row.open = res.checkpoint;
      row.example = example;
      if (opt_.on_checkpoint) opt_.on_checkpoint(checkpoint_json(kind, n, k, t, example, res.checkpoint, done_));
      return row;
    }
    if (res.verdict == Verdict::kHolds) {
      row.verdict = Verdict::kHolds;
      row.value = t;
      const std::uint64_t cap = binomial(n - 1, k - 1);
      row.deficiency = t < cap ? cap - t : 0;
      row.example = example;
      return row;
    }
    if (res.witness->s >= t) throw std::logic_error("witness does not beat the threshold");
    t = res.witness->s;
    example = describe_vector(res.witness->x);
  }
}

RunResult Driver::compute_f(int k, int first_n) {
  kind_ = "compute-f";
  RunResult result;
  result.kind = "compute-f";
  result.k = k;
  result.seed = opt_.search.propagation.rng_seed;
  int last_nonzero = k;
  for (const auto& row : done_) {
    if (row.deficiency > 0) last_nonzero = std::max(last_nonzero, row.n);
  }
  result.rows = done_;
  nlohmann::json mismatches = nlohmann::json::array();
  for (int n = std::max(k + 1, first_n);; ++n) {
    if (n - last_nonzero >= k + 1) break;
    GRow row = compute_g(n, k);
    result.rows.push_back(row);
    result.nodes += row.nodes;
    result.seconds += row.seconds;
    if (row.verdict == Verdict::kIndeterminate) {
      result.verdict = Verdict::kIndeterminate;
      return result;
    }
    done_.push_back(row);
    if (row.deficiency > 0) last_nonzero = n;
  }
  for (const auto& row : result.rows) {
    if (row.n < last_nonzero + 1 && scan_two_value(row.n, k).t_min != row.value) mismatches.push_back(row.n);
  }
  result.verdict = Verdict::kHolds;
  result.value = std::to_string(last_nonzero + 1);
  result.extra["two_value_mismatch"] = mismatches;
  return result;
}

nlohmann::json Driver::checkpoint_json(const std::string& kind, int n, int k, std::uint64_t t,
                                       const std::string& example, const SearchCheckpoint& frontier,
                                       const std::vector<GRow>& done) const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : done) rows.push_back(row_json(r));
  return {{"schema", "mms-checkpoint/1"},
          {"kind", kind},
          {"n", n},
          {"k", k},
          {"t", std::to_string(t)},
          {"example", example},
          {"baranyai", opt_.baranyai},
          {"config", config_json(opt_.search)},
          {"gtable", gtable_json(gtable_)},
          {"done", rows},
          {"search", to_json(frontier)}};
}

RunResult Driver::resume(const nlohmann::json& cp) {
  if (cp.at("schema") != "mms-checkpoint/1") throw std::invalid_argument("not a checkpoint file");
  const std::string kind = cp.at("kind");
  const int n = cp.at("n");
  const int k = cp.at("k");
  const SearchConfig saved = config_from_json(cp.at("config"));
  opt_.search.mode = saved.mode;
  opt_.search.strategy = saved.strategy;
  opt_.search.propagation = saved.propagation;
  opt_.baranyai = cp.at("baranyai");
  gtable_ = gtable_from_json(cp.at("gtable"));
  done_.clear();
  for (const auto& r : cp.at("done")) done_.push_back(row_from_json(r));
  if (kind == "compute-f") kind_ = kind;
  const SearchCheckpoint frontier = checkpoint_from_json(cp.at("search"));
  GRow row = descend(n, k, std::stoull(cp.at("t").get<std::string>()), cp.at("example"), kind == "compute-gs", frontier);
  if (kind != "compute-gs") record(row);
  if (kind != "compute-f" || row.verdict == Verdict::kIndeterminate) {
    RunResult r = make_result(kind, row, opt_);
    if (kind == "compute-f") {
      r.rows = done_;
      r.rows.push_back(row);
      r.n = 0;
      r.value.clear();
    }
    return r;
  }
  done_.push_back(row);
  return compute_f(k, n + 1);
}

}  // namespace mms

namespace mms {

namespace {

std::map<std::string, std::string> header_map(const std::string& line) {
  std::map<std::string, std::string> m;
  std::istringstream is(line);
  std::string tok;
  is >> tok;  // HEADER
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) m[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return m;
}

// Checks "WITNESS S=<s> X=(...)" against a fresh count.
std::string check_witness(const std::string& line, int n, int k, std::uint64_t t) {
  const auto s_pos = line.find("S=");
  const auto x_pos = line.find("X=(");
  if (s_pos == std::string::npos || x_pos == std::string::npos || line.back() != ')') return "malformed witness";
  const std::uint64_t s = std::stoull(line.substr(s_pos + 2));
  RationalVector x;
  std::istringstream is(line.substr(x_pos + 3, line.size() - x_pos - 4));
  std::string v;
  while (std::getline(is, v, ',')) {
    Rational q;
    if (q.set_str(v, 10) != 0) return "bad rational " + v;
    q.canonicalize();
    x.push_back(q);
  }
  if (static_cast<int>(x.size()) != n) return "witness length";
  Rational sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += x[i];
    if (i && x[i] > x[i - 1]) return "witness not nonincreasing";
  }
  if (sum < 0) return "witness sum negative";
  if (count_nonneg_ksums(x, k) != s) return "witness count mismatch";
  if (s >= t) return "witness does not beat t";
  return "";
}

}  // namespace

std::vector<ReplaySegment> replay_proof(const std::string& text) {
  std::vector<std::vector<std::string>> segments;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("HEADER ", 0) == 0) segments.emplace_back();
    if (segments.empty()) throw std::invalid_argument("proof log does not start with HEADER");
    segments.back().push_back(line);
  }
  std::vector<ReplaySegment> out;
  for (const auto& seg : segments) {
    ReplaySegment r;
    auto h = header_map(seg.front());
    r.n = std::stoi(h.at("n"));
    r.k = std::stoi(h.at("k"));
    r.t = std::stoull(h.at("t"));
    if (seg.back().rfind("RESULT ", 0) != 0) {
      r.detail = "truncated run";
      out.push_back(r);
      continue;
    }
    r.verdict = header_map(seg.back()).empty() ? "" : seg.back().substr(7, seg.back().find(' ', 7) - 7);
    std::string problem;
    for (const auto& l : seg) {
      if (l.rfind("WITNESS ", 0) == 0) {
        if (auto p = check_witness(l, r.n, r.k, r.t); !p.empty()) problem = p;
      }
    }
    if (!problem.empty()) {
      r.detail = problem;
      out.push_back(r);
      continue;
    }
    if (h.count("resumed")) {
      r.ok = true;
      r.detail = "continued from a checkpoint; witnesses re-scored only";
      out.push_back(r);
      continue;
    }
    SearchConfig cfg;
    cfg.mode = parse_mode(h.at("mode"));
    cfg.strategy = parse_strategy(h.at("strategy"));
    cfg.propagation.rng_seed = std::stoull(h.at("seed"));
    cfg.propagation.sample_limit = std::stoull(h.at("sample_limit"));
    cfg.propagation.enable_after_branch_depth = std::stoi(h.at("enable_after"));
    cfg.propagation.time_limit_seconds = std::stod(h.at("time_limit"));
    cfg.node_budget = std::stoull(h.at("node_budget"));
    GTable g;
    if (h.at("glb") != "none") g.set(r.n - r.k, r.k, std::stoull(h.at("glb")), GSource::kComputed);
    std::vector<KSet> forced;
    if (h.at("forced") != "-") {
      std::istringstream fs(h.at("forced"));
      std::string item;
      while (std::getline(fs, item, ';')) forced.push_back(KSet::parse(item));
    }
    ProofLog again;
    verify_g(r.n, r.k, r.t, g, cfg, &again, forced);
    const auto& lines = again.lines();
    if (lines.size() != seg.size()) {
      r.detail = "regenerated log has " + std::to_string(lines.size()) + " lines, recorded " + std::to_string(seg.size());
    }
    for (std::size_t i = 0; i < std::min(lines.size(), seg.size()) && r.detail.empty(); ++i) {
      if (lines[i] != seg[i]) r.detail = "line " + std::to_string(i + 1) + " differs: " + seg[i];
    }
    r.ok = r.detail.empty();
    out.push_back(r);
  }
  return out;
}

}  // namespace mms
