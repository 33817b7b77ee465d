#include "sclab/harness.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ostream>
#include <thread>

#include "sclab/brw.hpp"
#include "sclab/errors.hpp"

namespace sclab {

Geometry resolve_geometry(const TrialConfig& c) {
  const Params& p = c.params;
  if (c.d < 1) throw ConfigError("d must be >= 1");
  if (c.kappa < 1 || c.kappa > 256) throw ConfigError("kappa must be in [1, 256]");
  if (!(c.b >= 0.0 && c.b <= 1.0)) throw ConfigError("b must be in [0, 1]");
  if (p.dim != c.d) throw ConfigError("params.dim differs from d");
  p.validate();
  Geometry g;
  const int r = (p.M - 1) / 2, rs = (p.M_small - 1) / 2;
  if (c.backend == Backend::coverage) {
    g.small_radius = c.small_radius >= 0 ? c.small_radius : p.L_small + rs;
    g.window_radius = c.window_radius >= 0 ? c.window_radius : g.small_radius + r + p.L;
    if (g.small_radius > g.window_radius) throw ConfigError("small window larger than the level-n window");
    g.displacement_bound = c.displacement_bound >= 0 ? c.displacement_bound : g.small_radius;
    g.scenery_radius = std::max(g.window_radius, g.displacement_bound + r);
  } else {
    g.horizon = std::max(p.T2, p.T2_small);
    if (g.horizon > 400) throw ConfigError("BRW horizon above 400 is not supported");
    g.small_radius = g.window_radius = g.horizon;
    g.displacement_bound = c.displacement_bound >= 0 ? c.displacement_bound : p.T2_small;
    g.scenery_radius = std::max(g.horizon, g.displacement_bound + r);
    if (c.window_radius >= 0 && c.window_radius < g.horizon)
      throw ConfigError("scenery window smaller than the BRW horizon");
  }
  if (c.max_particles < 1) throw ConfigError("max_particles must be positive");
  return g;
}

namespace {

EventOutcome outcome(const oracle::EventReport& r) {
  EventOutcome o{r.pass, r.violation_count, {}};
  if (!r.violations.empty()) {
    const auto& v = r.violations.front();
    o.first = v.kind;
    if (!v.note.empty()) o.first += ": " + v.note;
  }
  return o;
}

EventOutcome both(const EventOutcome& a, const EventOutcome& b) {
  EventOutcome o{a.pass && b.pass, a.violations + b.violations, a.first.empty() ? b.first : a.first};
  return o;
}

nlohmann::json to_json(const EventOutcome& e) {
  return {{"pass", e.pass}, {"violations", e.violations}, {"first", e.first}};
}

nlohmann::json to_json(const Params& p) {
  return {{"n", p.n},           {"L", p.L},
          {"M", p.M},           {"T1", p.T1},
          {"T2", p.T2},         {"n_small", p.n_small},
          {"L_small", p.L_small}, {"M_small", p.M_small},
          {"T1_small", p.T1_small}, {"T2_small", p.T2_small},
          {"neighbor_len", p.neighbor_len}, {"neighbor_all_offsets", p.neighbor_all_offsets},
          {"fold_free", p.fold_free},
          {"strict", p.strict}};
}

}  // namespace

TrialReport run_trial(const TrialConfig& config, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  TrialReport rep;
  rep.config = config;
  rep.seed = seed;
  rep.geometry = resolve_geometry(config);
  const Geometry& g = rep.geometry;
  const Params& p = config.params;
  const int d = config.d;

  auto scenery = std::make_shared<const Scenery>(generate_scenery(Box::cube(d, g.scenery_radius), config.kappa, seed));
  const Box wn = Box::cube(d, g.window_radius);
  const Box ws = Box::cube(d, g.small_radius);

  SourcePtr src_n, src_small;
  if (config.backend == Backend::coverage) {
    src_n = coverage_source(scenery, wn, 3 * p.L);
    src_small = coverage_source(scenery, ws, 3 * p.L_small);
  } else {
    auto tree = std::make_shared<const ObservationTree>(
        simulate_brw(*scenery, config.b, SimLimits{config.max_particles, g.horizon}, seed));
    rep.truncated = tree->truncated();
    src_n = src_small = tree_source(tree);
  }

  // Event checks on the windows each level reads from.
  auto level_events = [&](const Box& w, int L, int l) {
    EventOutcome b3 = outcome(oracle::check_diamond_property(*scenery, w, w, L));
    if (l != L) b3 = both(b3, outcome(oracle::check_diamond_property(*scenery, w, w, l)));
    EventOutcome b4 = outcome(oracle::check_two_path_property(*scenery, w, L));
    EventOutcome c1 = outcome(oracle::check_word_uniqueness(*scenery, w, std::min(L - 1, l)));
    return std::array<EventOutcome, 3>{b3, b4, c1};
  };
  auto en = level_events(wn, p.L, p.neighbor_len);
  auto es = level_events(ws, p.L_small, p.L_small);
  rep.events["B3"] = en[0];
  rep.events["B4"] = en[1];
  rep.events["C1"] = en[2];
  rep.events["B3_small"] = es[0];
  rep.events["B4_small"] = es[1];
  rep.events["C1_small"] = es[2];
  rep.events_pass = true;
  for (const auto& [k, e] : rep.events) rep.events_pass = rep.events_pass && e.pass;
  if (config.check_patch_event && scenery->box().contains(Box::cube(d, 2 * p.n + 2)))
    rep.patch_event = outcome(oracle::check_patch_uniqueness(*scenery, p.n));

  rep.observed_L = src_n->observed_strings(p.L, p.T2).size();
  ReconstructionResult rr = reconstruct_box(*src_n, *src_small, p);
  rep.diag = rr.diag;
  if (rr.diag.ok) rep.witness = oracle::verify_reconstruction(rr.output, *scenery, g.displacement_bound);
  rep.success = rr.diag.ok && rep.witness.has_value();
  if (config.keep_artifacts) {
    rep.scenery = scenery;
    rep.reconstruction = std::make_shared<const ReconstructionResult>(std::move(rr));
  }
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

nlohmann::json to_json(const TrialConfig& c) {
  return {{"d", c.d},
          {"kappa", c.kappa},
          {"b", c.b},
          {"backend", to_text(c.backend)},
          {"params", to_json(c.params)},
          {"max_particles", c.max_particles}};
}

nlohmann::json to_json(const TrialReport& r, bool with_timing) {
  nlohmann::json j;
  j["config"] = to_json(r.config);
  j["seed"] = r.seed;
  j["geometry"] = {{"small_radius", r.geometry.small_radius},
                   {"window_radius", r.geometry.window_radius},
                   {"scenery_radius", r.geometry.scenery_radius},
                   {"displacement_bound", r.geometry.displacement_bound},
                   {"horizon", r.geometry.horizon}};
  nlohmann::json ev;
  for (const auto& [k, e] : r.events) ev[k] = to_json(e);
  ev["G"] = r.patch_event ? to_json(*r.patch_event) : nlohmann::json(nullptr);
  j["events"] = ev;
  j["events_pass"] = r.events_pass;
  const auto& dg = r.diag;
  j["diagnostics"] = {{"short_n", dg.short_n},
                      {"long_n", dg.long_n},
                      {"short_small", dg.short_small},
                      {"long_small", dg.long_small},
                      {"seed_small_word", dg.seed_small_word},
                      {"seed_word", dg.seed_word},
                      {"tiling_status", dg.tiling_status},
                      {"ambiguous", dg.ambiguous},
                      {"lines_placed", dg.lines_placed},
                      {"lines_needed", dg.lines_needed},
                      {"tiling_steps", dg.tiling_steps},
                      {"failed_phase", dg.failed_phase},
                      {"failure_reason", dg.failure_reason},
                      {"observed_L", r.observed_L},
                      {"truncated", r.truncated}};
  j["success"] = r.success;
  if (r.witness) {
    j["witness"] = {{"x", r.witness->x.coords()},
                    {"perm", r.witness->iso.perm()},
                    {"signs", r.witness->iso.signs()},
                    {"translation", r.witness->iso.translation().coords()}};
  } else {
    j["witness"] = nullptr;
  }
  if (with_timing) j["wall_time_ms"] = r.wall_ms;
  return j;
}

std::uint64_t trial_seed(std::uint64_t base_seed, int trial_index) {
  return base_seed ^ static_cast<std::uint64_t>(trial_index);
}

std::vector<TrialConfig> sweep_cells(const SweepConfig& s) {
  if (s.d.empty() || s.kappa.empty() || s.b.empty() || s.L.empty() || s.M.empty() || s.T1.empty() || s.T2.empty() ||
      s.backend.empty())
    throw ConfigError("sweep grids must be nonempty");
  if (s.trials < 1) throw ConfigError("trial count must be >= 1");
  std::vector<TrialConfig> out;
  for (int d : s.d)
    for (int kappa : s.kappa)
      for (double b : s.b)
        for (int L : s.L)
          for (int M : s.M)
            for (int T1 : s.T1)
              for (int T2 : s.T2)
                for (Backend be : s.backend) {
                  TrialConfig c = s.base;
                  c.d = d;
                  c.params.dim = d;
                  c.kappa = kappa;
                  c.b = b;
                  c.backend = be;
                  c.params.L = L;
                  c.params.M = M;
                  c.params.T1 = T1;
                  c.params.T2 = T2;
                  c.params.neighbor_len = std::min(c.params.neighbor_len, Params::default_neighbor_len(L, M));
                  if (c.params.M_small >= M) c.params.M_small = M - 2;
                  c.params.L_small = std::min(c.params.L_small, std::max(c.params.M_small, 1));
                  out.push_back(c);
                }
  return out;
}

SweepResult run_sweep(const SweepConfig& s) {
  SweepResult res;
  auto cfgs = sweep_cells(s);
  res.cells.resize(cfgs.size());
  struct Job {
    std::size_t cell;
    int trial;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cfgs.size(); ++c) {
    res.cells[c].config = cfgs[c];
    try {
      resolve_geometry(cfgs[c]);
    } catch (const ConfigError& e) {
      res.cells[c].error = e.what();
      continue;
    }
    res.cells[c].trials.resize(static_cast<std::size_t>(s.trials));
    for (int t = 0; t < s.trials; ++t) jobs.push_back({c, t});
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& j = jobs[i];
      res.cells[j.cell].trials[static_cast<std::size_t>(j.trial)] = run_trial(cfgs[j.cell], trial_seed(s.base_seed, j.trial));
    }
  };
  unsigned n = s.threads > 0 ? static_cast<unsigned>(s.threads) : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return res;
}

void write_csv(std::ostream& os, const SweepResult& r) {
  os << "cell,d,kappa,b,L,M,T1,T2,backend,trial,seed,B3,B4,C1,B3_small,B4_small,C1_small,G,events_pass,success,"
        "failed_phase,short_n,long_n,lines_placed,observed_L,wall_ms\n";
  for (std::size_t c = 0; c < r.cells.size(); ++c) {
    const auto& cell = r.cells[c];
    const auto& cf = cell.config;
    for (std::size_t t = 0; t < cell.trials.size(); ++t) {
      const auto& tr = cell.trials[t];
      auto ev = [&](const char* k) { return tr.events.at(k).pass ? 1 : 0; };
      os << c << ',' << cf.d << ',' << cf.kappa << ',' << cf.b << ',' << cf.params.L << ',' << cf.params.M << ','
         << cf.params.T1 << ',' << cf.params.T2 << ',' << to_text(cf.backend) << ',' << t << ',' << tr.seed << ','
         << ev("B3") << ',' << ev("B4") << ',' << ev("C1") << ',' << ev("B3_small") << ',' << ev("B4_small") << ','
         << ev("C1_small") << ',' << (tr.patch_event ? (tr.patch_event->pass ? "1" : "0") : "") << ','
         << (tr.events_pass ? 1 : 0) << ',' << (tr.success ? 1 : 0) << ',' << tr.diag.failed_phase << ','
         << tr.diag.short_n << ',' << tr.diag.long_n << ',' << tr.diag.lines_placed << ',' << tr.observed_L << ','
         << tr.wall_ms << '\n';
    }
  }
}

nlohmann::json summarize(const SweepResult& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t c = 0; c < r.cells.size(); ++c) {
    const auto& cell = r.cells[c];
    nlohmann::json j;
    j["cell"] = c;
    j["config"] = to_json(cell.config);
    if (!cell.error.empty()) {
      j["error"] = cell.error;
      cells.push_back(j);
      continue;
    }
    const double n = static_cast<double>(cell.trials.size());
    std::map<std::string, double> ev_rate;
    double succ = 0, epass = 0, succ_given = 0, obs = 0;
    for (const auto& t : cell.trials) {
      for (const auto& [k, e] : t.events) ev_rate[k] += e.pass ? 1 : 0;
      succ += t.success;
      epass += t.events_pass;
      succ_given += t.events_pass && t.success;
      obs += static_cast<double>(t.observed_L);
    }
    for (auto& [k, v] : ev_rate) v /= n;
    j["trials"] = cell.trials.size();
    j["success_rate"] = succ / n;
    j["event_pass_rate"] = ev_rate;
    j["events_pass_rate"] = epass / n;
    j["events_pass_trials"] = epass;
    j["success_given_events"] = epass > 0 ? nlohmann::json(succ_given / epass) : nlohmann::json(nullptr);
    j["mean_observed_L"] = obs / n;
    cells.push_back(j);
  }
  return {{"cells", cells}};
}

std::string default_out_dir() {
  const char* v = std::getenv("SCLAB_OUT_DIR");
  return v && *v ? std::string(v) : std::string(".");
}

}  // namespace sclab
