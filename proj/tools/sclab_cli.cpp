#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "sclab/brw.hpp"
#include "sclab/errors.hpp"
#include "sclab/harness.hpp"
#include "sclab/serialize.hpp"

using namespace sclab;
using nlohmann::json;

namespace {

struct Common {
  int d = 2;
  int kappa = 5;
  double b = 0.5;
  std::optional<int> n, L, M, T1, T2;
  std::string backend = "coverage";
  std::uint64_t seed = 1;
  std::string out;
  std::int64_t max_particles = 200'000;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--d", c.d, "lattice dimension");
  app->add_option("--kappa", c.kappa, "number of colors");
  app->add_option("--b", c.b, "branching probability");
  app->add_option("--n", c.n, "level; derives L, M, T1, T2 unless given");
  app->add_option("--L", c.L, "short word length");
  app->add_option("--M", c.M, "long word length (odd)");
  app->add_option("--T1", c.T1, "first observation time");
  app->add_option("--T2", c.T2, "second observation time");
  app->add_option("--backend", c.backend, "coverage or brw")->check(CLI::IsMember({"coverage", "brw"}));
  app->add_option("--seed", c.seed, "seed");
  app->add_option("--out", c.out, "output directory (default $SCLAB_OUT_DIR or .)");
  app->add_option("--max-particles", c.max_particles, "population cap for the branching walk");
}

Params make_params(const Common& c) {
  Params p = c.n ? Params::for_level(*c.n, c.d) : Params{};
  p.dim = c.d;
  if (c.L) p.L = *c.L;
  if (c.M) p.M = *c.M;
  if (c.T1) p.T1 = *c.T1;
  if (c.T2) p.T2 = *c.T2;
  p.neighbor_len = std::min(p.neighbor_len, Params::default_neighbor_len(p.L, p.M));
  if (p.M_small >= p.M) p.M_small = p.M - 2;
  p.L_small = std::min(p.L_small, std::max(p.M_small, 1));
  return p;
}

TrialConfig make_config(const Common& c) {
  TrialConfig t;
  t.d = c.d;
  t.kappa = c.kappa;
  t.b = c.b;
  t.backend = parse_backend(c.backend);
  t.params = make_params(c);
  t.max_particles = c.max_particles;
  return t;
}

std::filesystem::path out_dir(const Common& c) {
  std::filesystem::path dir = c.out.empty() ? default_out_dir() : c.out;
  std::filesystem::create_directories(dir);
  return dir;
}

void emit(const std::filesystem::path& file, const json& j) {
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  os << j.dump(2) << '\n';
  std::cout << j.dump(2) << '\n';
}

json report_json(const oracle::EventReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) {
    json pts = json::array();
    for (const auto& p : x.points) pts.push_back(p.coords());
    v.push_back({{"kind", x.kind}, {"points", pts}, {"note", x.note}});
  }
  return {{"name", r.name}, {"pass", r.pass}, {"violations", r.violation_count}, {"examples", v}};
}

Scenery scenery_for(const Common& c, const std::string& file, int radius) {
  if (!file.empty()) return load_scenery(file);
  if (c.kappa < 1 || c.kappa > 256) throw ConfigError("kappa must be in [1, 256]");
  return generate_scenery(Box::cube(c.d, radius), c.kappa, c.seed);
}

void write_strings(const std::filesystem::path& file, const StringSet& set) {
  std::vector<std::string> lines;
  for (const auto& s : set) lines.push_back(to_text(s));
  std::sort(lines.begin(), lines.end());
  std::ofstream os(file);
  for (const auto& l : lines) os << l << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenery reconstruction from branching random walk observations"};
  app.require_subcommand(1);

  Common c;
  std::string scenery_file;
  int radius = -1;
  int dump_len = 0;
  std::vector<std::string> piece_files;
  std::vector<int> piece_levels;

  auto* sim = app.add_subcommand("simulate", "generate a scenery and simulate the branching walk");
  add_common(sim, c);
  sim->add_option("--scenery", scenery_file, "scenery file instead of a generated one");

  auto* rec = app.add_subcommand("reconstruct", "run the four phases and write the reconstructed piece");
  add_common(rec, c);
  rec->add_option("--scenery", scenery_file, "scenery file instead of a generated one");
  rec->add_option("--dump-observed", dump_len, "also write the sorted observed strings of this length");

  auto* ev = app.add_subcommand("verify-events", "check B3, B4, C1 and G on a scenery");
  add_common(ev, c);
  ev->add_option("--scenery", scenery_file, "scenery file instead of a generated one");
  ev->add_option("--radius", radius, "window radius (default: level-n coverage window)");

  auto* tr = app.add_subcommand("trial", "one seeded trial with events, reconstruction and verification");
  add_common(tr, c);

  Common sw;
  std::vector<int> g_d{2}, g_kappa{5}, g_L{4}, g_M{9}, g_T1{4}, g_T2{16};
  std::vector<double> g_b{0.5};
  std::vector<std::string> g_backend{"coverage"};
  int trials = 1, threads = 0;
  auto* swp = app.add_subcommand("sweep", "cross product of parameter grids with seeded trials");
  swp->add_option("--d", g_d)->delimiter(',');
  swp->add_option("--kappa", g_kappa)->delimiter(',');
  swp->add_option("--b", g_b)->delimiter(',');
  swp->add_option("--L", g_L)->delimiter(',');
  swp->add_option("--M", g_M)->delimiter(',');
  swp->add_option("--T1", g_T1)->delimiter(',');
  swp->add_option("--T2", g_T2)->delimiter(',');
  swp->add_option("--backend", g_backend)->delimiter(',');
  swp->add_option("--n", sw.n, "level for the remaining parameters");
  swp->add_option("--seed", sw.seed, "base seed");
  swp->add_option("--trials", trials, "trials per cell");
  swp->add_option("--threads", threads, "worker threads (0: all cores)");
  swp->add_option("--out", sw.out, "output directory");
  swp->add_option("--max-particles", sw.max_particles, "population cap for the branching walk");

  auto* st = app.add_subcommand("stitch", "stitch reconstructed pieces of increasing level");
  st->add_option("--piece", piece_files, "piece files in increasing level")->required();
  st->add_option("--level", piece_levels, "level of each piece (default 1, 2, ...)");
  st->add_option("--out", c.out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      TrialConfig cfg = make_config(c);
      cfg.backend = Backend::tree;
      Geometry g = resolve_geometry(cfg);
      Scenery s = scenery_for(c, scenery_file, g.scenery_radius);
      auto tree = simulate_brw(s, c.b, SimLimits{c.max_particles, g.horizon}, c.seed);
      auto dir = out_dir(c);
      save_scenery((dir / "scenery.txt").string(), s);
      std::ofstream ts(dir / "tree.txt");
      write_tree(ts, tree, true);
      json pop = json::array();
      for (int t = 0; t <= g.horizon; ++t) pop.push_back(tree.population(t));
      emit(dir / "simulate.json", {{"seed", c.seed},
                                   {"b", c.b},
                                   {"horizon", g.horizon},
                                   {"nodes", tree.size()},
                                   {"truncated", tree.truncated()},
                                   {"population", pop},
                                   {"expected_final", expected_population(c.b, g.horizon)}});
    } else if (*rec) {
      TrialConfig cfg = make_config(c);
      Geometry g = resolve_geometry(cfg);
      const Params& p = cfg.params;
      auto s = std::make_shared<const Scenery>(scenery_for(c, scenery_file, g.scenery_radius));
      SourcePtr src_n, src_small;
      if (cfg.backend == Backend::coverage) {
        src_n = coverage_source(s, Box::cube(c.d, g.window_radius), 3 * p.L);
        src_small = coverage_source(s, Box::cube(c.d, g.small_radius), 3 * p.L_small);
      } else {
        auto tree = std::make_shared<const ObservationTree>(
            simulate_brw(*s, c.b, SimLimits{c.max_particles, g.horizon}, c.seed));
        src_n = src_small = tree_source(tree);
      }
      auto dir = out_dir(c);
      if (dump_len > 0) write_strings(dir / ("observed_" + std::to_string(dump_len) + ".txt"),
                                      src_n->observed_strings(dump_len, p.T2));
      ReconstructionResult r = reconstruct_box(*src_n, *src_small, p);
      save_partial((dir / "reconstruction.txt").string(), r.output);
      std::optional<oracle::Placement> w;
      if (r.diag.ok) w = oracle::verify_reconstruction(r.output, *s, g.displacement_bound);
      const auto& dg = r.diag;
      json j = {{"ok", dg.ok},
                {"failed_phase", dg.failed_phase},
                {"failure_reason", dg.failure_reason},
                {"short_n", dg.short_n},
                {"long_n", dg.long_n},
                {"short_small", dg.short_small},
                {"long_small", dg.long_small},
                {"seed_word", dg.seed_word},
                {"tiling_status", dg.tiling_status},
                {"lines_placed", dg.lines_placed},
                {"lines_needed", dg.lines_needed},
                {"verified", w.has_value()}};
      if (w) j["witness"] = {{"x", w->x.coords()}, {"isometry", to_text(w->iso)}};
      emit(dir / "reconstruct.json", j);
    } else if (*ev) {
      TrialConfig cfg = make_config(c);
      Geometry g = resolve_geometry(cfg);
      const Params& p = cfg.params;
      Scenery s = scenery_for(c, scenery_file, radius >= 0 ? radius : g.scenery_radius);
      Box w = radius >= 0 ? Box::cube(c.d, radius) : Box::cube(c.d, g.window_radius);
      if (!s.box().contains(w)) throw ConfigError("window larger than the scenery");
      json j = {{"window", to_text(w)},
                {"L", p.L},
                {"B3", report_json(oracle::check_diamond_property(s, w, w, p.L))},
                {"B4", report_json(oracle::check_two_path_property(s, w, p.L))},
                {"C1", report_json(oracle::check_word_uniqueness(s, w, std::min(p.L - 1, p.neighbor_len)))}};
      if (s.box().contains(Box::cube(c.d, 2 * p.n + 2)))
        j["G"] = report_json(oracle::check_patch_uniqueness(s, p.n));
      emit(out_dir(c) / "events.json", j);
    } else if (*tr) {
      TrialReport r = run_trial(make_config(c), c.seed);
      emit(out_dir(c) / "trial.json", to_json(r));
    } else if (*swp) {
      SweepConfig s;
      s.d = g_d;
      s.kappa = g_kappa;
      s.b = g_b;
      s.L = g_L;
      s.M = g_M;
      s.T1 = g_T1;
      s.T2 = g_T2;
      s.backend.clear();
      for (const auto& b : g_backend) s.backend.push_back(parse_backend(b));
      s.trials = trials;
      s.base_seed = sw.seed;
      s.threads = threads;
      sw.d = g_d.empty() ? 2 : g_d.front();
      s.base = make_config(sw);
      s.base.max_particles = sw.max_particles;
      SweepResult res = run_sweep(s);
      auto dir = out_dir(sw);
      std::ofstream csv(dir / "sweep.csv");
      write_csv(csv, res);
      emit(dir / "sweep_summary.json", summarize(res));
    } else if (*st) {
      if (!piece_levels.empty() && piece_levels.size() != piece_files.size())
        throw ConfigError("one --level per --piece");
      std::vector<LevelPiece> pieces;
      for (std::size_t k = 0; k < piece_files.size(); ++k)
        pieces.push_back({piece_levels.empty() ? static_cast<int>(k) + 1 : piece_levels[k], load_partial(piece_files[k])});
      StitchResult r = stitch_levels_detailed(pieces);
      auto dir = out_dir(c);
      save_partial((dir / "assembly.txt").string(), r.assembly);
      json placements = json::array();
      for (const auto& g : r.placements) placements.push_back(to_text(g));
      emit(dir / "stitch.json", {{"pieces", pieces.size()},
                                 {"matched", r.matched},
                                 {"placements", placements},
                                 {"assembly_box", to_text(r.assembly.box())}});
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
