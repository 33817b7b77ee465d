#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sclab/lattice.hpp"
#include "sclab/observations.hpp"

namespace sclab {

struct Params {
  int dim = 2;
  int n = 2;
  int L = 4;
  int M = 9;
  int T1 = 4;
  int T2 = 16;
  int n_small = 2;
  int L_small = 4;
  int M_small = 5;
  int T1_small = 4;
  int T2_small = 16;
  // Length of the v_a, v_c, w_b pieces in the neighbor test.
  int neighbor_len = 3;
  // Tiling treats two lines as neighbors only if one orientation pair has a witness at
  // every offset; false keeps the single-witness rule of neighbor_test.
  bool neighbor_all_offsets = true;
  bool strict = false;
  // Phase 2 never chains a short word onto its own reverse (a fold at a palindromic
  // overlap); false gives every string whose length-L substrings all lie in the bag.
  bool fold_free = true;
  std::int64_t max_long_words = 4'000'000;
  std::int64_t max_tiling_steps = 200'000;

  // Defaults coupled to the level: L = ceil((ln n)^2) >= 3, M = 4n+1, T1 = n^2,
  // T2 = n^4, n' = ceil(n^0.25) with the same couplings (M' kept below M).
  static Params for_level(int n, int dim = 2);
  // Clamp neighbor_len so that 3 * neighbor_len - 2 <= M.
  static int default_neighbor_len(int L, int M);
  // Parameters that phases 1-2 use at the small level.
  Params small_level() const;
  // Throws ConfigError.
  void validate() const;
};

// Strings of one length, closed under reversal, keyed by canonical form.
class WordBag {
 public:
  WordBag() = default;
  explicit WordBag(int length) : length_(length) {}

  void insert(std::span<const Color> w);
  bool contains(std::span<const Color> w) const;
  std::size_t size() const { return canon_.size(); }
  bool empty() const { return canon_.empty(); }
  int length() const { return length_; }
  const std::set<ColorString>& canonical_words() const { return canon_; }
  // Both orientations of every word, sorted.
  std::vector<ColorString> oriented() const;

  friend bool operator==(const WordBag&, const WordBag&) = default;

 private:
  int length_ = 0;
  std::set<ColorString> canon_;
};

struct PlacedWord {
  ColorString word;
  Point start;
  Direction dir;
  Point at(int j) const { return Anchor{start, dir}.at(j); }
};

WordBag phase1_short_words(const ObservationSource& src, const Params& p);
// Throws PhaseFailure("phase2") when the output would exceed p.max_long_words.
// Every length-M string whose length-L substrings are in the bag, minus folds when p.fold_free.
WordBag phase2_long_words(const WordBag& short_words, const Params& p);
// Throws PhaseFailure("phase3") when no long word contains the seed centered.
PlacedWord phase3_seed(const WordBag& long_n, const WordBag& long_small, const Params& p);

struct NeighborWitness {
  ColorString v_a, v_b, v_c, w_b;
  // Index, inside the tested orientations of v and w, of w_b's middle letter.
  int index = 0;
  // Start of v_a inside the tested orientation of v.
  int offset = 0;
  bool v_reversed = false;
  bool w_reversed = false;
};

std::vector<NeighborWitness> neighbor_witnesses(std::span<const Color> v, std::span<const Color> w,
                                                const ObservationSource& src, const Params& p);
std::optional<NeighborWitness> neighbor_test(std::span<const Color> v, std::span<const Color> w,
                                             const ObservationSource& src, const Params& p);

enum class TilingStatus { complete, incomplete, conflict, budget_exhausted };
std::string to_text(TilingStatus s);

struct TilingResult {
  PartialScenery piece;
  TilingStatus status = TilingStatus::incomplete;
  bool ambiguous = false;
  int lines_placed = 0;
  int lines_needed = 0;
  std::int64_t steps = 0;
  std::string detail;
};

TilingResult phase4_tile(const PlacedWord& seed, const WordBag& long_words, const ObservationSource& src,
                         const Params& p);

struct TrialDiagnostics {
  std::size_t short_n = 0, long_n = 0, short_small = 0, long_small = 0;
  std::string seed_small_word;
  std::string seed_word;
  std::string tiling_status;
  bool ambiguous = false;
  int lines_placed = 0;
  int lines_needed = 0;
  std::int64_t tiling_steps = 0;
  bool ok = false;
  std::string failed_phase;  // empty on success
  std::string failure_reason;
};

struct ReconstructionResult {
  PartialScenery output;
  TrialDiagnostics diag;
  // Bags kept for property checks.
  WordBag short_n, long_n, short_small, long_small;
};

ReconstructionResult reconstruct_box(const ObservationSource& src_n, const ObservationSource& src_small,
                                     const Params& p);

struct LevelPiece {
  int level = 0;
  PartialScenery piece;
};

struct StitchResult {
  PartialScenery assembly;
  // Per piece: placed onto the assembly (true) or recentered (false). The first piece is always false.
  std::vector<bool> matched;
  std::vector<Isometry> placements;
};

StitchResult stitch_levels_detailed(const std::vector<LevelPiece>& pieces);
PartialScenery stitch_levels(const std::vector<LevelPiece>& pieces);

}  // namespace sclab
