#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sclab/brw.hpp"
#include "sclab/lattice.hpp"

namespace sclab {

using StringSet = std::set<ColorString>;

enum class Backend { tree, coverage };
std::string to_text(Backend b);
Backend parse_backend(const std::string& s);

// What the reconstruction may ask about the observations.
class ObservationSource {
 public:
  virtual ~ObservationSource() = default;
  virtual Backend backend() const = 0;
  virtual int kappa() const = 0;
  virtual int dim() const = 0;

  // A string with a letter >= kappa can never be observed.
  bool vacuous(std::span<const Color> s) const;

  virtual bool occurs_before(std::span<const Color> s, int T) const = 0;
  virtual StringSet observed_strings(int len, int T) const = 0;
  virtual StringSet middle_completions(std::span<const Color> w1, std::span<const Color> w3, int midlen,
                                       int T) const = 0;
  // All w2 (|w2| = midlen) for which some flanks w1, w3 (|w1| = |w3| = flank) have
  // w1 w2 w3 observed by T1 and w2 as the only middle between w1 and w3 by T2.
  virtual StringSet unique_flanked_middles(int flank, int midlen, int T1, int T2) const = 0;
};

using SourcePtr = std::shared_ptr<const ObservationSource>;

// Observations of a branching random walk; a string occurs by T when some
// lineage segment spelling it ends at a generation <= T.
class TreeSource final : public ObservationSource {
 public:
  explicit TreeSource(std::shared_ptr<const ObservationTree> tree);

  Backend backend() const override { return Backend::tree; }
  int kappa() const override { return tree_->kappa(); }
  int dim() const override { return tree_->dim(); }
  bool occurs_before(std::span<const Color> s, int T) const override;
  StringSet observed_strings(int len, int T) const override;
  StringSet middle_completions(std::span<const Color> w1, std::span<const Color> w3, int midlen,
                               int T) const override;
  StringSet unique_flanked_middles(int flank, int midlen, int T1, int T2) const override;

  const ObservationTree& tree() const { return *tree_; }

 private:
  using Table = std::unordered_map<ColorString, int, ColorStringHash>;
  const Table& table(int len) const;

  std::shared_ptr<const ObservationTree> tree_;
  mutable std::mutex mu_;
  mutable std::unordered_map<int, std::unique_ptr<Table>> tables_;
};

// Idealized source: every nearest-neighbor path inside the window, of at most
// max_path_len points, is observed. Time arguments are ignored.
class CoverageSource final : public ObservationSource {
 public:
  CoverageSource(std::shared_ptr<const Scenery> scenery, const Box& window, int max_path_len);

  Backend backend() const override { return Backend::coverage; }
  int kappa() const override { return scenery_->kappa(); }
  int dim() const override { return scenery_->dim(); }
  bool occurs_before(std::span<const Color> s, int T) const override;
  StringSet observed_strings(int len, int T) const override;
  StringSet middle_completions(std::span<const Color> w1, std::span<const Color> w3, int midlen,
                               int T) const override;
  StringSet unique_flanked_middles(int flank, int midlen, int T1, int T2) const override;

  // A path generating s, empty if none.
  std::vector<Point> witness_path(std::span<const Color> s) const;
  const Box& window() const { return window_; }
  int max_path_len() const { return max_len_; }
  // Upper bound on the distinct-state work observed_strings may do.
  static constexpr std::size_t kMaxStates = 20'000'000;

 private:
  // Window cells whose paths can spell s, ending at the last letter.
  std::vector<char> end_set(std::span<const Color> s) const;
  std::vector<std::int32_t> end_cells(std::span<const Color> s) const;
  std::vector<char> start_set(std::span<const Color> s) const;

  std::shared_ptr<const Scenery> scenery_;
  Box window_;
  int max_len_;
  int deg_;
  std::vector<Color> color_;
  std::vector<std::int32_t> nbr_;  // deg_ entries per cell, -1 outside
  std::vector<std::vector<std::int32_t>> by_color_;
};

SourcePtr tree_source(std::shared_ptr<const ObservationTree> tree);
SourcePtr coverage_source(std::shared_ptr<const Scenery> scenery, const Box& window, int max_path_len);

}  // namespace sclab
