#pragma once

#include <cstdint>
#include <vector>

#include "twinrank/runtime/program.hpp"

namespace twinrank::apps {

/// Local alignment score, linear gap. Fixed scoring.
inline constexpr std::int64_t kSwMatch = 1;
inline constexpr std::int64_t kSwMismatch = -1;
inline constexpr std::int64_t kSwGap = -2;

/// Smith-Waterman over a chain of ranks. Rank r owns a block of columns
/// of the similarity matrix; rows advance in tiles, and after each wave a
/// rank hands the last column of its tile to rank r+1. Rank 0 reduces the
/// per-rank maxima into the final score, the only validated result.
class SmithWatermanApp final : public runtime::App {
 public:
  static constexpr int kTagEdge = 20;
  static constexpr int kTagReduce = 21;

  /// Throws ConfigError unless N >= nranks >= 1 and tile >= 1.
  SmithWatermanApp(std::uint32_t n, std::uint32_t nranks, std::uint32_t tile,
                   std::uint32_t ckpt_every, std::uint64_t seed, bool identical);

  std::string_view name() const override { return "sw"; }
  std::uint32_t rank_count() const override { return nranks_; }
  const std::vector<runtime::Stage>& stages() const override { return stages_; }
  State initial_state(Rank rank) const override;
  std::vector<std::string> significant_fields(Rank rank, const StageId& ckpt) const override;

  std::uint32_t size() const noexcept { return n_; }
  std::uint32_t tile() const noexcept { return tile_; }
  std::uint32_t tiles() const noexcept { return tiles_; }
  std::uint32_t column_begin(std::uint32_t rank) const noexcept;

  /// Sequences as codes 0..3 (A, C, G, T).
  std::vector<std::int64_t> sequence_a() const;
  std::vector<std::int64_t> sequence_b() const;

 private:
  void build();

  std::uint32_t n_;
  std::uint32_t nranks_;
  std::uint32_t tile_;
  std::uint32_t tiles_;
  std::uint32_t ckpt_every_;
  std::uint64_t seed_;
  bool identical_;
  std::vector<runtime::Stage> stages_;
};

}  // namespace twinrank::apps
