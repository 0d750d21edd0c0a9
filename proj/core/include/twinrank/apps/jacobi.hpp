#pragma once

#include <cstdint>
#include <vector>

#include "twinrank/runtime/program.hpp"

namespace twinrank::apps {

/// Jacobi relaxation of Laplace's equation on an N x N grid with fixed
/// boundary. Block rows of N/P per rank plus one halo row on each side;
/// every sweep is preceded by a halo exchange. Rank 0 gathers the grid.
class JacobiApp final : public runtime::App {
 public:
  static constexpr int kTagUp = 10;
  static constexpr int kTagDown = 11;
  static constexpr int kTagGather = 12;

  /// Throws ConfigError unless N >= 3 and N divisible by nranks.
  JacobiApp(std::uint32_t n, std::uint32_t iterations, std::uint32_t nranks,
            std::uint32_t ckpt_every, std::uint64_t seed);

  std::string_view name() const override { return "jacobi"; }
  std::uint32_t rank_count() const override { return nranks_; }
  const std::vector<runtime::Stage>& stages() const override { return stages_; }
  State initial_state(Rank rank) const override;
  std::vector<std::string> significant_fields(Rank rank, const StageId& ckpt) const override;

  std::uint32_t size() const noexcept { return n_; }
  std::uint32_t iterations() const noexcept { return iterations_; }
  std::uint32_t rows_per_rank() const noexcept { return rows_; }

  /// Seeded initial grid, row-major N x N, values in [0, 1).
  std::vector<double> input_grid() const;

 private:
  void build();

  std::uint32_t n_;
  std::uint32_t iterations_;
  std::uint32_t nranks_;
  std::uint32_t rows_;
  std::uint32_t ckpt_every_;
  std::uint64_t seed_;
  std::vector<runtime::Stage> stages_;
};

}  // namespace twinrank::apps
