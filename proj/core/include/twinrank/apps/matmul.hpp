#pragma once

#include <cstdint>
#include <vector>

#include "twinrank/runtime/program.hpp"

namespace twinrank::apps {

/// Master/Worker matrix product C = A x B. Rank 0 is the Master and keeps
/// the three full N x N matrices; ranks 1..P-1 each compute N/(P-1) rows.
/// Stages: CK0 SCATTER CK1 BCAST CK2 MATMUL GATHER CK3 VALIDATE.
class MatmulApp final : public runtime::App {
 public:
  static constexpr std::uint32_t kCk0 = 0, kScatter = 1, kCk1 = 2, kBcast = 3, kCk2 = 4,
                                 kMatmul = 5, kGather = 6, kCk3 = 7, kValidate = 8;

  /// Throws ConfigError unless nranks >= 2 and N divisible by nranks - 1.
  MatmulApp(std::uint32_t n, std::uint32_t nranks, std::uint32_t repeats, std::uint64_t seed,
            bool identity_inputs);

  std::string_view name() const override { return "matmul"; }
  std::uint32_t rank_count() const override { return nranks_; }
  const std::vector<runtime::Stage>& stages() const override { return stages_; }
  State initial_state(Rank rank) const override;
  std::vector<std::string> significant_fields(Rank rank, const StageId& ckpt) const override;

  std::uint32_t size() const noexcept { return n_; }
  std::uint32_t workers() const noexcept { return nranks_ - 1; }
  std::uint32_t rows_per_worker() const noexcept { return rows_; }
  std::uint32_t repeats() const noexcept { return repeats_; }
  /// First global row of worker `w` (1-based worker rank).
  std::uint32_t first_row(std::uint32_t w) const noexcept { return (w - 1) * rows_; }

  /// Seeded inputs, row-major N x N.
  std::vector<double> input_a() const;
  std::vector<double> input_b() const;

 private:
  void build();

  std::uint32_t n_;
  std::uint32_t nranks_;
  std::uint32_t rows_;
  std::uint32_t repeats_;
  std::uint64_t seed_;
  bool identity_;
  std::vector<runtime::Stage> stages_;
};

}  // namespace twinrank::apps
