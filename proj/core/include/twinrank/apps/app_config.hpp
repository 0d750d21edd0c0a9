#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "twinrank/core/errors.hpp"
#include "twinrank/runtime/engine.hpp"

namespace twinrank::apps {

class UnknownApp : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Application selection and sizes. Zero means "use the desk default",
/// except for `iterations`, where zero sweeps is a valid program.
struct AppConfig {
  std::string name = "matmul";
  std::uint32_t size = 0;
  std::uint32_t nranks = 0;
  /// Jacobi sweeps.
  std::uint32_t iterations = 500;
  /// Matmul passes over the local rows.
  std::uint32_t repeats = 0;
  /// Jacobi sweeps / Smith-Waterman waves between checkpoints.
  std::uint32_t ckpt_every = 0;
  /// Smith-Waterman row-tile height.
  std::uint32_t tile = 0;
  std::uint64_t seed = 1;
  /// Matmul: A = B = identity. Smith-Waterman: both sequences equal.
  bool trivial_inputs = false;
};

/// Fills zero fields with the per-app defaults. Throws UnknownApp.
AppConfig with_defaults(AppConfig config);

/// Throws UnknownApp or ConfigError (size/rank constraints).
std::shared_ptr<const runtime::App> make_app(const AppConfig& config);

/// Builds `config.name` over `nranks` ranks and returns a run at stage 0.
runtime::Run spawn_replicated(AppConfig config, std::uint32_t nranks, runtime::ScheduleMode mode,
                              runtime::RunOptions options = {});

}  // namespace twinrank::apps
