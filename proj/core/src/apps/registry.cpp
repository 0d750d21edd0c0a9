#include "twinrank/apps/app_config.hpp"

#include <algorithm>

#include "twinrank/apps/jacobi.hpp"
#include "twinrank/apps/matmul.hpp"
#include "twinrank/apps/smith_waterman.hpp"

namespace twinrank::apps {

AppConfig with_defaults(AppConfig c) {
  auto fill = [](std::uint32_t& v, std::uint32_t d) {
    if (v == 0) v = d;
  };
  if (c.name == "matmul") {
    fill(c.size, 256);
    fill(c.nranks, 5);
    fill(c.repeats, 1);
  } else if (c.name == "jacobi") {
    fill(c.size, 256);
    fill(c.nranks, 4);
    fill(c.ckpt_every, std::max<std::uint32_t>(1, c.iterations / 5));
  } else if (c.name == "sw") {
    fill(c.size, 4096);
    fill(c.nranks, 4);
    fill(c.tile, std::max<std::uint32_t>(1, c.size / (4 * c.nranks)));
    fill(c.ckpt_every, 4);
  } else {
    throw UnknownApp("unknown app: " + c.name + " (expected matmul, jacobi or sw)");
  }
  return c;
}

std::shared_ptr<const runtime::App> make_app(const AppConfig& config) {
  const AppConfig c = with_defaults(config);
  if (c.name == "matmul") {
    return std::make_shared<MatmulApp>(c.size, c.nranks, c.repeats, c.seed, c.trivial_inputs);
  }
  if (c.name == "jacobi") {
    return std::make_shared<JacobiApp>(c.size, c.iterations, c.nranks, c.ckpt_every, c.seed);
  }
  return std::make_shared<SmithWatermanApp>(c.size, c.nranks, c.tile, c.ckpt_every, c.seed,
                                            c.trivial_inputs);
}

runtime::Run spawn_replicated(AppConfig config, std::uint32_t nranks, runtime::ScheduleMode mode,
                              runtime::RunOptions options) {
  config.nranks = nranks;
  options.mode = mode;
  return runtime::Run(make_app(config), options);
}

}  // namespace twinrank::apps
