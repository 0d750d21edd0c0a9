#include "twinrank/apps/jacobi.hpp"

#include <algorithm>
#include <string>

#include "twinrank/core/errors.hpp"
#include "twinrank/core/rng.hpp"

namespace twinrank::apps {

using runtime::Stage;
using runtime::StageKind;

JacobiApp::JacobiApp(std::uint32_t n, std::uint32_t iterations, std::uint32_t nranks,
                     std::uint32_t ckpt_every, std::uint64_t seed)
    : n_(n), iterations_(iterations), nranks_(nranks), rows_(0), ckpt_every_(ckpt_every),
      seed_(seed) {
  if (nranks < 1) throw ConfigError("jacobi needs at least 1 rank");
  if (n < 3) throw ConfigError("jacobi grid must be at least 3x3");
  if (n % nranks != 0) {
    throw ConfigError("jacobi N=" + std::to_string(n) + " not divisible by " +
                      std::to_string(nranks) + " ranks");
  }
  if (ckpt_every == 0) throw ConfigError("jacobi checkpoint interval must be positive");
  rows_ = n / nranks;
  build();
}

std::vector<double> JacobiApp::input_grid() const {
  Xorshift64Star rng(derive_seed(seed_, 3));
  std::vector<double> g(std::size_t{n_} * n_);
  for (auto& x : g) x = rng.uniform();
  return g;
}

State JacobiApp::initial_state(Rank rank) const {
  const std::vector<double> grid = input_grid();
  const std::size_t n = n_;
  // Local rows 0 and rows+1 are halos; a halo outside the grid stays zero.
  std::vector<double> u((rows_ + 2) * n, 0.0);
  const std::int64_t first = std::int64_t{rank.id} * rows_ - 1;
  for (std::int64_t lr = 0; lr < rows_ + 2; ++lr) {
    const std::int64_t g = first + lr;
    if (g < 0 || g >= static_cast<std::int64_t>(n_)) continue;
    std::copy_n(grid.begin() + g * static_cast<std::int64_t>(n), n, u.begin() + lr * static_cast<std::int64_t>(n));
  }
  State s;
  s.add("u", u).add("v", u).add("i", std::int64_t{0});
  if (rank.id == 0) s.add("grid", std::vector<double>(n * n, 0.0));
  return s;
}

std::vector<std::string> JacobiApp::significant_fields(Rank, const StageId&) const {
  return {"u"};
}

void JacobiApp::build() {
  const std::size_t n = n_;
  const std::uint32_t rows = rows_;
  const std::uint32_t nranks = nranks_;
  const std::uint32_t last_global = n_ - 1;

  State row_schema;
  row_schema.add("row", std::vector<double>{});
  State block_schema;
  block_schema.add("block", std::vector<double>{});

  std::uint32_t ordinal = 0;
  std::uint32_t ckpt = 0;
  auto add = [&](std::string label, StageKind kind) -> Stage& {
    Stage s;
    s.id = StageId{ordinal++, std::move(label)};
    s.kind = kind;
    stages_.push_back(std::move(s));
    return stages_.back();
  };
  add("CK" + std::to_string(ckpt++), StageKind::kCheckpoint);

  for (std::uint32_t it = 0; it < iterations_; ++it) {
    Stage& halo = add("HALO#" + std::to_string(it), StageKind::kExchange);
    for (std::uint32_t r = 0; r < nranks; ++r) {
      if (r > 0) {
        // First interior row becomes the upper neighbour's bottom halo.
        halo.transfers.push_back(runtime::Transfer{
            Rank{r}, Rank{r - 1}, kTagUp,
            [n](const State& s) {
              const auto& u = s.f64s("u");
              State p;
              p.add("row", std::vector<double>(u.begin() + n, u.begin() + 2 * n));
              return p;
            },
            [n, rows](State& s, const State& p) {
              const auto& row = p.f64s("row");
              std::copy(row.begin(), row.end(), s.f64s("u").begin() + (rows + 1) * n);
            },
            row_schema});
      }
      if (r + 1 < nranks) {
        halo.transfers.push_back(runtime::Transfer{
            Rank{r}, Rank{r + 1}, kTagDown,
            [n, rows](const State& s) {
              const auto& u = s.f64s("u");
              State p;
              p.add("row", std::vector<double>(u.begin() + rows * n, u.begin() + (rows + 1) * n));
              return p;
            },
            [](State& s, const State& p) {
              const auto& row = p.f64s("row");
              std::copy(row.begin(), row.end(), s.f64s("u").begin());
            },
            row_schema});
      }
    }

    Stage& sweep = add("SWEEP#" + std::to_string(it), StageKind::kCompute);
    for (std::uint32_t r = 0; r < nranks; ++r) sweep.compute.ranks.push_back(Rank{r});
    sweep.compute.begin = [](Rank, State& s) { s.i64("i") = 0; };
    sweep.compute.step = [n, rows, last_global](Rank rank, State& s) {
      std::int64_t& i = s.i64("i");
      if (i >= rows) return false;
      const std::size_t lr = static_cast<std::size_t>(i) + 1;
      const std::uint32_t g = rank.id * rows + static_cast<std::uint32_t>(i);
      const auto& u = s.f64s("u");
      auto& v = s.f64s("v");
      const double* up = u.data() + (lr - 1) * n;
      const double* mid = u.data() + lr * n;
      const double* down = u.data() + (lr + 1) * n;
      double* out = v.data() + lr * n;
      if (g == 0 || g == last_global) {
        std::copy(mid, mid + n, out);
      } else {
        out[0] = mid[0];
        out[n - 1] = mid[n - 1];
        for (std::size_t j = 1; j + 1 < n; ++j) {
          out[j] = 0.25 * (up[j] + down[j] + mid[j - 1] + mid[j + 1]);
        }
      }
      ++i;
      return true;
    };
    sweep.compute.finish = [](Rank, State& s) { std::swap(s.f64s("u"), s.f64s("v")); };
    sweep.compute.step_bound = [rows](Rank) { return std::uint64_t{rows}; };

    if ((it + 1) % ckpt_every_ == 0 && it + 1 < iterations_) {
      add("CK" + std::to_string(ckpt++), StageKind::kCheckpoint);
    }
  }

  Stage& gather = add("GATHER", StageKind::kExchange);
  for (std::uint32_t r = 0; r < nranks; ++r) {
    const std::size_t offset = std::size_t{r} * rows * n;
    gather.transfers.push_back(runtime::Transfer{
        Rank{r}, Rank{0}, kTagGather,
        [n, rows](const State& s) {
          const auto& u = s.f64s("u");
          State p;
          p.add("block", std::vector<double>(u.begin() + n, u.begin() + (rows + 1) * n));
          return p;
        },
        [offset](State& s, const State& p) {
          const auto& b = p.f64s("block");
          std::copy(b.begin(), b.end(), s.f64s("grid").begin() + static_cast<std::ptrdiff_t>(offset));
        },
        block_schema});
  }

  Stage& validate = add("VALIDATE", StageKind::kValidate);
  validate.results.push_back(runtime::ResultSpec{Rank{0}, {"grid"}});
}

}  // namespace twinrank::apps
