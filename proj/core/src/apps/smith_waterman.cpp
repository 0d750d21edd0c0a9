#include "twinrank/apps/smith_waterman.hpp"

#include <algorithm>
#include <string>

#include "twinrank/core/errors.hpp"
#include "twinrank/core/rng.hpp"

namespace twinrank::apps {

using runtime::Stage;
using runtime::StageKind;

namespace {

std::vector<std::int64_t> seeded_sequence(std::uint32_t n, std::uint64_t seed, std::uint64_t stream) {
  Xorshift64Star rng(derive_seed(seed, stream));
  std::vector<std::int64_t> s(n);
  for (auto& c : s) c = static_cast<std::int64_t>(rng.below(4));
  return s;
}

}  // namespace

SmithWatermanApp::SmithWatermanApp(std::uint32_t n, std::uint32_t nranks, std::uint32_t tile,
                                   std::uint32_t ckpt_every, std::uint64_t seed, bool identical)
    : n_(n), nranks_(nranks), tile_(tile), tiles_(0), ckpt_every_(ckpt_every), seed_(seed),
      identical_(identical) {
  if (nranks < 1) throw ConfigError("sw needs at least 1 rank");
  if (n < nranks) {
    throw ConfigError("sw sequence length " + std::to_string(n) + " below rank count " +
                      std::to_string(nranks));
  }
  if (tile == 0) throw ConfigError("sw tile height must be positive");
  if (ckpt_every == 0) throw ConfigError("sw checkpoint interval must be positive");
  tiles_ = (n + tile - 1) / tile;
  build();
}

std::uint32_t SmithWatermanApp::column_begin(std::uint32_t rank) const noexcept {
  return static_cast<std::uint32_t>(std::uint64_t{rank} * n_ / nranks_);
}

std::vector<std::int64_t> SmithWatermanApp::sequence_a() const { return seeded_sequence(n_, seed_, 4); }

std::vector<std::int64_t> SmithWatermanApp::sequence_b() const {
  return identical_ ? sequence_a() : seeded_sequence(n_, seed_, 5);
}

State SmithWatermanApp::initial_state(Rank rank) const {
  const std::uint32_t c0 = column_begin(rank.id);
  const std::uint32_t c1 = column_begin(rank.id + 1);
  const auto b = sequence_b();
  State s;
  s.add("a", sequence_a())
      .add("b", std::vector<std::int64_t>(b.begin() + c0, b.begin() + c1))
      .add("hrow", std::vector<std::int64_t>(c1 - c0 + 1, 0))
      .add("left", std::vector<std::int64_t>(tile_, 0))
      .add("edge", std::vector<std::int64_t>(tile_, 0))
      .add("best", std::int64_t{0})
      .add("tile", std::int64_t{0})
      .add("i", std::int64_t{0});
  if (rank.id == 0) s.add("score", std::int64_t{0});
  return s;
}

std::vector<std::string> SmithWatermanApp::significant_fields(Rank, const StageId&) const {
  return {"hrow", "left", "best"};
}

void SmithWatermanApp::build() {
  const std::uint32_t n = n_;
  const std::uint32_t h = tile_;
  const std::uint32_t tiles = tiles_;
  const std::uint32_t waves = tiles_ + nranks_ - 1;

  State edge_schema;
  edge_schema.add("left", std::vector<std::int64_t>{});
  State best_schema;
  best_schema.add("best", std::int64_t{0});

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

  for (std::uint32_t w = 0; w < waves; ++w) {
    Stage& tile_stage = add("TILE#" + std::to_string(w), StageKind::kCompute);
    for (std::uint32_t r = 0; r < nranks_; ++r) {
      if (w >= r && w - r < tiles) tile_stage.compute.ranks.push_back(Rank{r});
    }
    tile_stage.compute.begin = [w](Rank rank, State& s) {
      s.i64("tile") = w - rank.id;
      s.i64("i") = 0;
      if (rank.id == 0) std::fill(s.i64s("left").begin(), s.i64s("left").end(), 0);
    };
    tile_stage.compute.step = [n, h](Rank, State& s) {
      const std::int64_t row0 = s.i64("tile") * h;
      const std::int64_t height = std::min<std::int64_t>(h, n - row0);
      std::int64_t& i = s.i64("i");
      if (i >= height) return false;
      const std::int64_t ai = s.i64s("a")[static_cast<std::size_t>(row0 + i)];
      const auto& b = s.i64s("b");
      auto& row = s.i64s("hrow");
      std::int64_t best = s.i64("best");
      // row[0] is column c0-1 (the left neighbour); row[j] is own column j-1.
      std::int64_t diag = row[0];
      row[0] = s.i64s("left")[static_cast<std::size_t>(i)];
      for (std::size_t j = 1; j < row.size(); ++j) {
        const std::int64_t up = row[j];
        const std::int64_t score = diag + (ai == b[j - 1] ? kSwMatch : kSwMismatch);
        const std::int64_t v = std::max({std::int64_t{0}, score, up + kSwGap, row[j - 1] + kSwGap});
        diag = up;
        row[j] = v;
        best = std::max(best, v);
      }
      s.i64("best") = best;
      s.i64s("edge")[static_cast<std::size_t>(i)] = row.back();
      ++i;
      return true;
    };
    tile_stage.compute.step_bound = [n, h, w](Rank rank) {
      const std::uint64_t row0 = std::uint64_t{w - rank.id} * h;
      return std::min<std::uint64_t>(h, n - row0);
    };

    Stage& pass = add("PASS#" + std::to_string(w), StageKind::kExchange);
    for (std::uint32_t r = 0; r + 1 < nranks_; ++r) {
      if (w < r || w - r >= tiles) continue;
      pass.transfers.push_back(runtime::Transfer{
          Rank{r}, Rank{r + 1}, kTagEdge,
          [](const State& s) {
            State p;
            p.add("left", s.i64s("edge"));
            return p;
          },
          [](State& s, const State& p) { s.i64s("left") = p.i64s("left"); }, edge_schema});
    }

    if ((w + 1) % ckpt_every_ == 0 && w + 1 < waves) {
      add("CK" + std::to_string(ckpt++), StageKind::kCheckpoint);
    }
  }

  Stage& reduce = add("REDUCE", StageKind::kExchange);
  for (std::uint32_t r = 0; r < nranks_; ++r) {
    reduce.transfers.push_back(runtime::Transfer{
        Rank{r}, Rank{0}, kTagReduce,
        [](const State& s) {
          State p;
          p.add("best", s.i64("best"));
          return p;
        },
        [](State& s, const State& p) { s.i64("score") = std::max(s.i64("score"), p.i64("best")); },
        best_schema});
  }

  Stage& validate = add("VALIDATE", StageKind::kValidate);
  validate.results.push_back(runtime::ResultSpec{Rank{0}, {"score"}});
}

}  // namespace twinrank::apps
