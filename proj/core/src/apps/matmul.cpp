#include "twinrank/apps/matmul.hpp"

#include <algorithm>
#include <string>

#include "twinrank/core/errors.hpp"
#include "twinrank/core/rng.hpp"

namespace twinrank::apps {

namespace {

using runtime::Stage;
using runtime::StageKind;

constexpr int kTagScatter = 1;
constexpr int kTagBcast = 2;
constexpr int kTagGather = 3;

std::vector<double> seeded_matrix(std::uint32_t n, std::uint64_t seed, std::uint64_t stream) {
  Xorshift64Star rng(derive_seed(seed, stream));
  std::vector<double> m(std::size_t{n} * n);
  for (auto& x : m) x = 0.5 + rng.uniform();
  return m;
}

std::vector<double> identity(std::uint32_t n) {
  std::vector<double> m(std::size_t{n} * n, 0.0);
  for (std::uint32_t i = 0; i < n; ++i) m[std::size_t{i} * n + i] = 1.0;
  return m;
}

Stage make_stage(std::uint32_t ordinal, const char* label, StageKind kind) {
  Stage s;
  s.id = StageId{ordinal, label};
  s.kind = kind;
  return s;
}

}  // namespace

MatmulApp::MatmulApp(std::uint32_t n, std::uint32_t nranks, std::uint32_t repeats,
                     std::uint64_t seed, bool identity_inputs)
    : n_(n), nranks_(nranks), rows_(0), repeats_(repeats), seed_(seed), identity_(identity_inputs) {
  if (nranks < 2) throw ConfigError("matmul needs at least 2 ranks (Master + 1 Worker)");
  if (n == 0) throw ConfigError("matmul size must be positive");
  if (repeats == 0) throw ConfigError("matmul repeats must be positive");
  if (n % (nranks - 1) != 0) {
    throw ConfigError("matmul N=" + std::to_string(n) + " not divisible by " +
                      std::to_string(nranks - 1) + " workers");
  }
  rows_ = n / (nranks - 1);
  build();
}

std::vector<double> MatmulApp::input_a() const {
  return identity_ ? identity(n_) : seeded_matrix(n_, seed_, 1);
}

std::vector<double> MatmulApp::input_b() const {
  return identity_ ? identity(n_) : seeded_matrix(n_, seed_, 2);
}

State MatmulApp::initial_state(Rank rank) const {
  const std::size_t nn = std::size_t{n_} * n_;
  const std::size_t chunk = std::size_t{rows_} * n_;
  State s;
  if (rank.id == 0) {
    s.add("A", input_a()).add("B", input_b()).add("C", std::vector<double>(nn, 0.0));
  } else {
    s.add("A", std::vector<double>(chunk, 0.0))
        .add("B", std::vector<double>(nn, 0.0))
        .add("C", std::vector<double>(chunk, 0.0))
        .add("i", std::int64_t{0});
  }
  return s;
}

std::vector<std::string> MatmulApp::significant_fields(Rank rank, const StageId& ckpt) const {
  const bool master = rank.id == 0;
  switch (ckpt.ordinal) {
    case kCk0: return master ? std::vector<std::string>{"A", "B"} : std::vector<std::string>{};
    case kCk1: return master ? std::vector<std::string>{"B"} : std::vector<std::string>{"A"};
    case kCk2: return master ? std::vector<std::string>{} : std::vector<std::string>{"A", "B"};
    case kCk3: return master ? std::vector<std::string>{"C"} : std::vector<std::string>{};
    default: throw std::invalid_argument("not a matmul checkpoint: " + ckpt.label);
  }
}

void MatmulApp::build() {
  const std::uint32_t n = n_;
  const std::uint32_t rows = rows_;
  const std::size_t chunk = std::size_t{rows} * n;

  stages_.push_back(make_stage(kCk0, "CK0", StageKind::kCheckpoint));

  Stage scatter = make_stage(kScatter, "SCATTER", StageKind::kExchange);
  Stage bcast = make_stage(kBcast, "BCAST", StageKind::kExchange);
  Stage gather = make_stage(kGather, "GATHER", StageKind::kExchange);
  State chunk_schema;
  chunk_schema.add("A", std::vector<double>{});
  State b_schema;
  b_schema.add("B", std::vector<double>{});
  State c_schema;
  c_schema.add("C", std::vector<double>{});

  for (std::uint32_t w = 1; w < nranks_; ++w) {
    const std::size_t offset = std::size_t{first_row(w)} * n;
    scatter.transfers.push_back(runtime::Transfer{
        Rank{0}, Rank{w}, kTagScatter,
        [offset, chunk](const State& m) {
          const auto& a = m.f64s("A");
          State p;
          p.add("A", std::vector<double>(a.begin() + offset, a.begin() + offset + chunk));
          return p;
        },
        [](State& wk, const State& p) { wk.f64s("A") = p.f64s("A"); }, chunk_schema});
    bcast.transfers.push_back(runtime::Transfer{
        Rank{0}, Rank{w}, kTagBcast,
        [](const State& m) {
          State p;
          p.add("B", m.f64s("B"));
          return p;
        },
        [](State& wk, const State& p) { wk.f64s("B") = p.f64s("B"); }, b_schema});
    gather.transfers.push_back(runtime::Transfer{
        Rank{w}, Rank{0}, kTagGather,
        [](const State& wk) {
          State p;
          p.add("C", wk.f64s("C"));
          return p;
        },
        [offset](State& m, const State& p) {
          const auto& c = p.f64s("C");
          std::copy(c.begin(), c.end(), m.f64s("C").begin() + static_cast<std::ptrdiff_t>(offset));
        },
        c_schema});
  }

  stages_.push_back(std::move(scatter));
  stages_.push_back(make_stage(kCk1, "CK1", StageKind::kCheckpoint));
  stages_.push_back(std::move(bcast));
  stages_.push_back(make_stage(kCk2, "CK2", StageKind::kCheckpoint));

  Stage mm = make_stage(kMatmul, "MATMUL", StageKind::kCompute);
  for (std::uint32_t w = 1; w < nranks_; ++w) mm.compute.ranks.push_back(Rank{w});
  const std::int64_t total = std::int64_t{rows} * repeats_;
  mm.compute.begin = [](Rank, State& s) { s.i64("i") = 0; };
  mm.compute.step = [n, rows, total](Rank, State& s) {
    std::int64_t& i = s.i64("i");
    if (i >= total) return false;
    const std::size_t r = static_cast<std::size_t>(i % rows);
    const auto& a = s.f64s("A");
    const auto& b = s.f64s("B");
    auto& c = s.f64s("C");
    double* crow = c.data() + r * n;
    std::fill(crow, crow + n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a[r * n + k];
      const double* brow = b.data() + k * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
    ++i;
    return true;
  };
  mm.compute.step_bound = [total](Rank) { return static_cast<std::uint64_t>(total); };
  stages_.push_back(std::move(mm));

  stages_.push_back(std::move(gather));
  stages_.push_back(make_stage(kCk3, "CK3", StageKind::kCheckpoint));

  Stage validate = make_stage(kValidate, "VALIDATE", StageKind::kValidate);
  validate.results.push_back(runtime::ResultSpec{Rank{0}, {"C"}});
  stages_.push_back(std::move(validate));
}

}  // namespace twinrank::apps
