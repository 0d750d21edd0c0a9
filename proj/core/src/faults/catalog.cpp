#include "twinrank/faults/catalog.hpp"

#include <stdexcept>
#include <string>

#include "twinrank/faults/predict.hpp"

namespace twinrank::faults {

namespace {

struct Row {
  const char* from;
  const char* to;
  Role role;
  Datum datum;
  RowPick row;
};

constexpr Role M = Role::kMaster;
constexpr Role W = Role::kWorker;
constexpr RowPick F = RowPick::kFirst;
constexpr RowPick L = RowPick::kLast;

// Ordered by window, Master data before Worker data. The pre-CK0 classes
// other than the first and the index / mid-MATMUL row splits are grouped
// after the regular blocks.
constexpr Row kRows[kCatalogSize] = {
    {"INIT", "CK0", M, Datum::kA, F},
    {"CK0", "SCATTER", M, Datum::kA, F},
    {"CK0", "SCATTER", M, Datum::kB, F},
    {"CK0", "SCATTER", M, Datum::kC, F},
    {"CK0", "SCATTER", W, Datum::kA, F},
    {"CK0", "SCATTER", W, Datum::kB, F},
    {"CK0", "SCATTER", W, Datum::kC, F},
    {"SCATTER", "CK1", M, Datum::kA, F},
    {"SCATTER", "CK1", M, Datum::kB, F},
    {"SCATTER", "CK1", M, Datum::kC, F},
    {"SCATTER", "CK1", W, Datum::kA, F},
    {"SCATTER", "CK1", W, Datum::kB, F},
    {"SCATTER", "CK1", W, Datum::kC, F},
    {"CK1", "BCAST", M, Datum::kA, F},
    {"CK1", "BCAST", M, Datum::kB, F},
    {"CK1", "BCAST", M, Datum::kC, F},
    {"CK1", "BCAST", W, Datum::kA, F},
    {"CK1", "BCAST", W, Datum::kB, F},
    {"CK1", "BCAST", W, Datum::kC, F},
    {"INIT", "CK0", M, Datum::kB, F},
    {"INIT", "CK0", M, Datum::kC, F},
    {"INIT", "CK0", W, Datum::kA, F},
    {"INIT", "CK0", W, Datum::kB, F},
    {"BCAST", "CK2", M, Datum::kA, F},
    {"BCAST", "CK2", M, Datum::kB, F},
    {"BCAST", "CK2", M, Datum::kC, F},
    {"BCAST", "CK2", W, Datum::kA, F},
    {"BCAST", "CK2", W, Datum::kB, F},
    {"BCAST", "CK2", W, Datum::kC, F},
    {"CK2", "MATMUL", M, Datum::kA, F},
    {"CK2", "MATMUL", M, Datum::kB, F},
    {"CK2", "MATMUL", M, Datum::kC, F},
    {"CK2", "MATMUL", W, Datum::kA, F},
    {"CK2", "MATMUL", W, Datum::kB, F},
    {"CK2", "MATMUL", W, Datum::kC, F},
    {"MATMUL", "MATMUL", M, Datum::kA, F},
    {"MATMUL", "MATMUL", M, Datum::kB, F},
    {"MATMUL", "MATMUL", M, Datum::kC, F},
    {"MATMUL", "MATMUL", W, Datum::kA, L},
    {"MATMUL", "MATMUL", W, Datum::kB, F},
    {"MATMUL", "MATMUL", W, Datum::kC, F},
    {"MATMUL", "GATHER", M, Datum::kA, F},
    {"MATMUL", "GATHER", M, Datum::kB, F},
    {"MATMUL", "GATHER", M, Datum::kC, F},
    {"MATMUL", "GATHER", W, Datum::kA, F},
    {"MATMUL", "GATHER", W, Datum::kB, F},
    {"MATMUL", "GATHER", W, Datum::kC, F},
    {"GATHER", "CK3", M, Datum::kA, F},
    {"GATHER", "CK3", M, Datum::kB, F},
    {"GATHER", "CK3", M, Datum::kC, F},
    {"GATHER", "CK3", W, Datum::kA, F},
    {"GATHER", "CK3", W, Datum::kB, F},
    {"GATHER", "CK3", W, Datum::kC, F},
    {"INIT", "CK0", W, Datum::kC, F},
    {"MATMUL", "MATMUL", W, Datum::kA, F},
    {"MATMUL", "MATMUL", W, Datum::kC, L},
    {"CK2", "MATMUL", W, Datum::kIndex, F},
    {"MATMUL", "GATHER", W, Datum::kIndex, F},
    {"MATMUL", "MATMUL", W, Datum::kIndex, F},
    {"CK3", "VALIDATE", M, Datum::kA, F},
    {"CK3", "VALIDATE", M, Datum::kB, F},
    {"CK3", "VALIDATE", M, Datum::kC, F},
    {"CK3", "VALIDATE", W, Datum::kA, F},
    {"CK3", "VALIDATE", W, Datum::kC, F},
};

}  // namespace

std::vector<Scenario> catalog() {
  std::vector<Scenario> out;
  out.reserve(kCatalogSize);
  for (int i = 0; i < kCatalogSize; ++i) {
    const Row& r = kRows[i];
    FaultSpec spec;
    spec.scenario_id = i + 1;
    spec.window = Window{r.from, r.to};
    spec.role = r.role;
    spec.datum = r.datum;
    spec.row = r.row;
    out.push_back(Scenario{spec, predict(spec)});
  }
  return out;
}

Scenario scenario(int id) {
  if (id < 1 || id > kCatalogSize) {
    throw std::out_of_range("scenario id must be in 1.." + std::to_string(kCatalogSize));
  }
  return catalog()[static_cast<std::size_t>(id - 1)];
}

}  // namespace twinrank::faults
