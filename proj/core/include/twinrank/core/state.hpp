#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace twinrank {

using Value = std::variant<std::int64_t, double, std::vector<double>,
                           std::vector<std::int64_t>>;

struct Field {
  std::string name;
  Value value;

  friend bool operator==(const Field&, const Field&) = default;
};

/// Ordered list of named numeric fields: the private data of one strand.
///
/// Field order is part of the schema; two states share a schema when they
/// hold the same names with the same alternatives in the same order.
class State {
 public:
  State() = default;

  /// Appends a field. Throws std::invalid_argument on a duplicate name.
  State& add(std::string name, Value value);

  bool empty() const noexcept { return fields_.empty(); }
  std::size_t size() const noexcept { return fields_.size(); }
  const std::vector<Field>& fields() const noexcept { return fields_; }

  bool contains(std::string_view name) const noexcept;

  /// Throws std::out_of_range for unknown names and std::bad_variant_access
  /// when the field holds a different alternative.
  Value& at(std::string_view name);
  const Value& at(std::string_view name) const;

  std::int64_t& i64(std::string_view name);
  std::int64_t i64(std::string_view name) const;
  double& f64(std::string_view name);
  double f64(std::string_view name) const;
  std::vector<double>& f64s(std::string_view name);
  const std::vector<double>& f64s(std::string_view name) const;
  std::vector<std::int64_t>& i64s(std::string_view name);
  const std::vector<std::int64_t>& i64s(std::string_view name) const;

  /// Copy of the named fields, in the order given.
  State select(std::span<const std::string> names) const;

  /// Overwrites same-named fields with the values held by `other`.
  void assign_from(const State& other);

  friend bool operator==(const State&, const State&) = default;

 private:
  std::vector<Field> fields_;
};

}  // namespace twinrank
