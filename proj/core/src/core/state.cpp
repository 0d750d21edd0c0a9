#include "twinrank/core/state.hpp"

#include <algorithm>
#include <stdexcept>

namespace twinrank {

namespace {

template <typename Fields>
auto find_field(Fields& fields, std::string_view name) {
  return std::find_if(fields.begin(), fields.end(),
                      [name](const Field& f) { return f.name == name; });
}

}  // namespace

State& State::add(std::string name, Value value) {
  if (contains(name)) {
    throw std::invalid_argument("duplicate state field: " + name);
  }
  fields_.push_back(Field{std::move(name), std::move(value)});
  return *this;
}

bool State::contains(std::string_view name) const noexcept {
  return find_field(fields_, name) != fields_.end();
}

Value& State::at(std::string_view name) {
  auto it = find_field(fields_, name);
  if (it == fields_.end()) {
    throw std::out_of_range("no state field: " + std::string(name));
  }
  return it->value;
}

const Value& State::at(std::string_view name) const {
  auto it = find_field(fields_, name);
  if (it == fields_.end()) {
    throw std::out_of_range("no state field: " + std::string(name));
  }
  return it->value;
}

std::int64_t& State::i64(std::string_view name) { return std::get<std::int64_t>(at(name)); }
std::int64_t State::i64(std::string_view name) const { return std::get<std::int64_t>(at(name)); }
double& State::f64(std::string_view name) { return std::get<double>(at(name)); }
double State::f64(std::string_view name) const { return std::get<double>(at(name)); }

std::vector<double>& State::f64s(std::string_view name) {
  return std::get<std::vector<double>>(at(name));
}
const std::vector<double>& State::f64s(std::string_view name) const {
  return std::get<std::vector<double>>(at(name));
}
std::vector<std::int64_t>& State::i64s(std::string_view name) {
  return std::get<std::vector<std::int64_t>>(at(name));
}
const std::vector<std::int64_t>& State::i64s(std::string_view name) const {
  return std::get<std::vector<std::int64_t>>(at(name));
}

State State::select(std::span<const std::string> names) const {
  State out;
  for (const auto& name : names) out.add(name, at(name));
  return out;
}

void State::assign_from(const State& other) {
  for (const auto& f : other.fields()) {
    Value& slot = at(f.name);
    if (slot.index() != f.value.index()) {
      throw std::invalid_argument("type mismatch assigning field " + f.name);
    }
    slot = f.value;
  }
}

}  // namespace twinrank
