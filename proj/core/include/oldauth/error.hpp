#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oldauth {

// Base of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller handed us something that violates an input contract
// (wrong response length, value outside the configured domain, ...).
class MalformedInput : public Error {
 public:
  using Error::Error;
};

// Text or binary input that failed to parse. `position` is a 1-based line
// number for text formats and a 0-based byte offset for binary ones.
class ParseError : public Error {
 public:
  enum class Unit { line, byte_offset };

  ParseError(Unit unit, std::size_t position, const std::string& what)
      : Error(format(unit, position, what)), unit_(unit), position_(position) {}

  Unit unit() const noexcept { return unit_; }
  std::size_t position() const noexcept { return position_; }

 private:
  static std::string format(Unit unit, std::size_t position, const std::string& what) {
    return (unit == Unit::line ? "line " : "offset ") + std::to_string(position) + ": " + what;
  }

  Unit unit_;
  std::size_t position_;
};

// Every extra-digit guess produced an empty polygon set for a pair.
class NoPolygonError : public Error {
 public:
  using Error::Error;
};

// Lattice extraction would exceed the configured point budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::size_t budget)
      : Error(what), budget_(budget) {}

  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t budget_;
};

}  // namespace oldauth
