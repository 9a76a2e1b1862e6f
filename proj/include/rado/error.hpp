#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace rado {

// Bad user input: malformed vectors, non-invertible scalars, empty supports.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A caller violated an operation's precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A lemma engine was handed an instance whose hypotheses do not hold.
// Distinct from a failed verdict: nothing about the lemma is contradicted.
class HypothesisFail : public std::runtime_error {
 public:
  HypothesisFail(std::string lemma, std::string hypothesis, double measured,
                 double required)
      : std::runtime_error(lemma + ": hypothesis '" + hypothesis +
                           "' failed (measured " + std::to_string(measured) +
                           ", required " + std::to_string(required) + ")"),
        lemma_(std::move(lemma)),
        hypothesis_(std::move(hypothesis)),
        measured_(measured),
        required_(required) {}

  const std::string& lemma() const { return lemma_; }
  const std::string& hypothesis() const { return hypothesis_; }
  double measured() const { return measured_; }
  double required() const { return required_; }

 private:
  std::string lemma_;
  std::string hypothesis_;
  double measured_;
  double required_;
};

// A bounded search ran out of budget (grid, retries, codimension, n_max).
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A constructive step failed at valid hypotheses; with the default constants
// this points at the constant book, not at the mathematics.
class ConstantsMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A proven inequality was observed to fail. Always an implementation bug.
class LemmaViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace checked {

inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw InputError("integer overflow in addition");
  return out;
}

inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_sub_overflow(a, b, &out)) throw InputError("integer overflow in subtraction");
  return out;
}

inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw InputError("integer overflow in multiplication");
  return out;
}

inline std::int64_t neg(std::int64_t a) {
  if (a == std::numeric_limits<std::int64_t>::min()) throw InputError("integer overflow in negation");
  return -a;
}

}  // namespace checked
}  // namespace rado
