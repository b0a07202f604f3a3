#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace codebounds {

enum class Errc {
  invalid_alphabet,
  invalid_input,
  invalid_channel,
  invalid_composition,
  infinite_distance,
  not_embeddable,
  wrong_symmetry,
  wrong_class,
  condition_not_met,
  undefined_min_distance,
  budget_exceeded,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_alphabet: return "invalid-alphabet";
    case Errc::invalid_input: return "invalid-input";
    case Errc::invalid_channel: return "invalid-channel";
    case Errc::invalid_composition: return "invalid-composition";
    case Errc::infinite_distance: return "infinite-distance";
    case Errc::not_embeddable: return "not-embeddable";
    case Errc::wrong_symmetry: return "wrong-symmetry";
    case Errc::wrong_class: return "wrong-class";
    case Errc::condition_not_met: return "condition-not-met";
    case Errc::undefined_min_distance: return "undefined-min-distance";
    case Errc::budget_exceeded: return "budget-exceeded";
  }
  return "unknown";
}

// Domain error: bad inputs, violated preconditions, unmet applicability
// conditions. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  [[nodiscard]] Errc code() const { return code_; }

 private:
  Errc code_;
};

// Work refused because it would exceed a configured size limit. Exit code 2.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, std::size_t limit)
      : Error(Errc::budget_exceeded,
              what + " (limit " + std::to_string(limit) + ")"),
        limit_(limit) {}
  [[nodiscard]] std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
};

// Distance matrix failed the squared-Euclidean class check; carries the
// zero-sum direction whose quadratic form is positive.
class NotEmbeddableError : public Error {
 public:
  NotEmbeddableError(const std::string& what, std::vector<double> witness)
      : Error(Errc::not_embeddable, what), witness_(std::move(witness)) {}
  [[nodiscard]] const std::vector<double>& witness() const { return witness_; }

 private:
  std::vector<double> witness_;
};

}  // namespace codebounds
