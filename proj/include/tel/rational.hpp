#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace tel {

// expression templates off so the types mix cleanly with std::max and friends
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline Rat rat(long p, long q = 1) { return Rat(Int(p), Int(q)); }

// "p/q" with q elided when 1, e.g. "3/4", "2", "-1/3".
std::string format_rat(const Rat& r);
Rat parse_rat(const std::string& text);

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)), position(pos) {}
};

struct HypothesisViolation : std::runtime_error {
  std::string hypothesis;  // which side condition failed
  HypothesisViolation(const std::string& hyp, const std::string& detail)
      : std::runtime_error(hyp + ": " + detail), hypothesis(hyp) {}
};

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tel
