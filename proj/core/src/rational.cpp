#include "catmeas/rational.hpp"

#include "catmeas/errors.hpp"

#include <cctype>

namespace catmeas {

namespace {

bool is_integer_literal(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t start = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) start = 1;
  if (start == s.size()) return false;
  for (std::size_t i = start; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!is_integer_literal(num, true) || !is_integer_literal(den, false)) {
    throw Error(ErrorCode::SyntaxError, "not a rational literal: \"" + std::string(text) + "\"");
  }
  const std::string num_str(num[0] == '+' ? num.substr(1) : num);
  const Rational n{boost::multiprecision::mpz_int(num_str)};
  const Rational d{boost::multiprecision::mpz_int(std::string(den))};
  if (d == 0) throw Error(ErrorCode::SyntaxError, "zero denominator in \"" + std::string(text) + "\"");
  return n / d;
}

std::string to_string(const Rational& value) { return value.str(); }

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::EmptyElement: return "EmptyElement";
    case ErrorCode::DegenerateQuotient: return "DegenerateQuotient";
    case ErrorCode::FlavorMismatch: return "FlavorMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NotAFunctor: return "NotAFunctor";
    case ErrorCode::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorCode::NotIdempotent: return "NotIdempotent";
    case ErrorCode::UnknownPoint: return "UnknownPoint";
    case ErrorCode::BaseMismatch: return "BaseMismatch";
    case ErrorCode::NotACosheaf: return "NotACosheaf";
    case ErrorCode::SupportError: return "SupportError";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnresolvedReference: return "UnresolvedReference";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::CommandMismatch: return "CommandMismatch";
  }
  return "Unknown";
}

}  // namespace catmeas
