#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace quiltkit {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Error with a stable machine-readable code, used for exit-code mapping
/// and JSON error objects.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

inline int sign_of(const Rational& r) { return r.sign(); }
inline int sign_of(const Int& r) { return r.sign(); }

/// Renders "p" for integers and "p/q" otherwise (q > 0, lowest terms).
inline std::string rational_to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Accepts "p" or "p/q"; q must be nonzero.
inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Int(s));
    Int p(s.substr(0, slash));
    Int q(s.substr(slash + 1));
    if (q == 0) throw Error("ParseError", "zero denominator in '" + s + "'");
    return Rational(p, q);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error("ParseError", "bad rational '" + s + "'");
  }
}

}  // namespace quiltkit
