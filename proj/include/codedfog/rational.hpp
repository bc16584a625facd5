#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <sstream>
#include <string>

namespace codedfog {

using BigInt = boost::multiprecision::cpp_int;
/// Exact rational used for all load accounting.
using Rational = boost::rational<BigInt>;

inline double to_double(const Rational& r) {
    return r.numerator().convert_to<double>() / r.denominator().convert_to<double>();
}

inline std::string to_fraction_string(const Rational& r) {
    std::ostringstream oss;
    oss << r.numerator() << "/" << r.denominator();
    return oss.str();
}

}  // namespace codedfog
