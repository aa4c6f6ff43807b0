#include "entdist/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace entdist {

namespace {

std::string trim_fraction_zeros(std::string s) {
  if (s.find('.') == std::string::npos) return s;
  std::size_t last = s.find_last_not_of('0');
  if (s[last] == '.') --last;
  return s.substr(0, last + 1);
}

std::string format_once(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  double ax = std::abs(x);
  char buf[64];
  if (ax >= 1e6 || ax < 1e-6) {
    std::snprintf(buf, sizeof(buf), "%.11e", x);
    std::string s(buf);
    auto epos = s.find('e');
    std::string mant = trim_fraction_zeros(s.substr(0, epos));
    return mant + s.substr(epos);
  }
  int exp10 = static_cast<int>(std::floor(std::log10(ax)));
  int decimals = 11 - exp10;  // twelve significant digits in positional form
  if (decimals < 0) decimals = 0;
  if (decimals > 17) decimals = 17;
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
  return trim_fraction_zeros(std::string(buf));
}

}  // namespace

std::string format_float(double x) {
  std::string s = format_once(x);
  // settle on the parse/format fixed point so emitted artifacts round-trip
  double back = std::strtod(s.c_str(), nullptr);
  std::string s2 = format_once(back);
  return s2 == s ? s : s2;
}

namespace {

void emit(const nlohmann::json& j, std::ostringstream& os) {
  using nlohmann::json;
  switch (j.type()) {
    case json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: lexicographic
        if (!first) os << ',';
        first = false;
        os << json(it.key()).dump() << ':';
        emit(it.value(), os);
      }
      os << '}';
      break;
    }
    case json::value_t::array: {
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',';
        emit(j[i], os);
      }
      os << ']';
      break;
    }
    case json::value_t::number_float:
      os << format_float(j.get<double>());
      break;
    default:
      os << j.dump();
      break;
  }
}

}  // namespace

std::string canonical_json(const nlohmann::json& j) {
  std::ostringstream os;
  emit(j, os);
  return os.str();
}

}  // namespace entdist
