#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rrobust/digraph.hpp"
#include "rrobust/sampling.hpp"

namespace rrobust {

inline constexpr std::string_view kReportSchema = "rrobust-report/1";

/// Ordered "key: value" lines. The first line is always the schema tag and
/// the duration, if set, is always the last line so reports can be compared
/// with it stripped.
class RunReport {
 public:
  RunReport() { set("schema", std::string(kReportSchema)); }

  void set(const std::string& key, std::string value) {
    for (auto& [k, v] : fields_)
      if (k == key) {
        v = std::move(value);
        return;
      }
    fields_.emplace_back(key, std::move(value));
  }
  template <typename T>
  void set(const std::string& key, const T& value) {
    std::ostringstream os;
    os << value;
    set(key, os.str());
  }
  void set_ids(const std::string& key, const VertexSet& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? " " : "") + std::to_string(ids[i]);
    set(key, s);
  }
  void set_duration(double seconds) { duration_ = seconds; }

  std::optional<std::string> get(const std::string& key) const {
    for (const auto& [k, v] : fields_)
      if (k == key) return v;
    return std::nullopt;
  }

  std::string serialize() const {
    std::ostringstream os;
    for (const auto& [k, v] : fields_) os << k << ':' << (v.empty() ? "" : " ") << v << '\n';
    if (duration_) os << "seconds: " << *duration_ << '\n';
    return os.str();
  }

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
  std::optional<double> duration_;
};

/// Removes the trailing "seconds:" line, if any.
inline std::string strip_duration(const std::string& report) {
  std::istringstream in(report);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("seconds:", 0) != 0) out += line + '\n';
  return out;
}

/// Parses "p/q" or a plain decimal such as "0.15" into an exact fraction.
inline Rational parse_rational(std::string_view text) {
  auto to_int = [&](std::string_view s) {
    std::int64_t x = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || x < 0)
      throw std::invalid_argument("not a non-negative number: " + std::string(text));
    return x;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational q{to_int(text.substr(0, slash)), to_int(text.substr(slash + 1))};
    if (q.den == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    return q;
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return {to_int(text), 1};
  const std::string_view frac = text.substr(dot + 1);
  if (frac.size() > 15) throw std::invalid_argument("too many decimals: " + std::string(text));
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const std::int64_t whole = dot == 0 ? 0 : to_int(text.substr(0, dot));
  const std::int64_t part = frac.empty() ? 0 : to_int(frac);
  return {whole * den + part, den};
}

inline std::string to_string(Rational q) { return std::to_string(q.num) + "/" + std::to_string(q.den); }

}  // namespace rrobust
