#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>

#include "bandcast/cli.hpp"

namespace bandcast::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no, const char* what) {
  field = trim(field);
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError("line " + std::to_string(line_no) + ": cannot parse " + what + " '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

Signal read_signal_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::optional<TimeIndex> first;
  TimeIndex expected = 0;
  std::vector<double> values;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      if (row != "t,value") throw ParseError("line " + std::to_string(line_no) + ": expected header 't,value'");
      header_seen = true;
      continue;
    }
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected two fields");
    }
    const auto t = parse_number<TimeIndex>(row.substr(0, comma), line_no, "time");
    const auto x = parse_number<double>(row.substr(comma + 1), line_no, "value");
    if (!std::isfinite(x)) throw ParseError("line " + std::to_string(line_no) + ": non-finite value");
    if (!first) {
      first = t;
    } else if (t != expected) {
      throw GapError("line " + std::to_string(line_no) + ": expected t=" + std::to_string(expected) + ", got t=" +
                     std::to_string(t));
    }
    expected = t + 1;
    values.push_back(x);
  }
  if (!header_seen || !first) throw ParseError("input has no samples");
  return Signal(TimeWindow(*first, expected - 1), std::move(values));
}

Signal read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input '" + path + "'");
  return read_signal_csv(in);
}

void write_signal_csv(std::ostream& out, const Signal& signal) {
  out << "t,value\n";
  const auto& w = signal.window();
  for (TimeIndex t = w.first(); t <= w.last(); ++t) {
    out << t << ',' << format_double(signal.at(t)) << '\n';
  }
}

Signal select_window(const Signal& signal, std::optional<TimeIndex> from, std::optional<TimeIndex> to) {
  const auto& w = signal.window();
  const TimeIndex q = from.value_or(w.first());
  const TimeIndex s = to.value_or(w.last());
  if (!w.contains(q) || !w.contains(s)) {
    throw InvalidArgument("requested window [" + std::to_string(q) + ", " + std::to_string(s) +
                          "] is not covered by the input [" + std::to_string(w.first()) + ", " +
                          std::to_string(w.last()) + "]");
  }
  const TimeWindow selected(q, s);
  const auto begin = signal.values().begin() + (q - w.first());
  return Signal(selected, std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(selected.sample_count())));
}

}  // namespace bandcast::cli
