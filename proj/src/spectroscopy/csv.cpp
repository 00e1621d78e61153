#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "nvodmr/errors.hpp"
#include "nvodmr/spectroscopy.hpp"

namespace nvodmr {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "#b_ac_tesla=" << format_double(s.meta.b_ac_tesla) << '\n'
      << "#f_ac_hz=" << format_double(s.meta.f_ac_hz) << '\n'
      << "#dwell_s=" << format_double(s.meta.dwell_s) << '\n'
      << "#seed=" << s.meta.seed << '\n'
      << "#backend=" << s.meta.backend << '\n'
      << "#d_hz=" << format_double(s.meta.d_hz) << '\n'
      << "#ex_hz=" << format_double(s.meta.ex_hz) << '\n';
  for (const auto& [key, value] : s.meta.extra) out << '#' << key << '=' << value << '\n';
  out << "f_mw_hz,signal,sigma\n";
  for (const auto& pt : s.points) {
    out << format_double(pt.f_mw_hz) << ',' << format_double(pt.signal) << ','
        << format_double(pt.sigma) << '\n';
  }
}

std::string spectrum_csv(const Spectrum& s) {
  std::ostringstream out;
  write_spectrum_csv(out, s);
  return out.str();
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, std::size_t row, const char* what) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw SchemaError(std::string("cannot parse ") + what + " '" + std::string(text) + "'", row);
  }
  if (!std::isfinite(v)) throw SchemaError(std::string(what) + " is not finite", row);
  return v;
}

std::uint64_t parse_seed(std::string_view text, std::size_t row) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw SchemaError("cannot parse seed '" + std::string(text) + "'", row);
  }
  return v;
}

void read_meta(SpectrumMeta& meta, std::string_view body, std::size_t row) {
  const auto eq = body.find('=');
  if (eq == std::string_view::npos) return;  // free-form comment
  const std::string key(trim(body.substr(0, eq)));
  const std::string_view value = trim(body.substr(eq + 1));
  if (key == "b_ac_tesla") meta.b_ac_tesla = parse_number(value, row, key.c_str());
  else if (key == "f_ac_hz") meta.f_ac_hz = parse_number(value, row, key.c_str());
  else if (key == "dwell_s") meta.dwell_s = parse_number(value, row, key.c_str());
  else if (key == "seed") meta.seed = parse_seed(value, row);
  else if (key == "backend") meta.backend = std::string(value);
  else if (key == "d_hz") meta.d_hz = parse_number(value, row, key.c_str());
  else if (key == "ex_hz") meta.ex_hz = parse_number(value, row, key.c_str());
  else meta.extra.emplace_back(key, std::string(value));
}

}  // namespace

Spectrum read_spectrum_csv(std::istream& in) {
  Spectrum s;
  std::string line;
  std::size_t row = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++row;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      if (header_seen) throw SchemaError("metadata comment after the header", row);
      read_meta(s.meta, text.substr(1), row);
      continue;
    }
    if (!header_seen) {
      if (text != "f_mw_hz,signal,sigma") {
        throw SchemaError("expected header 'f_mw_hz,signal,sigma', got '" + std::string(text) + "'",
                          row);
      }
      header_seen = true;
      continue;
    }
    const auto c1 = text.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(',', c1 + 1);
    if (c2 == std::string_view::npos || text.find(',', c2 + 1) != std::string_view::npos) {
      throw SchemaError("expected 3 comma-separated columns", row);
    }
    SpectrumPoint pt;
    pt.f_mw_hz = parse_number(text.substr(0, c1), row, "f_mw_hz");
    pt.signal = parse_number(text.substr(c1 + 1, c2 - c1 - 1), row, "signal");
    pt.sigma = parse_number(text.substr(c2 + 1), row, "sigma");
    if (pt.sigma < 0.0) throw SchemaError("sigma must be non-negative", row);
    if (!s.points.empty() && !(pt.f_mw_hz > s.points.back().f_mw_hz)) {
      throw SchemaError("f_mw_hz must be strictly increasing", row);
    }
    s.points.push_back(pt);
  }
  if (!header_seen) throw SchemaError("missing header 'f_mw_hz,signal,sigma'", 0);
  if (s.points.empty()) throw SchemaError("no data rows", 0);
  return s;
}

}  // namespace nvodmr
