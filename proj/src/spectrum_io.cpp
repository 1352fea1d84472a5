#include "optomech/spectrum_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw ParseError("spectrum csv: row " + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(const std::string& tok, std::size_t line_no, const char* what) {
  if (tok.empty()) fail(line_no, std::string("empty ") + what + " field");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || errno == ERANGE) {
    fail(line_no, std::string("cannot parse ") + what + " '" + tok + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& tok, std::size_t line_no, const char* what) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
    fail(line_no, std::string("cannot parse ") + what + " '" + tok + "'");
  }
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size() || errno == ERANGE) {
    fail(line_no, std::string("cannot parse ") + what + " '" + tok + "'");
  }
  return v;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

void write_spectrum_csv(const Spectrum& spec, std::ostream& out) {
  spec.validate();
  out << "# unit=" << to_string(spec.unit) << "\n";
  out << "# n_avg=" << spec.n_avg << "\n";
  if (spec.seed) out << "# seed=" << *spec.seed << "\n";
  out << "freq_hz,psd\n";
  for (std::size_t i = 0; i < spec.freqs_hz.size(); ++i) {
    out << fmt17(spec.freqs_hz[i]) << ',' << fmt17(spec.values[i]) << "\n";
  }
}

void write_spectrum_csv(const Spectrum& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_spectrum_csv(spec, out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

Spectrum read_spectrum_csv(std::istream& in) {
  Spectrum spec;
  bool have_unit = false;
  bool have_n_avg = false;
  bool long_form = false;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::string raw;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_cr(raw);
    if (line.empty()) continue;

    if (line[0] == '#') {
      if (header_seen) fail(line_no, "metadata comment after the column header");
      std::string body = line.substr(1);
      const std::size_t first = body.find_first_not_of(' ');
      if (first == std::string::npos) fail(line_no, "empty metadata comment");
      body = body.substr(first);
      const std::size_t eq = body.find('=');
      if (eq == std::string::npos) fail(line_no, "metadata comment must look like '# key=value'");
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 1);
      if (key == "unit") {
        const auto unit = spectrum_unit_from(value);
        if (!unit) fail(line_no, "unknown unit '" + value + "'");
        spec.unit = *unit;
        have_unit = true;
      } else if (key == "n_avg") {
        const std::uint64_t v = parse_u64(value, line_no, "n_avg");
        if (v < 1 || v > 0xFFFFFFFFull) fail(line_no, "n_avg out of range");
        spec.n_avg = static_cast<std::uint32_t>(v);
        have_n_avg = true;
      } else if (key == "seed") {
        spec.seed = parse_u64(value, line_no, "seed");
      } else {
        fail(line_no, "unknown metadata key '" + key + "'");
      }
      continue;
    }

    if (!header_seen) {
      if (line == "freq_hz,psd") {
        long_form = false;
      } else if (line == "freq_hz,psd,unit,n_avg,seed") {
        long_form = true;
      } else {
        fail(line_no, "expected header 'freq_hz,psd' or 'freq_hz,psd,unit,n_avg,seed'");
      }
      header_seen = true;
      continue;
    }

    const auto fields = split_fields(line);
    const std::size_t expected = long_form ? 5 : 2;
    if (fields.size() != expected) {
      fail(line_no, "expected " + std::to_string(expected) + " fields, got " +
                        std::to_string(fields.size()));
    }
    const double f = parse_double(fields[0], line_no, "frequency");
    const double v = parse_double(fields[1], line_no, "psd value");
    if (!spec.freqs_hz.empty() && !(f > spec.freqs_hz.back())) {
      fail(line_no, "frequencies must increase strictly");
    }
    if (v < 0) fail(line_no, "psd value must be non-negative");

    if (long_form) {
      const auto unit = spectrum_unit_from(fields[2]);
      if (!unit) fail(line_no, "unknown unit '" + fields[2] + "'");
      if (have_unit && *unit != spec.unit) fail(line_no, "unit differs from earlier rows");
      spec.unit = *unit;
      have_unit = true;

      const std::uint64_t na = parse_u64(fields[3], line_no, "n_avg");
      if (na < 1 || na > 0xFFFFFFFFull) fail(line_no, "n_avg out of range");
      if (have_n_avg && static_cast<std::uint32_t>(na) != spec.n_avg) {
        fail(line_no, "n_avg differs from earlier rows");
      }
      spec.n_avg = static_cast<std::uint32_t>(na);
      have_n_avg = true;

      if (!fields[4].empty()) {
        const std::uint64_t sd = parse_u64(fields[4], line_no, "seed");
        if (spec.seed && *spec.seed != sd) fail(line_no, "seed differs from earlier rows");
        spec.seed = sd;
      }
    }

    spec.freqs_hz.push_back(f);
    spec.values.push_back(v);
  }

  if (!header_seen) throw ParseError("spectrum csv: no column header found (empty input?)");
  if (spec.freqs_hz.empty()) throw ParseError("spectrum csv: no data rows");
  if (!have_unit) throw ParseError("spectrum csv: missing unit metadata");
  if (!have_n_avg) throw ParseError("spectrum csv: missing n_avg metadata");
  spec.validate();
  return spec;
}

Spectrum read_spectrum_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open spectrum csv '" + path.string() + "'");
  return read_spectrum_csv(in);
}

}  // namespace optomech
