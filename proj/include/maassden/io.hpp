#pragma once

// Forms files (maass-v1), zero files (zeros-v1) and TSV report output.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include "arith.hpp"
#include "core.hpp"
#include "records.hpp"

namespace maassden {

namespace ioimpl {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline double parse_real(const std::string& v, std::size_t line, const std::string& what) {
  double x = 0.0;
  const char* b = v.data();
  const char* e = b + v.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, x);
  if (ec != std::errc() || p != e || !std::isfinite(x))
    throw parse_error(line, what + ": not a finite real: '" + v + "'");
  return x;
}

inline long parse_integer(const std::string& v, std::size_t line, const std::string& what) {
  long x = 0;
  const char* b = v.data();
  const char* e = b + v.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, x);
  if (ec != std::errc() || p != e) throw parse_error(line, what + ": not an integer: '" + v + "'");
  return x;
}

inline std::pair<std::string, std::string> key_value(const std::string& tok, std::size_t line) {
  std::size_t eq = tok.find('=');
  if (eq == std::string::npos || eq == 0) throw parse_error(line, "expected key=value, got '" + tok + "'");
  return {tok.substr(0, eq), tok.substr(eq + 1)};
}

}  // namespace ioimpl

// shortest representation that reads back to the same double
inline std::string format_real(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

// 17 significant digits, as used in reports
inline std::string format_report(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// forms files

struct FormsFile {
  Level level = Level::make(1);
  NormConvention norm_convention = NormConvention::paper_index_normalized;
  std::vector<MaassFormRecord> records;
  std::vector<std::string> preamble;  // '#' lines before the header
  // comments[i] are the '#' lines before record i; comments[records.size()] trail
  std::vector<std::vector<std::string>> comments;
};

inline NormConvention parse_norm_convention(const std::string& v, std::size_t line) {
  if (v == "paper_index_normalized") return NormConvention::paper_index_normalized;
  if (v == "fundamental_domain") return NormConvention::fundamental_domain;
  throw parse_error(line, "unknown norm_convention '" + v + "'");
}

inline MaassFormRecord parse_form_record(const std::string& text, const FormsFile& file, std::size_t line) {
  MaassFormRecord f;
  f.level = file.level;
  f.norm_convention = file.norm_convention;
  bool have_t = false, have_sign = false, have_norm = false;
  for (const std::string& tok : ioimpl::split_ws(text)) {
    auto [k, v] = ioimpl::key_value(tok, line);
    if (k == "t") {
      if (have_t) throw parse_error(line, "duplicate t");
      have_t = true;
      if (v.rfind("i*", 0) == 0) {
        f.t_imaginary = true;
        f.t = ioimpl::parse_real(v.substr(2), line, "t");
      } else {
        f.t = ioimpl::parse_real(v, line, "t");
      }
    } else if (k == "sign") {
      if (have_sign) throw parse_error(line, "duplicate sign");
      have_sign = true;
      if (v == "+1" || v == "1")
        f.sign = 1;
      else if (v == "-1")
        f.sign = -1;
      else
        throw parse_error(line, "sign must be +1 or -1, got '" + v + "'");
    } else if (k == "norm2") {
      if (have_norm) throw parse_error(line, "duplicate norm2");
      have_norm = true;
      f.norm_sq = ioimpl::parse_real(v, line, "norm2");
    } else if (k.size() > 1 && k[0] == 'p') {
      long p = ioimpl::parse_integer(k.substr(1), line, "prime key");
      if (f.hecke.count(p)) throw parse_error(line, "duplicate " + k);
      f.hecke[p] = ioimpl::parse_real(v, line, k);
    } else {
      throw parse_error(line, "unknown field '" + k + "'");
    }
  }
  if (!have_t) throw parse_error(line, "record lacks t");
  if (!have_sign) throw parse_error(line, "record lacks sign");
  if (!have_norm) throw parse_error(line, "record lacks norm2");
  try {
    f.validate();
  } catch (const invariant_error& e) {
    throw invariant_error(e.field(), "line " + std::to_string(line) + ": " + e.what());
  }
  return f;
}

inline FormsFile parse_forms(std::istream& in) {
  FormsFile file;
  std::string raw;
  std::size_t line = 0;
  bool header = false;
  std::vector<std::string> pending;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = ioimpl::trim(raw);
    if (s.empty()) continue;
    if (s[0] == '#') {
      pending.push_back(s);
      continue;
    }
    if (!header) {
      auto toks = ioimpl::split_ws(s);
      if (toks.empty() || toks[0] != "maass-v1") throw parse_error(line, "expected header 'maass-v1 ...'");
      bool have_level = false;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        auto [k, v] = ioimpl::key_value(toks[i], line);
        if (k == "level") {
          long N = ioimpl::parse_integer(v, line, "level");
          try {
            file.level = Level::make(N);
          } catch (const error& e) {
            throw parse_error(line, e.what());
          }
          have_level = true;
        } else if (k == "norm_convention") {
          file.norm_convention = parse_norm_convention(v, line);
        } else {
          throw parse_error(line, "unknown header field '" + k + "'");
        }
      }
      if (!have_level) throw parse_error(line, "header lacks level");
      header = true;
      file.preamble = pending;
      pending.clear();
      continue;
    }
    file.comments.push_back(pending);
    pending.clear();
    file.records.push_back(parse_form_record(s, file, line));
  }
  if (!header) throw parse_error(line + 1, "missing header 'maass-v1 ...'");
  file.comments.push_back(pending);
  return file;
}

inline std::string format_form_record(const MaassFormRecord& f) {
  std::string s = "t=";
  if (f.t_imaginary) s += "i*";
  s += format_real(f.t);
  s += f.sign == 1 ? " sign=+1" : " sign=-1";
  s += " norm2=" + format_real(f.norm_sq);
  for (auto [p, l] : f.hecke) s += " p" + std::to_string(p) + "=" + format_real(l);
  return s;
}

inline void write_forms(const FormsFile& file, std::ostream& out) {
  for (const std::string& c : file.preamble) out << c << "\n";
  out << "maass-v1 level=" << file.level.N << " norm_convention=" << to_string(file.norm_convention) << "\n";
  for (std::size_t i = 0; i < file.records.size(); ++i) {
    if (i < file.comments.size())
      for (const std::string& c : file.comments[i]) out << c << "\n";
    out << format_form_record(file.records[i]) << "\n";
  }
  if (file.comments.size() > file.records.size())
    for (const std::string& c : file.comments[file.records.size()]) out << c << "\n";
}

inline FormsFile read_forms_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::parse, "cannot open forms file '" + path + "'");
  return parse_forms(in);
}

inline std::vector<MaassFormRecord> load_forms(const std::string& path) { return read_forms_file(path).records; }

inline void save_forms(const FormsFile& file, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw error(errc::parse, "cannot write forms file '" + path + "'");
  write_forms(file, out);
}

// ---------------------------------------------------------------------------
// zero files

struct ZerosFile {
  ZeroList zeros;
  long declared_count = -1;  // count= header field, -1 if absent
  std::vector<std::string> comments;
};

inline ZerosFile parse_zeros(std::istream& in) {
  ZerosFile file;
  std::string raw;
  std::size_t line = 0, prev_line = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = ioimpl::trim(raw);
    if (s.empty()) continue;
    if (s[0] == '#') {
      file.comments.push_back(s);
      continue;
    }
    if (!header) {
      auto toks = ioimpl::split_ws(s);
      if (toks.empty() || toks[0] != "zeros-v1") throw parse_error(line, "expected header 'zeros-v1 ...'");
      for (std::size_t i = 1; i < toks.size(); ++i) {
        auto [k, v] = ioimpl::key_value(toks[i], line);
        if (k == "mirror") {
          if (v != "0" && v != "1") throw parse_error(line, "mirror must be 0 or 1");
          file.zeros.mirror = v == "1";
        } else if (k == "completeness_height") {
          file.zeros.completeness_height = v == "inf" ? std::numeric_limits<double>::infinity()
                                                      : ioimpl::parse_real(v, line, "completeness_height");
        } else if (k == "count") {
          file.declared_count = ioimpl::parse_integer(v, line, "count");
          if (file.declared_count < 0) throw parse_error(line, "count must be >= 0");
        } else {
          throw parse_error(line, "unknown header field '" + k + "'");
        }
      }
      header = true;
      continue;
    }
    double g = ioimpl::parse_real(s, line, "ordinate");
    if (file.zeros.mirror && g < 0)
      throw parse_error(line, "negative ordinate with mirror=1");
    if (!file.zeros.gammas.empty() && g < file.zeros.gammas.back())
      throw parse_error(line, "ordinates not ascending: " + format_real(g) + " after " +
                                  format_real(file.zeros.gammas.back()) + " (line " + std::to_string(prev_line) +
                                  ")");
    file.zeros.gammas.push_back(g);
    prev_line = line;
  }
  if (!header) throw parse_error(line + 1, "missing header 'zeros-v1 ...'");
  if (file.declared_count >= 0 && static_cast<std::size_t>(file.declared_count) != file.zeros.gammas.size())
    throw parse_error(line, "count=" + std::to_string(file.declared_count) + " but " +
                                std::to_string(file.zeros.gammas.size()) + " ordinates listed");
  return file;
}

inline ZerosFile read_zeros_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::parse, "cannot open zeros file '" + path + "'");
  return parse_zeros(in);
}

inline ZeroList load_zeros(const std::string& path) { return read_zeros_file(path).zeros; }

inline void write_zeros(const ZerosFile& file, std::ostream& out) {
  out << "zeros-v1 mirror=" << (file.zeros.mirror ? 1 : 0) << " completeness_height=";
  if (std::isinf(file.zeros.completeness_height))
    out << "inf";
  else
    out << format_real(file.zeros.completeness_height);
  out << " count=" << file.zeros.gammas.size() << "\n";
  for (const std::string& c : file.comments) out << c << "\n";
  for (double g : file.zeros.gammas) out << format_real(g) << "\n";
}

// ---------------------------------------------------------------------------
// TSV reports

using Cell = std::variant<double, long, std::string>;

class TsvWriter {
 public:
  explicit TsvWriter(std::ostream& out) : out_(out) {}

  void comment(const std::string& text) { out_ << "# " << text << "\n"; }

  void columns(const std::vector<std::string>& names) {
    out_ << "#";
    for (std::size_t i = 0; i < names.size(); ++i) out_ << (i ? "\t" : "") << names[i];
    out_ << "\n";
    width_ = names.size();
  }

  void row(const std::vector<Cell>& cells) {
    require(width_ == 0 || cells.size() == width_, errc::precondition, "TSV row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << "\t";
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>)
              out_ << format_report(v);
            else
              out_ << v;
          },
          cells[i]);
    }
    out_ << "\n";
  }

 private:
  std::ostream& out_;
  std::size_t width_ = 0;
};

}  // namespace maassden
