#include "qcell/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <vector>

#include "qcell/state.hpp"

namespace qcell {
namespace {

struct Token {
  std::string_view text;
  SourceSpan span;
};

std::vector<std::vector<Token>> tokenize(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < line.size()) {
      char c = line[i];
      if (c == '#') break;
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
        continue;
      }
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
             line[i] != '\r' && line[i] != '#')
        ++i;
      toks.push_back({line.substr(start, i - start),
                      {line_no, static_cast<int>(start) + 1}});
    }
    if (!toks.empty()) lines.push_back(std::move(toks));
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return lines;
}

[[noreturn]] void syntax(const Token& t, const std::string& msg) {
  throw ParseError(ErrorCode::SyntaxError, t.span, msg);
}

[[noreturn]] void semantic(const Token& t, const std::string& msg,
                           ErrorCode code = ErrorCode::SemanticError) {
  throw ParseError(code, t.span, msg);
}

long long parse_int(const Token& t, const char* what) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(),
                                   value);
  if (ec != std::errc{} || ptr != t.text.data() + t.text.size())
    syntax(t, std::string("expected ") + what + ", got '" +
                  std::string(t.text) + "'");
  return value;
}

double parse_decimal(std::string_view s, bool& ok) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  ok = ec == std::errc{} && ptr == s.data() + s.size();
  return value;
}

int parse_cell(const Token& t, int n_cells) {
  long long c = parse_int(t, "cell index");
  if (c < 0 || c >= n_cells)
    semantic(t, "cell index " + std::to_string(c) + " out of range (cells " +
                    std::to_string(n_cells) + ")",
             ErrorCode::IndexOutOfRange);
  return static_cast<int>(c);
}

Direction parse_dir(const Token& t) {
  if (t.text == "LR") return Direction::LR;
  if (t.text == "TB") return Direction::TB;
  syntax(t, "expected direction LR or TB, got '" + std::string(t.text) + "'");
}

Axis parse_axis(const Token& t) {
  if (t.text == "x") return Axis::X;
  if (t.text == "y") return Axis::Y;
  if (t.text == "z") return Axis::Z;
  syntax(t, "expected axis x, y or z, got '" + std::string(t.text) + "'");
}

struct OpenWindow {
  int lo = 0;
  int hi = 0;
  Direction dir = Direction::LR;
  SourceSpan opened_at;
};

struct WindowSet {
  std::vector<OpenWindow> open;

  const OpenWindow* covering(int cell) const {
    for (const auto& w : open)
      if (w.lo == cell || w.hi == cell) return &w;
    return nullptr;
  }
  const OpenWindow* exact(int lo, int hi, Direction dir) const {
    for (const auto& w : open)
      if (w.lo == lo && w.hi == hi && w.dir == dir) return &w;
    return nullptr;
  }
  void close(int lo, int hi, Direction dir) {
    open.erase(std::find_if(open.begin(), open.end(), [&](const OpenWindow& w) {
      return w.lo == lo && w.hi == hi && w.dir == dir;
    }));
  }
};

}  // namespace

double parse_angle_token(std::string_view token) {
  std::string_view s = token;
  double sign = 1.0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    if (s[0] == '-') sign = -1.0;
    s.remove_prefix(1);
  }
  std::size_t pi_at = s.find("pi");
  if (pi_at == std::string_view::npos) {
    bool ok = false;
    double value = parse_decimal(token, ok);
    if (!ok) fail(ErrorCode::SemanticError,
                  "malformed angle '" + std::string(token) + "'");
    return value;
  }
  std::string_view num = s.substr(0, pi_at);
  std::string_view rest = s.substr(pi_at + 2);
  long long k = 1;
  if (!num.empty()) {
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
    if (ec != std::errc{} || ptr != num.data() + num.size() || k < 0)
      fail(ErrorCode::SemanticError,
           "malformed angle '" + std::string(token) + "'");
  }
  long long d = 1;
  if (!rest.empty()) {
    if (rest[0] != '/')
      fail(ErrorCode::SemanticError,
           "malformed angle '" + std::string(token) + "'");
    rest.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), d);
    if (ec != std::errc{} || ptr != rest.data() + rest.size() || d <= 0)
      fail(ErrorCode::SemanticError,
           "malformed angle '" + std::string(token) + "'");
  }
  return sign * static_cast<double>(k) * M_PI / static_cast<double>(d);
}

std::string format_angle(double radians) {
  for (long long d = 1; d <= 12; ++d) {
    double scaled = radians * static_cast<double>(d) / M_PI;
    if (!(std::abs(scaled) < 1e15)) break;
    long long k = std::llround(scaled);
    // only use the symbolic spelling when it reparses to the identical
    // double; anything else must round-trip through the decimal form
    if (static_cast<double>(k) * M_PI / static_cast<double>(d) == radians) {
      if (k == 0) return "0";
      std::string out;
      if (k == -1)
        out = "-pi";
      else if (k == 1)
        out = "pi";
      else
        out = std::to_string(k) + "pi";
      if (d != 1) out += "/" + std::to_string(d);
      return out;
    }
  }
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), radians);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_si_time(std::string_view token) {
  static constexpr struct {
    const char* suffix;
    double scale;
  } kUnits[] = {{"fs", 1e-15}, {"ps", 1e-12}, {"ns", 1e-9}, {"us", 1e-6}};
  for (const auto& u : kUnits) {
    std::string_view suf = u.suffix;
    if (token.size() > suf.size() &&
        token.substr(token.size() - suf.size()) == suf) {
      bool ok = false;
      double value =
          parse_decimal(token.substr(0, token.size() - suf.size()), ok);
      if (!ok) break;
      if (value < 0)
        fail(ErrorCode::NegativeDuration,
             "duration '" + std::string(token) + "' is negative");
      return value * u.scale;
    }
  }
  fail(ErrorCode::SemanticError, "malformed duration '" + std::string(token) +
                                     "' (expected e.g. 300ps)");
}

std::string format_si_time(double seconds) {
  double fs = seconds * 1e15;
  if (std::abs(fs) < 9e18) {
    long long rounded = std::llround(fs);
    static constexpr const char* kNames[] = {"fs", "ps", "ns", "us"};
    static constexpr double kScales[] = {1e-15, 1e-12, 1e-9, 1e-6};
    int unit = 0;
    long long count = rounded;
    while (unit < 3 && count != 0 && count % 1000 == 0) {
      count /= 1000;
      ++unit;
    }
    // emit the unit form only if reparsing it recovers the exact double
    if (static_cast<double>(count) * kScales[unit] == seconds)
      return std::to_string(count) + kNames[unit];
  }
  // decimal femtoseconds; nudge the count until the product reconstructs
  for (double q : {fs, std::nextafter(fs, 0.0),
                   std::nextafter(fs, 2.0 * fs)}) {
    if (q * 1e-15 != seconds) continue;
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), q);
    (void)ec;
    return std::string(buf, ptr) + "fs";
  }
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), fs);
  (void)ec;
  return std::string(buf, ptr) + "fs";
}

Schedule parse_schedule(std::string_view text) {
  auto lines = tokenize(text);
  if (lines.empty())
    throw ParseError(ErrorCode::MissingCellsDecl, {1, 1},
                     "schedule must start with 'cells N'");

  Schedule sched;
  WindowSet windows;
  bool have_cells = false;

  auto angle_of = [](const Token& t) {
    try {
      return parse_angle_token(t.text);
    } catch (const Error& e) {
      semantic(t, e.what());
    }
  };
  auto time_of = [](const Token& t) {
    try {
      return parse_si_time(t.text);
    } catch (const Error& e) {
      throw ParseError(e.code() == ErrorCode::NegativeDuration
                           ? ErrorCode::NegativeDuration
                           : ErrorCode::SemanticError,
                       t.span, e.what());
    }
  };
  // Consumes an optional trailing TIME token at position `next`.
  auto opt_duration = [&](const std::vector<Token>& toks, std::size_t next)
      -> std::optional<double> {
    if (toks.size() <= next) return std::nullopt;
    if (toks.size() > next + 1) syntax(toks[next + 1], "unexpected token");
    return time_of(toks[next]);
  };

  for (const auto& toks : lines) {
    const Token& head = toks[0];
    auto need = [&](std::size_t count) {
      if (toks.size() < count)
        syntax(head, "truncated '" + std::string(head.text) + "' statement");
    };

    if (!have_cells) {
      if (head.text != "cells")
        throw ParseError(ErrorCode::MissingCellsDecl, head.span,
                         "schedule must start with 'cells N'");
      need(2);
      if (toks.size() > 2) syntax(toks[2], "unexpected token");
      long long n = parse_int(toks[1], "cell count");
      if (n < 1 || n > RegisterState::max_cells)
        semantic(toks[1],
                 "cell count must be between 1 and " +
                     std::to_string(RegisterState::max_cells),
                 n < 1 ? ErrorCode::ZeroCells : ErrorCode::RegisterTooLarge);
      sched.n_cells = static_cast<int>(n);
      have_cells = true;
      continue;
    }

    if (head.text == "cells") {
      semantic(head, "duplicate 'cells' declaration");
    } else if (head.text == "bias") {
      need(2);
      if (toks[1].text == "on") {
        need(5);
        auto cell_sign = [&](const Token& t) {
          std::size_t colon = t.text.find(':');
          if (colon == std::string_view::npos ||
              colon + 2 != t.text.size() ||
              (t.text[colon + 1] != '+' && t.text[colon + 1] != '-'))
            syntax(t, "expected CELL:+ or CELL:-, got '" + std::string(t.text) +
                          "'");
          Token cell_tok{t.text.substr(0, colon), t.span};
          return std::pair<int, char>(parse_cell(cell_tok, sched.n_cells),
                                      t.text[colon + 1]);
        };
        auto [c0, s0] = cell_sign(toks[2]);
        auto [c1, s1] = cell_sign(toks[3]);
        if (c0 == c1)
          semantic(toks[3], "bias needs two distinct cells",
                   ErrorCode::SameCell);
        int lo = std::min(c0, c1), hi = std::max(c0, c1);
        char lo_sign = c0 < c1 ? s0 : s1;
        char hi_sign = c0 < c1 ? s1 : s0;
        if (lo_sign != '+' || hi_sign != '-')
          semantic(toks[2],
                   "bias polarity must be + on the lower cell and - on the "
                   "higher cell");
        Direction dir = parse_dir(toks[4]);
        if (windows.covering(lo) || windows.covering(hi))
          semantic(toks[2], "cell already inside an open bias window",
                   windows.exact(lo, hi, dir) != nullptr
                       ? ErrorCode::QcaAlreadyActive
                       : ErrorCode::OverlappingWindows);
        windows.open.push_back({lo, hi, dir, head.span});
        sched.events.push_back(
            {BiasOnEvent{lo, hi, dir}, opt_duration(toks, 5)});
      } else if (toks[1].text == "off") {
        need(5);
        if (toks.size() > 5) syntax(toks[5], "unexpected token");
        int c0 = parse_cell(toks[2], sched.n_cells);
        int c1 = parse_cell(toks[3], sched.n_cells);
        if (c0 == c1)
          semantic(toks[3], "bias needs two distinct cells",
                   ErrorCode::SameCell);
        Direction dir = parse_dir(toks[4]);
        int lo = std::min(c0, c1), hi = std::max(c0, c1);
        if (!windows.exact(lo, hi, dir))
          semantic(toks[2], "bias off does not match an open window",
                   ErrorCode::PairNotActive);
        windows.close(lo, hi, dir);
        sched.events.push_back({BiasOffEvent{lo, hi, dir}, std::nullopt});
      } else {
        syntax(toks[1], "expected 'on' or 'off' after 'bias'");
      }
    } else if (head.text == "rot") {
      need(5);
      Axis axis = parse_axis(toks[1]);
      double angle = angle_of(toks[2]);
      if (toks[3].text != "@") syntax(toks[3], "expected '@'");
      const Token& target = toks[4];
      std::size_t dot_at = target.text.find('.');
      RotationEvent ev;
      ev.axis = axis;
      ev.angle = angle;
      if (dot_at == std::string_view::npos) {
        ev.cell = parse_cell(target, sched.n_cells);
      } else {
        Token cell_tok{target.text.substr(0, dot_at), target.span};
        ev.cell = parse_cell(cell_tok, sched.n_cells);
        std::string_view dot = target.text.substr(dot_at + 1);
        if (dot == "Q")
          semantic(target, "rotations cannot be conditioned on the qubit dot",
                   ErrorCode::QubitDotCondition);
        if (dot.size() != 1 || dot[0] < 'A' || dot[0] > 'D')
          syntax(target, "expected dot A, B, C or D");
        ev.dot = static_cast<DotSite>(dot[0] - 'A' + 1);
        const OpenWindow* w = windows.covering(ev.cell);
        auto active = w ? window_dots(w->dir, w->lo == ev.cell)
                        : std::array<DotSite, 2>{};
        if (!w || (active[0] != *ev.dot && active[1] != *ev.dot))
          semantic(target,
                   "conditional rotation targets a dot outside any open "
                   "window",
                   ErrorCode::RotationOutsideWindow);
      }
      sched.events.push_back({ev, opt_duration(toks, 5)});
    } else if (head.text == "pol") {
      need(5);
      double angle = angle_of(toks[1]);
      if (toks[2].text != "@") syntax(toks[2], "expected '@'");
      int c0 = parse_cell(toks[3], sched.n_cells);
      int c1 = parse_cell(toks[4], sched.n_cells);
      if (c0 == c1)
        semantic(toks[4], "polarization needs two distinct cells",
                 ErrorCode::SameCell);
      int lo = std::min(c0, c1), hi = std::max(c0, c1);
      const OpenWindow* w = windows.covering(lo);
      if (!w || w->lo != lo || w->hi != hi)
        semantic(toks[3], "polarization pulse outside an open window",
                 ErrorCode::PairNotActive);
      sched.events.push_back(
          {PolarizationEvent{lo, hi, angle}, opt_duration(toks, 5)});
    } else if (head.text == "wait") {
      need(2);
      if (toks.size() > 2) syntax(toks[2], "unexpected token");
      sched.events.push_back({WaitEvent{time_of(toks[1])}, std::nullopt});
    } else if (head.text == "measure") {
      need(4);
      int cell = parse_cell(toks[1], sched.n_cells);
      if (toks[2].text != "->") syntax(toks[2], "expected '->'");
      const Token& name = toks[3];
      bool name_ok = !name.text.empty() &&
                     (std::isalpha(static_cast<unsigned char>(name.text[0])) ||
                      name.text[0] == '_');
      for (char c : name.text)
        name_ok = name_ok && (std::isalnum(static_cast<unsigned char>(c)) ||
                              c == '_');
      if (!name_ok)
        syntax(name, "result name must match [A-Za-z_][A-Za-z0-9_]*");
      if (windows.covering(cell))
        semantic(toks[1], "cannot measure a cell inside an open bias window",
                 ErrorCode::ActiveWindow);
      sched.events.push_back({MeasureEvent{cell, std::string(name.text)},
                              opt_duration(toks, 4)});
    } else {
      syntax(head, "unknown statement '" + std::string(head.text) + "'");
    }
  }

  if (!have_cells)
    throw ParseError(ErrorCode::MissingCellsDecl, {1, 1},
                     "schedule must start with 'cells N'");
  if (!windows.open.empty()) {
    const auto& w = windows.open.front();
    throw ParseError(ErrorCode::SemanticError, w.opened_at,
                     "bias window " + std::to_string(w.lo) + "-" +
                         std::to_string(w.hi) + " is never closed");
  }
  return sched;
}

std::string serialize_schedule(const Schedule& schedule) {
  std::ostringstream out;
  out << "cells " << schedule.n_cells << "\n";
  for (const auto& event : schedule.events) {
    std::visit(
        [&](const auto& ev) {
          using T = std::decay_t<decltype(ev)>;
          if constexpr (std::is_same_v<T, BiasOnEvent>) {
            out << "bias on " << ev.lo << ":+ " << ev.hi << ":- "
                << (ev.dir == Direction::LR ? "LR" : "TB");
          } else if constexpr (std::is_same_v<T, BiasOffEvent>) {
            out << "bias off " << ev.lo << " " << ev.hi << " "
                << (ev.dir == Direction::LR ? "LR" : "TB");
          } else if constexpr (std::is_same_v<T, RotationEvent>) {
            out << "rot " << axis_letter(ev.axis) << " "
                << format_angle(ev.angle) << " @ " << ev.cell;
            if (ev.dot) out << "." << site_letter(*ev.dot);
          } else if constexpr (std::is_same_v<T, PolarizationEvent>) {
            out << "pol " << format_angle(ev.angle) << " @ " << ev.lo << " "
                << ev.hi;
          } else if constexpr (std::is_same_v<T, WaitEvent>) {
            out << "wait " << format_si_time(ev.duration);
          } else if constexpr (std::is_same_v<T, MeasureEvent>) {
            out << "measure " << ev.cell << " -> " << ev.name;
          }
        },
        event.what);
    if (event.duration) out << " " << format_si_time(*event.duration);
    out << "\n";
  }
  return out.str();
}

}  // namespace qcell
