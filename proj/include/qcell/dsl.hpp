#pragma once

#include <string>
#include <string_view>

#include "qcell/schedule.hpp"

namespace qcell {

/// 1-based position of the offending token in the source text.
struct SourceSpan {
  int line = 1;
  int column = 1;
};

class ParseError : public Error {
 public:
  ParseError(ErrorCode code, SourceSpan span, const std::string& message)
      : Error(code, "line " + std::to_string(span.line) + ", column " +
                        std::to_string(span.column) + ": " + message),
        span_(span),
        message_(message) {}
  SourceSpan span() const { return span_; }
  const std::string& message() const { return message_; }  // without the span

 private:
  SourceSpan span_;
  std::string message_;
};

/// Parses the pulse-schedule text format (.qsp). Grammar, one statement per
/// line, '#' starts a comment, cells are 0-based:
///
///   cells INT                                  (required first statement)
///   bias on CELL:SIGN CELL:SIGN DIR [TIME]     SIGN in {+,-}, DIR in {LR,TB}
///   bias off CELL CELL DIR
///   rot AXIS ANGLE @ CELL[.DOT] [TIME]         AXIS in {x,y,z}, DOT in {A,B,C,D}
///   pol ANGLE @ CELL CELL [TIME]
///   wait TIME
///   measure CELL -> NAME [TIME]
///
/// ANGLE is an integer multiple of pi with optional divisor ([k]pi[/d], e.g.
/// 3pi/2) or a decimal radian value; TIME is a decimal with an fs/ps/ns/us
/// suffix. The optional trailing TIME overrides the default event duration.
/// Window structure and dot usage are checked while parsing; violations
/// raise ParseError with the offending token's span.
Schedule parse_schedule(std::string_view text);

/// Canonical text form: LF line endings, single spaces, angles rendered as
/// reduced pi fractions when within 1e-12 of k*pi/d (d <= 12), durations in
/// the largest unit with an integral mantissa, explicit durations only when
/// present. serialize(parse(s)) is byte-stable.
std::string serialize_schedule(const Schedule& schedule);

/// Token helpers shared with the config reader and tests.
double parse_angle_token(std::string_view token);      // throws Error on bad form
std::string format_angle(double radians);
double parse_si_time(std::string_view token);          // seconds; throws Error
std::string format_si_time(double seconds);

}  // namespace qcell
