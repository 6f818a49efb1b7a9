#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "edtc/sequence.hpp"

namespace edtc {

/// 1-based source position.
struct SourcePos {
  int line = 1;
  int col = 1;
};

/// Base of all sequence-program errors. For errors that refer to the program
/// as a whole (a missing directive), the position points one line past the
/// end of the source.
class ParseError : public Error {
 public:
  ParseError(SourcePos pos, const std::string& what) : Error(what), pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

class SyntaxError : public ParseError {
 public:
  SyntaxError(SourcePos pos, const std::string& expected)
      : ParseError(pos, "expected " + expected), expected_(expected) {}
  const std::string& expected() const { return expected_; }

 private:
  std::string expected_;
};

class MissingDirective : public ParseError {
 public:
  MissingDirective(SourcePos pos, std::string name)
      : ParseError(pos, "missing `" + name + "` directive"),
        name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class DuplicateDirective : public ParseError {
 public:
  DuplicateDirective(SourcePos pos, const std::string& name)
      : ParseError(pos, "duplicate `" + name + "` directive") {}
};

class UnitError : public ParseError {
 public:
  UnitError(SourcePos pos, const std::string& what) : ParseError(pos, what) {}
};

enum class AngleUnit { deg, rad, pi };

/// An angle as written in the source (value + unit), converted on demand.
struct AngleLiteral {
  double value = 0.0;
  AngleUnit unit = AngleUnit::rad;
  double radians() const;
};

enum class ParamKey { t1, t2, tphi, meq, omega1 };

struct ParamValue {
  enum class Kind { number, automatic, infinite };
  Kind kind = Kind::number;
  double number = 0.0;
};

struct UnitDirective {
  TimeUnit unit = TimeUnit::t2;
};
struct ParamsDirective {
  std::vector<std::pair<ParamKey, ParamValue>> entries;  // source order
};
struct InitDirective {
  std::vector<std::pair<char, double>> entries;  // keys 'x', 'y', 'z'
};
struct DelayDirective {
  double duration = 0.0;
};
struct PulseDirective {
  Axis axis = Axis::y;
  AngleLiteral angle;
};
struct RepeatDirective {
  std::uint64_t count = 1;
};
/// Comment or blank line, kept verbatim so printing round-trips.
struct TriviaLine {
  std::string text;
};

using LineContent =
    std::variant<UnitDirective, ParamsDirective, InitDirective, DelayDirective,
                 PulseDirective, RepeatDirective, TriviaLine>;

struct SourceLine {
  int number = 1;
  LineContent content;
};

/// Syntax-level program: the directive list plus preserved trivia.
struct Program {
  std::vector<SourceLine> lines;
};

/// Parses source text into a Program. Throws SyntaxError / UnitError with
/// the position of the offending token.
Program parse_program(std::string_view text);

/// Canonical text form. pretty_print(parse_program(text)) == text whenever
/// text is already canonical (single spaces, shortest number spellings).
std::string pretty_print(const Program& program);

struct CompiledProgram {
  SystemParams params;
  PulseSequence sequence;
};

/// Semantic pass: resolves parameters (validate_params), the initial state
/// (default mz = -0.9 m_eq), segments and repetition count (default 1).
/// Throws MissingDirective / DuplicateDirective / parameter validation
/// errors.
CompiledProgram compile_program(const Program& program);

/// parse_program + compile_program.
CompiledProgram parse_sequence(std::string_view text);

}  // namespace edtc
