#include "edtc/parser.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

namespace edtc {

namespace {

struct Token {
  std::string_view text;
  int col = 1;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t') {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    tokens.push_back({line.substr(start, i - start), int(start) + 1});
  }
  return tokens;
}

bool is_blank_or_comment(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (c != ' ' && c != '\t') return false;
  }
  return true;
}

double parse_number(std::string_view text, SourcePos pos) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw SyntaxError(pos, "a number, got `" + std::string(text) + "`");
  }
  return value;
}

std::uint64_t parse_uint(std::string_view text, SourcePos pos) {
  std::uint64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw SyntaxError(pos, "a nonnegative integer, got `" + std::string(text) +
                               "`");
  }
  return value;
}

// Splits "key=value"; returns (key, value, value_col).
std::tuple<std::string_view, std::string_view, int> split_kv(const Token& tok,
                                                             int line_no) {
  const std::size_t eq = tok.text.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == tok.text.size()) {
    throw SyntaxError({line_no, tok.col}, "key=value, got `" +
                                              std::string(tok.text) + "`");
  }
  return {tok.text.substr(0, eq), tok.text.substr(eq + 1),
          tok.col + int(eq) + 1};
}

ParamsDirective parse_params(const std::vector<Token>& tokens, int line_no,
                             int line_len) {
  ParamsDirective dir;
  if (tokens.size() < 2) {
    throw SyntaxError({line_no, line_len + 1}, "key=value after `params`");
  }
  int auto_count = 0;
  bool saw_meq = false;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    auto [key_text, value_text, value_col] = split_kv(tokens[i], line_no);
    ParamKey key;
    if (key_text == "t1") key = ParamKey::t1;
    else if (key_text == "t2") key = ParamKey::t2;
    else if (key_text == "tphi") key = ParamKey::tphi;
    else if (key_text == "meq") key = ParamKey::meq;
    else if (key_text == "omega1") key = ParamKey::omega1;
    else
      throw SyntaxError({line_no, tokens[i].col},
                        "one of t1/t2/tphi/meq/omega1, got `" +
                            std::string(key_text) + "`");
    for (const auto& [seen, unused] : dir.entries) {
      if (seen == key) {
        throw SyntaxError({line_no, tokens[i].col},
                          "each key at most once, got `" +
                              std::string(key_text) + "` again");
      }
    }
    const bool timescale =
        key == ParamKey::t1 || key == ParamKey::t2 || key == ParamKey::tphi;
    ParamValue value;
    if (value_text == "auto") {
      if (!timescale) {
        throw SyntaxError({line_no, value_col},
                          "a number (`auto` is only valid for t1/t2/tphi)");
      }
      if (++auto_count > 1) {
        throw SyntaxError({line_no, value_col},
                          "at most one of t1/t2/tphi to be `auto`");
      }
      value.kind = ParamValue::Kind::automatic;
    } else if (value_text == "inf") {
      if (key != ParamKey::tphi) {
        throw SyntaxError({line_no, value_col},
                          "a number (`inf` is only valid for tphi)");
      }
      value.kind = ParamValue::Kind::infinite;
    } else {
      value.kind = ParamValue::Kind::number;
      value.number = parse_number(value_text, {line_no, value_col});
    }
    if (key == ParamKey::meq) saw_meq = true;
    dir.entries.emplace_back(key, value);
  }
  if (!saw_meq) {
    throw SyntaxError({line_no, line_len + 1}, "meq=<number> in `params`");
  }
  return dir;
}

InitDirective parse_init(const std::vector<Token>& tokens, int line_no) {
  InitDirective dir;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    auto [key_text, value_text, value_col] = split_kv(tokens[i], line_no);
    char key;
    if (key_text == "mx") key = 'x';
    else if (key_text == "my") key = 'y';
    else if (key_text == "mz") key = 'z';
    else
      throw SyntaxError({line_no, tokens[i].col},
                        "one of mx/my/mz, got `" + std::string(key_text) +
                            "`");
    for (const auto& [seen, unused] : dir.entries) {
      if (seen == key) {
        throw SyntaxError({line_no, tokens[i].col},
                          "each component at most once, got `" +
                              std::string(key_text) + "` again");
      }
    }
    dir.entries.emplace_back(key, parse_number(value_text,
                                               {line_no, value_col}));
  }
  return dir;
}

AngleLiteral parse_angle(const Token& tok, int line_no) {
  std::string_view text = tok.text;
  AngleLiteral angle;
  if (text.ends_with("deg")) {
    angle.unit = AngleUnit::deg;
    text.remove_suffix(3);
  } else if (text.ends_with("rad")) {
    angle.unit = AngleUnit::rad;
    text.remove_suffix(3);
  } else if (text.ends_with("pi")) {
    angle.unit = AngleUnit::pi;
    text.remove_suffix(2);
  } else {
    throw UnitError({line_no, tok.col},
                    "angle `" + std::string(tok.text) +
                        "` needs a deg/rad/pi unit suffix");
  }
  if (text.empty()) {
    throw SyntaxError({line_no, tok.col}, "a number before the angle unit");
  }
  angle.value = parse_number(text, {line_no, tok.col});
  return angle;
}

void expect_token_count(const std::vector<Token>& tokens, std::size_t count,
                        int line_no, const char* what) {
  if (tokens.size() < count) {
    const Token& last = tokens.back();
    throw SyntaxError({line_no, last.col + int(last.text.size()) + 1}, what);
  }
  if (tokens.size() > count) {
    throw SyntaxError({line_no, tokens[count].col}, "end of line");
  }
}

LineContent parse_directive(const std::vector<Token>& tokens, int line_no,
                            int line_len) {
  const std::string_view head = tokens[0].text;
  if (head == "unit") {
    expect_token_count(tokens, 2, line_no, "`t2` or `seconds`");
    if (tokens[1].text == "t2") return UnitDirective{TimeUnit::t2};
    if (tokens[1].text == "seconds") return UnitDirective{TimeUnit::seconds};
    throw UnitError({line_no, tokens[1].col},
                    "unknown time unit `" + std::string(tokens[1].text) +
                        "` (expected t2 or seconds)");
  }
  if (head == "params") return parse_params(tokens, line_no, line_len);
  if (head == "init") return parse_init(tokens, line_no);
  if (head == "delay") {
    expect_token_count(tokens, 2, line_no, "a delay duration");
    const double t = parse_number(tokens[1].text, {line_no, tokens[1].col});
    if (t < 0.0) {
      throw SyntaxError({line_no, tokens[1].col}, "a nonnegative delay");
    }
    return DelayDirective{t};
  }
  if (head == "pulse") {
    expect_token_count(tokens, 3, line_no, "`pulse <x|y> <angle>`");
    Axis axis;
    if (tokens[1].text == "x") axis = Axis::x;
    else if (tokens[1].text == "y") axis = Axis::y;
    else
      throw SyntaxError({line_no, tokens[1].col}, "pulse axis `x` or `y`");
    return PulseDirective{axis, parse_angle(tokens[2], line_no)};
  }
  if (head == "repeat") {
    expect_token_count(tokens, 2, line_no, "a repetition count");
    return RepeatDirective{parse_uint(tokens[1].text,
                                      {line_no, tokens[1].col})};
  }
  throw SyntaxError({line_no, tokens[0].col},
                    "a directive (unit/params/init/delay/pulse/repeat), got `" +
                        std::string(head) + "`");
}

// Shortest representation that round-trips (std::to_chars default format).
std::string print_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string print_param_value(const ParamValue& v) {
  switch (v.kind) {
    case ParamValue::Kind::automatic: return "auto";
    case ParamValue::Kind::infinite: return "inf";
    case ParamValue::Kind::number: return print_double(v.number);
  }
  return {};
}

const char* param_key_name(ParamKey key) {
  switch (key) {
    case ParamKey::t1: return "t1";
    case ParamKey::t2: return "t2";
    case ParamKey::tphi: return "tphi";
    case ParamKey::meq: return "meq";
    case ParamKey::omega1: return "omega1";
  }
  return "";
}

}  // namespace

double AngleLiteral::radians() const {
  switch (unit) {
    case AngleUnit::deg: return value * kPi / 180.0;
    case AngleUnit::rad: return value;
    case AngleUnit::pi: return value * kPi;
  }
  return value;
}

Program parse_program(std::string_view text) {
  Program program;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (is_blank_or_comment(line)) {
      program.lines.push_back({line_no, TriviaLine{std::string(line)}});
    } else {
      const std::vector<Token> tokens = tokenize(line);
      program.lines.push_back(
          {line_no, parse_directive(tokens, line_no, int(line.size()))});
    }
    pos = end + 1;
  }
  return program;
}

std::string pretty_print(const Program& program) {
  std::ostringstream out;
  for (const SourceLine& line : program.lines) {
    std::visit(
        [&out](const auto& content) {
          using T = std::decay_t<decltype(content)>;
          if constexpr (std::is_same_v<T, TriviaLine>) {
            out << content.text;
          } else if constexpr (std::is_same_v<T, UnitDirective>) {
            out << "unit "
                << (content.unit == TimeUnit::t2 ? "t2" : "seconds");
          } else if constexpr (std::is_same_v<T, ParamsDirective>) {
            out << "params";
            for (const auto& [key, value] : content.entries) {
              out << ' ' << param_key_name(key) << '='
                  << print_param_value(value);
            }
          } else if constexpr (std::is_same_v<T, InitDirective>) {
            out << "init";
            for (const auto& [key, value] : content.entries) {
              out << " m" << key << '=' << print_double(value);
            }
          } else if constexpr (std::is_same_v<T, DelayDirective>) {
            out << "delay " << print_double(content.duration);
          } else if constexpr (std::is_same_v<T, PulseDirective>) {
            out << "pulse " << (content.axis == Axis::x ? 'x' : 'y') << ' '
                << print_double(content.angle.value);
            switch (content.angle.unit) {
              case AngleUnit::deg: out << "deg"; break;
              case AngleUnit::rad: out << "rad"; break;
              case AngleUnit::pi: out << "pi"; break;
            }
          } else if constexpr (std::is_same_v<T, RepeatDirective>) {
            out << "repeat " << content.count;
          }
        },
        line.content);
    out << '\n';
  }
  return out.str();
}

CompiledProgram compile_program(const Program& program) {
  const SourcePos eof{int(program.lines.size()) + 1, 1};

  const ParamsDirective* params_dir = nullptr;
  const InitDirective* init_dir = nullptr;
  const UnitDirective* unit_dir = nullptr;
  const RepeatDirective* repeat_dir = nullptr;
  std::vector<std::pair<int, const LineContent*>> segment_lines;

  for (const SourceLine& line : program.lines) {
    const SourcePos pos{line.number, 1};
    if (const auto* d = std::get_if<ParamsDirective>(&line.content)) {
      if (params_dir) throw DuplicateDirective(pos, "params");
      params_dir = d;
    } else if (const auto* d = std::get_if<InitDirective>(&line.content)) {
      if (init_dir) throw DuplicateDirective(pos, "init");
      init_dir = d;
    } else if (const auto* d = std::get_if<UnitDirective>(&line.content)) {
      if (unit_dir) throw DuplicateDirective(pos, "unit");
      unit_dir = d;
    } else if (const auto* d = std::get_if<RepeatDirective>(&line.content)) {
      if (repeat_dir) throw DuplicateDirective(pos, "repeat");
      repeat_dir = d;
    } else if (!std::holds_alternative<TriviaLine>(line.content)) {
      segment_lines.emplace_back(line.number, &line.content);
    }
  }

  if (!params_dir) throw MissingDirective(eof, "params");
  if (segment_lines.empty()) throw MissingDirective(eof, "delay");

  RawParams raw;
  for (const auto& [key, value] : params_dir->entries) {
    if (value.kind == ParamValue::Kind::automatic) continue;
    switch (key) {
      case ParamKey::t1: raw.t1 = value.number; break;
      case ParamKey::t2: raw.t2 = value.number; break;
      case ParamKey::tphi:
        raw.t_phi = value.kind == ParamValue::Kind::infinite
                        ? Timescale::infinite()
                        : Timescale::finite(value.number);
        break;
      case ParamKey::meq: raw.m_eq = value.number; break;
      case ParamKey::omega1: raw.omega1 = value.number; break;
    }
  }

  CompiledProgram out;
  out.params = validate_params(raw);

  PulseSequence& seq = out.sequence;
  seq.unit = unit_dir ? unit_dir->unit : TimeUnit::t2;
  seq.cycles = repeat_dir ? repeat_dir->count : 1;
  seq.initial = {0.0, 0.0, -0.9 * out.params.m_eq};
  if (init_dir) {
    for (const auto& [key, value] : init_dir->entries) {
      if (key == 'x') seq.initial.mx = value;
      else if (key == 'y') seq.initial.my = value;
      else seq.initial.mz = value;
    }
  }
  for (const auto& [line_no, content] : segment_lines) {
    if (const auto* delay = std::get_if<DelayDirective>(content)) {
      seq.segments.push_back(DelaySegment{delay->duration});
    } else {
      const auto& pulse = std::get<PulseDirective>(*content);
      seq.segments.push_back(PulseSegment{PulseSpec::from_theta(
          pulse.axis, pulse.angle.radians(), out.params.omega1)});
    }
  }
  return out;
}

CompiledProgram parse_sequence(std::string_view text) {
  return compile_program(parse_program(text));
}

}  // namespace edtc
