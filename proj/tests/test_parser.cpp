#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "edtc/parser.hpp"

using namespace edtc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<fs::path> seq_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".seq") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("fig1-style program compiles to the expected configuration") {
  const auto [p, seq] = parse_sequence(
      "params t1=100 tphi=auto t2=1 meq=0.8\n"
      "init mz=-0.72\n"
      "delay 10\n"
      "pulse y 180deg\n"
      "repeat 200\n");
  CHECK(p.t1 == 100.0);
  CHECK(p.t2 == 1.0);
  CHECK(p.m_eq == 0.8);
  // tphi solved from the identity
  CHECK(1.0 / p.t_phi.value() ==
        doctest::Approx(1.0 - 0.005).epsilon(1e-12));
  CHECK(seq.cycles == 200);
  CHECK(seq.initial.mz == -0.72);
  CHECK(seq.tau() == 10.0);
  REQUIRE(seq.pulse() != nullptr);
  CHECK(seq.pulse()->theta() == kPi);
  CHECK(seq.pulse()->delta() == 0.0);
  CHECK(seq.unit == TimeUnit::t2);
}

TEST_CASE("missing params directive is reported at end of file") {
  try {
    parse_sequence("pulse y 180deg\n");
    FAIL("expected MissingDirective");
  } catch (const MissingDirective& e) {
    CHECK(e.name() == "params");
    CHECK(e.pos().line == 2);
    CHECK(e.pos().col == 1);
  }
}

TEST_CASE("degree spelling of the paper's miscalibration") {
  const auto [p, seq] = parse_sequence(
      "params t1=100 t2=1 meq=0.8\n"
      "delay 10\n"
      "pulse y 192.132deg\n"
      "repeat 10\n");
  CHECK(std::abs(seq.pulse()->delta() - 0.0674 * kPi) <= 1e-6);
}

TEST_CASE("angle units deg, rad and pi agree") {
  const std::string head = "params t1=100 t2=1 meq=0.8\ndelay 1\n";
  const auto deg = parse_sequence(head + "pulse y 90deg\n");
  const auto rad = parse_sequence(head + "pulse y 1.5707963267948966rad\n");
  const auto pim = parse_sequence(head + "pulse y 0.5pi\n");
  CHECK(deg.sequence.pulse()->theta() ==
        doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(rad.sequence.pulse()->theta() ==
        doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(pim.sequence.pulse()->theta() ==
        doctest::Approx(kPi / 2).epsilon(1e-15));
}

TEST_CASE("defaults: init, repeat, unit, omega1") {
  const auto [p, seq] = parse_sequence(
      "params t1=100 t2=1 meq=0.8\n"
      "delay 10\n"
      "pulse y 180deg\n");
  CHECK(seq.initial.mx == 0.0);
  CHECK(seq.initial.my == 0.0);
  CHECK(seq.initial.mz == doctest::Approx(-0.72).epsilon(1e-15));
  CHECK(seq.cycles == 1);
  CHECK(seq.unit == TimeUnit::t2);
  CHECK(p.omega1 == kDefaultOmega1);
}

TEST_CASE("tphi=inf compiles to the pure-relaxation limit") {
  const auto [p, seq] = parse_sequence(
      "params t1=1 tphi=inf meq=0.5\n"
      "delay 1\n"
      "pulse y 180deg\n");
  CHECK(p.t_phi.is_infinite());
  CHECK(p.t2 == 2.0);
}

TEST_CASE("duplicate directives are rejected with the second position") {
  try {
    parse_sequence(
        "params t1=100 t2=1 meq=0.8\n"
        "init mz=0.1\n"
        "init mz=0.2\n"
        "delay 1\n"
        "pulse y 180deg\n");
    FAIL("expected DuplicateDirective");
  } catch (const DuplicateDirective& e) {
    CHECK(e.pos().line == 3);
    CHECK(e.pos().col == 1);
  }
}

TEST_CASE("syntax errors carry the offending column") {
  try {
    parse_sequence("params t1=100 t2=1 meq=0.8\ndelay ten\n");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.pos().line == 2);
    CHECK(e.pos().col == 7);
  }

  CHECK_THROWS_AS(parse_program("pulse y 180furlong\n"), UnitError);
  CHECK_THROWS_AS(parse_program("unit fortnights\n"), UnitError);
  CHECK_THROWS_AS(parse_program("params t1=100 t2=1 meq=0.8 extra\n"),
                  SyntaxError);
  CHECK_THROWS_AS(parse_program("repeat 1.5\n"), SyntaxError);
  CHECK_THROWS_AS(parse_program("params omega1=auto meq=0\n"), SyntaxError);
}

TEST_CASE("good corpus parses, round-trips and recompiles identically") {
  std::vector<fs::path> files = seq_files(EDTC_CORPUS_DIR "/good");
  for (const fs::path& recipe : seq_files(EDTC_RECIPES_DIR)) {
    files.push_back(recipe);
  }
  REQUIRE(files.size() >= 20);

  for (const fs::path& file : files) {
    CAPTURE(file.string());
    const std::string text = slurp(file);
    const Program program = parse_program(text);
    const std::string printed = pretty_print(program);
    CHECK(printed == text);

    // printing is a fixed point and compilation is stable across it
    const Program reparsed = parse_program(printed);
    CHECK(pretty_print(reparsed) == printed);

    const CompiledProgram a = compile_program(program);
    const CompiledProgram b = compile_program(reparsed);
    CHECK(a.params.t1 == b.params.t1);
    CHECK(a.params.t2 == b.params.t2);
    CHECK(a.params.omega1 == b.params.omega1);
    CHECK(a.sequence.cycles == b.sequence.cycles);
    CHECK(a.sequence.period() == b.sequence.period());
    CHECK(a.sequence.initial == b.sequence.initial);
  }
}

TEST_CASE("malformed corpus is rejected at the expected positions") {
  const fs::path dir = EDTC_CORPUS_DIR "/bad";
  const nlohmann::json expected =
      nlohmann::json::parse(slurp(dir / "expected.json"));
  REQUIRE(expected.size() >= 10);

  for (const auto& [name, want] : expected.items()) {
    CAPTURE(name);
    const std::string text = slurp(dir / name);
    const std::string kind = want.at("kind");
    SourcePos pos;
    std::string got_kind;
    try {
      parse_sequence(text);
    } catch (const SyntaxError& e) {
      got_kind = "syntax";
      pos = e.pos();
    } catch (const UnitError& e) {
      got_kind = "unit";
      pos = e.pos();
    } catch (const MissingDirective& e) {
      got_kind = "missing";
      pos = e.pos();
      if (want.contains("name")) CHECK(e.name() == want.at("name"));
    } catch (const DuplicateDirective& e) {
      got_kind = "duplicate";
      pos = e.pos();
    }
    CHECK(got_kind == kind);
    CHECK(pos.line == int(want.at("line")));
    CHECK(pos.col == int(want.at("col")));
  }
}

TEST_CASE("compile propagates parameter validation failures") {
  CHECK_THROWS_AS(
      parse_sequence("params t1=1 t2=3 meq=0\ndelay 1\npulse y 180deg\n"),
      NonPositiveTimescale);
  CHECK_THROWS_AS(
      parse_sequence("params t1=1 t2=1 meq=2\ndelay 1\npulse y 180deg\n"),
      MagnetizationOutOfRange);
}
