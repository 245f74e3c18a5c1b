#include <filesystem>
#include <sstream>
#include <thread>

#include "cli.hpp"
#include "doctest.h"
#include "noesis/scaling.hpp"
#include "noesis/service.hpp"
#include "noesis/session.hpp"
#include "support.hpp"

using namespace noesis;
using namespace noesis::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome noesis_cmd(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("noesis-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string write_temp(const TempDir& dir, const std::string& name, const std::string& text) {
  std::ofstream(dir / name) << text;
  return dir / name;
}

const std::string kDigitAnswers =
    "ask -> Composite, Even, Odd, Prime, Square\n"
    "no One: Odd, Square\n"
    "ask -> Odd, Square\n"
    "no Two: Even, Prime\n"
    "ask Square -> Odd\n"
    "no Four: Composite, Even, Square\n"
    "ask Prime -> Even\n"
    "no Three: Odd, Prime\n"
    "ask Prime, Square -> Composite, Even, Odd\n"
    "yes\n"
    "ask Even, Square -> Composite\n"
    "yes\n"
    "ask Composite -> Even, Square\n"
    "no Six: Composite, Even\n"
    "ask Even, Odd -> Composite, Prime, Square\n"
    "yes\n"
    "ask Composite -> Even\n"
    "no Nine: Composite, Odd, Square\n"
    "ask Composite, Odd -> Square\n"
    "yes\n"
    "quit\n";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("help documents every subcommand and exits 0") {
    auto r = noesis_cmd({"--help"});
    CHECK(r.code == 0);
    for (const char* word : {"scale", "lattice", "replay", "explore", "serve"}) CHECK(r.out.find(word) != std::string::npos);
    auto rep = noesis_cmd({"replay", "--help"});
    CHECK(rep.code == 0);
    for (const char* flag : {"--reference", "--script", "--initial", "--trace", "--snapshots"})
      CHECK(rep.out.find(flag) != std::string::npos);
    CHECK(noesis_cmd({}).code == cli::kParse);
    CHECK(noesis_cmd({"frobnicate"}).code == cli::kParse);
  }

  TEST_CASE("scale prints the canonical context") {
    auto r = noesis_cmd({"scale", data_path("digits_scenario.json")});
    CHECK(r.code == 0);
    CHECK(r.out == fixture("digits_context.json"));

    TempDir dir;
    auto apple = noesis_cmd({"scale", data_path("apple_scenario.json"), "-o", dir / "apple.json"});
    CHECK(apple.code == 0);
    auto ctx = parse_context(read_file(dir / "apple.json"), ContextFormat::Json);
    CHECK(ctx.object_count() == 1);
    CHECK(ctx.attribute_count() == 4);
    CHECK(noesis_cmd({"scale", data_path("digits_scenario.json"), "-o", dir / "digits.cxt"}).code == 0);
    CHECK(read_file(dir / "digits.cxt") == fixture("digits.cxt"));
    CHECK(noesis_cmd({"scale", data_path("apple_scenario.json"), "-o", dir / "apple.cxt"}).code == cli::kValidation);
  }

  TEST_CASE("scale errors") {
    TempDir dir;
    CHECK(noesis_cmd({"scale", dir / "missing.json"}).code == cli::kParse);
    CHECK(noesis_cmd({"scale", write_temp(dir, "bad.json", "{\"perspectives\":")}).code == cli::kParse);
    auto invalid = write_temp(dir, "invalid.json",
                              R"({"perspectives":[{"name":"t","propositions":["a","b"]}],)"
                              R"("timeline":[{"granule":0,"instance":"x","truth":{"a":true}}]})");
    auto r = noesis_cmd({"scale", invalid});
    CHECK(r.code == cli::kValidation);
    CHECK(r.err.find("MissingTruth") != std::string::npos);
    CHECK(noesis_cmd({"scale", data_path("digits_scenario.json"), "-o", "/nonexistent/dir/out.json"}).code ==
          cli::kIoFailure);
  }

  TEST_CASE("lattice counts concepts and writes both exports") {
    TempDir dir;
    auto r = noesis_cmd({"lattice", data_path("digits_context.json"), "--dot", dir / "l.dot", "--json", dir / "l.json"});
    CHECK(r.code == 0);
    CHECK(r.out == "14 concepts\n");
    auto lat = enumerate_concepts(digits());
    CHECK(read_file(dir / "l.dot") == export_dot(lat));
    CHECK(read_file(dir / "l.json") == lattice_json(lat));
    CHECK(noesis_cmd({"lattice", data_path("digits_attributes.json")}).out == "1 concepts\n");
    CHECK(noesis_cmd({"lattice", data_path("digits.cxt"), "--labels", "full", "--dot", dir / "f.dot"}).code == 0);
    CHECK(read_file(dir / "f.dot") == export_dot(enumerate_concepts(parse_context(fixture("digits.cxt"), ContextFormat::Cxt)),
                                                 LabelMode::Full));
    CHECK(noesis_cmd({"lattice", data_path("digits_context.json"), "--labels", "fancy"}).code == cli::kParse);
    auto dup = write_temp(dir, "dup.json",
                          R"({"dimensions":[{"name":"d","attributes":["a","a"]}],"objects":[],"incidence":[]})");
    CHECK(noesis_cmd({"lattice", dup}).code == cli::kValidation);
  }

  TEST_CASE("replay matches the library byte for byte") {
    TempDir dir;
    auto r = noesis_cmd({"replay", "--reference", data_path("digits_context.json"), "--script",
                         data_path("digits_script.json")});
    CHECK(r.code == 0);
    auto ref = digits();
    auto lib = replay(ref, resolve_script(ref, parse_script(fixture("digits_script.json"))));
    CHECK(r.out == trace_jsonl(lib.session.initial_context(), lib.trace()));

    auto with_files = noesis_cmd({"replay", "--reference", data_path("digits_context.json"), "--script",
                                  data_path("digits_script.json"), "--trace", dir / "t.jsonl", "--snapshots",
                                  dir / "snaps"});
    CHECK(with_files.code == 0);
    CHECK(read_file(dir / "t.jsonl") == r.out);
    CHECK(read_file(dir / "snaps/granule-000.ensemble.json") == ensemble_json(lib.snapshots[0].belief));
    CHECK(read_file(dir / "snaps/granule-010.lattice.json") == lattice_json(lib.snapshots[10].lattice));
    CHECK_FALSE(fs::exists(dir / "snaps/granule-011.lattice.json"));
  }

  TEST_CASE("replay edge cases and exit codes") {
    TempDir dir;
    auto empty = noesis_cmd({"replay", "--reference", data_path("digits_context.json"), "--script",
                             write_temp(dir, "empty.json", "[]")});
    CHECK(empty.code == 0);
    CHECK(std::count(empty.out.begin(), empty.out.end(), '\n') == 1);

    auto unknown = write_temp(dir, "unknown.json", R"([{"premise":["Negative"],"conclusion":["Odd"]}])");
    CHECK(noesis_cmd({"replay", "--reference", data_path("digits_context.json"), "--script", unknown}).code ==
          cli::kProtocol);
    CHECK(noesis_cmd({"replay", "--reference", data_path("digits_context.json"), "--script",
                      write_temp(dir, "broken.json", "[{")})
              .code == cli::kParse);
    CHECK(noesis_cmd({"replay", "--script", unknown}).code == cli::kParse);

    auto initial = noesis_cmd({"replay", "--reference", data_path("digits_context.json"), "--script",
                               data_path("digits_script.json"), "--initial", data_path("digits_context.json")});
    CHECK(initial.code == 0);
    CHECK(initial.out.find("learning_cue\":{") == std::string::npos);
  }

  TEST_CASE("explore answering as in the digit experiment learns the table rows") {
    TempDir dir;
    auto r = noesis_cmd({"explore", "--context", data_path("digits_attributes.json"), "--trace", dir / "t.jsonl", "-o",
                         dir / "final.json"},
                        kDigitAnswers);
    CHECK(r.code == 0);
    auto final_ctx = parse_context(read_file(dir / "final.json"), ContextFormat::Json);
    auto table = digits();
    CHECK(final_ctx.objects() == names({"One", "Two", "Four", "Three", "Six", "Nine"}));
    for (std::size_t g = 0; g < final_ctx.object_count(); ++g)
      CHECK(final_ctx.row(g) == table.row(table.object_index(final_ctx.object_name(g))));

    // Same trace as the scripted replay, plus the closing event.
    auto lib = replay(table, resolve_script(table, parse_script(fixture("digits_script.json"))));
    auto expected = trace_jsonl(lib.session.initial_context(), lib.trace());
    auto got = read_file(dir / "t.jsonl");
    REQUIRE(got.size() > expected.size());
    CHECK(got.substr(0, expected.size()) == expected);
    CHECK(got.find("\"resulting_phase\":\"terminal\"", expected.size()) != std::string::npos);
    CHECK(r.out.find("suggest:") != std::string::npos);
    CHECK(r.out.find("\x1b[") == std::string::npos);
  }

  TEST_CASE("explore then quit leaves a valid terminal trace") {
    TempDir dir;
    auto r = noesis_cmd({"explore", "--context", data_path("digits_attributes.json"), "--trace", dir / "t.jsonl"}, "quit\n");
    CHECK(r.code == 0);
    auto basis = digit_attributes();
    auto events = parse_trace(basis, read_file(dir / "t.jsonl"));
    REQUIRE(events.size() == 2);
    CHECK(events.back().resulting_phase == Phase::Terminal);
    CHECK(Session::restore(basis, InteractiveOracle{}, events).phase() == Phase::Terminal);
    // End of input behaves like quit.
    CHECK(noesis_cmd({"explore", "--context", data_path("digits_attributes.json")}, "").code == 0);
  }

  TEST_CASE("explore recovers from bad input") {
    auto r = noesis_cmd({"explore", "--context", data_path("digits_attributes.json")},
                        "dance\nask Negative -> Odd\nask Odd\nask -> Odd\nmaybe\nno Two: Odd\nno Four: Even\nshow\nquit\n");
    CHECK(r.code == 0);
    CHECK(r.out.find("unknown command 'dance'") != std::string::npos);
    CHECK(r.out.find("UnknownAttribute") != std::string::npos);
    CHECK(r.out.find("PREMISE -> CONCLUSION") != std::string::npos);
    CHECK(r.out.find("answer yes, no NAME") != std::string::npos);
    CHECK(r.out.find("NotACounterexample") != std::string::npos);
    CHECK(r.out.find("learned Four at granule 1") != std::string::npos);
    CHECK(r.out.find("  Four @1: {Even}") != std::string::npos);
  }

  TEST_CASE("serve refuses an occupied port") {
    Service holder;
    REQUIRE(holder.bind("127.0.0.1", 0));
    auto r = noesis_cmd({"serve", "--addr", "127.0.0.1:" + std::to_string(holder.port())});
    CHECK(r.code == cli::kIoFailure);
    CHECK(noesis_cmd({"serve", "--addr", "nowhere:port"}).code == cli::kValidation);
  }
}
