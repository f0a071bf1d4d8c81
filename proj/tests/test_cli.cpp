#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scatter1d/cli.hpp"

using namespace scatter1d;
using namespace scatter1d::cli;
using nlohmann::json;

namespace {

std::string validation_message(const json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Validation);
    return e.what();
  }
  return "";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

TEST_CASE("complex literals") {
  CHECK(parse_complex(json(2.5), "z") == Complex{2.5, 0});
  CHECK(parse_complex(json::parse("[1, -2]"), "z") == Complex{1, -2});
  CHECK(parse_complex_string("-1+2i", "z") == Complex{-1, 2});
  CHECK(parse_complex_string("3i", "z") == Complex{0, 3});
  CHECK(parse_complex_string("-i", "z") == Complex{0, -1});
  CHECK(parse_complex_string("1e-3-2.5e1i", "z") == Complex{1e-3, -25});
  CHECK(parse_complex_string(" 4 ", "z") == Complex{4, 0});
  CHECK_THROWS_AS(parse_complex_string("1+", "z"), Error);
  CHECK_THROWS_AS(parse_complex_string("abc", "z"), Error);
  CHECK_THROWS_AS(parse_complex(json::parse("[1, 2, 3]"), "z"), Error);
}

TEST_CASE("grid flag") {
  const GridSpec g = parse_grid_flag("0.5,4,8,lin");
  CHECK(g.min == 0.5);
  CHECK(g.count == 8);
  CHECK_FALSE(g.log);
  CHECK(g.points()[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(parse_grid_flag("1,2"), Error);
  CHECK_THROWS_AS(parse_grid_flag("1,2,3,cubic"), Error);
}

TEST_CASE("validation errors name the field") {
  CHECK(validation_message(json::parse(R"({"model": {"type": "Delta", "z": 1}})")).find("schema") !=
        std::string::npos);
  CHECK(validation_message(json::parse(R"({"schema": 2, "model": {"type": "Delta", "z": 1}})"))
            .find("schema") != std::string::npos);
  CHECK(validation_message(json::parse(R"({"schema": 1, "model": {"type": "Wobble"}})")).find("model.type") !=
        std::string::npos);
  CHECK(validation_message(json::parse(R"({"schema": 1, "model": {"type": "Barrier", "z": 1, "width": -1}})"))
            .find("width") != std::string::npos);
  CHECK(validation_message(json::parse(R"({"schema": 1, "model": {"type": "Delta", "z": "x"}})"))
            .find("model.z") != std::string::npos);
  CHECK(validation_message(json::parse(R"({"schema": 1, "model": {"type": "Delta", "z": 1},
                                           "grid": {"min": 2, "max": 1, "count": 5}})"))
            .find("grid") != std::string::npos);
}

TEST_CASE("sweep CSV values") {
  const JobConfig cfg = parse_config(json::parse(R"({
    "schema": 1,
    "model": {"type": "Delta", "z": [0, 2]},
    "grid": {"min": 0.5, "max": 4, "count": 8, "spacing": "lin"},
    "output": {"format": "csv"}})"));
  const CommandResult res = execute(Command::Sweep, cfg, {});
  CHECK(res.code == ExitCode::Ok);
  CHECK(res.format == Format::Csv);
  const auto lines = split(res.content, '\n');
  CHECK(lines[0] ==
        "k,re_r_l,im_r_l,re_r_r,im_r_r,re_t_l,im_t_l,re_t_r,im_t_r,abs_r_l_sq,abs_t_l_sq,re_det_m,im_det_m,re_det_s,"
        "im_det_s");
  // k = 1 is a spectral singularity: reported as an event, not a row.
  CHECK(res.events.size() == 1);
  bool seen = false;
  for (const auto& line : lines) {
    const auto f = split(line, ',');
    if (f.size() == 15 && f[0] == "2") {
      seen = true;
      CHECK(std::stod(f[1]) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(std::stod(f[2])) < 1e-15);
      CHECK(std::stod(f[5]) == doctest::Approx(2.0).epsilon(1e-14));
      CHECK(std::stod(f[13]) == doctest::Approx(3.0).epsilon(1e-14));
    }
  }
  CHECK(seen);
}

TEST_CASE("identical inputs give identical bytes") {
  const json j = json::parse(R"({
    "schema": 1,
    "model": {"type": "Barrier", "z": "3-0.5i", "x0": 0, "width": 1},
    "grid": {"min": 0.1, "max": 10, "count": 50}})");
  const auto a = execute(Command::Sweep, parse_config(j), {});
  const auto b = execute(Command::Sweep, parse_config(j), {});
  CHECK(a.content == b.content);
  const auto va = execute(Command::Verify, parse_config(j), {});
  const auto vb = execute(Command::Verify, parse_config(j), {});
  CHECK(va.content == vb.content);
}

TEST_CASE("verify exit codes") {
  const json ok = json::parse(R"({"schema": 1, "model": {"type": "Barrier", "z": 5, "width": 1}})");
  CHECK(execute(Command::Verify, parse_config(ok), {.ci = true}).code == ExitCode::Ok);
  json bad = ok;
  bad["fault_injection"] = {{"m11_scale", {1.001, 0}}};
  CHECK(execute(Command::Verify, parse_config(bad), {.ci = true}).code == ExitCode::VerifyFailed);
  CHECK(execute(Command::Verify, parse_config(bad), {}).code == ExitCode::Ok);
}

TEST_CASE("spectra and laser commands produce JSON") {
  const json sp = json::parse(R"({"schema": 1, "model": {"type": "Delta", "z": -4},
      "region": {"re_min": -3, "re_max": 3, "im_min": -3, "im_max": 3, "nx": 60, "ny": 60}})");
  const auto r = execute(Command::Spectra, parse_config(sp), {});
  CHECK(r.code == ExitCode::Ok);
  const json out = json::parse(r.content);
  REQUIRE(out["points"].size() == 1);
  CHECK(out["points"][0]["kind"] == "BoundState");

  const json lj = json::parse(R"({"schema": 1, "laser": {"width": 100, "m": 50, "eta0": 1.5}})");
  const json lout = json::parse(execute(Command::Laser, parse_config(lj), {}).content);
  CHECK(lout["m22_residual"].get<double>() < 1e-8);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-0.0) == "0");
  CHECK_THROWS_AS(format_number(std::nan("")), Error);
  nlohmann::ordered_json j;
  j["b"] = 1.5;
  j["a"] = json::array({1.0, 2.0});
  CHECK(dump_json(j) == "{\n  \"b\": 1.5,\n  \"a\": [1, 2]\n}\n");
}

TEST_CASE("atomic write") {
  const auto path = std::filesystem::temp_directory_path() / "scatter1d_cli_test.txt";
  write_atomically(path.string(), "hello\n");
  std::ifstream in(path);
  std::string s;
  std::getline(in, s);
  CHECK(s == "hello");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(write_atomically("/nonexistent-dir/x.txt", "x"), Error);
}
