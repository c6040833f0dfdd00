#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "nlqw/io.hpp"

using namespace nlqw;
using std::numbers::pi;

namespace {

std::string field_of(const std::string& json) {
  try {
    (void)parse_config(json);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

template <typename Row, typename Write, typename Read>
void check_round_trip(const std::vector<Row>& rows, Format format,
                      void (*header)(std::ostream&, Format), Write write, Read read) {
  std::ostringstream first;
  header(first, format);
  for (const auto& r : rows) write(first, format, r);
  std::istringstream in(first.str());
  const std::vector<Row> parsed = read(in, format);
  CHECK(parsed == rows);
  std::ostringstream second;
  header(second, format);
  for (const auto& r : parsed) write(second, format, r);
  CHECK(second.str() == first.str());
}

double random_real(std::mt19937_64& rng) {
  // Mix of ordinary, tiny and huge magnitudes.
  std::uniform_real_distribution<double> mantissa(0.0, 1.0);
  std::uniform_int_distribution<int> exponent(-320, 300);
  switch (rng() % 4) {
    case 0:
      return mantissa(rng);
    case 1:
      return std::ldexp(mantissa(rng), exponent(rng));
    case 2:
      return static_cast<double>(rng() % 1000);
    default:
      return mantissa(rng) * std::pow(10.0, exponent(rng));
  }
}

}  // namespace

TEST_CASE("parse_real") {
  CHECK(parse_real("0.6", "x") == 0.6);
  CHECK(parse_real(" 2 ", "x") == 2.0);
  CHECK(parse_real("+1.5", "x") == 1.5);
  CHECK(parse_real("1e-3", "x") == 1e-3);
  CHECK(parse_real("pi", "x") == pi);
  CHECK(parse_real("pi/3", "x") == pi / 3);
  CHECK(parse_real("2pi/3", "x") == 2 * pi / 3);
  CHECK(parse_real("2*pi/3", "x") == 2 * pi / 3);
  CHECK(parse_real("0.5 * pi", "x") == 0.5 * pi);
  for (const char* bad : {"", "abc", "1.2.3", "pi/0", "pi*2", "3x", "nan", "inf"}) {
    CAPTURE(bad);
    try {
      (void)parse_real(bad, "walk.theta");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.field() == "walk.theta");
    }
  }
}

TEST_CASE("property: format_real round-trips exactly") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 2000; ++trial) {
    const double x = random_real(rng);
    CHECK(parse_real(format_real(x), "x") == x);
  }
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(0.0) == "0");
}

TEST_CASE("mode and format names") {
  CHECK(mode_from_string("profile") == Mode::profile);
  CHECK(to_string(Mode::sweep) == "sweep");
  CHECK(format_from_string("ndjson") == Format::ndjson);
  CHECK_THROWS_AS(mode_from_string("walks"), ConfigError);
  CHECK_THROWS_AS(format_from_string("tsv"), ConfigError);
}

TEST_CASE("parse_config: walk document") {
  const RunConfig c = parse_config(R"({
    "mode": "walk",
    "walk": {"theta": "pi/3", "chi": 0.6, "steps": 100, "initial": "right"},
    "output_path": "out.csv",
    "record_stride": 5,
    "workers": 3
  })");
  REQUIRE(c.walk);
  CHECK(c.mode == Mode::walk);
  CHECK(c.walk->theta == pi / 3);
  CHECK(c.walk->chi == 0.6);
  CHECK(c.walk->steps == 100);
  CHECK(c.walk->initial == InitialState::right_only);
  CHECK(c.walk->margin == 2);
  CHECK(c.output_path == "out.csv");
  CHECK(c.format == Format::csv);
  CHECK(c.record_stride == 5);
  CHECK(c.workers == 3);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("parse_config: sweep document with nested settings") {
  const RunConfig c = parse_config(R"({
    "mode": "sweep",
    "sweep": {
      "theta_range": {"min": 0, "max": "pi", "count": 5},
      "chi_range": {"min": 0, "max": 2, "count": 3},
      "steps": 50,
      "window": {"start_frac": 0.5, "sampling": "all"},
      "thresholds": {"trapped_sp": 0.6}
    },
    "format": "ndjson",
    "output_path": "s.ndjson"
  })");
  REQUIRE(c.sweep);
  CHECK(c.sweep->theta == Grid{0.0, pi, 5});
  CHECK(c.sweep->chi == Grid{0.0, 2.0, 3});
  CHECK(c.sweep->averaging == AveragingSpec{0.5, Sampling::every_step});
  CHECK(c.sweep->thresholds.trapped_sp == 0.6);
  CHECK(c.sweep->thresholds.spreading_ipr == 0.5);
  CHECK(c.format == Format::ndjson);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("parse_config errors name the offending field") {
  CHECK(field_of("{") == "config");
  CHECK(field_of("[]") == "");
  CHECK(field_of(R"({"colour": 1})") == "colour");
  CHECK(field_of(R"({"walk": {"thetaa": 1}})") == "walk.thetaa");
  CHECK(field_of(R"({"walk": {"theta": "half"}})") == "walk.theta");
  CHECK(field_of(R"({"walk": {"steps": 1.5}})") == "walk.steps");
  CHECK(field_of(R"({"walk": {"initial": "left"}})") == "walk.initial");
  CHECK(field_of(R"({"mode": "plot"})") == "mode");
  CHECK(field_of(R"({"format": "xml"})") == "format");
  CHECK(field_of(R"({"sweep": {"window": {"sampling": "odd"}}})") ==
        "sweep.window.sampling");
  CHECK(field_of(R"({"sweep": {"chi_range": {"step": 1}}})") ==
        "sweep.chi_range.step");
  CHECK(field_of(R"({"snapshot_times": 3})") == "snapshot_times");
}

TEST_CASE("RunConfig validation") {
  RunConfig c;
  auto field = [&] {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  CHECK(field() == "walk");
  c.walk = WalkParams{};
  CHECK(field() == "<none>");
  c.walk->chi = -1.0;
  CHECK(field() == "walk");
  c.walk->chi = 0.0;
  c.record_stride = 0;
  CHECK(field() == "record_stride");
  c.record_stride = 1;
  c.workers = 0;
  CHECK(field() == "workers");
  c.workers = 1;
  c.mode = Mode::profile;
  CHECK(field() == "snapshot_times");
  c.snapshot_times = {0, 1, 2};
  CHECK(field() == "snapshot_times");  // steps is 1
  c.walk->steps = 2;
  CHECK(field() == "<none>");
  c.mode = Mode::sweep;
  CHECK(field() == "sweep");
  c.sweep = SweepSpec{};
  CHECK(field() == "walk");
  c.walk.reset();
  CHECK(field() == "<none>");
  c.sweep->theta.count = 1;
  CHECK(field() == "sweep");
}

TEST_CASE("config_to_json round-trips every mode") {
  RunConfig walk;
  walk.walk = WalkParams{pi / 3, 0.6, 1000, InitialState::right_only, 4};
  walk.output_path = "dir/walk.csv";
  walk.record_stride = 10;

  RunConfig profile;
  profile.mode = Mode::profile;
  profile.walk = WalkParams{0.1, 1.9, 50, InitialState::symmetric_circular, 0};
  profile.format = Format::ndjson;
  profile.output_path = "p.ndjson";
  profile.snapshot_times = {0, 10, 50};

  RunConfig sweep;
  sweep.mode = Mode::sweep;
  sweep.sweep = SweepSpec{};
  sweep.sweep->theta = {0.1, 3.0, 7};
  sweep.sweep->averaging = {0.25, Sampling::every_step};
  sweep.sweep->thresholds = {0.4, 0.3, 0.2};
  sweep.output_path = "s.csv";

  for (const RunConfig& c : {walk, profile, sweep}) {
    const std::string text = config_to_json(c);
    const RunConfig back = parse_config(text);
    CHECK(back == c);
    CHECK(config_to_json(back) == text);
  }
}

TEST_CASE("workers never appear in emitted config") {
  RunConfig c;
  c.walk = WalkParams{};
  c.workers = 7;
  const std::string text = config_to_json(c);
  CHECK(text.find("workers") == std::string::npos);
  RunConfig d = c;
  d.workers = 1;
  CHECK(config_to_json(d) == text);
}

TEST_CASE("sweep metadata is a loadable config carrying the version") {
  RunConfig c;
  c.mode = Mode::sweep;
  c.sweep = SweepSpec{};
  c.output_path = "table.csv";
  c.workers = 4;
  const std::string meta = sweep_metadata(c);
  CHECK(meta.find("\"artifact_version\": \"1.0.0\"") != std::string::npos);
  RunConfig back = parse_config(meta);
  back.workers = 4;
  CHECK(back == c);
}

TEST_CASE("metadata_path") {
  CHECK(metadata_path("out/table.csv") == std::filesystem::path("out/table.meta.json"));
  CHECK(metadata_path("table") == std::filesystem::path("table.meta.json"));
}

TEST_CASE("table headers") {
  std::ostringstream w, p, s, n;
  write_walk_header(w, Format::csv);
  write_profile_header(p, Format::csv);
  write_sweep_header(s, Format::csv);
  write_walk_header(n, Format::ndjson);
  CHECK(w.str() == "t,ipr,sp,norm\n");
  CHECK(p.str() == "t,n,p\n");
  CHECK(s.str() == "theta,chi,ipr_bar,ipr_norm,sp_bar,regime\n");
  CHECK(n.str().empty());
}

TEST_CASE("row encodings") {
  std::ostringstream csv, nd;
  write_walk_row(csv, Format::csv, {3, 1.5, 0.25, 1.0});
  write_walk_row(nd, Format::ndjson, {3, 1.5, 0.25, 1.0});
  CHECK(csv.str() == "3,1.5,0.25,1\n");
  CHECK(nd.str() == "{\"t\":3,\"ipr\":1.5,\"sp\":0.25,\"norm\":1}\n");

  std::ostringstream sc, sn;
  const SweepRow row{0.5, 2.0, 3.25, 1.0, 0.75, Regime::self_trapped};
  write_sweep_row(sc, Format::csv, row);
  write_sweep_row(sn, Format::ndjson, row);
  CHECK(sc.str() == "0.5,2,3.25,1,0.75,self_trapped\n");
  CHECK(sn.str() ==
        "{\"theta\":0.5,\"chi\":2,\"ipr_bar\":3.25,\"ipr_norm\":1,\"sp_bar\":0.75,"
        "\"regime\":\"self_trapped\"}\n");

  std::ostringstream pc;
  write_profile_row(pc, Format::csv, {4, -2, 0.125});
  CHECK(pc.str() == "4,-2,0.125\n");
}

TEST_CASE("property: write -> read -> write is byte-identical") {
  std::mt19937_64 rng(22);
  const Regime regimes[] = {Regime::spreading, Regime::mobile_soliton,
                            Regime::chaotic_like, Regime::self_trapped};
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t count = rng() % 40;
    std::vector<TimeSeriesRecord> walk;
    std::vector<ProfileRow> profile;
    std::vector<SweepRow> sweep;
    for (std::size_t i = 0; i < count; ++i) {
      walk.push_back({static_cast<std::int64_t>(rng() % 100000), random_real(rng),
                      random_real(rng), random_real(rng)});
      profile.push_back({static_cast<std::int64_t>(rng() % 1000),
                         static_cast<std::int64_t>(rng() % 2001) - 1000,
                         random_real(rng)});
      sweep.push_back({random_real(rng), random_real(rng), random_real(rng),
                       random_real(rng), random_real(rng), regimes[rng() % 4]});
    }
    for (Format f : {Format::csv, Format::ndjson}) {
      check_round_trip(walk, f, write_walk_header, write_walk_row, read_walk);
      check_round_trip(profile, f, write_profile_header, write_profile_row, read_profile);
      check_round_trip(sweep, f, write_sweep_header, write_sweep_row, read_sweep);
    }
  }
}

TEST_CASE("readers report the failing line") {
  auto message = [](auto read, const std::string& text, Format f) {
    std::istringstream in(text);
    try {
      (void)read(in, f);
    } catch (const std::runtime_error& e) {
      return std::string(e.what());
    }
    return std::string("<none>");
  };
  CHECK(message(read_walk, "", Format::csv).rfind("line 1:", 0) == 0);
  CHECK(message(read_walk, "t,ipr,sp\n", Format::csv).rfind("line 1:", 0) == 0);
  CHECK(message(read_walk, "t,ipr,sp,norm\n1,2,3,4\n1,2,3\n", Format::csv)
            .rfind("line 3:", 0) == 0);
  CHECK(message(read_walk, "t,ipr,sp,norm\n1.5,2,3,4\n", Format::csv)
            .rfind("line 2:", 0) == 0);
  CHECK(message(read_profile, "t,n,p\n1,0,x\n", Format::csv).rfind("line 2:", 0) == 0);
  CHECK(message(read_sweep, "theta,chi,ipr_bar,ipr_norm,sp_bar,regime\n0,0,1,1,0,odd\n",
                Format::csv)
            .rfind("line 2:", 0) == 0);
  CHECK(message(read_walk, "{\"t\":1,\"ipr\":1,\"sp\":0,\"norm\":1}\n{\"t\":1}\n",
                Format::ndjson)
            .rfind("line 2:", 0) == 0);
  CHECK(message(read_walk, "{\"ipr\":1,\"t\":1,\"sp\":0,\"norm\":1}\n", Format::ndjson)
            .rfind("line 1:", 0) == 0);
  CHECK(message(read_profile, "not json\n", Format::ndjson).rfind("line 1:", 0) == 0);
  CHECK(message(read_walk, "t,ipr,sp,norm\n1,2,3,4\n", Format::csv) == "<none>");
}
