#include <cstdio>
#include <filesystem>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "dispatch.hpp"
#include "maxproj/equality.hpp"
#include "maxproj/io.hpp"

using namespace maxproj;

namespace {

const std::string kData = MAXPROJ_DATA_DIR;

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

int run(std::vector<std::string> args) { return cli::dispatch(args); }

}  // namespace

TEST_CASE("frame round trip is byte and bit stable") {
  io::FrameDoc doc;
  doc.field = Field::Complex;
  doc.n = 2;
  doc.vectors = build_maximal_etf(Field::Complex, 2).vectors;
  doc.weights = {0.5, 0.5, 0.5, 0.5};
  const std::string p1 = tmp_path("rt1.json"), p2 = tmp_path("rt2.json");
  io::save_frame(p1, doc);
  io::FrameDoc loaded = io::load_frame(p1);
  for (int i = 0; i < 4; ++i) {
    CHECK(loaded.vectors[static_cast<std::size_t>(i)][0] == doc.vectors[static_cast<std::size_t>(i)][0]);
    CHECK(loaded.vectors[static_cast<std::size_t>(i)][1] == doc.vectors[static_cast<std::size_t>(i)][1]);
  }
  io::save_frame(p2, loaded);
  CHECK(io::read_file(p1) == io::read_file(p2));
}

TEST_CASE("loader rejects malformed documents") {
  const std::string p = tmp_path("bad.json");
  io::write_file(p, "{\"field\": \"R\", \"n\": 2, \"vectors\": [[[1.0],[0.0,1.0]]]}");
  CHECK_THROWS_AS(io::load_frame(p), Error);  // mixed real/complex entries
  io::write_file(p, "{\"field\": \"Q\", \"n\": 2, \"vectors\": [[[1.0],[0.0]]]}");
  CHECK_THROWS_AS(io::load_frame(p), Error);
  io::write_file(p, "not json");
  CHECK_THROWS_AS(io::load_frame(p), Error);
  CHECK_THROWS_AS(io::load_frame(tmp_path("missing_file.json")), Error);
}

TEST_CASE("ball and matrix documents") {
  DualBallSpec ball = io::load_ball(kData + "/hexagon.json");
  CHECK(ball.n == 2);
  CHECK(ball.functionals.size() == 3);

  KMatrix m = io::load_matrix(kData + "/cm_coeffs_r2.json");
  CHECK(m.rows == 2);
  CHECK(m.cols == 3);
  CHECK(std::abs(m(1, 0) - cplx(-0.5, 0.0)) == 0.0);
}

TEST_CASE("fixtures pass their verify subcommands") {
  CHECK(run({"etf", "verify", "--input", kData + "/hesse_etf_c3.json"}) == 0);
  CHECK(run({"phi", "--input", kData + "/hexagon_unit_tight_frame.json"}) == 0);
  CHECK(run({"equality-check", "--input", kData + "/hexagon_unit_tight_frame.json"}) == 0);
  CHECK(run({"sandwich", "--ball", kData + "/hexagon.json", "--field", "R", "--n", "2"}) == 0);
  CHECK(run({"sandwich", "--ball", kData + "/icosahedral_ball.json", "--field", "R", "--n", "3"}) == 0);
  CHECK(run({"sandwich", "--ball", kData + "/sic_c2_ball.json", "--field", "C", "--n", "2"}) == 0);
  CHECK(run({"minproj", "--input", kData + "/hexagon.json"}) == 0);
  CHECK(run({"cm", "--etf", "R2", "--coeffs", kData + "/cm_coeffs_r2.json"}) == 0);
}

TEST_CASE("exit codes") {
  // verification failure: an orthonormal basis is not a maximal ETF
  const std::string p = tmp_path("basis.json");
  io::FrameDoc doc;
  doc.field = Field::Real;
  doc.n = 2;
  doc.vectors = {KVector::unit(Field::Real, 2, 0), KVector::unit(Field::Real, 2, 1)};
  io::save_frame(p, doc);
  CHECK(run({"etf", "verify", "--input", p}) == 1);

  // bad input
  CHECK(run({"etf", "verify", "--input", tmp_path("nope.json")}) == 2);
  CHECK(run({"constants", "--field", "Q", "--n", "2"}) == 2);
  CHECK(run({"family", "--field", "R", "--n", "2", "--count", "1"}) == 2);  // NoStrictGap
  CHECK(run({"etf", "build", "--field", "R", "--n", "5"}) == 2);
}

TEST_CASE("reports carry command echo, digests and results") {
  const std::string rep = tmp_path("report.json");
  CHECK(run({"constants", "--field", "C", "--n", "3", "--report", rep}) == 0);
  const std::string text = io::read_file(rep);
  CHECK(text.find("\"command\"") != std::string::npos);
  CHECK(text.find("\"delta\"") != std::string::npos);
  CHECK(text.find("\"timing_ms\"") != std::string::npos);

  // identical runs produce identical result payloads
  const std::string rep2 = tmp_path("report2.json");
  CHECK(run({"maximize", "--field", "R", "--n", "2", "--N", "3", "--restarts", "4", "--seed", "3",
             "--report", rep}) == 0);
  CHECK(run({"maximize", "--field", "R", "--n", "2", "--N", "3", "--restarts", "4", "--seed", "3",
             "--report", rep2}) == 0);
  auto results_of = [](const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(io::read_file(path));
    return j["results"].dump();
  };
  CHECK(results_of(rep) == results_of(rep2));
}

TEST_CASE("frame file weights survive a save/load cycle into the objective") {
  WeightedFrame f = replicate(build_maximal_etf(Field::Real, 2), 2);
  io::FrameDoc doc;
  doc.field = f.field;
  doc.n = f.n;
  doc.vectors = f.vectors;
  doc.weights = f.weights;
  const std::string p = tmp_path("replicate.json");
  io::save_frame(p, doc);
  WeightedFrame g = io::load_frame(p).as_weighted_frame();
  CHECK(objective_phi(g) == objective_phi(f));
}
