#include <catch_amalgamated.hpp>

#include <sstream>

#include "korm/ingest.hpp"
#include "korm/rng.hpp"
#include "korm/synth.hpp"
#include "oracles.hpp"

using namespace korm;

namespace {

DatasetSchema schema_of(const std::string& text) {
  std::istringstream in(text);
  return parse_schema(in);
}

std::vector<Point> parse_csv(const std::string& csv, const DatasetSchema& schema) {
  std::istringstream in(csv);
  return parse_delimited(in, schema);
}

}  // namespace

TEST_CASE("single-character cells encode to their character code") {
  const auto schema = schema_of("char\nnumeric\n");
  const auto pts = parse_csv("M,1.5\nF,2\nI,0.25\n", schema);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0] == Point{77.0, 1.5});
  CHECK(pts[1] == Point{70.0, 2.0});
  CHECK(pts[2] == Point{73.0, 0.25});
}

TEST_CASE("numeric parse failures carry row and column") {
  const auto schema = schema_of("numeric\nnumeric\n");
  try {
    parse_csv("1,2\n3,oops\n", schema);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row == 2);
    CHECK(e.column == 2);
  }
  CHECK_THROWS_AS(parse_csv("1,2\n3,inf\n", schema), ParseError);
  CHECK_THROWS_AS(parse_csv("1,\n", schema), ParseError);
}

TEST_CASE("long categorical cells are encoding errors") {
  const auto schema = schema_of("char\n");
  CHECK_THROWS_AS(parse_csv("MM\n", schema), EncodingError);
  const auto two = schema_of("char\nnumeric\n");
  CHECK_THROWS_AS(parse_csv(",1\n", two), EncodingError);  // empty cell
}

TEST_CASE("ragged rows are shape errors") {
  const auto schema = schema_of("numeric\nnumeric\n");
  CHECK_THROWS_AS(parse_csv("1,2\n3\n", schema), ShapeError);
  CHECK_THROWS_AS(parse_csv("1,2,3\n", schema), ShapeError);
  CHECK_THROWS_AS(parse_csv("", schema), ShapeError);  // no data rows
}

TEST_CASE("header rows are skipped when declared") {
  const auto schema = schema_of("header\nnumeric\nskip\n");
  const auto pts = parse_csv("value,label\n1.5,x\n2.5,y\n", schema);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0] == Point{1.5});
  CHECK(pts[1] == Point{2.5});
}

TEST_CASE("schema parsing rejects junk and all-skip layouts") {
  CHECK_THROWS_AS(schema_of("numeric\nwat\n"), ParseError);
  CHECK_THROWS_AS(schema_of("skip\nskip\n"), ShapeError);
  CHECK_THROWS_AS(schema_of(""), ShapeError);
  const auto s = schema_of("# comment\nno_header\nchar\nnumeric\n");
  CHECK_FALSE(s.has_header);
  CHECK(s.columns.size() == 2);
}

TEST_CASE("chunk_stream partitions in order") {
  std::vector<Point> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(Point{static_cast<double>(i)});

  const auto chunks = chunk_stream(pts, 4);
  REQUIRE(chunks.size() == 3);
  CHECK(chunks[0].points.size() == 4);
  CHECK(chunks[1].points.size() == 4);
  CHECK(chunks[2].points.size() == 2);
  CHECK(chunks[0].index == 1);
  CHECK(chunks[2].index == 3);

  pts.resize(4);
  CHECK(chunk_stream(pts, 4).size() == 1);
  pts.clear();
  CHECK(chunk_stream(pts, 4).empty());
  CHECK_THROWS_AS(chunk_stream(pts, 1), RangeError);
}

TEST_CASE("chunk concatenation reproduces the stream", "[property]") {
  RngStream rng(17, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = rng.next_below(200);
    const std::size_t num = 2 + rng.next_below(23);
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back(Point{rng.next_unit(), rng.next_unit()});
    }
    const auto chunks = chunk_stream(pts, num);
    std::vector<Point> rebuilt;
    for (const auto& c : chunks) {
      if (&c != &chunks.back()) CHECK(c.points.size() == num);
      for (const auto& item : c.points) {
        CHECK(item.weight == 1.0);
        rebuilt.push_back(item.location);
      }
    }
    CHECK(rebuilt == pts);
  }
}

TEST_CASE("dataset loads are deterministic") {
  const auto table = synth::make_tae_like(3);
  oracles::TempFile file(synth::to_csv(table));
  const auto schema = schema_of(std::string(synth::tae_schema_text));
  const auto a = load_dataset(file.path(), schema);
  const auto b = load_dataset(file.path(), schema);
  CHECK(a == b);
}

TEST_CASE("bundled synthetic tables have the documented shapes") {
  const auto abalone = synth::make_abalone_like(7);
  const auto pts =
      parse_csv(synth::to_csv(abalone), schema_of(std::string(synth::abalone_schema_text)));
  REQUIRE(pts.size() == 4177);
  CHECK(pts.front().dim() == 8);

  const auto tae = synth::make_tae_like(3);
  const auto tae_pts = parse_csv(synth::to_csv(tae), schema_of(std::string(synth::tae_schema_text)));
  REQUIRE(tae_pts.size() == 151);
  CHECK(tae_pts.front().dim() == 5);
}

TEST_CASE("min-max scaling maps every dimension into [0,1]") {
  std::vector<Point> pts = {{0.0, 5.0, 7.0}, {10.0, 5.0, 3.0}, {5.0, 5.0, 5.0}};
  min_max_scale(pts);
  CHECK(pts[0] == Point{0.0, 0.0, 1.0});
  CHECK(pts[1] == Point{1.0, 0.0, 0.0});
  CHECK(pts[2] == Point{0.5, 0.0, 0.5});
}

TEST_CASE("missing files are data errors") {
  CHECK_THROWS_AS(load_dataset("/nonexistent/nope.csv", schema_of("numeric\n")), DataError);
  CHECK_THROWS_AS(parse_schema_file("/nonexistent/nope.schema"), DataError);
}
