#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "korm/core.hpp"
#include "korm/errors.hpp"

namespace korm {

enum class ColumnKind { numeric, single_char_categorical, skip };

// Column layout of a delimited dataset. Single-character categorical cells
// are encoded as their character code (ASCII), matching how mixed-attribute
// datasets are fed to the distance computations.
struct DatasetSchema {
  std::vector<ColumnKind> columns;
  bool has_header = false;

  std::size_t output_dim() const {
    std::size_t d = 0;
    for (const auto k : columns) {
      if (k != ColumnKind::skip) ++d;
    }
    return d;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

}  // namespace detail

// Schema file: one kind keyword per column ("numeric", "char", "skip"),
// newline separated. An optional leading "header" / "no_header" line states
// whether the dataset carries a header row. Blank lines and '#' comments are
// ignored.
inline DatasetSchema parse_schema(std::istream& in) {
  DatasetSchema schema;
  std::string line;
  std::size_t line_no = 0;
  bool first_token = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view token = detail::trim(line);
    if (token.empty() || token.front() == '#') continue;
    if (first_token) {
      first_token = false;
      if (token == "header") {
        schema.has_header = true;
        continue;
      }
      if (token == "no_header") continue;
    }
    if (token == "numeric") {
      schema.columns.push_back(ColumnKind::numeric);
    } else if (token == "char" || token == "single_char_categorical") {
      schema.columns.push_back(ColumnKind::single_char_categorical);
    } else if (token == "skip") {
      schema.columns.push_back(ColumnKind::skip);
    } else {
      throw ParseError("schema: unknown column kind '" + std::string(token) + "'", line_no, 1);
    }
  }
  if (schema.columns.empty()) throw ShapeError("schema: no columns declared");
  if (schema.output_dim() == 0) throw ShapeError("schema: every column is marked skip");
  return schema;
}

inline DatasetSchema parse_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open schema file: " + path);
  return parse_schema(in);
}

// Parses delimited text per the schema. Row/column numbers in errors are
// 1-based file positions (the header row counts as line 1 when present).
inline std::vector<Point> parse_delimited(std::istream& in, const DatasetSchema& schema) {
  if (schema.columns.empty()) throw ShapeError("empty schema");
  std::vector<Point> points;
  std::string line;
  std::size_t line_no = 0;
  bool skipped_header = !schema.has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    const auto cells = detail::split_csv(line);
    if (cells.size() != schema.columns.size()) {
      throw ShapeError("row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                       " cells, schema expects " + std::to_string(schema.columns.size()));
    }
    Point p;
    p.coords.reserve(schema.output_dim());
    for (std::size_t col = 0; col < cells.size(); ++col) {
      const std::string_view cell = cells[col];
      switch (schema.columns[col]) {
        case ColumnKind::skip:
          break;
        case ColumnKind::numeric: {
          double value = 0.0;
          const char* first = cell.data();
          const char* last = cell.data() + cell.size();
          const auto res = std::from_chars(first, last, value);
          if (res.ec != std::errc{} || res.ptr != last || cell.empty()) {
            throw ParseError("cannot parse numeric cell '" + std::string(cell) + "'", line_no,
                             col + 1);
          }
          if (!std::isfinite(value)) {
            throw ParseError("non-finite numeric cell '" + std::string(cell) + "'", line_no,
                             col + 1);
          }
          p.coords.push_back(value);
          break;
        }
        case ColumnKind::single_char_categorical: {
          if (cell.size() != 1) {
            throw EncodingError("categorical cell '" + std::string(cell) +
                                    "' is not a single character",
                                line_no, col + 1);
          }
          p.coords.push_back(static_cast<double>(static_cast<unsigned char>(cell[0])));
          break;
        }
      }
    }
    points.push_back(std::move(p));
  }
  if (points.empty()) throw ShapeError("no data rows");
  return points;
}

inline std::vector<Point> load_dataset(const std::string& path, const DatasetSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path);
  return parse_delimited(in, schema);
}

// Optional per-dimension min-max scaling to [0, 1]; constant dimensions map
// to 0. Off by default everywhere.
inline void min_max_scale(std::vector<Point>& points) {
  if (points.empty()) return;
  const std::size_t d = points.front().dim();
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (const auto& p : points) {
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], p.coords[i]);
      hi[i] = std::max(hi[i], p.coords[i]);
    }
  }
  for (auto& p : points) {
    for (std::size_t i = 0; i < d; ++i) {
      const double span = hi[i] - lo[i];
      p.coords[i] = span > 0.0 ? (p.coords[i] - lo[i]) / span : 0.0;
    }
  }
}

// A fixed-size window of the stream: chunk i holds points
// (i-1)*Num+1 .. i*Num in stream order; only the last chunk may be short.
struct Chunk {
  std::size_t index = 0;  // 1-based
  std::vector<WeightedItem> points;
};

inline std::vector<Chunk> chunk_stream(const std::vector<Point>& points, std::size_t num) {
  if (num < 2) throw RangeError("chunk size Num must be at least 2");
  std::vector<Chunk> chunks;
  for (std::size_t start = 0; start < points.size(); start += num) {
    Chunk c;
    c.index = chunks.size() + 1;
    const std::size_t end = std::min(points.size(), start + num);
    c.points.reserve(end - start);
    for (std::size_t i = start; i < end; ++i) {
      c.points.push_back({points[i], 1.0, -1, 0});
    }
    chunks.push_back(std::move(c));
  }
  return chunks;
}

}  // namespace korm
