#include "compact_map/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <system_error>

#include "compact_map/error.hpp"

namespace compact_map {

namespace {

constexpr std::string_view kMetricsHeader =
    "stamp,vertex_count,edge_count,optimize_calls,final_cost";

struct Token {
  std::string_view text;
  std::size_t column = 0;  // 1-based
};

// Splits one line into whitespace-separated tokens, dropping a '#' comment.
std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') {
      break;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
           line[i] != '\r' && line[i] != '#') {
      ++i;
    }
    tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    fn(++line_no, text.substr(pos, end - pos));
    pos = end + 1;
  }
}

double to_double(const Token& t, std::size_t line, std::string_view what) {
  double v = 0.0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ParseError(line, t.column,
                     "expected finite number for " + std::string(what) +
                         ", got '" + std::string(t.text) + "'");
  }
  return v;
}

std::int64_t to_int(const Token& t, std::size_t line, std::string_view what) {
  std::int64_t v = 0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(line, t.column,
                     "expected integer for " + std::string(what) + ", got '" +
                         std::string(t.text) + "'");
  }
  return v;
}

std::size_t to_count(const Token& t, std::size_t line, std::string_view what) {
  const std::int64_t v = to_int(t, line, what);
  if (v < 0) {
    throw ParseError(line, t.column, std::string(what) + " must be >= 0");
  }
  return static_cast<std::size_t>(v);
}

RelativeConstraint to_constraint(const std::vector<Token>& tok,
                                 std::size_t first, std::size_t line) {
  const double d = to_double(tok[first], line, "d");
  if (d < 0.0) {
    throw ParseError(line, tok[first].column, "d must be >= 0");
  }
  return RelativeConstraint(d, to_double(tok[first + 1], line, "heading"),
                            to_double(tok[first + 2], line, "facing"));
}

void expect_fields(const std::vector<Token>& tok, std::size_t n,
                   std::size_t line) {
  if (tok.size() != n) {
    const std::size_t column =
        tok.size() > n ? tok[n].column : tok.back().column;
    throw ParseError(line, column,
                     std::string(tok.front().text) + " expects " +
                         std::to_string(n - 1) + " fields, got " +
                         std::to_string(tok.size() - 1));
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc()) {
    throw IoError("format_double failed");
  }
  return std::string(buf, ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw IoError("error reading '" + path.string() + "'");
  }
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    throw IoError("error writing '" + path.string() + "'");
  }
}

EventStream parse_events_text(std::string_view text) {
  EventStream events;
  std::optional<double> last_stamp;
  for_each_line(text, [&](std::size_t line, std::string_view content) {
    const std::vector<Token> tok = tokenize(content);
    if (tok.empty()) {
      return;
    }
    SimEvent ev;
    if (tok[0].text == "ODOM") {
      expect_fields(tok, 5, line);
      ev.stamp = to_double(tok[1], line, "stamp");
      ev.payload = OdomEvent{to_constraint(tok, 2, line)};
    } else if (tok[0].text == "LOOP") {
      expect_fields(tok, 6, line);
      ev.stamp = to_double(tok[1], line, "stamp");
      const std::int64_t target = to_int(tok[2], line, "target_frame");
      if (target < 0) {
        throw ParseError(line, tok[2].column, "target_frame must be >= 0");
      }
      ev.payload = LoopEvent{target, to_constraint(tok, 3, line)};
    } else {
      throw ParseError(line, tok[0].column,
                       "unknown record '" + std::string(tok[0].text) + "'");
    }
    if (last_stamp && ev.stamp < *last_stamp) {
      throw ParseError(line, tok[1].column, "stamp regression");
    }
    last_stamp = ev.stamp;
    events.push_back(ev);
  });
  return events;
}

EventStream parse_events(const std::filesystem::path& path) {
  return parse_events_text(read_file(path));
}

std::string format_events(const EventStream& events) {
  std::string out;
  auto append_constraint = [&out](const RelativeConstraint& c) {
    out += ' ';
    out += format_double(c.d());
    out += ' ';
    out += format_double(c.heading());
    out += ' ';
    out += format_double(c.facing());
  };
  for (const SimEvent& ev : events) {
    if (const auto* odom = std::get_if<OdomEvent>(&ev.payload)) {
      out += "ODOM ";
      out += format_double(ev.stamp);
      append_constraint(odom->step);
    } else {
      const auto& loop = std::get<LoopEvent>(ev.payload);
      out += "LOOP ";
      out += format_double(ev.stamp);
      out += ' ';
      out += std::to_string(loop.target_frame);
      append_constraint(loop.constraint);
    }
    out += '\n';
  }
  return out;
}

void write_events(const EventStream& events,
                  const std::filesystem::path& path) {
  write_file(path, format_events(events));
}

CognitiveMap parse_graph_text(std::string_view text) {
  CognitiveMap map;
  EdgeId next_edge = 0;
  for_each_line(text, [&](std::size_t line, std::string_view content) {
    const std::vector<Token> tok = tokenize(content);
    if (tok.empty()) {
      return;
    }
    if (tok[0].text == "VERTEX2") {
      expect_fields(tok, 5, line);
      Vertex v;
      v.id = to_int(tok[1], line, "id");
      if (v.id < 0 || map.has_vertex(v.id)) {
        throw ParseError(line, tok[1].column, "negative or duplicate id");
      }
      v.pose = Pose2(to_double(tok[2], line, "x"), to_double(tok[3], line, "y"),
                     to_double(tok[4], line, "theta"));
      map.insert_vertex(v);
    } else if (tok[0].text == "EDGE2") {
      expect_fields(tok, 7, line);
      Edge e;
      e.id = next_edge;
      e.from = to_int(tok[1], line, "from");
      e.to = to_int(tok[2], line, "to");
      e.constraint = to_constraint(tok, 3, line);
      if (tok[6].text == "SEQ") {
        e.kind = EdgeKind::Sequential;
      } else if (tok[6].text == "LOOP") {
        e.kind = EdgeKind::LoopClosure;
      } else {
        throw ParseError(line, tok[6].column,
                         "edge kind must be SEQ or LOOP");
      }
      if (!map.has_vertex(e.from)) {
        throw ParseError(line, tok[1].column,
                         "dangling reference to vertex " +
                             std::string(tok[1].text));
      }
      if (!map.has_vertex(e.to)) {
        throw ParseError(line, tok[2].column,
                         "dangling reference to vertex " +
                             std::string(tok[2].text));
      }
      try {
        map.insert_edge(e);
      } catch (const MapError& err) {
        throw ParseError(line, tok[1].column, err.what());
      }
      ++next_edge;
    } else {
      throw ParseError(line, tok[0].column,
                       "unknown record '" + std::string(tok[0].text) + "'");
    }
  });
  return map;
}

CognitiveMap read_graph(const std::filesystem::path& path) {
  return parse_graph_text(read_file(path));
}

std::string format_graph(const CognitiveMap& map) {
  std::string out;
  for (const auto& [id, v] : map.vertices()) {
    out += "VERTEX2 " + std::to_string(id) + ' ' + format_double(v.pose.x()) +
           ' ' + format_double(v.pose.y()) + ' ' +
           format_double(v.pose.theta()) + '\n';
  }
  for (const auto& [id, e] : map.edges()) {
    out += "EDGE2 " + std::to_string(e.from) + ' ' + std::to_string(e.to) +
           ' ' + format_double(e.constraint.d()) + ' ' +
           format_double(e.constraint.heading()) + ' ' +
           format_double(e.constraint.facing()) + ' ' + to_string(e.kind) +
           '\n';
  }
  return out;
}

void write_graph(const CognitiveMap& map, const std::filesystem::path& path) {
  write_file(path, format_graph(map));
}

std::string format_metrics(const std::vector<MetricsRecord>& records) {
  std::string out(kMetricsHeader);
  out += '\n';
  for (const MetricsRecord& r : records) {
    out += format_double(r.stamp) + ',' + std::to_string(r.vertex_count) +
           ',' + std::to_string(r.edge_count) + ',' +
           std::to_string(r.optimize_calls) + ',' +
           format_double(r.final_cost) + '\n';
  }
  return out;
}

void write_metrics(const std::vector<MetricsRecord>& records,
                   const std::filesystem::path& path) {
  write_file(path, format_metrics(records));
}

std::vector<MetricsRecord> parse_metrics_text(std::string_view text) {
  std::vector<MetricsRecord> records;
  bool header_seen = false;
  for_each_line(text, [&](std::size_t line, std::string_view content) {
    if (!content.empty() && content.back() == '\r') {
      content.remove_suffix(1);
    }
    if (content.empty()) {
      return;
    }
    if (!header_seen) {
      if (content != kMetricsHeader) {
        throw ParseError(line, 1, "missing metrics header");
      }
      header_seen = true;
      return;
    }
    std::vector<Token> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = content.find(',', start);
      const std::size_t end =
          comma == std::string_view::npos ? content.size() : comma;
      fields.push_back({content.substr(start, end - start), start + 1});
      if (comma == std::string_view::npos) {
        break;
      }
      start = comma + 1;
    }
    if (fields.size() != 5) {
      throw ParseError(line, 0, "metrics row needs 5 fields");
    }
    records.push_back({to_double(fields[0], line, "stamp"),
                       to_count(fields[1], line, "vertex_count"),
                       to_count(fields[2], line, "edge_count"),
                       to_count(fields[3], line, "optimize_calls"),
                       to_double(fields[4], line, "final_cost")});
  });
  if (!header_seen) {
    throw ParseError(1, 0, "empty metrics file");
  }
  return records;
}

std::vector<MetricsRecord> read_metrics(const std::filesystem::path& path) {
  return parse_metrics_text(read_file(path));
}

}  // namespace compact_map
