#include "memorais/ocr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "memorais/errors.hpp"

namespace memorais {

using nlohmann::json;

Quad::Quad(std::array<Point, 4> points) : points_(points) {
  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("quad coordinate is not finite");
    if (p.x < 0.0 || p.y < 0.0)
      throw std::invalid_argument("quad coordinate is negative");
  }
  if (!(area() > 0.0)) throw std::invalid_argument("quad has zero area");
}

Rect Quad::bounds() const {
  Rect r{points_[0].x, points_[0].y, points_[0].x, points_[0].y};
  for (const auto& p : points_) {
    r.left = std::min(r.left, p.x);
    r.right = std::max(r.right, p.x);
    r.top = std::min(r.top, p.y);
    r.bottom = std::max(r.bottom, p.y);
  }
  return r;
}

double Quad::area() const {
  // Shoelace formula.
  double twice = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const Point& a = points_[i];
    const Point& b = points_[(i + 1) % 4];
    twice += a.x * b.y - b.x * a.y;
  }
  return std::abs(twice) / 2.0;
}

Quad rect_quad(double left, double top, double right, double bottom) {
  return Quad({Point{left, top}, Point{right, top}, Point{right, bottom},
               Point{left, bottom}});
}

OcrFormat parse_ocr_format(std::string_view name) {
  if (name == "paddle" || name == "paddle_json") return OcrFormat::paddle_json;
  if (name == "generic" || name == "generic_json") return OcrFormat::generic_json;
  throw std::invalid_argument("unknown OCR format: " + std::string(name));
}

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

Quad parse_quad(const json& j, std::size_t entry) {
  if (!j.is_array() || j.size() != 4)
    throw MalformedInput(entry, "box must be an array of 4 points");
  std::array<Point, 4> pts;
  for (std::size_t i = 0; i < 4; ++i) {
    const json& p = j[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw MalformedInput(entry, "box point " + std::to_string(i) +
                                      " must be [x, y] numbers");
    pts[i] = Point{p[0].get<double>(), p[1].get<double>()};
  }
  try {
    return Quad(pts);
  } catch (const std::invalid_argument& e) {
    throw MalformedInput(entry, std::string("degenerate box: ") + e.what());
  }
}

double parse_confidence(const json& j, std::size_t entry) {
  if (!j.is_number()) throw MalformedInput(entry, "confidence must be a number");
  double c = j.get<double>();
  if (!(c >= 0.0 && c <= 1.0))
    throw MalformedInput(entry, "confidence " + j.dump() + " outside [0, 1]");
  return c;
}

OcrFragment parse_paddle_entry(const json& e, std::size_t entry) {
  if (!e.is_array() || e.size() != 2)
    throw MalformedInput(entry, "expected [box, [text, confidence]]");
  Quad quad = parse_quad(e[0], entry);
  const json& rec = e[1];
  if (!rec.is_array() || rec.size() != 2)
    throw MalformedInput(entry, "expected [text, confidence]");
  if (!rec[0].is_string()) throw MalformedInput(entry, "text must be a string");
  return OcrFragment{rec[0].get<std::string>(), quad,
                     parse_confidence(rec[1], entry), entry};
}

OcrFragment parse_generic_entry(const json& e, std::size_t entry) {
  if (!e.is_object()) throw MalformedInput(entry, "expected an object");
  for (const char* key : {"text", "box", "confidence"})
    if (!e.contains(key))
      throw MalformedInput(entry, std::string("missing field '") + key + "'");
  if (!e["text"].is_string()) throw MalformedInput(entry, "text must be a string");
  Quad quad = parse_quad(e["box"], entry);
  return OcrFragment{e["text"].get<std::string>(), quad,
                     parse_confidence(e["confidence"], entry), entry};
}

}  // namespace

OcrDocument parse_ocr_document(std::string_view raw, OcrFormat format,
                               std::string source_id) {
  json root;
  try {
    root = json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    throw MalformedInput(std::string("syntax error: ") + e.what());
  }
  if (!root.is_array()) throw MalformedInput("top level must be an array");

  OcrDocument doc;
  doc.source_id = std::move(source_id);
  for (std::size_t i = 0; i < root.size(); ++i) {
    OcrFragment frag = format == OcrFormat::paddle_json
                           ? parse_paddle_entry(root[i], i)
                           : parse_generic_entry(root[i], i);
    if (is_blank(frag.text)) continue;
    doc.fragments.push_back(std::move(frag));
  }
  return doc;
}

std::string to_generic_json(const OcrDocument& doc) {
  json out = json::array();
  for (const auto& f : doc.fragments) {
    json box = json::array();
    for (const auto& p : f.quad.points()) box.push_back({p.x, p.y});
    out.push_back({{"text", f.text}, {"box", box}, {"confidence", f.confidence}});
  }
  return out.dump();
}

bool same_line(const Rect& a, const Rect& b, double overlap_fraction) {
  double overlap = std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
  if (overlap <= 0.0) return false;
  return overlap >= overlap_fraction * std::min(a.height(), b.height());
}

namespace {

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct Line {
  std::vector<std::size_t> members;  // positions into the filtered list
  double top = 0.0;
  std::size_t first = 0;  // smallest detection position in the line
};

}  // namespace

std::vector<OcrFragment> reading_order(const OcrDocument& doc,
                                       const OrderingParams& params) {
  std::vector<const OcrFragment*> kept;
  for (const auto& f : doc.fragments)
    if (f.confidence >= params.min_confidence) kept.push_back(&f);

  const std::size_t n = kept.size();
  std::vector<Rect> rects(n);
  for (std::size_t i = 0; i < n; ++i) rects[i] = kept[i]->quad.bounds();

  DisjointSet sets(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (same_line(rects[i], rects[j], params.line_overlap_fraction))
        sets.unite(i, j);

  std::vector<Line> lines;
  std::vector<std::size_t> line_of(n, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t root = sets.find(i);
    if (line_of[root] == static_cast<std::size_t>(-1)) {
      line_of[root] = lines.size();
      lines.push_back(Line{{}, rects[i].top, i});
    }
    Line& line = lines[line_of[root]];
    line.members.push_back(i);
    line.top = std::min(line.top, rects[i].top);
  }

  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    if (a.top != b.top) return a.top < b.top;
    return a.first < b.first;
  });

  std::vector<OcrFragment> out;
  out.reserve(n);
  for (auto& line : lines) {
    std::sort(line.members.begin(), line.members.end(),
              [&](std::size_t a, std::size_t b) {
                if (rects[a].left != rects[b].left)
                  return rects[a].left < rects[b].left;
                return a < b;
              });
    for (std::size_t i : line.members) out.push_back(*kept[i]);
  }
  return out;
}

}  // namespace memorais
