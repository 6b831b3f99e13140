#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace memorais {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned rectangle, top < bottom in image coordinates (y grows down).
struct Rect {
  double left = 0.0;
  double top = 0.0;
  double right = 0.0;
  double bottom = 0.0;

  double height() const { return bottom - top; }
};

/// Four corners of a detected text box, clockwise from top-left.
class Quad {
 public:
  /// Throws std::invalid_argument on negative/non-finite coordinates or a
  /// zero-area polygon.
  explicit Quad(std::array<Point, 4> points);

  const std::array<Point, 4>& points() const { return points_; }
  Rect bounds() const;
  double area() const;

  friend bool operator==(const Quad&, const Quad&) = default;

 private:
  std::array<Point, 4> points_;
};

/// Convenience for tests and fixtures: the quad of an upright rectangle.
Quad rect_quad(double left, double top, double right, double bottom);

struct OcrFragment {
  std::string text;
  Quad quad;
  double confidence = 1.0;
  /// Position of the fragment in the original detection order.
  std::size_t detection_index = 0;

  friend bool operator==(const OcrFragment&, const OcrFragment&) = default;
};

struct OcrDocument {
  std::vector<OcrFragment> fragments;
  std::string source_id;
};

enum class OcrFormat { paddle_json, generic_json };

/// Parses "paddle" / "generic" (also accepts the full enum spellings).
OcrFormat parse_ocr_format(std::string_view name);

/// Builds an OcrDocument from serialized OCR output. Entries whose text is
/// empty or whitespace-only are dropped after validation.
/// Throws MalformedInput carrying the failing entry index.
OcrDocument parse_ocr_document(std::string_view raw, OcrFormat format,
                               std::string source_id = {});

/// Serializes to the generic_json schema.
std::string to_generic_json(const OcrDocument& doc);

struct OrderingParams {
  /// Two fragments share a line when their vertical overlap is at least
  /// this fraction of the shorter box height.
  double line_overlap_fraction = 0.5;
  /// Fragments below this confidence are dropped before ordering.
  double min_confidence = 0.0;
};

/// True when the two rectangles belong to the same text line.
bool same_line(const Rect& a, const Rect& b, double overlap_fraction);

/// Reconstructs human reading order: fragments are grouped into lines
/// (connected components of the same_line relation), lines sorted by the
/// top edge of their union rectangle, fragments within a line by left edge.
/// Remaining ties fall back to detection index.
std::vector<OcrFragment> reading_order(const OcrDocument& doc,
                                       const OrderingParams& params = {});

}  // namespace memorais
