#include "robinson/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace robinson {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

// Canvas over unit cells [x0, x0 + w) x [y0, y0 + h), y up.
class Canvas {
 public:
  Canvas(int x0, int y0, int w, int h, const SvgStyle& style) : x0_(x0), y0_(y0), w_(w), h_(h), style_(style) {}

  double px(double x) const { return (x - x0_ + 0.5) * style_.cell + margin; }
  double py(double y) const { return (y0_ + h_ - 0.5 - y) * style_.cell + margin; }

  void shade(double x_lo, double y_lo, double x_hi, double y_hi) {
    body_ << "<rect x=\"" << num(px(x_lo)) << "\" y=\"" << num(py(y_hi)) << "\" width=\""
          << num((x_hi - x_lo) * style_.cell) << "\" height=\"" << num((y_hi - y_lo) * style_.cell)
          << "\" fill=\"" << style_.shade << "\"/>\n";
  }

  void tile(const TileSet& tiles, int t, int x, int y) {
    if (style_.grid) {
      body_ << "<rect x=\"" << num(px(x - 0.5)) << "\" y=\"" << num(py(y + 0.5)) << "\" width=\"" << style_.cell
            << "\" height=\"" << style_.cell << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"0.5\"/>\n";
    }
    if (t < 0) return;
    const double q = 0.25;  // quarter unit
    const double width = std::max(1.0, style_.cell / 12.0);
    for (const auto& s : decoration_steps(tiles.edges(t))) {
      const auto& color = s.color == LineColor::principal ? style_.principal : style_.secondary;
      double ax = x + s.from.first * q, ay = y + s.from.second * q;
      double bx = x + s.to.first * q, by = y + s.to.second * q;
      body_ << "<line x1=\"" << num(px(ax)) << "\" y1=\"" << num(py(ay)) << "\" x2=\"" << num(px(bx))
            << "\" y2=\"" << num(py(by)) << "\" stroke=\"" << color << "\" stroke-width=\"" << num(width)
            << "\" stroke-linecap=\"round\"/>\n";
      bool leaves = s.color == LineColor::principal && (std::abs(s.to.first) == 2 || std::abs(s.to.second) == 2);
      if (leaves) arrowhead(ax, ay, bx, by, color);
    }
  }

  std::string finish() const {
    std::ostringstream out;
    double wpx = w_ * style_.cell + 2 * margin, hpx = h_ * style_.cell + 2 * margin;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(wpx) << "\" height=\"" << num(hpx)
        << "\" viewBox=\"0 0 " << num(wpx) << " " << num(hpx) << "\">\n";
    out << "<rect x=\"" << num(margin) << "\" y=\"" << num(margin) << "\" width=\"" << w_ * style_.cell
        << "\" height=\"" << h_ * style_.cell << "\" fill=\"white\" stroke=\"black\"/>\n";
    out << body_.str() << "</svg>\n";
    return out.str();
  }

  static constexpr double margin = 4.0;

 private:
  void arrowhead(double ax, double ay, double bx, double by, const std::string& color) {
    double dx = bx - ax, dy = by - ay;
    double len = std::hypot(dx, dy);
    dx /= len, dy /= len;
    double s = 0.12;
    double tx = bx - dx * s, ty = by - dy * s;
    body_ << "<polygon points=\"" << num(px(bx)) << "," << num(py(by)) << " " << num(px(tx - dy * s * 0.6)) << ","
          << num(py(ty + dx * s * 0.6)) << " " << num(px(tx + dy * s * 0.6)) << "," << num(py(ty - dx * s * 0.6))
          << "\" fill=\"" << color << "\"/>\n";
  }

  int x0_, y0_, w_, h_;
  SvgStyle style_;
  std::ostringstream body_;
};

}  // namespace

std::string render_tile(const TileSet& tiles, int tile, const SvgStyle& style) {
  Canvas c(0, 0, 1, 1, style);
  c.tile(tiles, tile, 0, 0);
  return c.finish();
}

std::string render_patch(const TileSet& tiles, const Patch& p, const SvgStyle& style) {
  Canvas c(p.origin().x, p.origin().y, p.width(), p.height(), style);
  for (int y = p.origin().y; y < p.origin().y + p.height(); ++y) {
    for (int x = p.origin().x; x < p.origin().x + p.width(); ++x) c.tile(tiles, p.at(x, y), x, y);
  }
  return c.finish();
}

std::string render_rule_entry(const TileSet& tiles, const DoubledCatalog& cat, const OverlapRule& r, int tile,
                              const SvgStyle& style) {
  // Images sit at doubled centers -2, 0, 2 with collars out to +-3.
  Canvas c(-3, -3, 7, 7, style);
  // The inflated doubled tile: edge 4 about the center.
  c.shade(-2, -2, 2, 2);
  Patch p({-3, -3}, 7, 7);
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const auto& d = cat[r.image(tile, dx, dy)];
      for (int ey = -1; ey <= 1; ++ey) {
        for (int ex = -1; ex <= 1; ++ex) p.set(2 * dx + ex, 2 * dy + ey, d.at(ex, ey));
      }
    }
  }
  for (int y = -3; y <= 3; ++y) {
    for (int x = -3; x <= 3; ++x) c.tile(tiles, p.at(x, y), x, y);
  }
  return c.finish();
}

}  // namespace robinson
