#include "thzorient/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace thzo::svg {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 30.0, kTop = 40.0, kBottom = 55.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Range {
  double lo = 0.0, hi = 1.0;
  double clampspan() const { return hi > lo ? hi - lo : 1.0; }
};

Range find_range(const std::vector<const std::vector<double>*>& arrays) {
  Range r{std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity()};
  for (const auto* a : arrays) {
    for (double v : *a) {
      if (!std::isfinite(v)) continue;
      r.lo = std::min(r.lo, v);
      r.hi = std::max(r.hi, v);
    }
  }
  if (!std::isfinite(r.lo)) r = {0.0, 1.0};
  if (r.hi == r.lo) r.hi = r.lo + 1.0;
  return r;
}

double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step = 10.0;
  if (frac <= 1.5) step = 1.0;
  else if (frac <= 3.0) step = 2.0;
  else if (frac <= 7.0) step = 5.0;
  return step * mag;
}

class Canvas {
 public:
  Canvas(const std::string& title, const std::string& xlabel,
         const std::string& ylabel, Range xr, Range yr, bool log_x = false)
      : xr_(xr), yr_(yr), log_x_(log_x) {
    body_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
          << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
          << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
          << kHeight << "\">\n"
          << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    text(kWidth / 2, kTop - 18, title, "middle", 16);
    text(kWidth / 2, kHeight - 12, xlabel, "middle", 13);
    body_ << "<text x=\"18\" y=\"" << (kHeight / 2)
          << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\""
          << " transform=\"rotate(-90 18 " << (kHeight / 2) << ")\">"
          << escape(ylabel) << "</text>\n";
  }

  double px(double x) const {
    const double t = log_x_ ? (std::log10(x) - std::log10(xr_.lo)) /
                                  (std::log10(xr_.hi) - std::log10(xr_.lo))
                            : (x - xr_.lo) / xr_.clampspan();
    return kLeft + t * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    const double t = (y - yr_.lo) / yr_.clampspan();
    return kHeight - kBottom - t * (kHeight - kTop - kBottom);
  }

  void axes() {
    body_ << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
          << (kWidth - kLeft - kRight) << "\" height=\""
          << (kHeight - kTop - kBottom)
          << "\" fill=\"none\" stroke=\"black\"/>\n";
    if (log_x_) {
      const int d0 = static_cast<int>(std::ceil(std::log10(xr_.lo) - 1e-9));
      const int d1 = static_cast<int>(std::floor(std::log10(xr_.hi) + 1e-9));
      for (int d = d0; d <= d1; ++d) {
        const double x = std::pow(10.0, d);
        tick_x(x);
      }
    } else {
      const double step = nice_step(xr_.clampspan());
      for (double x = std::ceil(xr_.lo / step) * step; x <= xr_.hi + 1e-12;
           x += step) {
        tick_x(x);
      }
    }
    const double ystep = nice_step(yr_.clampspan());
    for (double y = std::ceil(yr_.lo / ystep) * ystep; y <= yr_.hi + 1e-12;
         y += ystep) {
      const double p = py(y);
      body_ << "<line x1=\"" << (kLeft - 4) << "\" y1=\"" << p << "\" x2=\""
            << kLeft << "\" y2=\"" << p << "\" stroke=\"black\"/>\n";
      text(kLeft - 8, p + 4, num(y), "end", 11);
    }
  }

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& color, bool dashed) {
    body_ << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\"";
    if (dashed) body_ << " stroke-dasharray=\"6 4\"";
    body_ << " points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(ys[i])) continue;
      body_ << num(px(xs[i])) << "," << num(py(ys[i])) << " ";
    }
    body_ << "\"/>\n";
  }

  void rect(double x0, double y0, double x1, double y1,
            const std::string& fill) {
    const double a = std::min(x0, x1), b = std::min(y0, y1);
    body_ << "<rect x=\"" << num(a) << "\" y=\"" << num(b) << "\" width=\""
          << num(std::abs(x1 - x0)) << "\" height=\"" << num(std::abs(y1 - y0))
          << "\" fill=\"" << fill << "\"/>\n";
  }

  void vline(double x, double y_from, double y_to, const std::string& color,
             double width) {
    body_ << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(py(y_from))
          << "\" x2=\"" << num(px(x)) << "\" y2=\"" << num(py(y_to))
          << "\" stroke=\"" << color << "\" stroke-width=\"" << width
          << "\"/>\n";
  }

  void text(double x, double y, const std::string& s,
            const std::string& anchor, int size) {
    body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y)
          << "\" text-anchor=\"" << anchor << "\" font-size=\"" << size
          << "\" font-family=\"sans-serif\">" << escape(s) << "</text>\n";
  }

  void raw(const std::string& s) { body_ << s; }

  std::string finish() {
    body_ << "</svg>\n";
    return body_.str();
  }

  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
      }
    }
    return out;
  }

 private:
  void tick_x(double x) {
    const double p = px(x);
    body_ << "<line x1=\"" << p << "\" y1=\"" << (kHeight - kBottom)
          << "\" x2=\"" << p << "\" y2=\"" << (kHeight - kBottom + 4)
          << "\" stroke=\"black\"/>\n";
    text(p, kHeight - kBottom + 18, num(x), "middle", 11);
  }

  std::ostringstream body_;
  Range xr_, yr_;
  bool log_x_;
};

// Compact viridis approximation.
std::string colormap(double t) {
  static const double anchors[][3] = {
      {0.267, 0.005, 0.329}, {0.283, 0.141, 0.458}, {0.254, 0.265, 0.530},
      {0.207, 0.372, 0.553}, {0.164, 0.471, 0.558}, {0.128, 0.567, 0.551},
      {0.135, 0.659, 0.518}, {0.267, 0.749, 0.441}, {0.478, 0.821, 0.318},
      {0.741, 0.873, 0.150}, {0.993, 0.906, 0.144}};
  t = std::clamp(t, 0.0, 1.0);
  const double pos = t * 10.0;
  const int i = std::min(static_cast<int>(pos), 9);
  const double f = pos - i;
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(255 * (anchors[i][0] * (1 - f) + anchors[i + 1][0] * f)),
                static_cast<int>(255 * (anchors[i][1] * (1 - f) + anchors[i + 1][1] * f)),
                static_cast<int>(255 * (anchors[i][2] * (1 - f) + anchors[i + 1][2] * f)));
  return buf;
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& xlabel,
                       const std::string& ylabel,
                       const std::vector<Series>& series) {
  std::vector<const std::vector<double>*> xs, ys;
  for (const auto& s : series) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
  }
  Range xr = find_range(xs);
  Range yr = find_range(ys);
  const double pad = 0.05 * yr.clampspan();
  yr.lo -= pad;
  yr.hi += pad;

  Canvas c(title, xlabel, ylabel, xr, yr);
  c.axes();
  double legend_y = kTop + 16;
  for (const auto& s : series) {
    c.polyline(s.x, s.y, s.color, s.dashed);
    c.raw("<line x1=\"" + num(kWidth - kRight - 150) + "\" y1=\"" +
          num(legend_y - 4) + "\" x2=\"" + num(kWidth - kRight - 120) +
          "\" y2=\"" + num(legend_y - 4) + "\" stroke=\"" + s.color +
          "\" stroke-width=\"2\"" +
          (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n");
    c.text(kWidth - kRight - 114, legend_y, s.name, "start", 12);
    legend_y += 16;
  }
  return c.finish();
}

std::string heatmap_chart(const std::string& title, const std::string& xlabel,
                          const std::string& ylabel,
                          const std::vector<double>& x, bool log_x,
                          const std::vector<double>& y,
                          const std::vector<double>& values) {
  Range xr = find_range({&x});
  Range yr = find_range({&y});
  double vmax = 0.0;
  for (double v : values) {
    if (std::isfinite(v)) vmax = std::max(vmax, v);
  }
  if (vmax <= 0.0) vmax = 1.0;

  Canvas c(title, xlabel, ylabel, xr, yr, log_x);
  // Cell edges at midpoints between neighbouring centers.
  const auto edges = [](const std::vector<double>& centers, bool log_scale) {
    std::vector<double> e(centers.size() + 1);
    const auto mid = [&](double a, double b) {
      return log_scale ? std::sqrt(a * b) : 0.5 * (a + b);
    };
    for (std::size_t i = 1; i < centers.size(); ++i) {
      e[i] = mid(centers[i - 1], centers[i]);
    }
    e[0] = centers.front();
    e[centers.size()] = centers.back();
    return e;
  };
  const auto ex = edges(x, log_x);
  const auto ey = edges(y, false);

  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double v = values[i * y.size() + j];
      const std::string fill =
          std::isfinite(v) ? colormap(v / vmax) : std::string("#888888");
      c.rect(c.px(ex[i]), c.py(ey[j]), c.px(ex[i + 1]), c.py(ey[j + 1]), fill);
    }
  }
  c.axes();
  // Colorbar.
  for (int k = 0; k < 60; ++k) {
    const double t = static_cast<double>(k) / 59.0;
    const double yy = kHeight - kBottom - t * (kHeight - kTop - kBottom);
    c.rect(kWidth - kRight + 8, yy, kWidth - kRight + 20,
           yy - (kHeight - kTop - kBottom) / 59.0, colormap(t));
  }
  c.text(kWidth - kRight + 14, kTop - 6, num(vmax), "middle", 10);
  c.text(kWidth - kRight + 14, kHeight - kBottom + 14, "0", "middle", 10);
  return c.finish();
}

std::string spectrum_chart(const std::string& title,
                           const std::vector<double>& omega,
                           const std::vector<double>& magnitude,
                           const std::vector<SpectrumStick>& sticks) {
  double peak = 0.0;
  for (double m : magnitude) peak = std::max(peak, m);
  if (peak <= 0.0) peak = 1.0;
  std::vector<double> normalized(magnitude.size());
  for (std::size_t i = 0; i < magnitude.size(); ++i) {
    normalized[i] = magnitude[i] / peak;
  }

  Range xr = find_range({&omega});
  Range yr{0.0, 1.05};
  Canvas c(title, "omega (reduced)", "normalized amplitude", xr, yr);
  for (const auto& s : sticks) {
    if (s.omega >= xr.lo && s.omega <= xr.hi) {
      c.vline(s.omega, 0.0, s.height, "#c44e52", 3.0);
    }
  }
  c.polyline(omega, normalized, "#4c72b0", false);
  c.axes();
  return c.finish();
}

}  // namespace thzo::svg
