#include "plscore/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "plscore/error.hpp"
#include "plscore/stats.hpp"

namespace plscore {

using nlohmann::json;

SvgKind parse_svg_kind(std::string_view name) {
  if (name == "cv_votes") return SvgKind::cv_votes;
  if (name == "boxplots") return SvgKind::boxplots;
  if (name == "ci_forest") return SvgKind::ci_forest;
  if (name == "sig_grid") return SvgKind::sig_grid;
  if (name == "biplot") return SvgKind::biplot;
  throw ConfigError("unknown figure kind '" + std::string(name) + "'");
}

namespace {

std::string num(double v) {
  if (!std::isfinite(v)) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Linear map from a data interval onto a pixel interval.
struct Scale {
  double d0, d1, p0, p1;
  Scale(double lo, double hi, double pix_lo, double pix_hi) : p0(pix_lo), p1(pix_hi) {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    d0 = lo - pad;
    d1 = hi + pad;
  }
  double operator()(double v) const { return p0 + (v - d0) / (d1 - d0) * (p1 - p0); }
};

class Svg {
 public:
  Svg(double width, double height, const std::string& title) {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width)
         << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width) << ' '
         << num(height) << "\">\n"
         << "<style>text{font-family:sans-serif;font-size:11px}"
            ".sig{stroke:#c0392b;fill:#c0392b}.nonsig{stroke:#7f8c8d;fill:#7f8c8d}"
            ".axis{stroke:#000;stroke-width:1}.zero{stroke:#2c3e50;stroke-dasharray:4 3}</style>\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    text(width / 2, 18, title, "middle", "font-size:14px");
  }
  void line(double x1, double y1, double x2, double y2, const std::string& cls,
            const std::string& style = {}) {
    out_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2)
         << "\" y2=\"" << num(y2) << "\" class=\"" << cls << '"';
    if (!style.empty()) out_ << " style=\"" << style << '"';
    out_ << "/>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& cls = {}) {
    out_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
         << "\" height=\"" << num(h) << "\" fill=\"" << fill << "\" stroke=\"#000\"";
    if (!cls.empty()) out_ << " class=\"" << cls << '"';
    out_ << "/>\n";
  }
  void circle(double x, double y, double r, const std::string& cls) {
    out_ << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << num(r)
         << "\" class=\"" << cls << "\"/>\n";
  }
  void text(double x, double y, const std::string& s, const std::string& anchor = "start",
            const std::string& style = {}) {
    out_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" text-anchor=\"" << anchor << '"';
    if (!style.empty()) out_ << " style=\"" << style << '"';
    out_ << '>' << escape(s) << "</text>\n";
  }
  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

void require(bool ok, const char* what) {
  if (!ok) throw DataError(std::string("figure payload schema mismatch: ") + what);
}

const json& array_field(const json& payload, const char* key) {
  require(payload.is_object() && payload.contains(key) && payload[key].is_array(), key);
  return payload[key];
}

std::vector<double> numbers(const json& arr, const char* key) {
  std::vector<double> v;
  for (const auto& e : arr) {
    require(e.is_number(), key);
    v.push_back(e.get<double>());
  }
  return v;
}

std::vector<std::string> strings(const json& arr, const char* key) {
  std::vector<std::string> v;
  for (const auto& e : arr) {
    require(e.is_string(), key);
    v.push_back(e.get<std::string>());
  }
  return v;
}

std::string cv_votes(const json& payload) {
  const auto counts = numbers(array_field(payload, "counts"), "counts");
  const double width = 640, height = 400, left = 60, right = 20, top = 40, bottom = 50;
  Svg svg(width, height, "Selected number of components over CV repeats");
  const double total = std::max(1.0, [&] {
    double s = 0;
    for (double c : counts) s += c;
    return s;
  }());
  const double ymax = counts.empty() ? 1.0 : *std::max_element(counts.begin(), counts.end()) / total;
  const Scale ys(0.0, std::max(ymax, 1e-12), height - bottom, top);
  svg.line(left, height - bottom, width - right, height - bottom, "axis");
  svg.line(left, top, left, height - bottom, "axis");
  const double slot = counts.empty() ? 0.0 : (width - left - right) / counts.size();
  for (std::size_t h = 0; h < counts.size(); ++h) {
    const double f = counts[h] / total;
    const double x = left + slot * h + 0.15 * slot;
    svg.rect(x, ys(f), 0.7 * slot, ys(0.0) - ys(f), "#5d8aa8");
    svg.text(x + 0.35 * slot, height - bottom + 16, std::to_string(h), "middle");
    svg.text(x + 0.35 * slot, ys(f) - 4, num(100.0 * f) + "%", "middle");
  }
  svg.text(width / 2, height - 12, "Number of components", "middle");
  return svg.finish();
}

std::string boxplots(const json& payload) {
  const auto names = strings(array_field(payload, "names"), "names");
  const auto& draws = array_field(payload, "draws");
  require(draws.size() == names.size(), "draws");
  std::vector<std::vector<double>> cols;
  double lo = 0.0, hi = 0.0;
  for (const auto& d : draws) {
    require(d.is_array(), "draws");
    auto v = numbers(d, "draws");
    std::sort(v.begin(), v.end());
    if (!v.empty()) {
      lo = std::min(lo, v.front());
      hi = std::max(hi, v.back());
    }
    cols.push_back(std::move(v));
  }
  const double slot = 28, left = 60, top = 40, bottom = 90;
  const double width = left + 20 + slot * std::max<std::size_t>(names.size(), 1);
  const double height = 460;
  Svg svg(width, height, "Bootstrap distribution of the coefficients");
  const Scale ys(lo, hi, height - bottom, top);
  svg.line(left, top, left, height - bottom, "axis");
  svg.line(left, ys(0.0), width - 20, ys(0.0), "zero");
  svg.text(left - 6, ys(0.0) + 4, "0", "end");
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const double cx = left + slot * (j + 0.5);
    svg.text(cx, height - bottom + 14, names[j], "end",
             "transform-origin:" + num(cx) + "px " + num(height - bottom + 14) + "px;"
             "transform:rotate(-60deg)");
    const auto& v = cols[j];
    if (v.empty()) continue;
    const double q1 = quantile_type7(v, 0.25), med = quantile_type7(v, 0.5),
                 q3 = quantile_type7(v, 0.75);
    const double fence = 1.5 * (q3 - q1);
    double wlo = q1, whi = q3;
    for (double x : v)
      if (x >= q1 - fence) { wlo = x; break; }
    for (auto it = v.rbegin(); it != v.rend(); ++it)
      if (*it <= q3 + fence) { whi = *it; break; }
    const double half = 0.3 * slot;
    svg.line(cx, ys(wlo), cx, ys(q1), "axis");
    svg.line(cx, ys(q3), cx, ys(whi), "axis");
    svg.rect(cx - half, ys(q3), 2 * half, ys(q1) - ys(q3), "#d6e4f0");
    svg.line(cx - half, ys(med), cx + half, ys(med), "axis", "stroke-width:2");
    for (double x : v)
      if (x < wlo || x > whi) svg.circle(cx, ys(x), 1.5, "nonsig");
  }
  return svg.finish();
}

std::string ci_forest(const json& payload) {
  const auto names = strings(array_field(payload, "names"), "names");
  const auto est = numbers(array_field(payload, "estimate"), "estimate");
  const auto lower = numbers(array_field(payload, "lower"), "lower");
  const auto upper = numbers(array_field(payload, "upper"), "upper");
  require(est.size() == names.size() && lower.size() == names.size() &&
              upper.size() == names.size(),
          "interval lengths");
  const std::string title = payload.contains("title") && payload["title"].is_string()
                                ? payload["title"].get<std::string>()
                                : "Bootstrap confidence intervals";
  const double row = 18, left = 140, right = 30, top = 40, bottom = 40, width = 640;
  const double height = top + bottom + row * std::max<std::size_t>(names.size(), 1);
  Svg svg(width, height, title);
  double lo = 0.0, hi = 0.0;
  for (std::size_t j = 0; j < names.size(); ++j) {
    lo = std::min({lo, lower[j], est[j]});
    hi = std::max({hi, upper[j], est[j]});
  }
  const Scale xs(lo, hi, left, width - right);
  svg.line(left, height - bottom, width - right, height - bottom, "axis");
  svg.line(xs(0.0), top, xs(0.0), height - bottom, "zero");
  svg.text(xs(0.0), height - bottom + 14, "0", "middle");
  for (std::size_t j = 0; j < names.size(); ++j) {
    const double y = top + row * (j + 0.5);
    const bool sig = lower[j] > 0.0 || upper[j] < 0.0;
    const std::string cls = sig ? "sig" : "nonsig";
    svg.text(left - 8, y + 4, names[j], "end");
    svg.line(xs(lower[j]), y, xs(upper[j]), y, cls, "stroke-width:2");
    svg.circle(xs(est[j]), y, 3, cls);
  }
  return svg.finish();
}

std::string sig_grid(const json& payload) {
  const auto names = strings(array_field(payload, "names"), "names");
  const auto ncomp = numbers(array_field(payload, "ncomp"), "ncomp");
  const auto& sig = array_field(payload, "significant");
  const auto pie = numbers(array_field(payload, "pi_e"), "pi_e");
  require(sig.size() == ncomp.size() && pie.size() == names.size(), "grid shape");
  for (const auto& r : sig) require(r.is_array() && r.size() == names.size(), "significant");
  const double cell = 22, left = 140, top = 60, width = left + cell * (ncomp.size() + 3);
  const double height = top + 20 + cell * std::max<std::size_t>(names.size(), 1);
  Svg svg(width, height, "Significant predictors by number of components");
  for (std::size_t h = 0; h < ncomp.size(); ++h)
    svg.text(left + cell * (h + 0.5), top - 8, num(ncomp[h]), "middle");
  svg.text(left + cell * (ncomp.size() + 1.2), top - 8, "π_e", "middle");
  for (std::size_t j = 0; j < names.size(); ++j) {
    const double y = top + cell * j;
    svg.text(left - 8, y + cell * 0.7, names[j], "end");
    for (std::size_t h = 0; h < ncomp.size(); ++h) {
      require(sig[h][j].is_boolean(), "significant");
      svg.rect(left + cell * h, y, cell, cell, sig[h][j].get<bool>() ? "#c0392b" : "#ecf0f1");
    }
    svg.text(left + cell * (ncomp.size() + 1.2), y + cell * 0.7, num(pie[j]), "middle");
  }
  return svg.finish();
}

std::string biplot(const json& payload) {
  const auto ids = strings(array_field(payload, "row_ids"), "row_ids");
  const auto cols = strings(array_field(payload, "col_names"), "col_names");
  const auto& scores = array_field(payload, "scores");
  const auto& loads = array_field(payload, "loadings");
  require(scores.size() == ids.size() && loads.size() == cols.size(), "biplot shape");
  auto pairs = [](const json& arr, const char* key) {
    std::vector<std::pair<double, double>> v;
    for (const auto& e : arr) {
      require(e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number(), key);
      v.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return v;
  };
  const auto s = pairs(scores, "scores");
  auto l = pairs(loads, "loadings");
  double smax = 1e-12, lmax = 1e-12;
  for (auto [a, b] : s) smax = std::max({smax, std::abs(a), std::abs(b)});
  for (auto [a, b] : l) lmax = std::max({lmax, std::abs(a), std::abs(b)});
  const double ratio = smax / lmax;
  const double size = 560, margin = 50;
  Svg svg(size, size, "Biplot of individuals and variables (components 1 and 2)");
  const Scale xs(-smax, smax, margin, size - margin);
  const Scale ys(-smax, smax, size - margin, margin);
  svg.line(xs(-smax), ys(0), xs(smax), ys(0), "zero");
  svg.line(xs(0), ys(-smax), xs(0), ys(smax), "zero");
  for (std::size_t i = 0; i < s.size(); ++i) {
    svg.circle(xs(s[i].first), ys(s[i].second), 2.5, "nonsig");
    svg.text(xs(s[i].first) + 3, ys(s[i].second) - 3, ids[i], "start", "font-size:8px");
  }
  for (std::size_t j = 0; j < l.size(); ++j) {
    const double x = l[j].first * ratio, y = l[j].second * ratio;
    svg.line(xs(0), ys(0), xs(x), ys(y), "sig");
    svg.text(xs(x), ys(y) - 4, cols[j], "middle", "fill:#c0392b");
  }
  svg.text(size / 2, size - 12, "t1", "middle");
  svg.text(14, size / 2, "t2", "middle");
  return svg.finish();
}

}  // namespace

std::string emit_svg(SvgKind kind, const json& payload) {
  switch (kind) {
    case SvgKind::cv_votes: return cv_votes(payload);
    case SvgKind::boxplots: return boxplots(payload);
    case SvgKind::ci_forest: return ci_forest(payload);
    case SvgKind::sig_grid: return sig_grid(payload);
    case SvgKind::biplot: return biplot(payload);
  }
  throw DataError("unknown figure kind");
}

}  // namespace plscore
