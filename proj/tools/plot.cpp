#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "tgt/errors.hpp"

namespace tgt::plot {

using detail::require;

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double number(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  require(!s.empty() && end == s.c_str() + s.size(),
          "line " + std::to_string(line) + ": '" + s + "' is not a number");
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
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

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

Figure read_csv_figure(const std::string& text, bool dashed) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) rows.push_back(split(line));
  }
  require(!rows.empty(), "CSV is empty");
  require(rows.size() > 1, "CSV has a header but no data rows");
  const auto& header = rows.front();

  Figure fig;
  if (header.size() >= 8 && header[0] == "axis_name" && header[1] == "axis_value") {
    auto col = [&](const std::string& name) {
      const auto it = std::find(header.begin(), header.end(), name);
      require(it != header.end(), "results CSV lacks column '" + name + "'");
      return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t c_alg = col("algorithm"), c_kind = col("design_kind"), c_rate = col("rate");
    std::vector<std::string> kinds;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      require(rows[r].size() == header.size(), "line " + std::to_string(r + 1) + " has wrong width");
      if (std::find(kinds.begin(), kinds.end(), rows[r][c_kind]) == kinds.end())
        kinds.push_back(rows[r][c_kind]);
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      if (fig.axis.empty()) fig.axis = row[0];
      require(row[0] == fig.axis, "results CSV mixes axes '" + fig.axis + "' and '" + row[0] + "'");
      std::string label = row[c_alg];
      if (kinds.size() > 1) label += " (" + row[c_kind] + ")";
      auto [it, fresh] = index.emplace(label, fig.series.size());
      if (fresh) fig.series.push_back({label, {}, {}, dashed});
      Series& s = fig.series[it->second];
      s.x.push_back(number(row[1], r + 1));
      s.y.push_back(number(row[c_rate], r + 1));
    }
  } else {
    require(header.size() >= 2, "wide CSV needs an axis column and at least one series");
    fig.axis = header[0];
    for (std::size_t c = 1; c < header.size(); ++c) fig.series.push_back({header[c], {}, {}, dashed});
    for (std::size_t r = 1; r < rows.size(); ++r) {
      require(rows[r].size() == header.size(), "line " + std::to_string(r + 1) + " has wrong width");
      const double x = number(rows[r][0], r + 1);
      for (std::size_t c = 1; c < header.size(); ++c) {
        fig.series[c - 1].x.push_back(x);
        fig.series[c - 1].y.push_back(number(rows[r][c], r + 1));
      }
    }
  }
  return fig;
}

void merge(Figure& into, const Figure& extra) {
  require(into.axis == extra.axis,
          "axis mismatch: '" + into.axis + "' versus '" + extra.axis + "'");
  into.series.insert(into.series.end(), extra.series.begin(), extra.series.end());
}

std::string render_svg(const Figure& fig, const Style& style) {
  require(!fig.series.empty(), "nothing to plot");
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!style.log_x || x > 0) && (!style.log_y || y > 0);
  };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const Series& s : fig.series)
    for (std::size_t k = 0; k < s.x.size(); ++k)
      if (usable(s.x[k], s.y[k])) {
        x0 = std::min(x0, s.x[k]);
        x1 = std::max(x1, s.x[k]);
        y0 = std::min(y0, s.y[k]);
        y1 = std::max(y1, s.y[k]);
      }
  require(x0 <= x1, "no plottable points");
  auto tx = [&](double v) { return style.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return style.log_y ? std::log10(v) : v; };
  double lx0 = tx(x0), lx1 = tx(x1), ly0 = ty(y0), ly1 = ty(y1);
  if (!style.log_y) {
    ly0 = std::min(ly0, 0.0);
    ly1 = std::max(ly1, y1 <= 1.0 ? 1.0 : y1);
  }
  if (lx1 == lx0) lx1 = lx0 + 1;
  if (ly1 == ly0) ly1 = ly0 + 1;

  const double left = 70, right = 190, top = 40, bottom = 60;
  const double pw = style.width - left - right, ph = style.height - top - bottom;
  auto px = [&](double v) { return left + (tx(v) - lx0) / (lx1 - lx0) * pw; };
  auto py = [&](double v) { return top + ph - (ty(v) - ly0) / (ly1 - ly0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
    << style.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!style.title.empty())
    o << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(style.title) << "</text>\n";
  o << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(pw)
    << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  constexpr int kTicks = 5;
  for (int k = 0; k <= kTicks; ++k) {
    const double fx = lx0 + (lx1 - lx0) * k / kTicks;
    const double vx = style.log_x ? std::pow(10.0, fx) : fx;
    const double sx = left + pw * k / kTicks;
    o << "<line x1=\"" << fmt(sx) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(sx)
      << "\" y2=\"" << fmt(top + ph + 5) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fmt(sx) << "\" y=\"" << fmt(top + ph + 18) << "\" text-anchor=\"middle\">"
      << tick_label(vx) << "</text>\n";
    const double fy = ly0 + (ly1 - ly0) * k / kTicks;
    const double vy = style.log_y ? std::pow(10.0, fy) : fy;
    const double sy = top + ph - ph * k / kTicks;
    o << "<line x1=\"" << fmt(left - 5) << "\" y1=\"" << fmt(sy) << "\" x2=\"" << fmt(left)
      << "\" y2=\"" << fmt(sy) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(sy + 4) << "\" text-anchor=\"end\">"
      << tick_label(vy) << "</text>\n";
  }
  const std::string x_label = style.x_label.empty() ? fig.axis : style.x_label;
  o << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(style.height - 15.0)
    << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  if (!style.y_label.empty())
    o << "<text x=\"18\" y=\"" << fmt(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fmt(top + ph / 2) << ")\">" << escape(style.y_label) << "</text>\n";

  for (std::size_t k = 0; k < fig.series.size(); ++k) {
    const Series& s = fig.series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    const char* dash = s.dashed ? " stroke-dasharray=\"6 4\"" : "";
    o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"" << dash
      << " points=\"";
    bool first = true;
    for (std::size_t j = 0; j < s.x.size(); ++j) {
      if (!usable(s.x[j], s.y[j])) continue;
      o << (first ? "" : " ") << fmt(px(s.x[j])) << ',' << fmt(py(s.y[j]));
      first = false;
    }
    o << "\"/>\n";
    const double ly = top + 10 + 18.0 * static_cast<double>(k);
    const double lx = left + pw + 15;
    o << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 25)
      << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"1.5\"" << dash
      << "/>\n";
    o << "<text x=\"" << fmt(lx + 30) << "\" y=\"" << fmt(ly + 4) << "\">" << escape(s.label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace tgt::plot
