#include "tourguide/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "tourguide/demand.hpp"

namespace tourguide {

namespace {

constexpr const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e"};

std::string f(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

class Svg {
 public:
  Svg(double w, double h) : w_(w), h_(h) {}
  void rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke = "none") {
    body_ += "<rect x=\"" + f(x) + "\" y=\"" + f(y) + "\" width=\"" + f(w) + "\" height=\"" + f(h) +
             "\" fill=\"" + std::string(fill) + "\" stroke=\"" + std::string(stroke) + "\"/>\n";
  }
  void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0,
            bool dashed = false) {
    body_ += "<line x1=\"" + f(x1) + "\" y1=\"" + f(y1) + "\" x2=\"" + f(x2) + "\" y2=\"" + f(y2) +
             "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" + f(width) + "\"" +
             (dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
  }
  void circle(double x, double y, double r, std::string_view fill) {
    body_ += "<circle cx=\"" + f(x) + "\" cy=\"" + f(y) + "\" r=\"" + f(r) + "\" fill=\"" + std::string(fill) +
             "\"/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, std::string_view stroke) {
    body_ += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : pts) body_ += f(x) + "," + f(y) + " ";
    body_ += "\"/>\n";
  }
  void text(double x, double y, std::string_view s, double size = 12, std::string_view anchor = "middle") {
    body_ += "<text x=\"" + f(x) + "\" y=\"" + f(y) + "\" font-size=\"" + f(size) +
             "\" font-family=\"sans-serif\" text-anchor=\"" + std::string(anchor) + "\">" + escape(s) + "</text>\n";
  }
  std::string str() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           f(w_) + "\" height=\"" + f(h_) + "\" viewBox=\"0 0 " + f(w_) + " " + f(h_) + "\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
  }

 private:
  double w_, h_;
  std::string body_;
};

// Plot area with linear y axis and tick labels.
struct Frame {
  double left = 70, top = 40, width = 640, height = 320;
  double y_min = 0, y_max = 1;
  double y(double v) const { return top + height * (1.0 - (v - y_min) / (y_max - y_min)); }
  void draw(Svg& svg, std::string_view title, std::string_view x_label, std::string_view y_label) const {
    svg.text(left + width / 2, 22, title, 15);
    svg.line(left, top + height, left + width, top + height, "black");
    svg.line(left, top, left, top + height, "black");
    for (int k = 0; k <= 5; ++k) {
      const double v = y_min + (y_max - y_min) * k / 5.0;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", std::round(v * 1000.0) / 1000.0);
      svg.line(left - 4, y(v), left, y(v), "black");
      svg.text(left - 8, y(v) + 4, buf, 11, "end");
    }
    svg.text(left + width / 2, top + height + 42, x_label, 13);
    svg.text(18, top + height / 2, y_label, 13);
  }
};

double nice_ceiling(double v) {
  if (!(v > 0.0)) return 1.0;
  const double p = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (m * p >= v) return m * p;
  return 10.0 * p;
}

void legend(Svg& svg, const std::vector<std::string>& names, double x, double y) {
  for (std::size_t k = 0; k < names.size(); ++k) {
    svg.rect(x, y + 18.0 * k - 9, 12, 12, kPalette[k % 5]);
    svg.text(x + 18, y + 18.0 * k + 2, names[k], 12, "start");
  }
}

}  // namespace

const char* to_string(PlotKind kind) {
  switch (kind) {
    case PlotKind::DropRateBox: return "drop_rate_box";
    case PlotKind::TourTimeLine: return "tour_time_line";
    case PlotKind::RuntimeBars: return "runtime_bars";
    case PlotKind::DemandPmf: return "demand_pmf";
  }
  return "?";
}

PlotKind parse_plot_kind(std::string_view text) {
  for (PlotKind k : {PlotKind::DropRateBox, PlotKind::TourTimeLine, PlotKind::RuntimeBars, PlotKind::DemandPmf})
    if (text == to_string(k)) return k;
  throw Error("unknown plot kind '" + std::string(text) + "'");
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error("quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * (values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - lo) * (values[hi] - values[lo]);
}

std::string svg_drop_rate_box(const std::vector<RunRecord>& records, const std::vector<int>& bin_edges,
                              std::string_view title) {
  if (records.empty()) throw Error("no records to plot");
  const std::vector<DemandBin> bins = make_bins(bin_edges);
  std::vector<Planner> planners;
  std::map<std::pair<int, int>, std::vector<double>> groups;
  for (const auto& r : records) {
    auto it = std::find(planners.begin(), planners.end(), r.planner);
    if (it == planners.end()) {
      planners.push_back(r.planner);
      it = planners.end() - 1;
    }
    for (int b = 0; b < static_cast<int>(bins.size()); ++b)
      if (bins[b].contains(r.total_demand))
        groups[{b, static_cast<int>(it - planners.begin())}].push_back(r.drop_rate);
  }
  if (groups.empty()) throw Error("no record falls in the demand bins");
  Svg svg(860, 420);
  Frame fr;
  fr.y_max = 1.0;
  fr.draw(svg, title, "total demand", "drop rate");
  const double slot = fr.width / bins.size();
  const double box_w = std::min(28.0, slot * 0.8 / planners.size());
  for (int b = 0; b < static_cast<int>(bins.size()); ++b) {
    const double center = fr.left + slot * (b + 0.5);
    const std::string label = "[" + std::to_string(bins[b].lo) + "-" + std::to_string(bins[b].hi) + (bins[b].closed ? "]" : ")");
    svg.text(center, fr.top + fr.height + 18, label, 11);
    for (int k = 0; k < static_cast<int>(planners.size()); ++k) {
      const auto it = groups.find({b, k});
      if (it == groups.end()) continue;
      const auto& v = it->second;
      const double q1 = quantile(v, 0.25), q2 = quantile(v, 0.5), q3 = quantile(v, 0.75);
      const double iqr = q3 - q1;
      double lo = q2, hi = q2;
      for (double x : v) {
        if (x >= q1 - 1.5 * iqr) lo = std::min(lo, x);
        if (x <= q3 + 1.5 * iqr) hi = std::max(hi, x);
      }
      const double x = center + (k - 0.5 * (planners.size() - 1)) * (box_w + 4) - box_w / 2;
      const char* color = kPalette[k % 5];
      svg.line(x + box_w / 2, fr.y(lo), x + box_w / 2, fr.y(q1), "black");
      svg.line(x + box_w / 2, fr.y(q3), x + box_w / 2, fr.y(hi), "black");
      svg.rect(x, fr.y(q3), box_w, std::max(1.0, fr.y(q1) - fr.y(q3)), "white", color);
      svg.line(x, fr.y(q2), x + box_w, fr.y(q2), color, 2.5);
      for (double o : v)
        if (o < lo || o > hi) svg.circle(x + box_w / 2, fr.y(o), 2.0, "black");
    }
  }
  std::vector<std::string> names;
  for (Planner p : planners) names.push_back(to_string(p));
  legend(svg, names, fr.left + fr.width + 14, fr.top + 10);
  svg.text(fr.left + fr.width, fr.top + fr.height + 42, "box: quartiles, line: median, dots: outliers", 10, "end");
  return svg.str();
}

std::string svg_tour_time_line(const std::vector<RunRecord>& records, double t_lim) {
  if (records.empty()) throw Error("no records to plot");
  std::vector<Planner> planners;
  std::map<std::pair<int, int>, std::pair<double, int>> sums;
  int max_total = 1;
  double max_time = t_lim;
  for (const auto& r : records) {
    auto it = std::find(planners.begin(), planners.end(), r.planner);
    if (it == planners.end()) {
      planners.push_back(r.planner);
      it = planners.end() - 1;
    }
    auto& s = sums[{static_cast<int>(it - planners.begin()), r.total_demand}];
    s.first += r.tour_time;
    s.second += 1;
    max_total = std::max(max_total, r.total_demand);
    max_time = std::max(max_time, r.tour_time);
  }
  Svg svg(860, 420);
  Frame fr;
  fr.y_max = nice_ceiling(max_time * 1.05);
  fr.draw(svg, "Tour time", "total demand", "tour time [s]");
  auto x_of = [&](int d) { return fr.left + fr.width * (d - 0.5) / max_total; };
  for (int d = 1; d <= max_total; ++d)
    if (d == 1 || d % 5 == 0) svg.text(x_of(d), fr.top + fr.height + 18, std::to_string(d), 11);
  svg.line(fr.left, fr.y(t_lim), fr.left + fr.width, fr.y(t_lim), "red", 1.5, true);
  svg.text(fr.left + fr.width - 4, fr.y(t_lim) - 6, "limit " + f(t_lim) + " s", 11, "end");
  for (int k = 0; k < static_cast<int>(planners.size()); ++k) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [key, s] : sums)
      if (key.first == k) pts.emplace_back(x_of(key.second), fr.y(s.first / s.second));
    svg.polyline(pts, kPalette[k % 5]);
  }
  std::vector<std::string> names;
  for (Planner p : planners) names.push_back(to_string(p));
  legend(svg, names, fr.left + fr.width + 14, fr.top + 10);
  return svg.str();
}

std::string svg_runtime_bars(const RouteBenchReport& report) {
  if (report.rows.empty()) throw Error("no benchmark rows to plot");
  double max_t = 0.0;
  for (const auto& r : report.rows) max_t = std::max({max_t, r.grid_s, r.graph_s});
  Svg svg(860, 420);
  Frame fr;
  fr.y_max = nice_ceiling(max_t * 1.1);
  fr.draw(svg, "All-pairs matrix time: grid A* vs skeleton graph", "nodes", "wall time [s]");
  const double slot = fr.width / report.rows.size();
  const double bar = std::min(50.0, slot * 0.35);
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    const auto& r = report.rows[k];
    const double c = fr.left + slot * (k + 0.5);
    svg.rect(c - bar, fr.y(r.grid_s), bar, fr.y(0) - fr.y(r.grid_s), kPalette[1]);
    svg.rect(c, fr.y(r.graph_s), bar, fr.y(0) - fr.y(r.graph_s), kPalette[0]);
    svg.text(c, fr.top + fr.height + 18, std::to_string(r.nodes), 11);
    svg.text(c, fr.y(r.grid_s) - 6, f(r.improvement_pct) + "% less", 11);
  }
  legend(svg, {"graph", "grid A*"}, fr.left + fr.width + 14, fr.top + 10);
  return svg.str();
}

std::string svg_demand_pmf(int n, const std::vector<double>& sigmas) {
  if (sigmas.empty()) throw Error("no sigma values to plot");
  const double panel_h = 220;
  Svg svg(760, 40 + panel_h * sigmas.size());
  for (std::size_t s = 0; s < sigmas.size(); ++s) {
    const std::vector<double> p = popularity_pmf(n, sigmas[s]);
    Frame fr;
    fr.top = 40 + panel_h * s;
    fr.height = panel_h - 80;
    fr.width = 640;
    fr.y_max = nice_ceiling(*std::max_element(p.begin(), p.end()));
    fr.draw(svg, "Popularity pmf, sigma = " + f(sigmas[s]), "", "probability");
    const double slot = fr.width / n;
    for (int k = 0; k < n; ++k) {
      svg.rect(fr.left + slot * k + slot * 0.1, fr.y(p[k]), slot * 0.8, fr.y(0) - fr.y(p[k]), kPalette[s % 5]);
      svg.text(fr.left + slot * (k + 0.5), fr.top + fr.height + 14, std::to_string(k), 10);
    }
  }
  return svg.str();
}

void write_plot(const std::filesystem::path& path, std::string_view svg) { write_text_file(path, svg); }

}  // namespace tourguide
