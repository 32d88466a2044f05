#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "commshare/csv.hpp"
#include "commshare/error.hpp"
#include "commshare/experiments.hpp"

namespace commshare {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

std::string composition_text(const ScenarioPoint& p) {
  std::string s;
  for (std::size_t k = 0; k < p.composition.size(); ++k) {
    if (k) s += '/';
    s += csv::format_fixed(p.composition[k], 4);
  }
  return s;
}

std::string optional_number(const std::optional<double>& v) { return v ? csv::format_double(*v) : std::string{}; }

double x_of(const ExperimentReport& report, const ScenarioPoint& p) {
  if (report.kind == ExperimentReport::Kind::size) return static_cast<double>(p.n);
  return 100.0 * p.composition.at(report.varied_class);
}

const char* kColours[] = {"#1b6ca8", "#d1495b", "#edae49", "#00798c", "#6a4c93"};

// Average relative difference per approximation on a log10 axis.
std::string convergence_svg(const ExperimentReport& report) {
  constexpr double width = 640, height = 400, left = 70, right = 160, top = 30, bottom = 50;
  constexpr double floor_rd = 1e-4;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  std::map<std::string, std::vector<std::pair<double, double>>> series;
  std::vector<std::string> order;
  double x_min = 0, x_max = 1, y_min = -4, y_max = 1;
  bool any = false;
  for (const auto& p : report.points) {
    for (const auto& m : p.methods) {
      if (m.method == Method::exact_kclass) continue;
      const std::string name(to_string(m.method));
      if (!series.count(name)) order.push_back(name);
      const double x = x_of(report, p);
      const double y = std::log10(std::max(m.average_rd_percent, floor_rd));
      series[name].emplace_back(x, y);
      if (!any) {
        x_min = x_max = x;
        y_min = y_max = y;
        any = true;
      }
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (x_max == x_min) x_max = x_min + 1;
  y_min = std::floor(y_min);
  y_max = std::ceil(y_max);
  if (y_max == y_min) y_max = y_min + 1;

  const auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  const auto sy = [&](double y) { return top + (y_max - y) / (y_max - y_min) * plot_h; };
  const auto f = [](double v) { return csv::format_fixed(v, 2); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f(width) << "\" height=\"" << f(height)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << f(left) << "\" y=\"" << f(top) << "\" width=\"" << f(plot_w) << "\" height=\""
      << f(plot_h) << "\" fill=\"none\" stroke=\"#444\"/>\n";

  for (double e = y_min; e <= y_max + 1e-9; e += 1.0) {
    const double y = sy(e);
    svg << "<line x1=\"" << f(left) << "\" y1=\"" << f(y) << "\" x2=\"" << f(left + plot_w) << "\" y2=\"" << f(y)
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << f(left - 8) << "\" y=\"" << f(y + 4) << "\" text-anchor=\"end\">1e"
        << static_cast<int>(e) << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 4.0;
    svg << "<text x=\"" << f(sx(xv)) << "\" y=\"" << f(top + plot_h + 18) << "\" text-anchor=\"middle\">"
        << csv::format_fixed(xv, report.kind == ExperimentReport::Kind::size ? 0 : 1) << "</text>\n";
  }
  const std::string x_title = report.kind == ExperimentReport::Kind::size
                                  ? "community size N"
                                  : "share of " + report.class_names.at(report.varied_class) + " (%)";
  svg << "<text x=\"" << f(left + plot_w / 2) << "\" y=\"" << f(height - 10) << "\" text-anchor=\"middle\">"
      << x_title << "</text>\n";
  svg << "<text x=\"16\" y=\"" << f(top + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << f(top + plot_h / 2) << ")\">average relative difference (%)</text>\n";

  for (std::size_t i = 0; i < order.size(); ++i) {
    const char* colour = kColours[i % std::size(kColours)];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (std::size_t j = 0; j < series[order[i]].size(); ++j) {
      const auto [x, y] = series[order[i]][j];
      svg << (j ? " " : "") << f(sx(x)) << "," << f(sy(y));
    }
    svg << "\"/>\n";
    const double ly = top + 16 + 20.0 * static_cast<double>(i);
    svg << "<line x1=\"" << f(left + plot_w + 12) << "\" y1=\"" << f(ly) << "\" x2=\"" << f(left + plot_w + 32)
        << "\" y2=\"" << f(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << f(left + plot_w + 38) << "\" y=\"" << f(ly + 4) << "\">" << order[i] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

void emit_report(const ExperimentReport& report, const std::filesystem::path& outdir) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + outdir.string() + ": " + ec.message());

  const auto alloc_path = outdir / "allocations.csv";
  const auto rd_path = outdir / "relative_differences.csv";
  const auto summary_path = outdir / "summary.csv";
  const auto timing_path = outdir / "timings.csv";
  auto alloc = open_out(alloc_path);
  auto rd = open_out(rd_path);
  auto summary = open_out(summary_path);
  auto timing = open_out(timing_path);

  alloc << "point,n,composition,method,class_id,class_name,class_size,cost_gbp,rd_vs_exact_percent\n";
  rd << "point,n,composition,method,average_rd_percent\n";
  summary << "point,n,composition,community_total_gbp,table_evaluations,method,evaluations,efficiency_residual\n";
  timing << "point,n,stage,wall_seconds\n";

  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const auto& p = report.points[i];
    const std::string head = std::to_string(i) + "," + std::to_string(p.n) + "," + composition_text(p) + ",";
    timing << i << "," << p.n << ",cost_table," << csv::format_fixed(p.table_seconds, 6) << "\n";
    for (const auto& m : p.methods) {
      const std::string method(to_string(m.method));
      for (std::size_t k = 0; k < p.class_sizes.size(); ++k) {
        if (!m.costs[k]) continue;
        alloc << head << method << "," << k << "," << report.class_names.at(k) << "," << p.class_sizes[k] << ","
              << optional_number(m.costs[k]) << "," << optional_number(m.rd_percent[k]) << "\n";
      }
      rd << head << method << "," << csv::format_double(m.average_rd_percent) << "\n";
      summary << head << csv::format_double(p.community_total) << "," << p.table_evaluations << "," << method << ","
              << m.evaluations << "," << csv::format_double(m.efficiency_residual) << "\n";
      timing << i << "," << p.n << "," << method << "," << csv::format_fixed(m.wall_seconds, 6) << "\n";
    }
  }
  close_out(alloc, alloc_path);
  close_out(rd, rd_path);
  close_out(summary, summary_path);
  close_out(timing, timing_path);

  const auto plot_path =
      outdir / (report.kind == ExperimentReport::Kind::size ? "rd_vs_size.svg" : "rd_vs_composition.svg");
  auto plot = open_out(plot_path);
  plot << convergence_svg(report);
  close_out(plot, plot_path);
}

}  // namespace commshare
